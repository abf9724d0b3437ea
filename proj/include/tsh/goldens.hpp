#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tsh/bottleneck.hpp"
#include "tsh/filtration.hpp"
#include "tsh/image.hpp"
#include "tsh/persistence.hpp"
#include "tsh/testing/oracles.hpp"
#include "tsh/timeseries.hpp"

namespace tsh {

/// Deliberate defects the golden suite must detect.
enum class Mutation { None, ElderRule, CriticalPoints };

struct GoldenCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

inline const std::vector<double>& worked_example_onsets()
{
    static const std::vector<double> v{0, 244, 366, 726, 984, 1415};
    return v;
}

inline const std::vector<double>& worked_example_x()
{
    static const std::vector<double> v{963.1, 210.7, 100.0, 457.2, 569.6, 281.6};
    return v;
}

inline const std::vector<double>& worked_example_y()
{
    static const std::vector<double> v{533.0, 95.4, 130.8, 124.3, 120.7, 136.6};
    return v;
}

namespace detail {

struct MutationContext {
    Mutation mutation;

    ExtendedDiagram persistence(const AugmentedSeries& s) const
    {
        SweepHooks hooks;
        hooks.corrupt_downward_elder_rule = mutation == Mutation::ElderRule;
        return extended_persistence(s, hooks);
    }

    AugmentedSeries augment(const TimeSeries& ts, FiltrationSpec spec) const
    {
        if (mutation == Mutation::CriticalPoints) spec.critical_points = CriticalPoints::VertexOnly;
        return tsh::augment(ts, spec);
    }
};

inline std::string describe(const std::vector<DiagramPoint>& pts)
{
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? ", " : "") << '(' << pts[i].birth << ", " << pts[i].death << ')';
    os << '}';
    return os.str();
}

inline std::vector<DiagramPoint> negated(const std::vector<DiagramPoint>& pts)
{
    std::vector<DiagramPoint> out;
    for (const auto& p : pts) out.push_back({-p.birth, -p.death, p.birth_index, p.death_index});
    return out;
}

template <class Fn>
GoldenCheck run_check(const std::string& name, Fn&& fn)
{
    GoldenCheck c{name, false, {}};
    try {
        c.detail = fn();
        c.passed = c.detail.empty();
        if (c.passed) c.detail = "ok";
    } catch (const std::exception& e) {
        c.detail = std::string("exception: ") + e.what();
    }
    return c;
}

} // namespace detail

/// Built-in release checks. `scale` multiplies the number of random cases.
inline std::vector<GoldenCheck> run_goldens(Mutation mutation = Mutation::None, std::size_t scale = 1)
{
    detail::MutationContext ctx{mutation};
    std::vector<GoldenCheck> out;
    const FiltrationSpec horizontal{FiltrationKind::Horizontal, 1.0, 0.0};

    out.push_back(detail::run_check("worked_example_extended_horizontal", [&]() -> std::string {
        auto ts = TimeSeries::from_values(worked_example_onsets(), worked_example_x());
        auto d = ctx.persistence(ctx.augment(ts, horizontal));
        if (d.ordinary.size() != 1 || d.ordinary[0].birth != 281.6 || d.ordinary[0].death != 569.6)
            return "ordinary " + detail::describe(d.ordinary) + " != {(281.6, 569.6)}";
        if (d.relative.size() != 1 || d.relative[0].birth != 569.6 || d.relative[0].death != 100.0)
            return "relative " + detail::describe(d.relative) + " != {(569.6, 100)}";
        if (d.essential.birth != 100.0 || d.essential.death != 963.1) return "essential != (100, 963.1)";
        return {};
    }));

    out.push_back(detail::run_check("worked_example_ordinary_keep_infinite", [&]() -> std::string {
        auto ts = TimeSeries::from_values(worked_example_onsets(), worked_example_x());
        auto pts = ordinary_only(ctx.augment(ts, horizontal), InfinitePolicy::KeepWithInfiniteDeath);
        if (pts.size() != 2 || pts[0].birth != 100.0 || !std::isinf(pts[0].death) || pts[1].birth != 281.6 ||
            pts[1].death != 569.6)
            return "got " + detail::describe(pts);
        return {};
    }));

    out.push_back(detail::run_check("worked_example_critical_profile", [&]() -> std::string {
        auto prof = critical_profile(worked_example_x());
        const ExtremumKind expect[] = {ExtremumKind::Max, ExtremumKind::Regular, ExtremumKind::Min,
                                       ExtremumKind::Regular, ExtremumKind::Max, ExtremumKind::Min};
        for (std::size_t i = 0; i < prof.size(); ++i)
            if (prof[i].kind != expect[i]) return "vertex " + std::to_string(i) + " misclassified";
        return {};
    }));

    out.push_back(detail::run_check("level_sweep_oracle_equivalence", [&]() -> std::string {
        std::mt19937_64 rng(20240601);
        std::uniform_int_distribution<std::size_t> len(2, 64);
        const FiltrationSpec specs[] = {horizontal, {FiltrationKind::Sloped, 1.0, 0.05}, {FiltrationKind::Sloped, -0.5, 0.05}};
        for (std::size_t i = 0; i < 100 * scale; ++i) {
            auto ts = oracles::random_unit_series(rng, len(rng));
            for (const auto& spec : specs) {
                auto aug = ctx.augment(ts, spec);
                if (!oracles::equals_exactly(ctx.persistence(aug), oracles::level_sweep_oracle(aug.filtration())))
                    return "mismatch on random case " + std::to_string(i) + " (" + to_string(spec.kind) + ")";
            }
        }
        return {};
    }));

    out.push_back(detail::run_check("reflection_duality", [&]() -> std::string {
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<std::size_t> len(2, 64);
        for (std::size_t i = 0; i < 100 * scale; ++i) {
            auto ts = oracles::random_unit_series(rng, len(rng));
            auto f = ctx.augment(ts, horizontal).filtration();
            std::vector<double> neg(f.size());
            for (std::size_t k = 0; k < f.size(); ++k) neg[k] = -f[k];
            auto d = ctx.persistence(augmented_from_values(f));
            auto dn = ctx.persistence(augmented_from_values(neg));
            if (oracles::as_pairs(d.relative) != oracles::as_pairs(detail::negated(dn.ordinary)))
                return "relative(f) != -ordinary(-f) on random case " + std::to_string(i);
        }
        return {};
    }));

    out.push_back(detail::run_check("horizontal_time_reversal", [&]() -> std::string {
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<std::size_t> len(2, 64);
        for (std::size_t i = 0; i < 100 * scale; ++i) {
            auto ts = oracles::random_unit_series(rng, len(rng));
            auto d = ctx.persistence(ctx.augment(ts, horizontal));
            auto r = ctx.persistence(ctx.augment(reverse_time(ts), horizontal));
            if (oracles::as_pairs(d.ordinary) != oracles::as_pairs(r.ordinary) ||
                oracles::as_pairs(d.relative) != oracles::as_pairs(r.relative) ||
                d.essential.birth != r.essential.birth || d.essential.death != r.essential.death)
                return "diagrams changed under time reversal on random case " + std::to_string(i);
        }
        return {};
    }));

    out.push_back(detail::run_check("dense_resampling_curved", [&]() -> std::string {
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<std::size_t> len(2, 8);
        const double slopes[] = {-4.0, -1.0, 1.0, 4.0};
        const FiltrationKind kinds[] = {FiltrationKind::Sigmoid, FiltrationKind::Arctan};
        std::vector<TimeSeries> cases;
        cases.push_back(TimeSeries::from_values({0.0, 1.0}, {0.1, 0.9}));
        for (std::size_t i = 0; i < 10 * scale; ++i) cases.push_back(oracles::random_unit_series(rng, len(rng)));
        for (std::size_t i = 0; i < cases.size(); ++i) {
            for (auto kind : kinds) {
                for (double c : slopes) {
                    FiltrationSpec spec{kind, c, 0.05};
                    auto d = ctx.persistence(ctx.augment(cases[i], spec));
                    auto o = oracles::dense_resampling_oracle(cases[i], spec, 20000);
                    constexpr double tol = 1e-4;
                    if (!within_bottleneck(d.ordinary, oracles::as_points(o.ordinary), tol) ||
                        !within_bottleneck(d.relative, oracles::as_points(o.relative), tol) ||
                        std::abs(d.essential.birth - o.essential.birth) > tol ||
                        std::abs(d.essential.death - o.essential.death) > tol)
                        return std::string("analytic insertion disagrees with dense sampling (") + to_string(kind) +
                               ", c=" + std::to_string(c) + ", case " + std::to_string(i) + ")";
                }
            }
        }
        return {};
    }));

    out.push_back(detail::run_check("image_unit_mass", [&]() -> std::string {
        ImageSpec spec;
        spec.bandwidth_sigma = 0.05;
        spec.weight = WeightKind::ConstantOne;
        spec.domain = ImageDomain{0.0, 1.0, 0.0, 1.0};
        auto img = render_image({{0.5, 1.0, 0, 0}}, spec);
        if (std::abs(img.total_mass() - 1.0) > 1e-4) return "mass " + std::to_string(img.total_mass()) + " != 1";
        return {};
    }));

    return out;
}

} // namespace tsh
