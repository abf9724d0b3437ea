#pragma once

// Reference computations used by the test suites and the `goldens` command.
// They deliberately avoid the union-find sweep and the closed-form critical
// points so that agreement is evidence of correctness.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "tsh/filtration.hpp"
#include "tsh/persistence.hpp"
#include "tsh/timeseries.hpp"

namespace tsh::oracles {

struct OraclePair {
    double birth;
    double death;

    friend bool operator==(const OraclePair&, const OraclePair&) = default;
    friend bool operator<(const OraclePair& a, const OraclePair& b)
    {
        return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
    }
};

struct OracleDiagram {
    std::vector<OraclePair> ordinary;
    std::vector<OraclePair> relative;
    OraclePair essential{0.0, 0.0};
};

namespace detail {

// Sweeps the levels in the given direction. At every distinct level, the
// vertices on the active side of the level are grouped into maximal runs of
// consecutive indices; each run inherits the component labels it swallowed.
inline std::vector<OraclePair> level_sweep(const std::vector<double>& f, bool upward, OraclePair* essential)
{
    const std::size_t n = f.size();
    std::vector<double> levels(f);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (!upward) std::reverse(levels.begin(), levels.end());

    struct Component {
        double birth;
        std::size_t birth_vertex;
    };
    std::vector<Component> comps;
    std::vector<long> label(n, -1);
    std::vector<OraclePair> pairs;

    auto older = [&](long a, long b) {
        const auto& ca = comps[static_cast<std::size_t>(a)];
        const auto& cb = comps[static_cast<std::size_t>(b)];
        if (ca.birth != cb.birth) return upward ? ca.birth < cb.birth : ca.birth > cb.birth;
        return upward ? ca.birth_vertex < cb.birth_vertex : ca.birth_vertex > cb.birth_vertex;
    };

    for (double h : levels) {
        std::vector<long> next(n, -1);
        std::size_t i = 0;
        while (i < n) {
            const bool in = upward ? f[i] <= h : f[i] >= h;
            if (!in) {
                ++i;
                continue;
            }
            std::size_t j = i;
            std::vector<long> seen;
            std::size_t extreme = i;
            while (j < n && (upward ? f[j] <= h : f[j] >= h)) {
                if (label[j] >= 0 && std::find(seen.begin(), seen.end(), label[j]) == seen.end()) seen.push_back(label[j]);
                bool better = upward ? (f[j] < f[extreme]) : (f[j] > f[extreme]);
                if (!better && f[j] == f[extreme]) better = upward ? j < extreme : j > extreme;
                if (better) extreme = j;
                ++j;
            }
            long survivor;
            if (seen.empty()) {
                comps.push_back({f[extreme], extreme});
                survivor = static_cast<long>(comps.size() - 1);
            } else {
                survivor = seen.front();
                for (long s : seen)
                    if (older(s, survivor)) survivor = s;
                for (long s : seen)
                    if (s != survivor) pairs.push_back({comps[static_cast<std::size_t>(s)].birth, h});
            }
            for (std::size_t k = i; k < j; ++k) next[k] = survivor;
            i = j;
        }
        label = std::move(next);
    }
    if (essential && n > 0) essential->birth = comps[static_cast<std::size_t>(label[0])].birth;
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

} // namespace detail

/// Extended persistence of vertex values on a path, by explicit enumeration
/// of connected runs at every level. O(levels * n).
inline OracleDiagram level_sweep_oracle(const std::vector<double>& f)
{
    OracleDiagram d;
    OraclePair low{}, high{};
    d.ordinary = detail::level_sweep(f, true, &low);
    d.relative = detail::level_sweep(f, false, &high);
    d.essential = {low.birth, high.birth};
    return d;
}

/// Appends v to a sequence reduced to its turning points.
inline void push_turning_point(std::vector<double>& ext, double v)
{
    if (!ext.empty() && v == ext.back()) return;
    const std::size_t n = ext.size();
    if (n >= 2 && ((ext[n - 2] < ext[n - 1]) == (ext[n - 1] < v))) ext.back() = v;
    else ext.push_back(v);
}

/// Filtration values sampled densely along every segment (samples_per_segment
/// evenly spaced points per segment plus the final vertex), reduced to their
/// turning points. Reducing monotone runs leaves the diagrams unchanged.
inline std::vector<double> dense_turning_points(const TimeSeries& ts, const FiltrationSpec& spec,
                                                std::size_t samples_per_segment)
{
    const ValueRange range = padded_range(ts, spec.padding_eps);
    std::vector<double> ext;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const TimePoint a = ts[i], b = ts[i + 1];
        for (std::size_t k = 0; k < samples_per_segment; ++k) {
            const double s = static_cast<double>(k) / static_cast<double>(samples_per_segment);
            push_turning_point(ext, filtration_value(spec, range, {a.t + s * (b.t - a.t), a.x + s * (b.x - a.x)}));
        }
    }
    push_turning_point(ext, filtration_value(spec, range, ts.points().back()));
    return ext;
}

inline OracleDiagram dense_resampling_oracle(const TimeSeries& ts, const FiltrationSpec& spec,
                                             std::size_t samples_per_segment = 100000)
{
    return level_sweep_oracle(dense_turning_points(ts, spec, samples_per_segment));
}

/// Filtration level found by bisection on the shift h until the sweep curve
/// passes through (t, x). Independent of the closed-form inverses.
inline double filtration_by_root_finding(const FiltrationSpec& spec, const ValueRange& range, TimePoint p)
{
    if (spec.kind == FiltrationKind::Horizontal) return p.x;
    // Curve height decreases in h when c > 0 and increases when c < 0.
    double lo = p.t - 1.0, hi = p.t + 1.0;
    auto g = [&](double h) { return sweep_curve(spec, range, h, p.t) - p.x; };
    const double dir = spec.slope_c > 0 ? 1.0 : -1.0;
    while (dir * g(lo) < 0) lo -= (hi - lo);
    while (dir * g(hi) > 0) hi += (hi - lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dir * g(mid) > 0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline std::vector<OraclePair> as_pairs(const std::vector<DiagramPoint>& pts)
{
    std::vector<OraclePair> out;
    for (const auto& p : pts) out.push_back({p.birth, p.death});
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<DiagramPoint> as_points(const std::vector<OraclePair>& pairs)
{
    std::vector<DiagramPoint> out;
    for (const auto& p : pairs) out.push_back({p.birth, p.death, 0, 0});
    return out;
}

/// Exact multiset equality against the library's extended diagram.
inline bool equals_exactly(const ExtendedDiagram& d, const OracleDiagram& o)
{
    return as_pairs(d.ordinary) == o.ordinary && as_pairs(d.relative) == o.relative &&
           d.essential.birth == o.essential.birth && d.essential.death == o.essential.death;
}

/// Random series: times sorted uniform on [0, 1] with both ends pinned,
/// values uniform on [0, 1] with both 0 and 1 attained.
inline TimeSeries random_unit_series(std::mt19937_64& rng, std::size_t length)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> times(length), values(length);
    for (auto& t : times) t = u(rng);
    std::sort(times.begin(), times.end());
    if (length >= 2) {
        times.front() = 0.0;
        times.back() = 1.0;
    }
    for (std::size_t i = 1; i < length; ++i)
        if (!(times[i] > times[i - 1])) times[i] = std::nextafter(times[i - 1], 2.0);
    for (auto& v : values) v = u(rng);
    if (length >= 2) {
        auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        *lo = 0.0;
        *hi = 1.0;
    }
    return TimeSeries::from_values(times, values);
}

} // namespace tsh::oracles
