#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tsh/error.hpp"
#include "tsh/filtration.hpp"

namespace tsh {

/// A (birth, death) pair. Indices refer to vertices of the swept series and
/// only serve tie-breaking and debugging; the essential point of an
/// ordinary-only diagram carries death = +inf and death_index = npos.
struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;
    std::size_t birth_index = 0;
    std::size_t death_index = 0;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    double persistence() const noexcept { return death - birth; }
};

inline bool same_coordinates(const DiagramPoint& a, const DiagramPoint& b)
{
    return a.birth == b.birth && a.death == b.death;
}

inline void sort_points(std::vector<DiagramPoint>& pts)
{
    std::sort(pts.begin(), pts.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        if (a.death != b.death) return a.death < b.death;
        return a.birth_index < b.birth_index;
    });
}

struct ExtendedDiagram {
    std::vector<DiagramPoint> ordinary;
    std::vector<DiagramPoint> relative;
    DiagramPoint essential;
};

enum class DiagramKind { Ordinary, Relative, Essential };

inline const char* to_string(DiagramKind k)
{
    switch (k) {
    case DiagramKind::Ordinary: return "ordinary";
    case DiagramKind::Relative: return "relative";
    case DiagramKind::Essential: return "essential";
    }
    return "?";
}

enum class ExtremumKind { Min, Max, Regular };

struct CriticalVertex {
    std::size_t index = 0;
    double filtration = 0.0;
    ExtremumKind kind = ExtremumKind::Regular;
};

/// Classifies every vertex against its neighbours. Endpoints are one-sided
/// extrema. A lone vertex counts as a minimum.
inline std::vector<CriticalVertex> critical_profile(std::span<const double> f)
{
    const std::size_t n = f.size();
    std::vector<CriticalVertex> out(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (f[i] == f[i + 1])
            throw Error(ErrorKind::TieUnresolved, "adjacent vertices " + std::to_string(i) + " and " +
                                                      std::to_string(i + 1) + " share a filtration value");
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i].index = i;
        out[i].filtration = f[i];
        if (n == 1) {
            out[i].kind = ExtremumKind::Min;
            continue;
        }
        const bool lower_left = i == 0 || f[i - 1] > f[i];
        const bool lower_right = i + 1 == n || f[i + 1] > f[i];
        const bool upper_left = i == 0 || f[i - 1] < f[i];
        const bool upper_right = i + 1 == n || f[i + 1] < f[i];
        if (lower_left && lower_right) out[i].kind = ExtremumKind::Min;
        else if (upper_left && upper_right) out[i].kind = ExtremumKind::Max;
        else out[i].kind = ExtremumKind::Regular;
    }
    return out;
}

inline std::vector<CriticalVertex> critical_profile(const AugmentedSeries& series)
{
    auto f = series.filtration();
    return critical_profile(std::span<const double>(f));
}

/// Indices of the vertices left after merging runs of adjacent equal values
/// (the first vertex of each run is kept).
inline std::vector<std::size_t> collapse_plateaus(std::span<const double> f)
{
    std::vector<std::size_t> keep;
    keep.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        if (i == 0 || f[i] != f[i - 1]) keep.push_back(i);
    return keep;
}

/// Test-only sabotage of the sweeps, used to check that the golden suite
/// catches broken implementations.
struct SweepHooks {
    bool corrupt_downward_elder_rule = false;
};

namespace detail {

enum class Direction { Upward, Downward };

struct SweepResult {
    std::vector<DiagramPoint> pairs;
    std::size_t survivor = 0; // position of the birth vertex that never dies
};

// 0-dimensional persistence of a path graph whose vertex i has value f[i];
// ids[i] is the original vertex index used for tie-breaking and reporting.
// Vertices enter in (value, id) order, reversed for the downward sweep; when
// two components meet, the one whose birth entered first survives.
inline SweepResult sweep_path(std::span<const double> f, std::span<const std::size_t> ids, Direction dir,
                              bool younger_survives = false)
{
    const std::size_t n = f.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto before = [&](std::size_t a, std::size_t b) {
        if (dir == Direction::Upward) return f[a] != f[b] ? f[a] < f[b] : ids[a] < ids[b];
        return f[a] != f[b] ? f[a] > f[b] : ids[a] > ids[b];
    };
    std::sort(order.begin(), order.end(), before);

    constexpr std::size_t inactive = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(n, inactive);
    std::vector<std::size_t> birth(n, 0);
    auto find = [&](std::size_t v) {
        std::size_t root = v;
        while (parent[root] != root) root = parent[root];
        while (parent[v] != root) {
            std::size_t next = parent[v];
            parent[v] = root;
            v = next;
        }
        return root;
    };

    SweepResult res;
    for (std::size_t v : order) {
        std::size_t roots[2];
        int k = 0;
        if (v > 0 && parent[v - 1] != inactive) roots[k++] = find(v - 1);
        if (v + 1 < n && parent[v + 1] != inactive) roots[k++] = find(v + 1);
        if (k == 0) {
            parent[v] = v;
            birth[v] = v;
        } else if (k == 1) {
            parent[v] = roots[0];
        } else {
            std::size_t elder = roots[0], younger = roots[1];
            if (before(birth[younger], birth[elder])) std::swap(elder, younger);
            if (younger_survives) std::swap(elder, younger);
            const std::size_t b = birth[younger];
            res.pairs.push_back({f[b], f[v], ids[b], ids[v]});
            parent[younger] = elder;
            parent[v] = elder;
        }
    }
    if (n > 0) res.survivor = birth[find(order.front())];
    return res;
}

struct PreparedSeries {
    std::vector<double> values;
    std::vector<std::size_t> ids;
};

inline PreparedSeries prepare(const AugmentedSeries& series)
{
    if (series.vertices.empty()) throw Error(ErrorKind::Validation, "persistence of an empty series is undefined");
    auto f = series.filtration();
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!std::isfinite(f[i]))
            throw Error(ErrorKind::NonFiniteResult, "filtration value at vertex " + std::to_string(i) + " is not finite");
    PreparedSeries p;
    p.ids = collapse_plateaus(f);
    p.values.reserve(p.ids.size());
    for (std::size_t id : p.ids) p.values.push_back(f[id]);
    return p;
}

} // namespace detail

struct SublevelResult {
    std::vector<DiagramPoint> ordinary;
    double essential_birth = 0.0;
    std::size_t essential_index = 0;
};

/// Upward sweep: finite pairs plus the birth of the component that never dies.
inline SublevelResult sublevel_sweep(const AugmentedSeries& series)
{
    auto p = detail::prepare(series);
    auto r = detail::sweep_path(p.values, p.ids, detail::Direction::Upward);
    SublevelResult out;
    out.ordinary = std::move(r.pairs);
    out.essential_birth = p.values[r.survivor];
    out.essential_index = p.ids[r.survivor];
    sort_points(out.ordinary);
    return out;
}

/// Ordinary, relative and essential diagrams from the upward sweep followed by
/// the downward sweep. The downward birth at the global maximum is the death
/// of the essential class, so it does not appear among the relative points.
inline ExtendedDiagram extended_persistence(const AugmentedSeries& series, const SweepHooks& hooks = {})
{
    auto p = detail::prepare(series);
    auto up = detail::sweep_path(p.values, p.ids, detail::Direction::Upward);
    auto down = detail::sweep_path(p.values, p.ids, detail::Direction::Downward, hooks.corrupt_downward_elder_rule);

    ExtendedDiagram d;
    d.ordinary = std::move(up.pairs);
    d.relative = std::move(down.pairs);
    d.essential = {p.values[up.survivor], p.values[down.survivor], p.ids[up.survivor], p.ids[down.survivor]};
    sort_points(d.ordinary);
    sort_points(d.relative);
    return d;
}

enum class InfinitePolicy { Drop, KeepWithInfiniteDeath };

inline std::vector<DiagramPoint> ordinary_only(const AugmentedSeries& series, InfinitePolicy policy)
{
    auto r = sublevel_sweep(series);
    if (policy == InfinitePolicy::KeepWithInfiniteDeath) {
        r.ordinary.push_back({r.essential_birth, std::numeric_limits<double>::infinity(), r.essential_index,
                              DiagramPoint::npos});
        sort_points(r.ordinary);
    }
    return r.ordinary;
}

} // namespace tsh
