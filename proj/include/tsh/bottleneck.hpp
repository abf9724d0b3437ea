#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "tsh/persistence.hpp"

namespace tsh {

namespace detail {

// Hopcroft-Karp on a bipartite graph with equally sized sides.
class BipartiteMatcher {
public:
    explicit BipartiteMatcher(std::size_t n) : adj_(n), match_l_(n, none), match_r_(n, none), dist_(n) {}

    void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

    std::size_t max_matching()
    {
        std::size_t size = 0;
        while (bfs()) {
            for (std::size_t l = 0; l < adj_.size(); ++l)
                if (match_l_[l] == none && dfs(l)) ++size;
        }
        return size;
    }

private:
    static constexpr std::size_t none = static_cast<std::size_t>(-1);
    static constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();

    bool bfs()
    {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t l = 0; l < adj_.size(); ++l) {
            if (match_l_[l] == none) {
                dist_[l] = 0;
                q.push(l);
            } else {
                dist_[l] = inf;
            }
        }
        while (!q.empty()) {
            std::size_t l = q.front();
            q.pop();
            for (std::size_t r : adj_[l]) {
                std::size_t next = match_r_[r];
                if (next == none) {
                    found = true;
                } else if (dist_[next] == inf) {
                    dist_[next] = dist_[l] + 1;
                    q.push(next);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t l)
    {
        for (std::size_t r : adj_[l]) {
            std::size_t next = match_r_[r];
            if (next == none || (dist_[next] == dist_[l] + 1 && dfs(next))) {
                match_l_[l] = r;
                match_r_[r] = l;
                return true;
            }
        }
        dist_[l] = inf;
        return false;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_l_, match_r_, dist_;
};

inline double linf(const DiagramPoint& a, const DiagramPoint& b)
{
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

inline double to_diagonal(const DiagramPoint& a) { return std::abs(a.death - a.birth) / 2.0; }

} // namespace detail

/// True when the finite diagrams a and b admit a matching (points may go to
/// the diagonal) moving no coordinate by more than eps.
inline bool within_bottleneck(const std::vector<DiagramPoint>& a, const std::vector<DiagramPoint>& b, double eps)
{
    const std::size_t na = a.size(), nb = b.size(), n = na + nb;
    // left: a[0..na), diagonal copies of b; right: b[0..nb), diagonal copies of a
    detail::BipartiteMatcher m(n);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j)
            if (detail::linf(a[i], b[j]) <= eps) m.add_edge(i, j);
        if (detail::to_diagonal(a[i]) <= eps) m.add_edge(i, nb + i);
    }
    for (std::size_t j = 0; j < nb; ++j) {
        if (detail::to_diagonal(b[j]) <= eps) m.add_edge(na + j, j);
        for (std::size_t i = 0; i < na; ++i) m.add_edge(na + j, nb + i);
    }
    return m.max_matching() == n;
}

/// Bottleneck distance between two finite diagrams.
inline double bottleneck_distance(const std::vector<DiagramPoint>& a, const std::vector<DiagramPoint>& b)
{
    std::vector<double> candidates{0.0};
    for (const auto& p : a) {
        candidates.push_back(detail::to_diagonal(p));
        for (const auto& q : b) candidates.push_back(detail::linf(p, q));
    }
    for (const auto& q : b) candidates.push_back(detail::to_diagonal(q));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (within_bottleneck(a, b, candidates[mid])) hi = mid;
        else lo = mid + 1;
    }
    return candidates[lo];
}

} // namespace tsh
