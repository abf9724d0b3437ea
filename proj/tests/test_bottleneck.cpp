#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "tsh/bottleneck.hpp"

using namespace tsh;

namespace {

std::vector<DiagramPoint> diagram(std::initializer_list<std::pair<double, double>> pts)
{
    std::vector<DiagramPoint> out;
    for (auto [b, d] : pts) out.push_back({b, d, 0, 0});
    return out;
}

// Exhaustive bottleneck over every assignment of points to partners or the
// diagonal. Only usable for a handful of points.
double brute_force_bottleneck(const std::vector<DiagramPoint>& a, const std::vector<DiagramPoint>& b)
{
    const std::size_t n = a.size() + b.size();
    auto cost = [&](std::size_t i, std::size_t j) {
        // rows: a points then diagonal slots for b; cols: b points then diagonal slots for a
        const bool real_i = i < a.size(), real_j = j < b.size();
        if (real_i && real_j)
            return std::max(std::abs(a[i].birth - b[j].birth), std::abs(a[i].death - b[j].death));
        if (real_i) return j - b.size() == i ? std::abs(a[i].death - a[i].birth) / 2.0 : INFINITY;
        if (real_j) return i - a.size() == j ? std::abs(b[j].death - b[j].birth) / 2.0 : INFINITY;
        return 0.0;
    };
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, cost(i, perm[i]));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

TEST(Bottleneck, IdenticalDiagramsAreAtZero)
{
    auto d = diagram({{0.1, 0.5}, {0.2, 0.9}});
    EXPECT_EQ(bottleneck_distance(d, d), 0.0);
    EXPECT_TRUE(within_bottleneck(d, d, 0.0));
}

TEST(Bottleneck, EmptyDiagrams)
{
    EXPECT_EQ(bottleneck_distance({}, {}), 0.0);
    EXPECT_DOUBLE_EQ(bottleneck_distance(diagram({{0.0, 1.0}}), {}), 0.5);
}

TEST(Bottleneck, SinglePointShift)
{
    EXPECT_DOUBLE_EQ(bottleneck_distance(diagram({{0.0, 1.0}}), diagram({{0.1, 1.05}})), 0.1);
}

TEST(Bottleneck, PrefersDiagonalForShortBars)
{
    // Matching the two short bars to each other costs 0.4; sending both to
    // the diagonal costs 0.05.
    auto a = diagram({{0.0, 0.1}});
    auto b = diagram({{0.4, 0.45}});
    EXPECT_DOUBLE_EQ(bottleneck_distance(a, b), 0.05);
}

TEST(Bottleneck, WithinIsMonotoneInEps)
{
    auto a = diagram({{0.0, 1.0}, {0.3, 0.6}});
    auto b = diagram({{0.02, 1.01}});
    const double d = bottleneck_distance(a, b);
    EXPECT_DOUBLE_EQ(d, 0.15);
    EXPECT_TRUE(within_bottleneck(a, b, d));
    EXPECT_FALSE(within_bottleneck(a, b, d * 0.99));
}

TEST(Bottleneck, MatchesBruteForce)
{
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, 3);
    for (int rep = 0; rep < 300; ++rep) {
        std::vector<DiagramPoint> a, b;
        for (int k = count(rng); k > 0; --k) {
            double x = u(rng), y = u(rng);
            a.push_back({std::min(x, y), std::max(x, y), 0, 0});
        }
        for (int k = count(rng); k > 0; --k) {
            double x = u(rng), y = u(rng);
            b.push_back({std::min(x, y), std::max(x, y), 0, 0});
        }
        EXPECT_DOUBLE_EQ(bottleneck_distance(a, b), brute_force_bottleneck(a, b)) << "case " << rep;
        EXPECT_DOUBLE_EQ(bottleneck_distance(a, b), bottleneck_distance(b, a));
    }
}
