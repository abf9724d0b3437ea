#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "tsh/error.hpp"
#include "tsh/image.hpp"

namespace tsh {

/// Flattens each image row-major, min-max scales it on its own (a constant
/// image becomes zeros) and concatenates the results in the given order.
/// Two images (x/y ordinary) or six (x then y, each ordinary/relative/essential).
inline std::vector<double> assemble_tsh_vector(const std::vector<PersistenceImage>& images)
{
    if (images.size() != 2 && images.size() != 6)
        throw Error(ErrorKind::Validation, "expected 2 or 6 persistence images, got " + std::to_string(images.size()));
    const std::size_t rows = images.front().spec.rows;
    const std::size_t cols = images.front().spec.cols;
    std::vector<double> out;
    out.reserve(images.size() * rows * cols);
    for (const auto& img : images) {
        if (img.spec.rows != rows || img.spec.cols != cols || img.pixels.size() != rows * cols)
            throw Error(ErrorKind::ResolutionMismatch, "persistence images do not share one resolution");
        auto [lo_it, hi_it] = std::minmax_element(img.pixels.begin(), img.pixels.end());
        const double lo = *lo_it, hi = *hi_it;
        for (double p : img.pixels) out.push_back(hi > lo ? (p - lo) / (hi - lo) : 0.0);
    }
    return out;
}

/// Coordinate-wise mean of one reader's trial vectors.
inline std::vector<double> reader_aggregate(const std::vector<std::vector<double>>& vectors)
{
    if (vectors.empty()) throw Error(ErrorKind::EmptyGroup, "cannot aggregate an empty group of vectors");
    const std::size_t dim = vectors.front().size();
    std::vector<double> mean(dim, 0.0);
    for (const auto& v : vectors) {
        if (v.size() != dim) throw Error(ErrorKind::Validation, "vectors in a group differ in length");
        for (std::size_t i = 0; i < dim; ++i) mean[i] += v[i];
    }
    const double n = static_cast<double>(vectors.size());
    for (double& m : mean) m /= n;
    return mean;
}

} // namespace tsh
