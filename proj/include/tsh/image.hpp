#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tsh/detail/csv.hpp"
#include "tsh/detail/numfmt.hpp"
#include "tsh/error.hpp"
#include "tsh/persistence.hpp"

namespace tsh {

enum class WeightKind { ConstantOne, Persistence };

inline const char* to_string(WeightKind w)
{
    return w == WeightKind::ConstantOne ? "constant-one" : "persistence";
}

inline WeightKind parse_weight_kind(std::string_view s)
{
    if (s == "constant-one") return WeightKind::ConstantOne;
    if (s == "persistence") return WeightKind::Persistence;
    throw Error(ErrorKind::Config, "unknown persistence image weight '" + std::string(s) + "'");
}

/// Box in sheared (birth, persistence) coordinates covered by the pixel grid.
struct ImageDomain {
    double birth_lo = 0.0;
    double birth_hi = 1.0;
    double pers_lo = 0.0;
    double pers_hi = 1.0;

    friend bool operator==(const ImageDomain&, const ImageDomain&) = default;
};

/// Pixel grid layout: `rows` (n) run along the persistence axis from low to
/// high, `cols` (m) along the birth axis from low to high; storage is
/// row-major. An empty `domain` means "fit from data".
struct ImageSpec {
    double bandwidth_sigma = 0.05;
    std::size_t rows = 50;
    std::size_t cols = 50;
    WeightKind weight = WeightKind::Persistence;
    std::optional<ImageDomain> domain;

    void validate() const
    {
        if (!(bandwidth_sigma > 0.0) || !std::isfinite(bandwidth_sigma))
            throw Error(ErrorKind::Config, "bandwidth_sigma must be positive");
        if (rows < 1 || cols < 1) throw Error(ErrorKind::Config, "image resolution must be at least 1x1");
        if (domain && !(domain->birth_hi > domain->birth_lo && domain->pers_hi > domain->pers_lo))
            throw Error(ErrorKind::Config, "image domain intervals must be non-degenerate");
    }

    friend bool operator==(const ImageSpec&, const ImageSpec&) = default;
};

struct PersistenceImage {
    ImageSpec spec;
    std::vector<double> pixels;

    double at(std::size_t row, std::size_t col) const { return pixels[row * spec.cols + col]; }

    double total_mass() const
    {
        double s = 0.0;
        for (double p : pixels) s += p;
        return s;
    }
};

struct ShearedPoint {
    double birth = 0.0;
    double persistence = 0.0;
};

/// (b, d) -> (b, d - b). Relative points get negative persistence.
inline std::vector<ShearedPoint> shear(const std::vector<DiagramPoint>& points)
{
    std::vector<ShearedPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (!std::isfinite(p.birth) || !std::isfinite(p.death))
            throw Error(ErrorKind::Validation, "cannot shear a point with an infinite coordinate");
        out.push_back({p.birth, p.death - p.birth});
    }
    return out;
}

inline std::vector<DiagramPoint> finite_points(const std::vector<DiagramPoint>& points)
{
    std::vector<DiagramPoint> out;
    std::copy_if(points.begin(), points.end(), std::back_inserter(out), [](const DiagramPoint& p) {
        return std::isfinite(p.birth) && std::isfinite(p.death);
    });
    return out;
}

inline double point_weight(WeightKind w, const ShearedPoint& p)
{
    return w == WeightKind::ConstantOne ? 1.0 : std::max(p.persistence, 0.0);
}

namespace detail {

/// Standard normal mass on [a, b], evaluated from whichever tail keeps the
/// difference well conditioned.
inline double normal_mass(double a, double b)
{
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    if (a >= 0.0) return 0.5 * (std::erfc(a * inv_sqrt2) - std::erfc(b * inv_sqrt2));
    if (b <= 0.0) return 0.5 * (std::erfc(-b * inv_sqrt2) - std::erfc(-a * inv_sqrt2));
    return 1.0 - 0.5 * std::erfc(b * inv_sqrt2) - 0.5 * std::erfc(-a * inv_sqrt2);
}

} // namespace detail

/// Each pixel holds the exact integral, over its box, of the weighted sum of
/// isotropic Gaussians centred at the sheared points. Infinite points are
/// discarded first.
inline PersistenceImage render_image(const std::vector<DiagramPoint>& diagram, const ImageSpec& spec)
{
    spec.validate();
    if (!spec.domain) throw Error(ErrorKind::UnresolvedDomain, "image domain has not been fitted");
    const ImageDomain& dom = *spec.domain;
    const double sigma = spec.bandwidth_sigma;

    PersistenceImage img{spec, std::vector<double>(spec.rows * spec.cols, 0.0)};
    std::vector<double> xs(spec.cols + 1), ys(spec.rows + 1);
    for (std::size_t j = 0; j <= spec.cols; ++j)
        xs[j] = dom.birth_lo + (dom.birth_hi - dom.birth_lo) * static_cast<double>(j) / static_cast<double>(spec.cols);
    for (std::size_t i = 0; i <= spec.rows; ++i)
        ys[i] = dom.pers_lo + (dom.pers_hi - dom.pers_lo) * static_cast<double>(i) / static_cast<double>(spec.rows);

    std::vector<double> wx(spec.cols), wy(spec.rows);
    for (const auto& p : shear(finite_points(diagram))) {
        const double w = point_weight(spec.weight, p);
        if (w == 0.0) continue;
        for (std::size_t j = 0; j < spec.cols; ++j)
            wx[j] = detail::normal_mass((xs[j] - p.birth) / sigma, (xs[j + 1] - p.birth) / sigma);
        for (std::size_t i = 0; i < spec.rows; ++i)
            wy[i] = w * detail::normal_mass((ys[i] - p.persistence) / sigma, (ys[i + 1] - p.persistence) / sigma);
        for (std::size_t i = 0; i < spec.rows; ++i) {
            double* row = img.pixels.data() + i * spec.cols;
            for (std::size_t j = 0; j < spec.cols; ++j) row[j] += wy[i] * wx[j];
        }
    }
    return img;
}

struct DomainFit {
    ImageDomain domain;
    bool all_empty = false;
};

/// Bounding box of every finite sheared point, widened by 3 sigma per side.
/// With no points at all the unit box is returned and `all_empty` is set.
inline DomainFit fit_image_domain(const std::vector<std::vector<DiagramPoint>>& diagrams, double sigma)
{
    if (!(sigma > 0.0)) throw Error(ErrorKind::Config, "bandwidth_sigma must be positive");
    bool any = false;
    ImageDomain box{};
    for (const auto& d : diagrams) {
        for (const auto& p : shear(finite_points(d))) {
            if (!any) {
                box = {p.birth, p.birth, p.persistence, p.persistence};
                any = true;
            } else {
                box.birth_lo = std::min(box.birth_lo, p.birth);
                box.birth_hi = std::max(box.birth_hi, p.birth);
                box.pers_lo = std::min(box.pers_lo, p.persistence);
                box.pers_hi = std::max(box.pers_hi, p.persistence);
            }
        }
    }
    if (!any) return {ImageDomain{0.0, 1.0, 0.0, 1.0}, true};
    const double margin = 3.0 * sigma;
    box.birth_lo -= margin;
    box.birth_hi += margin;
    box.pers_lo -= margin;
    box.pers_hi += margin;
    return {box, false};
}

/// Row-major pixel matrix, one image row per line.
inline std::string image_to_csv(const PersistenceImage& img)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < img.spec.rows; ++i) {
        for (std::size_t j = 0; j < img.spec.cols; ++j) {
            if (j) os << ',';
            os << detail::format_double(img.at(i, j));
        }
        os << '\n';
    }
    return os.str();
}

inline std::vector<double> image_from_csv(std::string_view text, std::size_t rows, std::size_t cols)
{
    std::vector<double> pixels;
    pixels.reserve(rows * cols);
    std::size_t line_no = 0;
    for (auto line : detail::split_lines(text)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != cols)
            throw Error(ErrorKind::Parse, "image row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                              " cells, expected " + std::to_string(cols));
        for (const auto& c : cells) {
            auto v = detail::parse_double(c);
            if (!v) throw Error(ErrorKind::Parse, "image row " + std::to_string(line_no) + ": bad number '" + c + "'");
            pixels.push_back(*v);
        }
    }
    if (pixels.size() != rows * cols) throw Error(ErrorKind::Parse, "image has the wrong number of rows");
    return pixels;
}

} // namespace tsh
