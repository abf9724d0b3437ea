#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsh/error.hpp"
#include "tsh/timeseries.hpp"

namespace tsh {

enum class FiltrationKind { Horizontal, Sloped, Sigmoid, Arctan };

inline const char* to_string(FiltrationKind k)
{
    switch (k) {
    case FiltrationKind::Horizontal: return "horizontal";
    case FiltrationKind::Sloped: return "sloped";
    case FiltrationKind::Sigmoid: return "sigmoid";
    case FiltrationKind::Arctan: return "arctan";
    }
    return "?";
}

inline FiltrationKind parse_filtration_kind(std::string_view s)
{
    if (s == "horizontal") return FiltrationKind::Horizontal;
    if (s == "sloped") return FiltrationKind::Sloped;
    if (s == "sigmoid") return FiltrationKind::Sigmoid;
    if (s == "arctan") return FiltrationKind::Arctan;
    throw Error(ErrorKind::Config, "unknown filtration kind '" + std::string(s) + "'");
}

/// How curved sweeps treat segments on which the filtration is not monotone.
enum class CriticalPoints {
    Analytic,   ///< insert interior stationary points in closed form
    VertexOnly, ///< evaluate at the original vertices only
};

struct FiltrationSpec {
    FiltrationKind kind = FiltrationKind::Horizontal;
    double slope_c = 1.0;
    double padding_eps = 0.05;
    CriticalPoints critical_points = CriticalPoints::Analytic;

    void validate() const
    {
        if (kind != FiltrationKind::Horizontal && (slope_c == 0.0 || !std::isfinite(slope_c)))
            throw Error(ErrorKind::Config, "slope_c must be finite and nonzero for the " + std::string(to_string(kind)) +
                                               " filtration");
        if (!(padding_eps >= 0.0) || !std::isfinite(padding_eps))
            throw Error(ErrorKind::Config, "padding_eps must be finite and non-negative");
        if ((kind == FiltrationKind::Sigmoid || kind == FiltrationKind::Arctan) && !(padding_eps > 0.0))
            throw Error(ErrorKind::Config, "padding_eps must be positive for the " + std::string(to_string(kind)) +
                                               " filtration");
    }
};

/// Value strip [lo, hi] swept by the filtration curves.
struct ValueRange {
    double lo = 0.0;
    double hi = 1.0;

    double width() const noexcept { return hi - lo; }
    double normalized(double x) const noexcept { return (x - lo) / (hi - lo); }
};

inline ValueRange padded_range(const TimeSeries& ts, double eps)
{
    if (ts.empty()) throw Error(ErrorKind::DegenerateRange, "empty time series has no value range");
    if (!(eps >= 0.0)) throw Error(ErrorKind::Config, "padding must be non-negative");
    double lo = ts[0].x, hi = ts[0].x;
    for (const auto& p : ts.points()) {
        lo = std::min(lo, p.x);
        hi = std::max(hi, p.x);
    }
    const double r = hi - lo;
    if (!(r > 0.0)) throw Error(ErrorKind::DegenerateRange, "time series values are constant");
    return {lo - eps * r, hi + eps * r};
}

/// The unit-range sweep profile F of each non-horizontal kind, F(0) = 1/2 and
/// F'(0) = c. Sloped is clamped to [0, 1] outside its support.
inline double sweep_profile(FiltrationKind kind, double c, double s)
{
    switch (kind) {
    case FiltrationKind::Sloped: return std::clamp(c * s + 0.5, 0.0, 1.0);
    case FiltrationKind::Sigmoid: return 1.0 / (1.0 + std::exp(-4.0 * c * s));
    case FiltrationKind::Arctan: return std::atan(c * std::numbers::pi * s) / std::numbers::pi + 0.5;
    case FiltrationKind::Horizontal: break;
    }
    throw Error(ErrorKind::Config, "the horizontal filtration has no sweep profile");
}

/// Height of the sweep curve at time t when the curve has been shifted to h.
inline double sweep_curve(const FiltrationSpec& spec, const ValueRange& range, double h, double t)
{
    return range.width() * sweep_profile(spec.kind, spec.slope_c, t - h) + range.lo;
}

/// Filtration level of the graph point (t, x): the shift at which the sweep
/// curve passes through it. Horizontal returns x itself.
inline double filtration_value(const FiltrationSpec& spec, const ValueRange& range, TimePoint point)
{
    const double c = spec.slope_c;
    const double t = point.t;
    const double x = point.x;
    double f = 0.0;
    switch (spec.kind) {
    case FiltrationKind::Horizontal:
        return x;
    case FiltrationKind::Sloped:
        f = t - (range.normalized(x) - 0.5) / c;
        break;
    case FiltrationKind::Sigmoid:
        f = t + std::log((range.hi - x) / (x - range.lo)) / (4.0 * c);
        break;
    case FiltrationKind::Arctan:
        // tan does not overflow at a rounded pi/2, so the boundary is checked directly.
        if (!(x > range.lo && x < range.hi)) f = std::numeric_limits<double>::infinity();
        else f = t - std::tan(std::numbers::pi * (range.normalized(x) - 0.5)) / (c * std::numbers::pi);
        break;
    }
    if (!std::isfinite(f))
        throw Error(ErrorKind::NonFiniteResult, std::string(to_string(spec.kind)) +
                                                    " filtration value is not finite; is the point on the range boundary?");
    return f;
}

struct CriticalPoint {
    double t = 0.0;
    double x = 0.0;
    double filtration = 0.0;
};

/// Stationary points of the filtration restricted to the open segment a-b.
///
/// On a segment with normalized slope beta = m / (hi - lo), the derivative of
/// the sigmoid filtration vanishes where u(1 - u) = beta / (4c) and that of
/// the arctan filtration where tan^2(pi(u - 1/2)) = c / beta - 1, u being the
/// normalized value. Both need 0 < beta / c <= 1. Roots within 1e-12 (in u)
/// of an endpoint are left to the endpoint vertex.
inline std::vector<CriticalPoint> interior_critical_points(const FiltrationSpec& spec, const ValueRange& range,
                                                           TimePoint a, TimePoint b)
{
    std::vector<CriticalPoint> out;
    if (spec.kind != FiltrationKind::Sigmoid && spec.kind != FiltrationKind::Arctan) return out;
    if (!(a.t < b.t)) throw Error(ErrorKind::Validation, "segment endpoints must have increasing times");

    const double m = (b.x - a.x) / (b.t - a.t);
    if (m == 0.0) return out;
    const double beta = m / range.width();
    const double ratio = beta / spec.slope_c;
    if (!(ratio > 0.0) || ratio > 1.0) return out;

    double roots[2];
    int n_roots = 0;
    if (spec.kind == FiltrationKind::Sigmoid) {
        const double disc = std::sqrt(std::max(0.0, 1.0 - ratio));
        roots[n_roots++] = 0.5 * (1.0 - disc);
        if (disc > 0.0) roots[n_roots++] = 0.5 * (1.0 + disc);
    } else {
        const double angle = std::atan(std::sqrt(std::max(0.0, 1.0 / ratio - 1.0))) / std::numbers::pi;
        roots[n_roots++] = 0.5 - angle;
        if (angle > 0.0) roots[n_roots++] = 0.5 + angle;
    }

    constexpr double kEndpointTol = 1e-12;
    const double ua = range.normalized(a.x);
    const double ub = range.normalized(b.x);
    const double u_lo = std::min(ua, ub) + kEndpointTol;
    const double u_hi = std::max(ua, ub) - kEndpointTol;
    for (int i = 0; i < n_roots; ++i) {
        const double u = roots[i];
        if (!(u > u_lo && u < u_hi)) continue;
        const double x = range.lo + u * range.width();
        const double t = a.t + (x - a.x) / m;
        if (!(t > a.t && t < b.t)) continue;
        out.push_back({t, x, filtration_value(spec, range, {t, x})});
    }
    std::sort(out.begin(), out.end(), [](const CriticalPoint& p, const CriticalPoint& q) { return p.t < q.t; });
    return out;
}

enum class VertexOrigin { Original, InsertedCritical };

struct AugmentedVertex {
    double t = 0.0;
    double value = 0.0;
    double filtration = 0.0;
    VertexOrigin origin = VertexOrigin::Original;
};

/// A time series annotated with filtration values, refined so the filtration
/// is monotone along every segment between consecutive vertices.
struct AugmentedSeries {
    std::vector<AugmentedVertex> vertices;
    ValueRange range;

    std::size_t size() const noexcept { return vertices.size(); }

    std::vector<double> filtration() const
    {
        std::vector<double> out(vertices.size());
        for (std::size_t i = 0; i < vertices.size(); ++i) out[i] = vertices[i].filtration;
        return out;
    }
};

inline AugmentedSeries augment(const TimeSeries& ts, const FiltrationSpec& spec)
{
    spec.validate();
    if (ts.size() < 2) throw Error(ErrorKind::Validation, "persistence needs a time series with at least two points");
    AugmentedSeries out;
    out.range = padded_range(ts, spec.padding_eps);
    out.vertices.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const TimePoint& p = ts[i];
        if (i > 0 && spec.critical_points == CriticalPoints::Analytic) {
            for (const auto& cp : interior_critical_points(spec, out.range, ts[i - 1], p))
                out.vertices.push_back({cp.t, cp.x, cp.filtration, VertexOrigin::InsertedCritical});
        }
        out.vertices.push_back({p.t, p.x, filtration_value(spec, out.range, p), VertexOrigin::Original});
    }
    return out;
}

/// Wraps plain filtration values (one per vertex, unit-spaced times).
inline AugmentedSeries augmented_from_values(const std::vector<double>& filtration)
{
    AugmentedSeries out;
    out.vertices.reserve(filtration.size());
    for (std::size_t i = 0; i < filtration.size(); ++i)
        out.vertices.push_back({static_cast<double>(i), filtration[i], filtration[i], VertexOrigin::Original});
    return out;
}

} // namespace tsh
