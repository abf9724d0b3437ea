#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsh/error.hpp"
#include "tsh/image.hpp"
#include "tsh/pca.hpp"
#include "tsh/persistence.hpp"

namespace tsh {

using json = nlohmann::ordered_json;

namespace detail {

inline json coordinate_to_json(double v)
{
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return v;
}

inline double coordinate_from_json(const json& j)
{
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw Error(ErrorKind::Parse, "unexpected coordinate string '" + s + "'");
    }
    if (!j.is_number()) throw Error(ErrorKind::Parse, "diagram coordinate is not a number");
    return j.get<double>();
}

} // namespace detail

inline json point_to_json(const DiagramPoint& p)
{
    return json{{"birth", detail::coordinate_to_json(p.birth)}, {"death", detail::coordinate_to_json(p.death)}};
}

/// {kind, points: [{birth, death}], essential: {birth, death}}; the
/// essential field is present on essential records only.
inline json diagram_to_json(DiagramKind kind, const std::vector<DiagramPoint>& points)
{
    json j{{"kind", to_string(kind)}, {"points", json::array()}};
    for (const auto& p : points) j["points"].push_back(point_to_json(p));
    if (kind == DiagramKind::Essential && !points.empty()) j["essential"] = point_to_json(points.front());
    return j;
}

inline json diagrams_to_json(const ExtendedDiagram& d)
{
    return json::array({diagram_to_json(DiagramKind::Ordinary, d.ordinary),
                        diagram_to_json(DiagramKind::Relative, d.relative),
                        diagram_to_json(DiagramKind::Essential, {d.essential})});
}

inline std::vector<DiagramPoint> points_from_json(const json& record)
{
    std::vector<DiagramPoint> out;
    for (const auto& p : record.at("points"))
        out.push_back({detail::coordinate_from_json(p.at("birth")), detail::coordinate_from_json(p.at("death")), 0, 0});
    return out;
}

inline json to_json(const ImageDomain& d)
{
    return json{{"birth", {d.birth_lo, d.birth_hi}}, {"persistence", {d.pers_lo, d.pers_hi}}};
}

inline ImageDomain image_domain_from_json(const json& j)
{
    const auto& b = j.at("birth");
    const auto& p = j.at("persistence");
    return {b.at(0).get<double>(), b.at(1).get<double>(), p.at(0).get<double>(), p.at(1).get<double>()};
}

inline json to_json(const ImageSpec& s)
{
    json j{{"bandwidth_sigma", s.bandwidth_sigma},
           {"resolution", {s.rows, s.cols}},
           {"weight", to_string(s.weight)}};
    j["domain"] = s.domain ? to_json(*s.domain) : json("fit-from-data");
    return j;
}

inline ImageSpec image_spec_from_json(const json& j, const ImageSpec& defaults = {})
{
    ImageSpec s = defaults;
    if (j.contains("bandwidth_sigma")) s.bandwidth_sigma = j.at("bandwidth_sigma").get<double>();
    if (j.contains("resolution")) {
        const auto& r = j.at("resolution");
        if (!r.is_array() || r.size() != 2) throw Error(ErrorKind::Config, "image resolution must be [n, m]");
        s.rows = r.at(0).get<std::size_t>();
        s.cols = r.at(1).get<std::size_t>();
    }
    if (j.contains("weight")) s.weight = parse_weight_kind(j.at("weight").get<std::string>());
    if (j.contains("domain")) {
        const auto& d = j.at("domain");
        if (d.is_string()) {
            if (d.get<std::string>() != "fit-from-data")
                throw Error(ErrorKind::Config, "image domain must be \"fit-from-data\" or an explicit box");
            s.domain.reset();
        } else {
            s.domain = image_domain_from_json(d);
        }
    }
    s.validate();
    return s;
}

inline json to_json(const PcaModel& m)
{
    json j;
    j["mean"] = std::vector<double>(m.mean.data(), m.mean.data() + m.mean.size());
    json comps = json::array();
    for (Eigen::Index r = 0; r < m.components.rows(); ++r) {
        Eigen::VectorXd row = m.components.row(r).transpose();
        comps.push_back(std::vector<double>(row.data(), row.data() + row.size()));
    }
    j["components"] = std::move(comps);
    j["explained_variance"] =
        std::vector<double>(m.explained_variance.data(), m.explained_variance.data() + m.explained_variance.size());
    return j;
}

inline PcaModel pca_model_from_json(const json& j)
{
    PcaModel m;
    auto mean = j.at("mean").get<std::vector<double>>();
    m.mean = Eigen::Map<Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    const auto& comps = j.at("components");
    m.components.resize(static_cast<Eigen::Index>(comps.size()), static_cast<Eigen::Index>(mean.size()));
    for (std::size_t r = 0; r < comps.size(); ++r) {
        auto row = comps[r].get<std::vector<double>>();
        if (row.size() != mean.size()) throw Error(ErrorKind::Parse, "PCA component length mismatch");
        for (std::size_t c = 0; c < row.size(); ++c)
            m.components(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
    auto ev = j.at("explained_variance").get<std::vector<double>>();
    m.explained_variance = Eigen::Map<Eigen::VectorXd>(ev.data(), static_cast<Eigen::Index>(ev.size()));
    return m;
}

} // namespace tsh
