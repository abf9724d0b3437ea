#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "tsh/error.hpp"
#include "tsh/filtration.hpp"
#include "tsh/image.hpp"
#include "tsh/serialize.hpp"
#include "tsh/timeseries.hpp"

namespace tsh {

enum class PersistenceMode { Ordinary, Extended };
enum class Aggregation { Trial, Reader };

inline const char* to_string(PersistenceMode m) { return m == PersistenceMode::Ordinary ? "ordinary" : "extended"; }
inline const char* to_string(Aggregation a) { return a == Aggregation::Trial ? "trial" : "reader"; }

inline const char* to_string(CriticalPoints c)
{
    return c == CriticalPoints::Analytic ? "analytic" : "vertex-only";
}

struct PipelineConfig {
    FiltrationSpec filtration;
    PersistenceMode persistence_mode = PersistenceMode::Ordinary;
    ImageSpec image;
    std::optional<std::size_t> pca_components; // unset: 250 ordinary, 750 extended
    std::size_t min_fixations = 5;
    bool scale_time = true;
    Aggregation aggregation = Aggregation::Trial;
    std::uint64_t seed = 0;
    CsvSchema columns;

    std::size_t diagrams_per_axis() const { return persistence_mode == PersistenceMode::Ordinary ? 1 : 3; }

    std::size_t resolved_pca_components() const
    {
        if (pca_components) return *pca_components;
        return persistence_mode == PersistenceMode::Ordinary ? 250 : 750;
    }

    void validate() const
    {
        filtration.validate();
        image.validate();
        if (pca_components && *pca_components < 1) throw Error(ErrorKind::Config, "pca_components must be positive");
        if (min_fixations < 1) throw Error(ErrorKind::Config, "min_fixations must be at least 1");
    }
};

namespace detail {

inline void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where)
{
    if (!obj.is_object()) throw Error(ErrorKind::Config, std::string(where) + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw Error(ErrorKind::Config, "unknown key '" + key + "' in " + std::string(where));
    }
}

} // namespace detail

inline json to_json(const PipelineConfig& c)
{
    json j;
    j["filtration"] = {{"kind", to_string(c.filtration.kind)},
                       {"slope_c", c.filtration.slope_c},
                       {"padding_eps", c.filtration.padding_eps},
                       {"critical_points", to_string(c.filtration.critical_points)}};
    j["persistence_mode"] = to_string(c.persistence_mode);
    j["image"] = to_json(c.image);
    j["pca_components"] = c.resolved_pca_components();
    j["min_fixations"] = c.min_fixations;
    j["scale_time"] = c.scale_time;
    j["aggregation"] = to_string(c.aggregation);
    j["seed"] = c.seed;
    j["columns"] = {{"reader_id", c.columns.reader_id}, {"trial_id", c.columns.trial_id},
                    {"onset", c.columns.onset},         {"x", c.columns.x},
                    {"y", c.columns.y},                 {"label", c.columns.label}};
    return j;
}

/// Overlays the keys present in `j` onto `base`. Unknown keys are errors.
inline PipelineConfig config_from_json(const json& j, PipelineConfig base = {})
{
    try {
        detail::reject_unknown_keys(j,
                                    {"filtration", "persistence_mode", "image", "pca_components", "min_fixations",
                                     "scale_time", "aggregation", "seed", "columns"},
                                    "config");
        if (j.contains("filtration")) {
            const auto& f = j.at("filtration");
            detail::reject_unknown_keys(f, {"kind", "slope_c", "padding_eps", "critical_points"}, "filtration");
            if (f.contains("kind")) base.filtration.kind = parse_filtration_kind(f.at("kind").get<std::string>());
            if (f.contains("slope_c")) base.filtration.slope_c = f.at("slope_c").get<double>();
            if (f.contains("padding_eps")) base.filtration.padding_eps = f.at("padding_eps").get<double>();
            if (f.contains("critical_points")) {
                auto s = f.at("critical_points").get<std::string>();
                if (s == "analytic") base.filtration.critical_points = CriticalPoints::Analytic;
                else if (s == "vertex-only") base.filtration.critical_points = CriticalPoints::VertexOnly;
                else throw Error(ErrorKind::Config, "critical_points must be \"analytic\" or \"vertex-only\"");
            }
        }
        if (j.contains("persistence_mode")) {
            auto s = j.at("persistence_mode").get<std::string>();
            if (s == "ordinary") base.persistence_mode = PersistenceMode::Ordinary;
            else if (s == "extended") base.persistence_mode = PersistenceMode::Extended;
            else throw Error(ErrorKind::Config, "persistence_mode must be \"ordinary\" or \"extended\"");
        }
        if (j.contains("image")) {
            detail::reject_unknown_keys(j.at("image"), {"bandwidth_sigma", "resolution", "weight", "domain"}, "image");
            base.image = image_spec_from_json(j.at("image"), base.image);
        }
        if (j.contains("pca_components")) {
            const auto& p = j.at("pca_components");
            if (p.is_null()) base.pca_components.reset();
            else base.pca_components = p.get<std::size_t>();
        }
        if (j.contains("min_fixations")) base.min_fixations = j.at("min_fixations").get<std::size_t>();
        if (j.contains("scale_time")) base.scale_time = j.at("scale_time").get<bool>();
        if (j.contains("aggregation")) {
            auto s = j.at("aggregation").get<std::string>();
            if (s == "trial") base.aggregation = Aggregation::Trial;
            else if (s == "reader") base.aggregation = Aggregation::Reader;
            else throw Error(ErrorKind::Config, "aggregation must be \"trial\" or \"reader\"");
        }
        if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("columns")) {
            const auto& c = j.at("columns");
            detail::reject_unknown_keys(c, {"reader_id", "trial_id", "onset", "x", "y", "label"}, "columns");
            if (c.contains("reader_id")) base.columns.reader_id = c.at("reader_id").get<std::string>();
            if (c.contains("trial_id")) base.columns.trial_id = c.at("trial_id").get<std::string>();
            if (c.contains("onset")) base.columns.onset = c.at("onset").get<std::string>();
            if (c.contains("x")) base.columns.x = c.at("x").get<std::string>();
            if (c.contains("y")) base.columns.y = c.at("y").get<std::string>();
            if (c.contains("label")) base.columns.label = c.at("label").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, std::string("malformed config: ") + e.what());
    }
    base.validate();
    return base;
}

inline PipelineConfig config_from_text(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

} // namespace tsh
