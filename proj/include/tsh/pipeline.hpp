#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "tsh/config.hpp"
#include "tsh/detail/csv.hpp"
#include "tsh/detail/numfmt.hpp"
#include "tsh/features.hpp"
#include "tsh/filtration.hpp"
#include "tsh/image.hpp"
#include "tsh/parallel.hpp"
#include "tsh/pca.hpp"
#include "tsh/persistence.hpp"
#include "tsh/serialize.hpp"
#include "tsh/timeseries.hpp"

namespace tsh {

using TrialKey = std::pair<std::string, std::string>; // (reader_id, trial_id)

struct AxisDiagrams {
    ExtendedDiagram extended;
};

struct TrialDiagrams {
    std::string reader_id;
    std::string trial_id;
    std::optional<int> label;
    std::array<AxisDiagrams, 2> axes; // x, y

    TrialKey key() const { return {reader_id, trial_id}; }

    /// The diagrams fed to the image stage, in fixed order: x then y, and per
    /// axis ordinary[, relative, essential]. Infinite points never appear.
    std::vector<std::vector<DiagramPoint>> slots(PersistenceMode mode) const
    {
        std::vector<std::vector<DiagramPoint>> out;
        for (const auto& a : axes) {
            out.push_back(a.extended.ordinary);
            if (mode == PersistenceMode::Extended) {
                out.push_back(a.extended.relative);
                out.push_back({a.extended.essential});
            }
        }
        return out;
    }
};

struct SkippedTrial {
    std::string reader_id;
    std::string trial_id;
    std::string reason;
};

struct DiagramStage {
    std::size_t input_trials = 0;
    std::vector<TrialDiagrams> trials; // sorted by (reader_id, trial_id)
    std::vector<SkippedTrial> skipped;
};

inline const char* axis_name(std::size_t axis) { return axis == 0 ? "x" : "y"; }

/// Persistence of one axis series: scale, refine for the sweep, then sweep.
inline ExtendedDiagram axis_persistence(const TimeSeries& ts, const PipelineConfig& config)
{
    return extended_persistence(augment(minmax_scale(ts, config.scale_time), config.filtration));
}

inline DiagramStage run_diagram_stage(std::vector<FixationSequence> seqs, const PipelineConfig& config)
{
    config.validate();
    DiagramStage stage;
    stage.input_trials = seqs.size();
    std::sort(seqs.begin(), seqs.end(), [](const FixationSequence& a, const FixationSequence& b) {
        return std::tie(a.reader_id, a.trial_id) < std::tie(b.reader_id, b.trial_id);
    });

    std::vector<const FixationSequence*> kept;
    for (const auto& s : seqs) {
        if (s.size() < config.min_fixations)
            stage.skipped.push_back({s.reader_id, s.trial_id,
                                     "fewer than " + std::to_string(config.min_fixations) + " fixations"});
        else
            kept.push_back(&s);
    }

    struct Outcome {
        std::optional<TrialDiagrams> diagrams;
        std::string error;
    };
    auto outcomes = parallel_map<Outcome>(kept.size(), [&](std::size_t i) {
        const FixationSequence& s = *kept[i];
        Outcome o;
        auto [xs, ys] = split(s);
        TrialDiagrams t{s.reader_id, s.trial_id, s.label, {}};
        const TimeSeries* axes[2] = {&xs, &ys};
        for (std::size_t a = 0; a < 2; ++a) {
            try {
                t.axes[a].extended = axis_persistence(*axes[a], config);
            } catch (const Error& e) {
                o.error = std::string(axis_name(a)) + " axis: " + to_string(e.kind()) + ": " + e.what();
                return o;
            }
        }
        o.diagrams = std::move(t);
        return o;
    });

    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (outcomes[i].diagrams) stage.trials.push_back(std::move(*outcomes[i].diagrams));
        else stage.skipped.push_back({kept[i]->reader_id, kept[i]->trial_id, outcomes[i].error});
    }
    std::sort(stage.skipped.begin(), stage.skipped.end(), [](const SkippedTrial& a, const SkippedTrial& b) {
        return std::tie(a.reader_id, a.trial_id) < std::tie(b.reader_id, b.trial_id);
    });
    for (const auto& s : stage.skipped)
        std::cerr << "warning: skipping reader '" << s.reader_id << "' trial '" << s.trial_id << "': " << s.reason << '\n';
    return stage;
}

/// One JSON document per trial and axis.
inline json trial_axis_json(const TrialDiagrams& t, std::size_t axis, const PipelineConfig& config)
{
    json j;
    j["reader_id"] = t.reader_id;
    j["trial_id"] = t.trial_id;
    j["axis"] = axis_name(axis);
    j["filtration"] = to_json(config)["filtration"];
    j["persistence_mode"] = to_string(config.persistence_mode);
    const auto& d = t.axes[axis].extended;
    if (config.persistence_mode == PersistenceMode::Ordinary) {
        auto pts = d.ordinary;
        pts.push_back({d.essential.birth, std::numeric_limits<double>::infinity(), d.essential.birth_index,
                       DiagramPoint::npos});
        sort_points(pts);
        j["diagrams"] = json::array({diagram_to_json(DiagramKind::Ordinary, pts)});
    } else {
        j["diagrams"] = diagrams_to_json(d);
    }
    return j;
}

inline json stage_report(const DiagramStage& stage)
{
    json j;
    j["input_trials"] = stage.input_trials;
    j["output_trials"] = stage.trials.size();
    j["skipped"] = json::array();
    for (const auto& s : stage.skipped)
        j["skipped"].push_back({{"reader_id", s.reader_id}, {"trial_id", s.trial_id}, {"reason", s.reason}});
    return j;
}

struct BaselineTable {
    std::vector<std::string> columns;
    std::map<TrialKey, std::vector<double>> rows;
};

/// Baseline features keyed by (reader_id, trial_id); every other column is
/// numeric.
inline BaselineTable parse_baseline_csv(std::string_view text, const CsvSchema& schema = {})
{
    auto lines = detail::split_lines(text);
    if (lines.empty()) throw Error(ErrorKind::Schema, "baseline CSV has no header row");
    auto header = detail::split_csv_line(lines[0]);
    for (auto& h : header) h = std::string(detail::trim(h));
    auto find_col = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error(ErrorKind::Schema, "baseline CSV is missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_reader = find_col(schema.reader_id);
    const std::size_t c_trial = find_col(schema.trial_id);

    BaselineTable table;
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == c_reader || c == c_trial) continue;
        feature_cols.push_back(c);
        table.columns.push_back(header[c]);
    }
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (detail::trim(lines[li]).empty()) continue;
        auto cells = detail::split_csv_line(lines[li]);
        if (cells.size() != header.size())
            throw Error(ErrorKind::Parse, "baseline row " + std::to_string(li + 1) + " has the wrong number of cells");
        std::vector<double> v;
        for (std::size_t c : feature_cols) {
            auto x = detail::parse_double(cells[c]);
            if (!x) throw Error(ErrorKind::Parse, "baseline row " + std::to_string(li + 1) + ": column '" + header[c] +
                                                      "' is not a number");
            v.push_back(*x);
        }
        TrialKey key{std::string(detail::trim(cells[c_reader])), std::string(detail::trim(cells[c_trial]))};
        if (!table.rows.emplace(key, std::move(v)).second)
            throw Error(ErrorKind::Validation, "baseline CSV repeats reader '" + key.first + "' trial '" + key.second + "'");
    }
    return table;
}

/// Reads (reader_id, trial_id) pairs from a CSV with those two header names.
inline std::set<TrialKey> parse_fit_ids(std::string_view text, const CsvSchema& schema = {})
{
    auto lines = detail::split_lines(text);
    if (lines.empty()) throw Error(ErrorKind::Schema, "fit-ids file has no header row");
    auto header = detail::split_csv_line(lines[0]);
    for (auto& h : header) h = std::string(detail::trim(h));
    auto col = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error(ErrorKind::Schema, "fit-ids file is missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_reader = col(schema.reader_id), c_trial = col(schema.trial_id);
    std::set<TrialKey> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (detail::trim(lines[li]).empty()) continue;
        auto cells = detail::split_csv_line(lines[li]);
        if (cells.size() != header.size())
            throw Error(ErrorKind::Parse, "fit-ids row " + std::to_string(li + 1) + " has the wrong number of cells");
        out.insert({std::string(detail::trim(cells[c_reader])), std::string(detail::trim(cells[c_trial]))});
    }
    return out;
}

struct FittedTransforms {
    std::vector<ImageSpec> image_specs; // one per diagram slot
    PcaModel pca;
    std::size_t fit_rows = 0;
};

struct FeatureRow {
    std::string reader_id;
    std::string trial_id; // "*" for reader-level rows
    std::optional<int> label;
    std::vector<double> tsh;
    std::vector<double> baseline;
};

struct FeatureResult {
    DiagramStage stage;
    FittedTransforms transforms;
    std::vector<FeatureRow> rows;
    std::size_t baseline_width = 0;
};

/// Raw, pre-PCA topological vector of one trial.
inline std::vector<double> raw_tsh_vector(const TrialDiagrams& t, const std::vector<ImageSpec>& specs,
                                          PersistenceMode mode)
{
    auto slots = t.slots(mode);
    std::vector<PersistenceImage> images;
    images.reserve(slots.size());
    for (std::size_t s = 0; s < slots.size(); ++s) images.push_back(render_image(slots[s], specs[s]));
    return assemble_tsh_vector(images);
}

inline FeatureResult run_features(const std::vector<FixationSequence>& seqs, const PipelineConfig& config,
                                  const std::optional<BaselineTable>& baseline = std::nullopt,
                                  const std::optional<std::set<TrialKey>>& fit_ids = std::nullopt)
{
    FeatureResult res;
    res.stage = run_diagram_stage(seqs, config);
    const auto& trials = res.stage.trials;
    const PersistenceMode mode = config.persistence_mode;

    std::vector<std::size_t> fit_set;
    for (std::size_t i = 0; i < trials.size(); ++i)
        if (!fit_ids || fit_ids->count(trials[i].key())) fit_set.push_back(i);
    if (fit_set.size() < 2)
        throw Error(ErrorKind::InsufficientData, "fitting transforms needs at least two usable trials, found " +
                                                     std::to_string(fit_set.size()));

    if (baseline) {
        std::vector<std::string> missing;
        for (const auto& t : trials)
            if (!baseline->rows.count(t.key())) missing.push_back("(" + t.reader_id + ", " + t.trial_id + ")");
        if (!missing.empty()) {
            std::string msg = "baseline CSV lacks " + std::to_string(missing.size()) + " trial(s):";
            for (const auto& m : missing) msg += " " + m;
            throw Error(ErrorKind::Validation, msg);
        }
        res.baseline_width = baseline->columns.size();
    }

    // Image domains: one per slot, fitted on the fit subset only.
    const std::size_t n_slots = 2 * config.diagrams_per_axis();
    for (std::size_t s = 0; s < n_slots; ++s) {
        ImageSpec spec = config.image;
        if (!spec.domain) {
            std::vector<std::vector<DiagramPoint>> diagrams;
            for (std::size_t i : fit_set) diagrams.push_back(trials[i].slots(mode)[s]);
            auto fit = fit_image_domain(diagrams, spec.bandwidth_sigma);
            if (fit.all_empty)
                std::cerr << "warning: every training diagram in slot " << s
                          << " is empty; using the unit box as image domain\n";
            spec.domain = fit.domain;
        }
        res.transforms.image_specs.push_back(spec);
    }

    auto raw = parallel_map<std::vector<double>>(trials.size(), [&](std::size_t i) {
        return raw_tsh_vector(trials[i], res.transforms.image_specs, mode);
    });

    const auto width = static_cast<Eigen::Index>(raw.empty() ? 0 : raw.front().size());
    Eigen::MatrixXd fit_matrix(static_cast<Eigen::Index>(fit_set.size()), width);
    for (std::size_t r = 0; r < fit_set.size(); ++r)
        fit_matrix.row(static_cast<Eigen::Index>(r)) =
            Eigen::Map<const Eigen::RowVectorXd>(raw[fit_set[r]].data(), width);
    res.transforms.pca = fit_pca(fit_matrix, config.resolved_pca_components());
    res.transforms.fit_rows = fit_set.size();
    if (res.transforms.pca.n_components() < config.resolved_pca_components())
        std::cerr << "warning: PCA components clamped from " << config.resolved_pca_components() << " to "
                  << res.transforms.pca.n_components() << " (rank of the fit data)\n";

    std::vector<FeatureRow> trial_rows;
    trial_rows.reserve(trials.size());
    for (std::size_t i = 0; i < trials.size(); ++i) {
        FeatureRow row{trials[i].reader_id, trials[i].trial_id, trials[i].label, apply_pca(res.transforms.pca, raw[i]),
                       {}};
        if (baseline) row.baseline = baseline->rows.at(trials[i].key());
        trial_rows.push_back(std::move(row));
    }

    if (config.aggregation == Aggregation::Trial) {
        res.rows = std::move(trial_rows);
        return res;
    }

    std::map<std::string, std::vector<const FeatureRow*>> by_reader;
    for (const auto& r : trial_rows) by_reader[r.reader_id].push_back(&r);
    for (const auto& [reader, rows] : by_reader) {
        FeatureRow agg{reader, "*", rows.front()->label, {}, {}};
        std::vector<std::vector<double>> tsh, bl;
        for (const auto* r : rows) {
            if (r->label != agg.label)
                throw Error(ErrorKind::Validation, "reader '" + reader + "' has trials with different labels");
            tsh.push_back(r->tsh);
            bl.push_back(r->baseline);
        }
        agg.tsh = reader_aggregate(tsh);
        agg.baseline = reader_aggregate(bl);
        res.rows.push_back(std::move(agg));
    }
    return res;
}

inline std::string feature_column_name(std::string_view prefix, std::size_t i, std::size_t count)
{
    std::size_t digits = 3;
    for (std::size_t c = count > 0 ? count - 1 : 0; c >= 1000; c /= 10) ++digits;
    std::string num = std::to_string(i);
    if (num.size() < digits) num.insert(0, digits - num.size(), '0');
    return std::string(prefix) + "_" + num;
}

/// reader_id,trial_id,label,tsh_000..tsh_{k-1}[,bl_000..]
inline std::string feature_csv(const FeatureResult& res)
{
    const std::size_t k = res.transforms.pca.n_components();
    std::ostringstream os;
    os << "reader_id,trial_id,label";
    for (std::size_t i = 0; i < k; ++i) os << ',' << feature_column_name("tsh", i, k);
    for (std::size_t i = 0; i < res.baseline_width; ++i) os << ',' << feature_column_name("bl", i, res.baseline_width);
    os << '\n';
    for (const auto& r : res.rows) {
        os << detail::quote_csv_field(r.reader_id) << ',' << detail::quote_csv_field(r.trial_id) << ',';
        if (r.label) os << *r.label;
        for (double v : r.tsh) os << ',' << detail::format_double(v);
        for (double v : r.baseline) os << ',' << detail::format_double(v);
        os << '\n';
    }
    return os.str();
}

inline json transforms_json(const FeatureResult& res, const PipelineConfig& config)
{
    json j;
    j["config"] = to_json(config);
    j["fit_rows"] = res.transforms.fit_rows;
    j["image_specs"] = json::array();
    for (const auto& s : res.transforms.image_specs) j["image_specs"].push_back(to_json(s));
    j["pca"] = to_json(res.transforms.pca);
    return j;
}

} // namespace tsh
