#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsh/detail/csv.hpp"
#include "tsh/detail/numfmt.hpp"
#include "tsh/error.hpp"

namespace tsh {

struct Fixation {
    double onset_ms = 0.0;
    double x_px = 0.0;
    double y_px = 0.0;

    friend bool operator==(const Fixation&, const Fixation&) = default;
};

/// One trial of one reader. `label` is 1 for dyslexic, 0 otherwise; absent when
/// the input carries no label column (or the cell is empty).
struct FixationSequence {
    std::string reader_id;
    std::string trial_id;
    std::optional<int> label;
    std::vector<Fixation> fixations;

    std::size_t size() const noexcept { return fixations.size(); }

    friend bool operator==(const FixationSequence&, const FixationSequence&) = default;
};

struct TimePoint {
    double t = 0.0;
    double x = 0.0;

    friend bool operator==(const TimePoint&, const TimePoint&) = default;
};

/// Univariate series with strictly increasing times.
class TimeSeries {
public:
    TimeSeries() = default;

    explicit TimeSeries(std::vector<TimePoint> points) : points_(std::move(points))
    {
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto& p = points_[i];
            if (!std::isfinite(p.t) || !std::isfinite(p.x))
                throw Error(ErrorKind::Validation, "time series contains a non-finite value at index " + std::to_string(i));
            if (i > 0 && !(points_[i - 1].t < p.t))
                throw Error(ErrorKind::Validation, "time series times are not strictly increasing at index " + std::to_string(i));
        }
    }

    static TimeSeries from_values(const std::vector<double>& times, const std::vector<double>& values)
    {
        if (times.size() != values.size())
            throw Error(ErrorKind::Validation, "times and values differ in length");
        std::vector<TimePoint> pts(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) pts[i] = {times[i], values[i]};
        return TimeSeries(std::move(pts));
    }

    /// Unit-spaced times 0, 1, 2, ...
    static TimeSeries from_values(const std::vector<double>& values)
    {
        std::vector<double> times(values.size());
        for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i);
        return from_values(times, values);
    }

    const std::vector<TimePoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const TimePoint& operator[](std::size_t i) const { return points_[i]; }

    std::vector<double> values() const
    {
        std::vector<double> out(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) out[i] = points_[i].x;
        return out;
    }

    std::vector<double> times() const
    {
        std::vector<double> out(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) out[i] = points_[i].t;
        return out;
    }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<TimePoint> points_;
};

/// Maps t to (t0 + t1) - t and reverses the order, so the series keeps its
/// time span and runs backwards.
inline TimeSeries reverse_time(const TimeSeries& ts)
{
    if (ts.empty()) return ts;
    const double flip = ts.points().front().t + ts.points().back().t;
    std::vector<TimePoint> pts(ts.points().rbegin(), ts.points().rend());
    for (auto& p : pts) p.t = flip - p.t;
    return TimeSeries(std::move(pts));
}

struct CsvSchema {
    std::string reader_id = "reader_id";
    std::string trial_id = "trial_id";
    std::string onset = "onset_ms";
    std::string x = "x_px";
    std::string y = "y_px";
    std::string label = "label";
};

/// Parses fixation rows, grouping them by (reader, trial). Groups come out
/// in order of first appearance; rows within a group are sorted by onset.
inline std::vector<FixationSequence> parse_fixation_csv(std::string_view text, const CsvSchema& schema = {})
{
    auto lines = detail::split_lines(text);
    std::size_t first = 0;
    while (first < lines.size() && detail::trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw Error(ErrorKind::Schema, "input has no header row");

    auto header = detail::split_csv_line(lines[first]);
    for (auto& h : header) h = std::string(detail::trim(h));
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    auto required = [&](const std::string& name) {
        auto c = column(name);
        if (!c) throw Error(ErrorKind::Schema, "missing required column '" + name + "'");
        return *c;
    };
    const std::size_t c_reader = required(schema.reader_id);
    const std::size_t c_trial = required(schema.trial_id);
    const std::size_t c_onset = required(schema.onset);
    const std::size_t c_x = required(schema.x);
    const std::size_t c_y = required(schema.y);
    const std::optional<std::size_t> c_label = column(schema.label);

    struct Row {
        Fixation fix;
        std::size_t row;
    };
    struct Group {
        FixationSequence seq;
        std::vector<Row> rows;
        bool label_seen = false;
    };
    std::vector<Group> groups;
    std::map<std::pair<std::string, std::string>, std::size_t> index;

    for (std::size_t li = first + 1; li < lines.size(); ++li) {
        if (detail::trim(lines[li]).empty()) continue;
        const std::size_t row_no = li + 1;
        auto cells = detail::split_csv_line(lines[li]);
        if (cells.size() != header.size())
            throw Error(ErrorKind::Parse, "row " + std::to_string(row_no) + ": expected " + std::to_string(header.size()) +
                                              " cells, found " + std::to_string(cells.size()));
        auto number = [&](std::size_t c) {
            auto v = detail::parse_double(cells[c]);
            if (!v || !std::isfinite(*v))
                throw Error(ErrorKind::Parse, "row " + std::to_string(row_no) + ": column '" + header[c] +
                                                  "' is not a finite number: '" + cells[c] + "'");
            return *v;
        };
        Fixation fix{number(c_onset), number(c_x), number(c_y)};
        if (fix.onset_ms < 0)
            throw Error(ErrorKind::Validation, "row " + std::to_string(row_no) + ": negative onset");

        std::string reader(detail::trim(cells[c_reader]));
        std::string trial(detail::trim(cells[c_trial]));
        auto key = std::make_pair(reader, trial);
        auto [it, inserted] = index.try_emplace(key, groups.size());
        if (inserted) {
            Group g;
            g.seq.reader_id = reader;
            g.seq.trial_id = trial;
            groups.push_back(std::move(g));
        }
        Group& g = groups[it->second];

        if (c_label) {
            auto cell = detail::trim(cells[*c_label]);
            std::optional<int> label;
            if (!cell.empty()) {
                auto v = detail::parse_double(cell);
                if (!v || (*v != 0.0 && *v != 1.0))
                    throw Error(ErrorKind::Parse, "row " + std::to_string(row_no) + ": label must be 0 or 1, found '" +
                                                      std::string(cell) + "'");
                label = static_cast<int>(*v);
            }
            if (g.label_seen && g.seq.label != label)
                throw Error(ErrorKind::Validation, "row " + std::to_string(row_no) + ": conflicting labels within reader '" +
                                                       reader + "' trial '" + trial + "'");
            g.seq.label = label;
            g.label_seen = true;
        }
        g.rows.push_back({fix, row_no});
    }

    std::vector<FixationSequence> out;
    out.reserve(groups.size());
    for (auto& g : groups) {
        std::stable_sort(g.rows.begin(), g.rows.end(),
                         [](const Row& a, const Row& b) { return a.fix.onset_ms < b.fix.onset_ms; });
        for (std::size_t i = 1; i < g.rows.size(); ++i) {
            if (g.rows[i].fix.onset_ms == g.rows[i - 1].fix.onset_ms)
                throw Error(ErrorKind::Validation, "duplicate onset " + detail::format_double(g.rows[i].fix.onset_ms) +
                                                       " in reader '" + g.seq.reader_id + "' trial '" + g.seq.trial_id +
                                                       "' (rows " + std::to_string(g.rows[i - 1].row) + " and " +
                                                       std::to_string(g.rows[i].row) + ")");
        }
        for (const auto& r : g.rows) g.seq.fixations.push_back(r.fix);
        out.push_back(std::move(g.seq));
    }
    return out;
}

/// Inverse of parse_fixation_csv for the default column layout.
inline std::string serialize_fixation_csv(const std::vector<FixationSequence>& seqs, const CsvSchema& schema = {})
{
    bool any_label = std::any_of(seqs.begin(), seqs.end(), [](const auto& s) { return s.label.has_value(); });
    std::ostringstream os;
    os << schema.reader_id << ',' << schema.trial_id << ',' << schema.onset << ',' << schema.x << ',' << schema.y;
    if (any_label) os << ',' << schema.label;
    os << '\n';
    for (const auto& s : seqs) {
        for (const auto& f : s.fixations) {
            os << detail::quote_csv_field(s.reader_id) << ',' << detail::quote_csv_field(s.trial_id) << ','
               << detail::format_double(f.onset_ms) << ',' << detail::format_double(f.x_px) << ','
               << detail::format_double(f.y_px);
            if (any_label) {
                os << ',';
                if (s.label) os << *s.label;
            }
            os << '\n';
        }
    }
    return os.str();
}

/// Horizontal and vertical coordinate series of one trial, sharing onsets.
inline std::pair<TimeSeries, TimeSeries> split(const FixationSequence& seq)
{
    if (seq.fixations.empty()) throw Error(ErrorKind::Validation, "cannot split an empty fixation sequence");
    std::vector<TimePoint> xs, ys;
    xs.reserve(seq.size());
    ys.reserve(seq.size());
    for (const auto& f : seq.fixations) {
        xs.push_back({f.onset_ms, f.x_px});
        ys.push_back({f.onset_ms, f.y_px});
    }
    return {TimeSeries(std::move(xs)), TimeSeries(std::move(ys))};
}

/// Affinely maps values onto [0, 1]; with `scale_time` the times as well.
/// Throws DegenerateRange for constant values.
inline TimeSeries minmax_scale(const TimeSeries& ts, bool scale_time = true)
{
    if (ts.empty()) throw Error(ErrorKind::Validation, "cannot scale an empty time series");
    auto [lo_it, hi_it] = std::minmax_element(ts.points().begin(), ts.points().end(),
                                              [](const TimePoint& a, const TimePoint& b) { return a.x < b.x; });
    const double lo = lo_it->x;
    const double hi = hi_it->x;
    if (!(hi > lo)) throw Error(ErrorKind::DegenerateRange, "time series values are constant");

    const double t0 = ts.points().front().t;
    const double t1 = ts.points().back().t;
    const bool do_time = scale_time && t1 > t0;

    std::vector<TimePoint> pts(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& p = ts[i];
        double x = (p.x - lo) / (hi - lo);
        double t = do_time ? (p.t - t0) / (t1 - t0) : p.t;
        pts[i] = {t, x};
    }
    pts[lo_it - ts.points().begin()].x = 0.0;
    pts[hi_it - ts.points().begin()].x = 1.0;
    if (do_time) {
        pts.front().t = 0.0;
        pts.back().t = 1.0;
    }
    return TimeSeries(std::move(pts));
}

inline std::vector<FixationSequence> filter_trials(const std::vector<FixationSequence>& seqs, std::size_t min_fixations)
{
    if (min_fixations < 1) throw Error(ErrorKind::Validation, "min_fixations must be at least 1");
    std::vector<FixationSequence> out;
    std::copy_if(seqs.begin(), seqs.end(), std::back_inserter(out),
                 [&](const FixationSequence& s) { return s.size() >= min_fixations; });
    return out;
}

} // namespace tsh
