// SPDX-License-Identifier: Apache-2.0
#include "herdmarket/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "herdmarket/error.hpp"

namespace herdmarket {

void AnalysisOptions::validate() const {
    if (!(q_threshold > 0.5 && q_threshold < 1.0)) {
        fail(ErrorKind::validation, "q_threshold must lie in (0.5, 1)");
    }
    if (!(tail_fraction > 0.0 && tail_fraction <= 0.5)) {
        fail(ErrorKind::validation, "tail_fraction must lie in (0, 0.5]");
    }
    if (!(margin_min >= 0.0)) fail(ErrorKind::validation, "margin_min must be >= 0");
    if (max_lag < 1) fail(ErrorKind::validation, "max_lag must be positive");
    if (bins < 2) fail(ErrorKind::validation, "bins must be at least 2");
}

std::pair<std::vector<double>, double> volume_sample(const SeriesTable& table) {
    if (!table.has_model_columns()) return {table.volume, 0.0};
    const double floor = table.volume.front() / (1.0 + std::abs(table.x.front()));
    std::vector<double> out(table.rows());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        out[i] = std::max(0.0, table.volume[i] - floor);
    }
    return {std::move(out), floor};
}

namespace {

SampleReport analyze_sample(std::span<const double> values,
                            const AnalysisOptions& opts, bool with_acf) {
    SampleReport s;
    s.moments = moments(values);

    std::vector<double> mags(values.size());
    std::transform(values.begin(), values.end(), mags.begin(),
                   [](double v) { return std::abs(v); });
    try {
        s.fits = fit_tail_family(values, opts.q_threshold);
        s.regime = classify_fits(s.fits, opts.margin_min);
    } catch (const Error& e) {
        s.error = e.what();
        return s;
    }
    try {
        s.hill = hill_estimate(mags, opts.tail_fraction);
    } catch (const Error& e) {
        s.notes.push_back(std::string("hill: ") + e.what());
    }
    if (with_acf) {
        try {
            s.acf_abs = acf_abs(values, opts.max_lag);
        } catch (const Error& e) {
            s.notes.push_back(std::string("acf_abs: ") + e.what());
        }
    }
    return s;
}

}  // namespace

AnalysisReport analyze(const SeriesTable& table, const AnalysisOptions& options) {
    options.validate();
    if (table.rows() < 5) {
        fail(ErrorKind::validation, "analysis needs at least 5 rows");
    }
    AnalysisReport r;
    r.options = options;
    r.simulated = table.has_model_columns();
    r.rows = table.rows();

    r.returns = analyze_sample(table.ret, options, true);
    r.returns.transform = "abs";
    if (r.returns.moments.degenerate) {
        fail(ErrorKind::degenerate, "returns have zero variance (constant series)");
    }
    if (!r.returns.ok()) fail(ErrorKind::degenerate, "returns: " + r.returns.error);

    auto [vol, floor] = volume_sample(table);
    r.volume = analyze_sample(vol, options, true);
    r.volume.transform = r.simulated ? "subtract_floor" : "none";
    r.volume.floor = floor;

    std::vector<double> abs_returns(table.ret.size());
    std::transform(table.ret.begin(), table.ret.end(), abs_returns.begin(),
                   [](double v) { return std::abs(v); });
    r.returns_ccdf = ccdf(abs_returns);
    r.returns_hist = histogram(table.ret, options.bins);
    r.volume_ccdf = ccdf(vol);
    r.volume_hist = histogram(vol, options.bins);
    return r;
}

nlohmann::json to_json(const AnalysisOptions& o) {
    return {{"q_threshold", o.q_threshold},
            {"tail_fraction", o.tail_fraction},
            {"margin_min", o.margin_min},
            {"max_lag", o.max_lag},
            {"bins", o.bins}};
}

nlohmann::json to_json(const TailFit& f) {
    return {{"family", to_string(f.family)},
            {"exponent_or_scale", f.exponent_or_scale},
            {"x_min", f.x_min},
            {"log_likelihood", f.log_likelihood},
            {"ks_stat", f.ks_stat},
            {"n_tail", f.n_tail}};
}

nlohmann::json to_json(const MomentSummary& m) {
    nlohmann::json j{{"mean", m.mean},
                     {"variance", m.variance},
                     {"count", m.count},
                     {"degenerate", m.degenerate}};
    j["skewness"] = m.degenerate ? nlohmann::json(nullptr) : nlohmann::json(m.skewness);
    j["excess_kurtosis"] = m.degenerate ? nlohmann::json(nullptr)
                                        : nlohmann::json(m.excess_kurtosis);
    return j;
}

nlohmann::json to_json(const SampleReport& s) {
    nlohmann::json j;
    j["transform"] = s.transform;
    if (s.transform == "subtract_floor") j["floor"] = s.floor;
    j["moments"] = to_json(s.moments);
    if (s.ok()) {
        j["fits"] = nlohmann::json::array();
        for (const auto& f : s.fits) j["fits"].push_back(to_json(f));
        j["regime"] = {{"label", to_string(s.regime.label)},
                       {"best_family", to_string(s.regime.best)},
                       {"margin", s.regime.margin}};
    } else {
        j["error"] = s.error;
        j["regime"] = {{"label", to_string(RegimeKind::indeterminate)}};
    }
    if (s.hill) {
        j["hill"] = {{"alpha", s.hill->alpha}, {"std_err", s.hill->std_err},
                     {"k", s.hill->k}};
    } else {
        j["hill"] = nullptr;
    }
    j["acf_abs"] = s.acf_abs;
    j["notes"] = s.notes;
    return j;
}

nlohmann::json to_json(const AnalysisReport& r) {
    return {{"options", to_json(r.options)},
            {"source", r.simulated ? "simulated" : "empirical"},
            {"rows", r.rows},
            {"returns", to_json(r.returns)},
            {"volume", to_json(r.volume)}};
}

std::string points_csv(const std::vector<Point>& pts) {
    std::string out = "x,y\n";
    for (const auto& p : pts) {
        out += format_double(p.x);
        out += ',';
        out += format_double(p.y);
        out += '\n';
    }
    return out;
}

nlohmann::json points_json(const std::vector<Point>& pts) {
    nlohmann::json xs = nlohmann::json::array(), ys = nlohmann::json::array();
    for (const auto& p : pts) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    return {{"x", xs}, {"y", ys}};
}

}  // namespace herdmarket
