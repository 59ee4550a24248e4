// SPDX-License-Identifier: Apache-2.0
//
// Source-agnostic analysis of a series table: the same statistics apply to
// simulated runs and to ingested market data.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "herdmarket/series_io.hpp"
#include "herdmarket/tail.hpp"

namespace herdmarket {

struct AnalysisOptions {
    double q_threshold = 0.9;
    double tail_fraction = 0.05;
    double margin_min = 2.0;
    std::size_t max_lag = 50;
    std::size_t bins = 100;

    void validate() const;
};

struct SampleReport {
    std::string transform;  // "abs", "subtract_floor" or "none"
    double floor = 0.0;     // subtracted volume floor, when transform says so
    MomentSummary moments;
    std::array<TailFit, 3> fits{};
    RegimeLabel regime{RegimeKind::indeterminate, TailFamily::gaussian, 0.0};
    std::optional<HillEstimate> hill;
    std::vector<double> acf_abs;
    std::vector<std::string> notes;  // sub-analyses that could not run
    std::string error;               // set when the tail fit itself failed

    bool ok() const { return error.empty(); }
};

struct AnalysisReport {
    AnalysisOptions options;
    bool simulated = false;
    std::size_t rows = 0;
    SampleReport returns;
    SampleReport volume;

    // Plot data: survival function of |returns| and of the volume sample,
    // density histograms of signed returns and of the volume sample.
    std::vector<Point> returns_ccdf;
    std::vector<Point> returns_hist;
    std::vector<Point> volume_ccdf;
    std::vector<Point> volume_hist;
};

/// Volume sample analysed for a table: simulated volume has its constant
/// floor b*n/2 subtracted (recovered per row as V/(1+|x|)); empirical volume
/// is used as-is. Returns the samples and the subtracted floor.
std::pair<std::vector<double>, double> volume_sample(const SeriesTable& table);

/// Throws Error(degenerate) if the returns carry no variation, since no
/// meaningful report can be produced.
AnalysisReport analyze(const SeriesTable& table,
                       const AnalysisOptions& options = {});

nlohmann::json to_json(const AnalysisOptions& o);
nlohmann::json to_json(const TailFit& f);
nlohmann::json to_json(const MomentSummary& m);
nlohmann::json to_json(const SampleReport& s);
nlohmann::json to_json(const AnalysisReport& r);

std::string points_csv(const std::vector<Point>& pts);
nlohmann::json points_json(const std::vector<Point>& pts);

}  // namespace herdmarket
