// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "herdmarket/analysis.hpp"
#include "herdmarket/model.hpp"
#include "herdmarket/simulator.hpp"

namespace herdmarket {

struct SweepSpec {
    std::vector<double> rho_grid;  // ascending, no duplicates
    std::uint32_t replicates = 10;
    ModelParams base;              // rho and seed are overridden per cell
    std::uint32_t workers = 1;
    AnalysisOptions analysis;

    void validate() const;
};

struct SweepCell {
    double rho = 0.0;
    std::size_t grid_index = 0;
    std::uint32_t replicate = 0;
    std::uint64_t seed = 0;
    std::string error;  // non-empty when the cell failed
    RegimeKind return_regime = RegimeKind::indeterminate;
    RegimeKind volume_regime = RegimeKind::indeterminate;
    std::optional<double> hill_alpha;  // only when returns classify powerlaw
    double excess_kurtosis = 0.0;
    std::uint64_t clamp_events = 0;

    bool ok() const { return error.empty(); }
};

struct SweepRow {
    double rho = 0.0;
    RegimeKind majority_return = RegimeKind::indeterminate;
    RegimeKind majority_volume = RegimeKind::indeterminate;
    std::optional<double> median_alpha;
    std::optional<double> median_kurtosis;
    std::size_t failed_cells = 0;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // grid order, then replicate order
    std::vector<SweepRow> rows;    // one per grid point
};

using CellRunner = std::function<SimulationSeries(const ModelParams&)>;

/// Runs every (rho, replicate) cell on a pool of spec.workers threads. Cell
/// seeds are mix_seed(base.seed, grid_index, replicate), so the result does
/// not depend on the worker count or on scheduling. A failing cell is
/// recorded and the sweep continues; it throws only if every cell fails.
SweepResult run_sweep(const SweepSpec& spec,
                      const CellRunner& runner = run_simulation);

/// Label held by strictly more than half of `replicates`, or indeterminate.
RegimeKind majority_label(const std::vector<RegimeKind>& labels,
                          std::size_t replicates);

nlohmann::json to_json(const SweepResult& result);
/// `rho,majority_return_regime,majority_volume_regime,median_alpha,median_kurtosis`
std::string summary_csv(const SweepResult& result);

}  // namespace herdmarket
