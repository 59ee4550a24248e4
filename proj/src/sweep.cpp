// SPDX-License-Identifier: Apache-2.0
#include "herdmarket/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "herdmarket/error.hpp"
#include "herdmarket/random.hpp"

namespace herdmarket {

void SweepSpec::validate() const {
    if (rho_grid.empty()) fail(ErrorKind::usage, "rho grid is empty");
    for (std::size_t i = 0; i < rho_grid.size(); ++i) {
        if (!(rho_grid[i] >= 0.0)) {
            fail(ErrorKind::validation, "rho grid values must be nonnegative");
        }
        if (i > 0 && !(rho_grid[i] > rho_grid[i - 1])) {
            fail(ErrorKind::validation,
                 "rho grid must be strictly ascending without duplicates");
        }
    }
    if (replicates < 1) fail(ErrorKind::validation, "replicates must be >= 1");
    if (workers < 1) fail(ErrorKind::validation, "workers must be >= 1");
    base.validate();
    analysis.validate();
}

namespace {

std::optional<double> median(std::vector<double> v) {
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

SweepCell run_cell(const SweepSpec& spec, const CellRunner& runner,
                   std::size_t grid_index, std::uint32_t replicate) {
    SweepCell cell;
    cell.rho = spec.rho_grid[grid_index];
    cell.grid_index = grid_index;
    cell.replicate = replicate;
    cell.seed = mix_seed(spec.base.seed, grid_index, replicate);
    try {
        ModelParams p = spec.base;
        p.rho = cell.rho;
        p.seed = cell.seed;
        const SimulationSeries series = runner(p);
        cell.clamp_events = series.clamp_events;
        const AnalysisReport report = analyze(to_table(series), spec.analysis);
        cell.return_regime = report.returns.regime.label;
        cell.volume_regime = report.volume.ok() ? report.volume.regime.label
                                                : RegimeKind::indeterminate;
        cell.excess_kurtosis = report.returns.moments.excess_kurtosis;
        if (cell.return_regime == RegimeKind::powerlaw && report.returns.hill) {
            cell.hill_alpha = report.returns.hill->alpha;
        }
    } catch (const std::exception& e) {
        cell.error = e.what();
        if (cell.error.empty()) cell.error = "unknown failure";
    }
    return cell;
}

}  // namespace

RegimeKind majority_label(const std::vector<RegimeKind>& labels,
                          std::size_t replicates) {
    std::map<RegimeKind, std::size_t> counts;
    for (auto l : labels) ++counts[l];
    for (const auto& [label, count] : counts) {
        if (2 * count > replicates) return label;
    }
    return RegimeKind::indeterminate;
}

SweepResult run_sweep(const SweepSpec& spec, const CellRunner& runner) {
    spec.validate();
    const std::size_t total = spec.rho_grid.size() * spec.replicates;
    std::vector<SweepCell> cells(total);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            cells[i] = run_cell(spec, runner, i / spec.replicates,
                                static_cast<std::uint32_t>(i % spec.replicates));
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(spec.workers, total);
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    }

    if (std::none_of(cells.begin(), cells.end(),
                     [](const SweepCell& c) { return c.ok(); })) {
        fail(ErrorKind::validation,
             "every sweep cell failed; first error: " + cells.front().error);
    }

    SweepResult result;
    result.cells = std::move(cells);
    for (std::size_t g = 0; g < spec.rho_grid.size(); ++g) {
        SweepRow row;
        row.rho = spec.rho_grid[g];
        std::vector<RegimeKind> ret_labels, vol_labels;
        std::vector<double> alphas, kurtoses;
        for (std::uint32_t r = 0; r < spec.replicates; ++r) {
            const SweepCell& c = result.cells[g * spec.replicates + r];
            if (!c.ok()) {
                ++row.failed_cells;
                continue;
            }
            ret_labels.push_back(c.return_regime);
            vol_labels.push_back(c.volume_regime);
            kurtoses.push_back(c.excess_kurtosis);
            if (c.hill_alpha) alphas.push_back(*c.hill_alpha);
        }
        row.majority_return = majority_label(ret_labels, spec.replicates);
        row.majority_volume = majority_label(vol_labels, spec.replicates);
        row.median_alpha = median(alphas);
        row.median_kurtosis = median(kurtoses);
        result.rows.push_back(row);
    }
    return result;
}

nlohmann::json to_json(const SweepResult& result) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : result.cells) {
        nlohmann::json j{{"rho", c.rho},
                         {"grid_index", c.grid_index},
                         {"replicate", c.replicate},
                         {"seed", c.seed}};
        if (c.ok()) {
            j["return_regime"] = to_string(c.return_regime);
            j["volume_regime"] = to_string(c.volume_regime);
            j["hill_alpha"] = opt(c.hill_alpha);
            j["excess_kurtosis"] = c.excess_kurtosis;
            j["clamp_events"] = c.clamp_events;
        } else {
            j["error"] = c.error;
        }
        cells.push_back(std::move(j));
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"rho", r.rho},
                        {"majority_return_regime", to_string(r.majority_return)},
                        {"majority_volume_regime", to_string(r.majority_volume)},
                        {"median_alpha", opt(r.median_alpha)},
                        {"median_kurtosis", opt(r.median_kurtosis)},
                        {"failed_cells", r.failed_cells}});
    }
    return {{"cells", cells}, {"summary", rows}};
}

std::string summary_csv(const SweepResult& result) {
    std::string out =
        "rho,majority_return_regime,majority_volume_regime,median_alpha,"
        "median_kurtosis\n";
    for (const auto& r : result.rows) {
        out += format_double(r.rho) + ',';
        out += std::string(to_string(r.majority_return)) + ',';
        out += std::string(to_string(r.majority_volume)) + ',';
        if (r.median_alpha) out += format_double(*r.median_alpha);
        out += ',';
        if (r.median_kurtosis) out += format_double(*r.median_kurtosis);
        out += '\n';
    }
    return out;
}

}  // namespace herdmarket
