// SPDX-License-Identifier: Apache-2.0
//
// herdmarket command-line front end. Talks to the library only through the
// C interface in herdmarket/herdmarket.h.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "herdmarket/herdmarket.h"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kIo = 3 };

int exit_code(hm_status s) {
    switch (s) {
        case HM_OK: return kOk;
        case HM_ERR_USAGE: return kUsage;
        case HM_ERR_VALIDATION:
        case HM_ERR_DEGENERATE: return kValidation;
        case HM_ERR_IO: return kIo;
        case HM_ERR_INTERNAL: break;
    }
    return kUsage;
}

// Thrown to unwind with a status after printing the library's message.
struct Failure {
    hm_status status;
};

void check(hm_status s, const char* context) {
    if (s == HM_OK) return;
    std::cerr << "herdmarket: " << context << ": " << hm_last_error() << '\n';
    throw Failure{s};
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
using ParamsPtr = std::unique_ptr<hm_params, Deleter<hm_params, hm_params_destroy>>;
using SeriesPtr = std::unique_ptr<hm_series, Deleter<hm_series, hm_series_destroy>>;
using ReportPtr = std::unique_ptr<hm_report, Deleter<hm_report, hm_report_destroy>>;
using SweepPtr =
    std::unique_ptr<hm_sweep_result, Deleter<hm_sweep_result, hm_sweep_destroy>>;

std::string take_string(char* s) {
    std::string out = s != nullptr ? s : "";
    hm_string_free(s);
    return out;
}

struct ModelFlags {
    std::optional<double> rho;
    double dt = 0.1;
    std::optional<double> lambda;
    std::uint64_t n = 100000;
    std::optional<double> b;
    double sigma_f = 0.0;
    double x0 = 0.0;
    std::uint64_t steps = 100000;
    std::uint64_t burn_in = 1000;
    std::uint64_t seed = 0;
    std::string phi_noise = "independent";
    std::string boundary = "clamp";
};

struct AnalysisFlags {
    hm_analysis_options options = hm_analysis_options_default();
};

struct OutputFlags {
    std::string out = ".";
    std::string format = "csv";

    hm_format c_format() const {
        return format == "json" ? HM_FORMAT_JSON : HM_FORMAT_CSV;
    }
};

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool rho_required) {
    auto* rho = cmd->add_option("--rho", f.rho, "Conformity effect rho");
    if (rho_required) rho->required();
    cmd->add_option("--dt", f.dt, "Integration step")->capture_default_str();
    cmd->add_option("--lambda", f.lambda,
                    "Price impact b*n/(a*m) (default 1 when --b is absent)");
    cmd->add_option("--n", f.n, "Interacting traders")->capture_default_str();
    cmd->add_option("--b", f.b, "Shares traded per interacting trader");
    cmd->add_option("--sigma-f", f.sigma_f, "Per-step sd of fundamental log value")
        ->capture_default_str();
    cmd->add_option("--x0", f.x0, "Initial average attitude")->capture_default_str();
    cmd->add_option("--steps", f.steps, "Recorded steps")->capture_default_str();
    cmd->add_option("--burn-in", f.burn_in, "Discarded initial steps")
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
    cmd->add_option("--phi-noise", f.phi_noise, "Coupling noise source")
        ->check(CLI::IsMember({"independent", "shared"}))
        ->capture_default_str();
    cmd->add_option("--boundary", f.boundary, "Boundary rule for the attitude")
        ->check(CLI::IsMember({"clamp", "reflect"}))
        ->capture_default_str();
}

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
    cmd->add_option("--q-threshold", f.options.q_threshold,
                    "Quantile of |sample| where the tail starts")
        ->capture_default_str();
    cmd->add_option("--tail-fraction", f.options.tail_fraction,
                    "Fraction of order statistics used by the Hill estimator")
        ->capture_default_str();
    cmd->add_option("--margin-min", f.options.margin_min,
                    "Log-likelihood gap below which the regime is indeterminate")
        ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, OutputFlags& f) {
    cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
    cmd->add_option("--format", f.format, "Series / plot-data format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

ParamsPtr make_params(const ModelFlags& f) {
    ParamsPtr p(hm_params_create());
    if (!p) check(HM_ERR_INTERNAL, "params");
    check(hm_params_set_double(p.get(), "rho", f.rho.value_or(0.0)), "--rho");
    check(hm_params_set_double(p.get(), "dt", f.dt), "--dt");
    if (f.lambda) check(hm_params_set_double(p.get(), "lambda", *f.lambda), "--lambda");
    if (f.b) check(hm_params_set_double(p.get(), "b", *f.b), "--b");
    check(hm_params_set_uint(p.get(), "n", f.n), "--n");
    check(hm_params_set_double(p.get(), "sigma_f", f.sigma_f), "--sigma-f");
    check(hm_params_set_double(p.get(), "x0", f.x0), "--x0");
    check(hm_params_set_uint(p.get(), "steps", f.steps), "--steps");
    check(hm_params_set_uint(p.get(), "burn_in", f.burn_in), "--burn-in");
    check(hm_params_set_uint(p.get(), "seed", f.seed), "--seed");
    check(hm_params_set_option(p.get(), "phi_noise", f.phi_noise.c_str()), "--phi-noise");
    check(hm_params_set_option(p.get(), "boundary", f.boundary.c_str()), "--boundary");
    return p;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        std::cerr << "herdmarket: cannot create output directory '" << dir << "'\n";
        throw Failure{HM_ERR_IO};
    }
}

// Write-temp-then-rename, mirroring what the library does for its own files.
void write_text(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    bool ok = f != nullptr && std::fwrite(text.data(), 1, text.size(), f) == text.size();
    if (f != nullptr) ok = std::fclose(f) == 0 && ok;
    std::error_code ec;
    if (ok) fs::rename(tmp, path, ec);
    if (!ok || ec) {
        fs::remove(tmp, ec);
        std::cerr << "herdmarket: cannot write " << path << '\n';
        throw Failure{HM_ERR_IO};
    }
}

nlohmann::json options_json(const hm_analysis_options& o) {
    return {{"q_threshold", o.q_threshold},
            {"tail_fraction", o.tail_fraction},
            {"margin_min", o.margin_min},
            {"max_lag", o.max_lag},
            {"bins", o.bins}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string series_name(const OutputFlags& o) {
    return o.format == "json" ? "series.json" : "series.csv";
}

void cmd_simulate(const ModelFlags& model, const OutputFlags& out) {
    const auto t0 = std::chrono::steady_clock::now();
    auto params = make_params(model);
    ensure_dir(out.out);
    hm_series* raw = nullptr;
    check(hm_simulate(params.get(), &raw), "simulate");
    SeriesPtr series(raw);
    const fs::path dir(out.out);
    check(hm_series_write(series.get(), (dir / series_name(out)).c_str(), out.c_format()),
          "write series");
    const nlohmann::json extra{{"command", "simulate"},
                               {"out", out.out},
                               {"format", out.format}};
    char* raw_meta = nullptr;
    check(hm_series_meta_json(series.get(), seconds_since(t0), extra.dump().c_str(),
                              &raw_meta),
          "metadata");
    const std::string meta = take_string(raw_meta);
    write_text(dir / "meta.json", meta + "\n");
    for (const auto& w : nlohmann::json::parse(meta).value("warnings", nlohmann::json::array())) {
        std::cerr << "herdmarket: warning: " << w.get<std::string>() << '\n';
    }
}

void cmd_analyze(const std::string& input, const AnalysisFlags& analysis,
                 const OutputFlags& out) {
    const auto t0 = std::chrono::steady_clock::now();
    ensure_dir(out.out);
    hm_series* raw = nullptr;
    check(hm_series_load(input.c_str(), &raw), "load series");
    SeriesPtr series(raw);
    hm_report* rep = nullptr;
    check(hm_analyze(series.get(), &analysis.options, &rep), "analyze");
    ReportPtr report(rep);
    check(hm_report_write(report.get(), out.out.c_str(), out.c_format()), "write report");
    const nlohmann::json meta{{"tool", "herdmarket"},
                              {"version", hm_version()},
                              {"command", "analyze"},
                              {"input", input},
                              {"out", out.out},
                              {"format", out.format},
                              {"options", options_json(analysis.options)},
                              {"wall_time_seconds", seconds_since(t0)}};
    write_text(fs::path(out.out) / "meta.json", meta.dump(2) + "\n");
    std::cout << "returns: " << hm_regime_name(hm_report_return_regime(report.get()))
              << "\nvolume: " << hm_regime_name(hm_report_volume_regime(report.get()))
              << '\n';
}

void cmd_ingest(const std::string& input, const std::string& symbol,
                const OutputFlags& out) {
    const auto t0 = std::chrono::steady_clock::now();
    ensure_dir(out.out);
    hm_series* raw = nullptr;
    check(hm_ingest_daily_csv(input.c_str(), symbol.c_str(), &raw), "ingest");
    SeriesPtr series(raw);
    const fs::path dir(out.out);
    check(hm_series_write(series.get(), (dir / series_name(out)).c_str(), out.c_format()),
          "write series");
    const nlohmann::json extra{{"command", "ingest"},
                               {"input", input},
                               {"symbol", symbol},
                               {"out", out.out},
                               {"format", out.format}};
    char* meta = nullptr;
    check(hm_series_meta_json(series.get(), seconds_since(t0), extra.dump().c_str(), &meta),
          "metadata");
    write_text(dir / "meta.json", take_string(meta) + "\n");
}

void cmd_sweep(const std::vector<double>& grid, const ModelFlags& model,
               const AnalysisFlags& analysis, std::uint32_t replicates,
               std::uint32_t workers, const OutputFlags& out) {
    const auto t0 = std::chrono::steady_clock::now();
    if (grid.empty()) {
        std::cerr << "herdmarket: sweep: --rho grid is empty\n";
        throw Failure{HM_ERR_USAGE};
    }
    auto params = make_params(model);
    ensure_dir(out.out);
    hm_sweep_result* raw = nullptr;
    check(hm_sweep_run(params.get(), grid.data(), grid.size(), replicates, workers,
                       &analysis.options, &raw),
          "sweep");
    SweepPtr result(raw);
    const fs::path dir(out.out);
    check(hm_sweep_write(result.get(), (dir / "sweep.json").c_str(),
                         (dir / "sweep_summary.csv").c_str()),
          "write sweep");

    char* eff = nullptr;
    check(hm_params_effective_json(params.get(), &eff), "params");
    auto base = nlohmann::json::parse(take_string(eff));
    base.erase("rho");
    base.erase("seed");
    const nlohmann::json meta{{"tool", "herdmarket"},
                              {"version", hm_version()},
                              {"command", "sweep"},
                              {"rho_grid", grid},
                              {"replicates", replicates},
                              {"workers", workers},
                              {"seed", model.seed},
                              {"base_params", base},
                              {"options", options_json(analysis.options)},
                              {"out", out.out},
                              {"wall_time_seconds", seconds_since(t0)}};
    write_text(dir / "meta.json", meta.dump(2) + "\n");
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::cout << "rho=" << grid[g]
                  << " returns=" << hm_regime_name(hm_sweep_majority_return(result.get(), g))
                  << " volume=" << hm_regime_name(hm_sweep_majority_volume(result.get(), g))
                  << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interacting-trader market simulator and tail analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hm_version()));

    ModelFlags sim_model;
    OutputFlags sim_out;
    auto* simulate = app.add_subcommand("simulate", "Run one simulation");
    add_model_flags(simulate, sim_model, true);
    add_output_flags(simulate, sim_out);

    std::string analyze_in;
    AnalysisFlags analyze_flags;
    OutputFlags analyze_out;
    auto* analyze = app.add_subcommand("analyze", "Analyze a series file");
    analyze->add_option("--in", analyze_in, "Series CSV/JSON")->required();
    add_analysis_flags(analyze, analyze_flags);
    add_output_flags(analyze, analyze_out);

    std::string ingest_in;
    std::string ingest_symbol;
    OutputFlags ingest_out;
    auto* ingest = app.add_subcommand("ingest", "Convert a date,close,volume CSV");
    ingest->add_option("--in", ingest_in, "Daily CSV")->required();
    ingest->add_option("--symbol", ingest_symbol, "Instrument label");
    add_output_flags(ingest, ingest_out);

    ModelFlags sweep_model;
    std::vector<double> sweep_grid;
    AnalysisFlags sweep_analysis;
    OutputFlags sweep_out;
    std::uint32_t replicates = 10;
    std::uint32_t workers = 1;
    auto* sweep = app.add_subcommand("sweep", "Classify regimes over a rho grid");
    add_model_flags(sweep, sweep_model, false);
    sweep->remove_option(sweep->get_option("--rho"));
    // CLI11 converts an empty element to 0.0, so blanks are rejected first.
    const CLI::Validator non_empty(
        [](std::string& s) { return s.empty() ? std::string("empty rho value") : std::string(); },
        "NONEMPTY");
    sweep->add_option("--rho", sweep_grid, "Comma-separated rho grid")
        ->delimiter(',')
        ->check(non_empty)
        ->required();
    sweep->add_option("--replicates", replicates, "Seeds per rho")->capture_default_str();
    sweep->add_option("--workers", workers, "Parallel runs")->capture_default_str();
    add_analysis_flags(sweep, sweep_analysis);
    add_output_flags(sweep, sweep_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*simulate) cmd_simulate(sim_model, sim_out);
        else if (*analyze) cmd_analyze(analyze_in, analyze_flags, analyze_out);
        else if (*ingest) cmd_ingest(ingest_in, ingest_symbol, ingest_out);
        else if (*sweep) {
            cmd_sweep(sweep_grid, sweep_model, sweep_analysis, replicates, workers,
                      sweep_out);
        }
    } catch (const Failure& f) {
        return exit_code(f.status);
    }
    return kOk;
}
