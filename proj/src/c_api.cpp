// SPDX-License-Identifier: Apache-2.0
#include "herdmarket/herdmarket.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "herdmarket/analysis.hpp"
#include "herdmarket/error.hpp"
#include "herdmarket/ingest.hpp"
#include "herdmarket/model.hpp"
#include "herdmarket/series_io.hpp"
#include "herdmarket/simulator.hpp"
#include "herdmarket/sweep.hpp"

struct hm_params {
    herdmarket::ParamInputs inputs;
};

struct hm_series {
    herdmarket::SeriesTable table;
    std::optional<herdmarket::ModelParams> params;
    std::uint64_t clamp_events = 0;
    std::vector<std::string> warnings;
    std::string source;  // "simulate", "ingest" or the loaded path
    std::string symbol;
};

struct hm_report {
    herdmarket::AnalysisReport report;
};

struct hm_sweep_result {
    herdmarket::SweepResult result;
};

namespace {

using herdmarket::Error;
using herdmarket::ErrorKind;

thread_local std::string g_last_error;

hm_status to_status(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::usage: return HM_ERR_USAGE;
        case ErrorKind::validation: return HM_ERR_VALIDATION;
        case ErrorKind::degenerate: return HM_ERR_DEGENERATE;
        case ErrorKind::io: return HM_ERR_IO;
    }
    return HM_ERR_INTERNAL;
}

template <typename F>
hm_status guarded(F&& body) {
    g_last_error.clear();
    try {
        body();
        return HM_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
    } catch (const std::exception& e) {
        g_last_error = e.what();
    } catch (...) {
        g_last_error = "unknown error";
    }
    return HM_ERR_INTERNAL;
}

void require_handle(const void* p, const char* what) {
    if (p == nullptr) {
        herdmarket::fail(ErrorKind::usage, std::string(what) + " is NULL");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

hm_regime to_c(herdmarket::RegimeKind r) {
    switch (r) {
        case herdmarket::RegimeKind::gaussian: return HM_REGIME_GAUSSIAN;
        case herdmarket::RegimeKind::exponential: return HM_REGIME_EXPONENTIAL;
        case herdmarket::RegimeKind::powerlaw: return HM_REGIME_POWERLAW;
        case herdmarket::RegimeKind::indeterminate: break;
    }
    return HM_REGIME_INDETERMINATE;
}

herdmarket::AnalysisOptions from_c(const hm_analysis_options* o) {
    herdmarket::AnalysisOptions out;
    if (o == nullptr) return out;
    out.q_threshold = o->q_threshold;
    out.tail_fraction = o->tail_fraction;
    out.margin_min = o->margin_min;
    out.max_lag = o->max_lag;
    out.bins = o->bins;
    return out;
}

nlohmann::json params_json(const herdmarket::ModelParams& p) {
    return {{"n", p.n},
            {"m", p.m},
            {"a", p.a},
            {"b", p.b},
            {"lambda", p.lambda},
            {"rho", p.rho},
            {"dt", p.dt},
            {"sigma_f", p.sigma_f},
            {"x0", p.x0},
            {"s_star_0", p.s_star_0},
            {"steps", p.steps},
            {"burn_in", p.burn_in},
            {"seed", p.seed},
            {"phi_noise", herdmarket::to_string(p.phi_noise)},
            {"boundary", herdmarket::to_string(p.boundary)}};
}

}  // namespace

extern "C" {

const char* hm_version(void) { return HERDMARKET_VERSION; }

const char* hm_last_error(void) { return g_last_error.c_str(); }

void hm_string_free(char* s) { std::free(s); }

const char* hm_regime_name(hm_regime r) {
    switch (r) {
        case HM_REGIME_GAUSSIAN: return "gaussian";
        case HM_REGIME_EXPONENTIAL: return "exponential";
        case HM_REGIME_POWERLAW: return "powerlaw";
        case HM_REGIME_INDETERMINATE: break;
    }
    return "indeterminate";
}

double hm_transition_up(double x, double phi) {
    return herdmarket::transition_up(x, phi);
}
double hm_transition_down(double x, double phi) {
    return herdmarket::transition_down(x, phi);
}
double hm_drift(double x, double phi) { return herdmarket::drift(x, phi); }
double hm_diffusion(double x, double phi, uint64_t n) {
    return herdmarket::diffusion(x, phi, n);
}
double hm_clearing_log_price(double ln_s_star, double x, double lambda) {
    return herdmarket::clearing_log_price(ln_s_star, x, lambda);
}
hm_status hm_trading_volume(double x, double b, uint64_t n, double* out) {
    return guarded([&] {
        require_handle(out, "out");
        *out = herdmarket::trading_volume(x, b, n);
    });
}

hm_params* hm_params_create(void) {
    try {
        return new hm_params{};
    } catch (...) {
        g_last_error = "out of memory";
        return nullptr;
    }
}

void hm_params_destroy(hm_params* p) { delete p; }

hm_status hm_params_set_double(hm_params* p, const char* key, double v) {
    return guarded([&] {
        require_handle(p, "params");
        require_handle(key, "key");
        auto& in = p->inputs;
        const std::string k = key;
        if (k == "rho") in.rho = v;
        else if (k == "dt") in.dt = v;
        else if (k == "lambda") in.lambda = v;
        else if (k == "a") in.a = v;
        else if (k == "b") in.b = v;
        else if (k == "sigma_f") in.sigma_f = v;
        else if (k == "x0") in.x0 = v;
        else if (k == "s_star_0") in.s_star_0 = v;
        else herdmarket::fail(ErrorKind::usage, "unknown real parameter '" + k + "'");
    });
}

hm_status hm_params_set_uint(hm_params* p, const char* key, uint64_t v) {
    return guarded([&] {
        require_handle(p, "params");
        require_handle(key, "key");
        auto& in = p->inputs;
        const std::string k = key;
        if (k == "n") in.n = v;
        else if (k == "m") in.m = v;
        else if (k == "steps") in.steps = v;
        else if (k == "burn_in") in.burn_in = v;
        else if (k == "seed") in.seed = v;
        else herdmarket::fail(ErrorKind::usage, "unknown integer parameter '" + k + "'");
    });
}

hm_status hm_params_set_option(hm_params* p, const char* key, const char* value) {
    return guarded([&] {
        require_handle(p, "params");
        require_handle(key, "key");
        require_handle(value, "value");
        const std::string k = key;
        if (k == "phi_noise") p->inputs.phi_noise = herdmarket::parse_phi_noise(value);
        else if (k == "boundary") p->inputs.boundary = herdmarket::parse_boundary(value);
        else herdmarket::fail(ErrorKind::usage, "unknown option '" + k + "'");
    });
}

hm_status hm_params_effective_json(const hm_params* p, char** out_json) {
    return guarded([&] {
        require_handle(p, "params");
        require_handle(out_json, "out_json");
        *out_json = dup_string(params_json(herdmarket::resolve(p->inputs)).dump());
    });
}

hm_status hm_simulate(const hm_params* p, hm_series** out) {
    return guarded([&] {
        require_handle(p, "params");
        require_handle(out, "out");
        *out = nullptr;
        const auto params = herdmarket::resolve(p->inputs);
        const auto series = herdmarket::run_simulation(params);
        auto s = std::make_unique<hm_series>();
        s->table = herdmarket::to_table(series);
        s->params = params;
        s->clamp_events = series.clamp_events;
        s->warnings = series.warnings;
        s->source = "simulate";
        *out = s.release();
    });
}

hm_status hm_series_load(const char* path, hm_series** out) {
    return guarded([&] {
        require_handle(path, "path");
        require_handle(out, "out");
        *out = nullptr;
        auto s = std::make_unique<hm_series>();
        s->table = herdmarket::load_series_file(path);
        s->source = path;
        *out = s.release();
    });
}

hm_status hm_ingest_daily_csv(const char* path, const char* symbol, hm_series** out) {
    return guarded([&] {
        require_handle(path, "path");
        require_handle(out, "out");
        *out = nullptr;
        std::ifstream in(path, std::ios::binary);
        if (!in) herdmarket::fail(ErrorKind::io, std::string("cannot open ") + path);
        const auto daily =
            herdmarket::load_daily_csv(in, symbol != nullptr ? symbol : "");
        auto s = std::make_unique<hm_series>();
        s->table = herdmarket::to_table(daily);
        s->source = "ingest";
        s->symbol = daily.symbol;
        *out = s.release();
    });
}

void hm_series_destroy(hm_series* s) { delete s; }

size_t hm_series_length(const hm_series* s) { return s ? s->table.rows() : 0; }

int hm_series_is_simulated(const hm_series* s) {
    return s && s->table.has_model_columns() ? 1 : 0;
}

uint64_t hm_series_clamp_events(const hm_series* s) {
    return s ? s->clamp_events : 0;
}

hm_status hm_series_copy_column(const hm_series* s, hm_column column, double* dst,
                                size_t capacity, size_t* written) {
    return guarded([&] {
        require_handle(s, "series");
        const std::vector<double>* col = nullptr;
        switch (column) {
            case HM_COLUMN_X: col = &s->table.x; break;
            case HM_COLUMN_LN_S: col = &s->table.ln_s; break;
            case HM_COLUMN_RET: col = &s->table.ret; break;
            case HM_COLUMN_VOLUME: col = &s->table.volume; break;
            default: herdmarket::fail(ErrorKind::usage, "unknown column");
        }
        const std::size_t n = std::min(capacity, col->size());
        if (n > 0) {
            require_handle(dst, "dst");
            std::copy_n(col->begin(), n, dst);
        }
        if (written != nullptr) *written = n;
    });
}

hm_status hm_series_write(const hm_series* s, const char* path, hm_format format) {
    return guarded([&] {
        require_handle(s, "series");
        require_handle(path, "path");
        std::ostringstream ss;
        if (format == HM_FORMAT_JSON) herdmarket::write_series_json(ss, s->table);
        else herdmarket::write_series_csv(ss, s->table);
        herdmarket::write_file_atomic(path, ss.str());
    });
}

hm_status hm_series_meta_json(const hm_series* s, double wall_seconds,
                              const char* extra_json, char** out_json) {
    return guarded([&] {
        require_handle(s, "series");
        require_handle(out_json, "out_json");
        nlohmann::json j{{"tool", "herdmarket"},
                         {"version", HERDMARKET_VERSION},
                         {"source", s->source},
                         {"rows", s->table.rows()},
                         {"wall_time_seconds", wall_seconds}};
        if (s->params) {
            j["params"] = params_json(*s->params);
            j["clamp_events"] = s->clamp_events;
            j["warnings"] = s->warnings;
        }
        if (!s->symbol.empty()) j["symbol"] = s->symbol;
        if (extra_json != nullptr && *extra_json != '\0') {
            auto extra = nlohmann::json::parse(extra_json, nullptr, false);
            if (!extra.is_object()) {
                herdmarket::fail(ErrorKind::usage, "extra_json must be a JSON object");
            }
            j.update(extra);
        }
        *out_json = dup_string(j.dump(2));
    });
}

hm_analysis_options hm_analysis_options_default(void) {
    const herdmarket::AnalysisOptions d;
    return {d.q_threshold, d.tail_fraction, d.margin_min,
            static_cast<uint32_t>(d.max_lag), static_cast<uint32_t>(d.bins)};
}

hm_status hm_analyze(const hm_series* s, const hm_analysis_options* opts,
                     hm_report** out) {
    return guarded([&] {
        require_handle(s, "series");
        require_handle(out, "out");
        *out = nullptr;
        auto r = std::make_unique<hm_report>();
        r->report = herdmarket::analyze(s->table, from_c(opts));
        *out = r.release();
    });
}

void hm_report_destroy(hm_report* r) { delete r; }

hm_regime hm_report_return_regime(const hm_report* r) {
    return r ? to_c(r->report.returns.regime.label) : HM_REGIME_INDETERMINATE;
}

hm_regime hm_report_volume_regime(const hm_report* r) {
    if (r == nullptr || !r->report.volume.ok()) return HM_REGIME_INDETERMINATE;
    return to_c(r->report.volume.regime.label);
}

hm_status hm_report_json(const hm_report* r, char** out_json) {
    return guarded([&] {
        require_handle(r, "report");
        require_handle(out_json, "out_json");
        *out_json = dup_string(herdmarket::to_json(r->report).dump(2));
    });
}

hm_status hm_report_write(const hm_report* r, const char* out_dir, hm_format format) {
    return guarded([&] {
        require_handle(r, "report");
        require_handle(out_dir, "out_dir");
        const std::filesystem::path dir(out_dir);
        herdmarket::write_file_atomic(dir / "report.json",
                                      herdmarket::to_json(r->report).dump(2) + "\n");
        const std::pair<const char*, const std::vector<herdmarket::Point>*> plots[] = {
            {"returns_ccdf", &r->report.returns_ccdf},
            {"returns_hist", &r->report.returns_hist},
            {"volume_ccdf", &r->report.volume_ccdf},
            {"volume_hist", &r->report.volume_hist}};
        for (const auto& [name, pts] : plots) {
            if (format == HM_FORMAT_JSON) {
                herdmarket::write_file_atomic(
                    dir / (std::string(name) + ".json"),
                    herdmarket::points_json(*pts).dump() + "\n");
            } else {
                herdmarket::write_file_atomic(dir / (std::string(name) + ".csv"),
                                              herdmarket::points_csv(*pts));
            }
        }
    });
}

hm_status hm_sweep_run(const hm_params* base, const double* rho_grid, size_t grid_len,
                       uint32_t replicates, uint32_t workers,
                       const hm_analysis_options* opts, hm_sweep_result** out) {
    return guarded([&] {
        require_handle(base, "params");
        require_handle(out, "out");
        *out = nullptr;
        if (grid_len > 0) require_handle(rho_grid, "rho_grid");
        herdmarket::SweepSpec spec;
        spec.rho_grid.assign(rho_grid, rho_grid + grid_len);
        spec.replicates = replicates;
        spec.workers = workers;
        spec.analysis = from_c(opts);
        auto inputs = base->inputs;
        if (!spec.rho_grid.empty()) inputs.rho = spec.rho_grid.front();
        spec.base = herdmarket::resolve(inputs);
        auto r = std::make_unique<hm_sweep_result>();
        r->result = herdmarket::run_sweep(spec);
        *out = r.release();
    });
}

void hm_sweep_destroy(hm_sweep_result* r) { delete r; }

size_t hm_sweep_cell_count(const hm_sweep_result* r) {
    return r ? r->result.cells.size() : 0;
}

hm_regime hm_sweep_majority_return(const hm_sweep_result* r, size_t grid_index) {
    if (r == nullptr || grid_index >= r->result.rows.size()) {
        return HM_REGIME_INDETERMINATE;
    }
    return to_c(r->result.rows[grid_index].majority_return);
}

hm_regime hm_sweep_majority_volume(const hm_sweep_result* r, size_t grid_index) {
    if (r == nullptr || grid_index >= r->result.rows.size()) {
        return HM_REGIME_INDETERMINATE;
    }
    return to_c(r->result.rows[grid_index].majority_volume);
}

hm_status hm_sweep_write(const hm_sweep_result* r, const char* json_path,
                         const char* csv_path) {
    return guarded([&] {
        require_handle(r, "sweep result");
        if (json_path != nullptr) {
            herdmarket::write_file_atomic(json_path,
                                          herdmarket::to_json(r->result).dump(2) + "\n");
        }
        if (csv_path != nullptr) {
            herdmarket::write_file_atomic(csv_path, herdmarket::summary_csv(r->result));
        }
    });
}

}  // extern "C"
