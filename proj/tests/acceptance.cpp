// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion with
// the measured quantities, and exits nonzero if any criterion fails.
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "herdmarket/analysis.hpp"
#include "herdmarket/model.hpp"
#include "herdmarket/random.hpp"
#include "herdmarket/series_io.hpp"
#include "herdmarket/simulator.hpp"
#include "herdmarket/sweep.hpp"
#include "herdmarket/tail.hpp"

using namespace herdmarket;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMasterSeed = 7;
constexpr std::uint32_t kReplicates = 10;
const std::vector<double> kRhoGrid{0.1, 2.0, 8.0};

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void report(const char* id, const char* title, const Outcome& o) {
    std::printf("%s [%s] %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++g_failures;
}

Outcome guarded(const std::function<Outcome()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {false, std::string("error: ") + e.what()};
    }
}

ModelParams reference_params() {
    ParamInputs in;
    in.dt = 0.1;
    in.lambda = 1.0;
    in.n = 100000;
    in.sigma_f = 0.0;
    in.steps = 100000;
    in.burn_in = 1000;
    in.seed = kMasterSeed;
    return resolve(in);
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    return buf;
}

std::string opt_fmt(const std::optional<double>& v) { return v ? fmt(*v) : "none"; }

std::string tally(const std::vector<RegimeKind>& labels) {
    int g = 0, e = 0, p = 0, i = 0;
    for (auto l : labels) {
        g += l == RegimeKind::gaussian;
        e += l == RegimeKind::exponential;
        p += l == RegimeKind::powerlaw;
        i += l == RegimeKind::indeterminate;
    }
    return "g" + std::to_string(g) + "/e" + std::to_string(e) + "/p" + std::to_string(p) +
           "/i" + std::to_string(i);
}

// ---- 1: regime progression ------------------------------------------------

SweepResult g_sweep;

Outcome regime_progression() {
    SweepSpec spec;
    spec.rho_grid = kRhoGrid;
    spec.replicates = kReplicates;
    spec.base = reference_params();
    spec.workers = worker_count();
    g_sweep = run_sweep(spec);

    const RegimeKind expected[] = {RegimeKind::gaussian, RegimeKind::exponential,
                                   RegimeKind::powerlaw};
    bool ok = true;
    std::ostringstream d;
    for (std::size_t g = 0; g < kRhoGrid.size(); ++g) {
        const auto& row = g_sweep.rows[g];
        std::vector<RegimeKind> ret, vol;
        for (std::uint32_t r = 0; r < kReplicates; ++r) {
            const auto& c = g_sweep.cells[g * kReplicates + r];
            if (!c.ok()) continue;
            ret.push_back(c.return_regime);
            vol.push_back(c.volume_regime);
        }
        ok = ok && row.majority_return == expected[g] && row.majority_volume == expected[g];
        if (g == 0) {
            ok = ok && row.median_kurtosis && std::abs(*row.median_kurtosis) < 0.5;
        }
        if (g == 2) {
            ok = ok && row.median_alpha && std::isfinite(*row.median_alpha) &&
                 row.median_kurtosis && *row.median_kurtosis > 3.0;
        }
        d << "rho=" << fmt(row.rho) << " returns " << to_string(row.majority_return) << " ("
          << tally(ret) << ") volume " << to_string(row.majority_volume) << " (" << tally(vol)
          << ") median kurtosis " << opt_fmt(row.median_kurtosis) << " median alpha "
          << opt_fmt(row.median_alpha);
        if (row.failed_cells) d << " failed " << row.failed_cells;
        if (g + 1 < kRhoGrid.size()) d << "; ";
    }
    return {ok, d.str()};
}

Outcome kurtosis_monotone() {
    if (g_sweep.rows.size() != kRhoGrid.size()) return {false, "sweep unavailable"};
    std::ostringstream d;
    bool ok = true;
    std::optional<double> prev;
    for (const auto& row : g_sweep.rows) {
        d << "rho=" << fmt(row.rho) << ":" << opt_fmt(row.median_kurtosis) << ' ';
        if (!row.median_kurtosis) {
            ok = false;
            continue;
        }
        if (prev && *row.median_kurtosis < *prev) ok = false;
        prev = row.median_kurtosis;
    }
    return {ok, "median excess kurtosis " + d.str()};
}

// ---- 2: volatility clustering ---------------------------------------------

Outcome volatility_clustering() {
    const ModelParams base = reference_params();
    auto returns_for = [&](std::size_t g, std::uint32_t r) {
        ModelParams p = base;
        p.rho = kRhoGrid[g];
        p.seed = mix_seed(base.seed, g, r);
        return run_simulation(p).returns;
    };

    int clustered_seeds = 0;
    double min_acf20 = 1.0;
    for (std::uint32_t r = 0; r < kReplicates; ++r) {
        const auto ret = returns_for(2, r);
        const double band = 3.0 / std::sqrt(static_cast<double>(ret.size()));
        const auto acf = acf_abs(ret, 20);
        const bool all_above =
            std::all_of(acf.begin(), acf.end(), [&](double a) { return a > band; });
        clustered_seeds += all_above;
        min_acf20 = std::min(min_acf20, *std::min_element(acf.begin(), acf.end()));
    }

    std::size_t inside = 0, total = 0;
    constexpr std::size_t kLags = 50;
    for (std::uint32_t r = 0; r < kReplicates; ++r) {
        const auto ret = returns_for(0, r);
        const double band = 3.0 / std::sqrt(static_cast<double>(ret.size()));
        for (double a : acf_abs(ret, kLags)) {
            inside += std::abs(a) <= band;
            ++total;
        }
    }
    const double frac = static_cast<double>(inside) / static_cast<double>(total);
    const bool ok = clustered_seeds >= 8 && frac >= 0.9;
    return {ok, "rho=8: " + std::to_string(clustered_seeds) +
                    "/10 seeds above 3/sqrt(N) at lags 1-20 (smallest acf " + fmt(min_acf20) +
                    "); rho=0.1: " + fmt(100.0 * frac) + "% of lags 1-50 inside the band"};
}

// ---- 3: analytic identities -------------------------------------------------

Outcome analytic_identities() {
    std::mt19937_64 rng(0x1de7);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uphi(-20.0, 20.0), upos(0.01, 10.0),
        ulog(-5.0, 5.0);
    std::uniform_int_distribution<std::uint64_t> un(2, 1000000);
    double worst_sum = 0.0, worst_flip = 0.0, worst_balance = 0.0, worst_even = 0.0;
    bool in_range = true;
    for (int i = 0; i < 10000; ++i) {
        const double x = ux(rng), phi = uphi(rng), a = upos(rng), b = upos(rng);
        const std::uint64_t n = un(rng), m = un(rng);
        worst_sum = std::max(worst_sum,
                             std::abs(transition_up(x, phi) + transition_down(x, phi) - 1.0));
        worst_flip =
            std::max(worst_flip, std::abs(transition_up(-x, phi) - transition_down(x, phi)));

        const double lambda = b * static_cast<double>(n) / (a * static_cast<double>(m));
        const double ln_star = ulog(rng);
        const double ln_s = clearing_log_price(ln_star, x, lambda);
        const double g = interacting_excess_demand(x, b, n);
        const double f = fundamentalist_demand(ln_s, ln_star, a, m);
        const double scale = std::max(b * static_cast<double>(n), 1e-300);
        worst_balance = std::max(worst_balance, std::abs(f + g) / scale);

        const double v = trading_volume(x, b, n), w = trading_volume(-x, b, n);
        worst_even = std::max(worst_even, std::abs(v - w) / scale);
        in_range = in_range && v >= 0.5 * scale * (1 - 1e-12) && v <= scale * (1 + 1e-12);
    }
    const double tol = 1e-10;
    const bool ok = worst_sum <= tol && worst_flip <= tol && worst_balance <= tol &&
                    worst_even <= tol && in_range;
    return {ok, "max |W_up+W_down-1| " + fmt(worst_sum) + ", flip " + fmt(worst_flip) +
                    ", demand balance (rel) " + fmt(worst_balance) + ", volume evenness (rel) " +
                    fmt(worst_even) + ", volume in [bn/2, bn] " + (in_range ? "yes" : "no")};
}

// ---- 4: oracle equivalence --------------------------------------------------

std::pair<double, double> stationary_moments(const std::vector<double>& path,
                                             std::size_t skip) {
    const auto m = moments(std::span<const double>(path).subspan(skip));
    return {m.mean, m.variance};
}

Outcome oracle_equivalence() {
    constexpr std::uint64_t kSteps = 100000;
    constexpr std::size_t kBurn = 1000;
    constexpr double kDt = 0.1;
    bool ok = true;
    std::ostringstream d;
    std::uint64_t seed = 100;
    for (std::uint64_t n : {50, 200}) {
        for (double phi : {0.0, 0.5}) {
            const auto agents = simulate_agents(n, phi, kSteps, kDt, seed++);
            const auto sde = simulate_attitude(0.0, phi, n, kDt, kSteps, seed++);
            const auto [ma, va] = stationary_moments(agents, kBurn);
            const auto [ms, vs] = stationary_moments(sde, kBurn);
            const double var_rel = std::abs(va / vs - 1.0);
            const double mean_gap = std::abs(ma - ms) / std::sqrt(vs);
            const bool cell = var_rel <= 0.25 && mean_gap <= 0.25;
            ok = ok && cell;
            d << "n=" << n << " phi=" << fmt(phi) << ": var agents " << fmt(va) << " vs sde "
              << fmt(vs) << ", mean " << fmt(ma) << " vs " << fmt(ms) << (cell ? " ok" : " off")
              << "; ";
        }
    }
    auto s = d.str();
    s.resize(s.size() - 2);
    return {ok, s};
}

// ---- 5: estimator calibration -----------------------------------------------

Outcome estimator_calibration() {
    constexpr std::size_t kN = 100000;
    std::mt19937_64 rng(0xca11b);
    auto draw = [&](auto&& gen) {
        std::vector<double> v(kN);
        for (auto& x : v) x = gen();
        return v;
    };
    std::normal_distribution<double> normal;
    std::exponential_distribution<double> expo(1.0);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> unif;
    std::student_t_distribution<double> t3(3.0);

    int hits[4] = {0, 0, 0, 0};
    for (int seed = 0; seed < 20; ++seed) {
        hits[0] += classify_tail(draw([&] { return normal(rng); })).label == RegimeKind::gaussian;
        hits[1] += classify_tail(draw([&] { return coin(rng) ? expo(rng) : -expo(rng); })).label ==
                   RegimeKind::exponential;
        hits[2] += classify_tail(draw([&] { return std::pow(1.0 - unif(rng), -0.5); })).label ==
                   RegimeKind::powerlaw;
        hits[3] += classify_tail(draw([&] { return t3(rng); })).label == RegimeKind::powerlaw;
    }

    bool ok = std::all_of(std::begin(hits), std::end(hits), [](int h) { return h >= 18; });
    std::ostringstream d;
    d << "recovered normal " << hits[0] << "/20, laplace " << hits[1] << "/20, pareto "
      << hits[2] << "/20, student-t(3) " << hits[3] << "/20";
    for (double alpha : {1.5, 3.0}) {
        const auto sample = draw([&] { return std::pow(1.0 - unif(rng), -1.0 / alpha); });
        const auto h = hill_estimate(sample, 0.05);
        const double z = (h.alpha - alpha) / h.std_err;
        ok = ok && std::abs(z) <= 3.0;
        d << "; hill alpha=" << fmt(alpha) << " -> " << fmt(h.alpha, 4) << " (" << fmt(z, 2)
          << " se)";
    }
    return {ok, d.str()};
}

// ---- CLI helpers -------------------------------------------------------------

const fs::path& work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "hm_acceptance";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("'") + HERDMARKET_CLI + "' " + args + " >>'" +
                            (work_dir() / "cli.log").string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string sub(const char* name) { return "'" + (work_dir() / name).string() + "'"; }

// ---- 6: reproducibility -------------------------------------------------------

Outcome reproducibility() {
    const std::string sim = "simulate --rho 8 --steps 100000 --seed 1 --out ";
    if (run_cli(sim + sub("sim_a")) != 0 || run_cli(sim + sub("sim_b")) != 0) {
        return {false, "simulate failed, see " + (work_dir() / "cli.log").string()};
    }
    const bool series_same = read_file(work_dir() / "sim_a" / "series.csv") ==
                             read_file(work_dir() / "sim_b" / "series.csv");

    const std::string sweep = "sweep --rho 0.1,2,8 --replicates 4 --steps 20000 --seed 7 --out ";
    if (run_cli(sweep + sub("sweep_w1") + " --workers 1") != 0 ||
        run_cli(sweep + sub("sweep_w8") + " --workers 8") != 0) {
        return {false, "sweep failed, see " + (work_dir() / "cli.log").string()};
    }
    bool sweep_same = true;
    for (const char* f : {"sweep.json", "sweep_summary.csv"}) {
        sweep_same = sweep_same && read_file(work_dir() / "sweep_w1" / f) ==
                                       read_file(work_dir() / "sweep_w8" / f);
    }
    return {series_same && sweep_same,
            std::string("series.csv reruns ") + (series_same ? "identical" : "differ") +
                ", sweep outputs workers 1 vs 8 " + (sweep_same ? "identical" : "differ")};
}

// ---- 7: empirical pipeline ----------------------------------------------------

Outcome empirical_pipeline() {
    const fs::path fixture = fs::path(HERDMARKET_DATA_DIR) / "synthetic_daily_rho8.csv";
    if (!fs::exists(fixture)) return {false, "missing fixture " + fixture.string()};
    if (run_cli("ingest --in '" + fixture.string() + "' --symbol SYN8 --out " +
                sub("ingested")) != 0) {
        return {false, "ingest failed"};
    }
    if (run_cli("analyze --in " + sub("ingested") + "/series.csv --out " + sub("report")) != 0) {
        return {false, "analyze failed"};
    }
    const auto rep = nlohmann::json::parse(read_file(work_dir() / "report" / "report.json"));
    const auto& regime = rep.at("returns").at("regime");
    const std::string label = regime.at("label");
    std::ostringstream d;
    d << rep.at("rows").get<std::size_t>() << " rows, returns classified " << label;
    if (regime.contains("best_family")) {
        d << " (best " << regime.at("best_family").get<std::string>() << ", margin "
          << fmt(regime.at("margin").get<double>()) << ")";
    }
    return {label == "powerlaw", d.str()};
}

}  // namespace

int main() {
    std::printf("herdmarket acceptance (master seed %llu, %u workers)\n",
                static_cast<unsigned long long>(kMasterSeed), worker_count());
    report("1", "regime progression", guarded(regime_progression));
    report("1b", "kurtosis non-decreasing in rho", guarded(kurtosis_monotone));
    report("2", "volatility clustering", guarded(volatility_clustering));
    report("3", "analytic identities", guarded(analytic_identities));
    report("4", "agent oracle vs attitude integrator", guarded(oracle_equivalence));
    report("5", "estimator calibration", guarded(estimator_calibration));
    report("6", "reproducibility", guarded(reproducibility));
    report("7", "empirical pipeline", guarded(empirical_pipeline));
    std::printf("%d failing\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
