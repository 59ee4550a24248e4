// SPDX-License-Identifier: Apache-2.0
#include "herdmarket/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "herdmarket/error.hpp"
#include "herdmarket/random.hpp"

namespace herdmarket {

StepResult euler_step(double x, double phi, double dw, double dt,
                      std::uint64_t n, Boundary boundary) {
    const double raw =
        x + drift(x, phi) * dt + std::sqrt(diffusion(x, phi, n)) * dw;
    if (raw >= -1.0 && raw <= 1.0) return {raw, false};

    double mapped = raw;
    if (boundary == Boundary::reflect) {
        mapped = raw > 1.0 ? 2.0 - raw : -2.0 - raw;
    }
    return {std::clamp(mapped, -1.0, 1.0), true};
}

SimulationSeries run_simulation(const ModelParams& params) {
    params.validate();

    SimulationSeries out;
    out.params = params;
    const std::uint64_t total = params.burn_in + params.steps;
    out.x.reserve(params.steps);
    out.ln_s.reserve(params.steps);
    out.ln_s_star.reserve(params.steps);
    out.volume.reserve(params.steps);

    RandomStream attitude_noise(params.seed, StreamId::attitude);
    RandomStream coupling_noise(params.seed, StreamId::coupling);
    RandomStream fundamental_noise(params.seed, StreamId::fundamental);
    const double sqrt_dt = std::sqrt(params.dt);

    double x = params.x0;
    double ln_s_star = std::log(params.s_star_0);
    for (std::uint64_t j = 0; j < total; ++j) {
        if (j >= params.burn_in) {
            out.x.push_back(x);
            out.ln_s_star.push_back(ln_s_star);
            out.ln_s.push_back(clearing_log_price(ln_s_star, x, params.lambda));
            out.volume.push_back(trading_volume(x, params.b, params.n));
        }
        const double dw = attitude_noise.normal(sqrt_dt);
        const double coupling_dw = params.phi_noise == PhiNoise::shared
                                       ? dw
                                       : coupling_noise.normal(sqrt_dt);
        const StepResult next = euler_step(x, params.rho * coupling_dw, dw,
                                           params.dt, params.n,
                                           params.boundary);
        x = next.x;
        out.clamp_events += next.clamped ? 1 : 0;
        ln_s_star += params.sigma_f * fundamental_noise.normal(1.0);
    }

    out.returns.resize(out.ln_s.size() > 0 ? out.ln_s.size() - 1 : 0);
    for (std::size_t j = 0; j + 1 < out.ln_s.size(); ++j) {
        out.returns[j] = out.ln_s[j + 1] - out.ln_s[j];
    }

    if (out.clamp_events * 10 > params.steps) {
        out.warnings.push_back(
            "clamp_events=" + std::to_string(out.clamp_events) +
            " exceeds steps/10; the attitude SDE is leaving [-1,1] often");
    }
    return out;
}

std::vector<double> simulate_attitude(double x0, double phi, std::uint64_t n,
                                      double dt, std::uint64_t steps,
                                      std::uint64_t seed, Boundary boundary) {
    if (!(std::abs(x0) <= 1.0)) fail(ErrorKind::validation, "|x0| must be <= 1");
    if (!(dt > 0.0)) fail(ErrorKind::validation, "dt must be positive");
    if (n < 1) fail(ErrorKind::validation, "n must be positive");

    RandomStream noise(seed, StreamId::attitude);
    const double sqrt_dt = std::sqrt(dt);
    std::vector<double> path;
    path.reserve(steps);
    double x = x0;
    for (std::uint64_t j = 0; j < steps; ++j) {
        x = euler_step(x, phi, noise.normal(sqrt_dt), dt, n, boundary).x;
        path.push_back(x);
    }
    return path;
}

AgentEnsemble AgentEnsemble::balanced(std::uint64_t n) {
    AgentEnsemble e;
    e.attitudes.assign(n, -1);
    std::fill_n(e.attitudes.begin(), n / 2, std::int8_t{1});
    return e;
}

AgentEnsemble AgentEnsemble::uniform(std::uint64_t n, int attitude) {
    if (attitude != 1 && attitude != -1) {
        fail(ErrorKind::validation, "attitude must be +1 or -1");
    }
    AgentEnsemble e;
    e.attitudes.assign(n, static_cast<std::int8_t>(attitude));
    return e;
}

double AgentEnsemble::mean() const {
    if (attitudes.empty()) return 0.0;
    const long long sum =
        std::accumulate(attitudes.begin(), attitudes.end(), 0LL);
    return static_cast<double>(sum) / static_cast<double>(attitudes.size());
}

std::vector<double> simulate_agents(AgentEnsemble ensemble, double phi,
                                    std::uint64_t steps, double dt,
                                    std::uint64_t seed) {
    const std::uint64_t n = ensemble.size();
    if (n < 1) fail(ErrorKind::validation, "agent ensemble is empty");
    if (n > kMaxAgents) {
        fail(ErrorKind::validation,
             "agent oracle is limited to n <= " + std::to_string(kMaxAgents) +
                 " (got " + std::to_string(n) + ")");
    }
    if (!(dt > 0.0)) fail(ErrorKind::validation, "dt must be positive");

    RandomStream flips(seed, StreamId::agents);
    long long sum = std::accumulate(ensemble.attitudes.begin(),
                                    ensemble.attitudes.end(), 0LL);
    const double nd = static_cast<double>(n);

    std::vector<double> path;
    path.reserve(steps);
    for (std::uint64_t j = 0; j < steps; ++j) {
        const double x = static_cast<double>(sum) / nd;
        const double p_up = std::min(1.0, transition_up(x, phi) * dt);
        const double p_down = std::min(1.0, transition_down(x, phi) * dt);
        for (auto& u : ensemble.attitudes) {
            const double p = u < 0 ? p_up : p_down;
            if (flips.uniform() < p) {
                sum -= u;
                u = static_cast<std::int8_t>(-u);
                sum += u;
            }
        }
        path.push_back(static_cast<double>(sum) / nd);
    }
    return path;
}

std::vector<double> simulate_agents(std::uint64_t n, double phi,
                                    std::uint64_t steps, double dt,
                                    std::uint64_t seed) {
    if (n > kMaxAgents) {
        fail(ErrorKind::validation,
             "agent oracle is limited to n <= " + std::to_string(kMaxAgents) +
                 " (got " + std::to_string(n) + ")");
    }
    return simulate_agents(AgentEnsemble::balanced(n), phi, steps, dt, seed);
}

}  // namespace herdmarket
