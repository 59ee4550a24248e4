// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "herdmarket/model.hpp"

namespace herdmarket {

struct StepResult {
    double x;
    bool clamped;  // the boundary rule had to intervene
};

/// One Euler-Maruyama update of the average attitude,
///   raw = x + tanh(phi x) dt + sqrt(Q(x)) dw,
/// mapped back into [-1, 1] by the boundary rule. Reflection folds across the
/// violated bound once and clamps whatever is still outside.
StepResult euler_step(double x, double phi, double dw, double dt,
                      std::uint64_t n, Boundary boundary);

/// Recorded paths of one run. x, ln_s, ln_s_star and volume hold one value
/// per recorded step; returns holds steps-1 values.
struct SimulationSeries {
    std::vector<double> x;
    std::vector<double> ln_s;
    std::vector<double> ln_s_star;
    std::vector<double> returns;
    std::vector<double> volume;
    std::uint64_t clamp_events = 0;  // over the whole run, burn-in included
    ModelParams params;
    std::vector<std::string> warnings;

    std::size_t size() const { return x.size(); }
};

/// Integrates the model for burn_in + steps updates and records the last
/// `steps` states. Random coupling phi_j = rho * dW'_j, where dW'_j is an
/// independent Normal(0, dt) draw or the attitude increment itself,
/// depending on params.phi_noise. Bit-identical for identical params.
SimulationSeries run_simulation(const ModelParams& params);

/// Attitude-only Euler integrator at a fixed coupling phi (no rho
/// randomization, no prices). Returns `steps` attitude values, starting
/// after the first update.
std::vector<double> simulate_attitude(double x0, double phi, std::uint64_t n,
                                      double dt, std::uint64_t steps,
                                      std::uint64_t seed,
                                      Boundary boundary = Boundary::clamp);

/// Individual +-1 attitudes of the interacting traders.
struct AgentEnsemble {
    std::vector<std::int8_t> attitudes;

    /// floor(n/2) buyers and the rest sellers.
    static AgentEnsemble balanced(std::uint64_t n);
    /// Every trader holds `attitude` (+1 or -1).
    static AgentEnsemble uniform(std::uint64_t n, int attitude);

    std::uint64_t size() const { return attitudes.size(); }
    double mean() const;
};

inline constexpr std::uint64_t kMaxAgents = 10000;

/// Agent-level Markov chain used as an oracle for the aggregate SDE. Each
/// step every seller turns buyer with probability min(1, W_up(X) dt) and
/// every buyer turns seller with probability min(1, W_down(X) dt), all using
/// the ensemble mean X from the start of the step. Returns `steps` values of
/// X, one after each step. Rejects ensembles above kMaxAgents.
std::vector<double> simulate_agents(AgentEnsemble ensemble, double phi,
                                    std::uint64_t steps, double dt,
                                    std::uint64_t seed);

std::vector<double> simulate_agents(std::uint64_t n, double phi,
                                    std::uint64_t steps, double dt,
                                    std::uint64_t seed);

}  // namespace herdmarket
