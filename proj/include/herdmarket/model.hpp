// SPDX-License-Identifier: Apache-2.0
//
// Stateless formulas of the two-population market: interacting traders whose
// attitudes flip by imitation, and fundamentalists who trade on the gap
// between price and fundamental value. Everything here is a pure function.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace herdmarket {

enum class PhiNoise { independent, shared };
enum class Boundary { clamp, reflect };
enum class Regime { bull, bear, fair };

std::string_view to_string(PhiNoise v);
std::string_view to_string(Boundary v);
std::string_view to_string(Regime v);
PhiNoise parse_phi_noise(std::string_view s);
Boundary parse_boundary(std::string_view s);

/// Fully resolved parameterization of one simulation run.
///
/// Obtain instances through resolve(ParamInputs) so that the price-impact
/// relation lambda == b*n/(a*m) always holds.
struct ModelParams {
    std::uint64_t n = 100000;  // interacting traders
    std::uint64_t m = 1;       // fundamentalists
    double a = 1.0;            // fundamentalist reaction coefficient
    double b = 1e-5;           // shares per interacting trader per day
    double lambda = 1.0;       // price impact, b*n/(a*m)
    double rho = 0.0;          // conformity effect
    double dt = 0.1;
    double sigma_f = 0.0;      // per-step sd of the fundamental log-value
    double x0 = 0.0;
    double s_star_0 = 100.0;
    std::uint64_t steps = 100000;
    std::uint64_t burn_in = 1000;
    std::uint64_t seed = 0;
    PhiNoise phi_noise = PhiNoise::independent;
    Boundary boundary = Boundary::clamp;

    /// b*n, the number of shares that would trade if every interacting
    /// trader were active on the same side.
    double trade_mass() const { return b * static_cast<double>(n); }

    /// Throws Error(validation) naming the first violated constraint.
    void validate() const;
};

/// User-facing parameter request. Unset optionals take defaults; the
/// lambda / (a, b, m) coupling is settled by resolve().
struct ParamInputs {
    std::uint64_t n = 100000;
    std::optional<std::uint64_t> m;
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> lambda;
    double rho = 0.0;
    double dt = 0.1;
    double sigma_f = 0.0;
    double x0 = 0.0;
    double s_star_0 = 100.0;
    std::uint64_t steps = 100000;
    std::uint64_t burn_in = 1000;
    std::uint64_t seed = 0;
    PhiNoise phi_noise = PhiNoise::independent;
    Boundary boundary = Boundary::clamp;
};

/// Resolves the lambda / b coupling:
///  - lambda alone (or nothing, lambda defaults to 1): a = m = 1, b = lambda/n.
///  - b alone: lambda = b*n/(a*m).
///  - both: accepted only if consistent to 1e-12 relative.
ModelParams resolve(const ParamInputs& in);

/// Average attitude, log market price and log fundamental value at one step.
struct MarketState {
    double x = 0.0;
    double ln_s = 0.0;
    double ln_s_star = 0.0;
    std::uint64_t step = 0;
};

// Seller -> buyer probability 1/(1+exp(-2 phi x)).
double transition_up(double x, double phi);
// Buyer -> seller probability 1/(1+exp(2 phi x)).
double transition_down(double x, double phi);

// Drift of the attitude SDE, tanh(phi x).
double drift(double x, double phi);
// Diffusion coefficient (2/n)(1 - tanh(phi x)).
double diffusion(double x, double phi, std::uint64_t n);

double interacting_excess_demand(double x, double b, std::uint64_t n);
double fundamentalist_demand(double ln_s, double ln_s_star, double a,
                             std::uint64_t m);

/// Log price that balances fundamentalist and interacting demand.
double clearing_log_price(double ln_s_star, double x, double lambda);

Regime market_regime(double x, double eps = 0.0);

/// b*n*(1+|x|)/2. Throws Error(validation) when |x| > 1.
double trading_volume(double x, double b, std::uint64_t n);

}  // namespace herdmarket
