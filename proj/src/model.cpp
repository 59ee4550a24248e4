// SPDX-License-Identifier: Apache-2.0
#include "herdmarket/model.hpp"

#include <cmath>

#include "herdmarket/error.hpp"

namespace herdmarket {

std::string_view to_string(PhiNoise v) {
    return v == PhiNoise::independent ? "independent" : "shared";
}

std::string_view to_string(Boundary v) {
    return v == Boundary::clamp ? "clamp" : "reflect";
}

std::string_view to_string(Regime v) {
    switch (v) {
        case Regime::bull: return "bull";
        case Regime::bear: return "bear";
        case Regime::fair: return "fair";
    }
    return "fair";
}

PhiNoise parse_phi_noise(std::string_view s) {
    if (s == "independent") return PhiNoise::independent;
    if (s == "shared") return PhiNoise::shared;
    fail(ErrorKind::validation,
         "phi_noise must be 'independent' or 'shared', got '" +
             std::string(s) + "'");
}

Boundary parse_boundary(std::string_view s) {
    if (s == "clamp") return Boundary::clamp;
    if (s == "reflect") return Boundary::reflect;
    fail(ErrorKind::validation,
         "boundary must be 'clamp' or 'reflect', got '" + std::string(s) +
             "'");
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) fail(ErrorKind::validation, what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void ModelParams::validate() const {
    require(n >= 2, "n must be at least 2");
    require(m >= 1, "m must be at least 1");
    require(finite_positive(a), "a must be a positive finite number");
    require(finite_positive(b), "b must be a positive finite number");
    require(finite_positive(lambda), "lambda must be a positive finite number");
    require(std::isfinite(rho) && rho >= 0.0, "rho must be nonnegative");
    require(finite_positive(dt), "dt must be positive");
    require(std::isfinite(sigma_f) && sigma_f >= 0.0,
            "sigma_f must be nonnegative");
    require(std::isfinite(x0) && std::abs(x0) <= 1.0, "|x0| must be <= 1");
    require(finite_positive(s_star_0), "s_star_0 must be positive");
    require(steps >= 1, "steps must be positive");
    const double implied = b * static_cast<double>(n) /
                           (a * static_cast<double>(m));
    require(std::abs(implied - lambda) <= 1e-12 * lambda,
            "lambda must equal b*n/(a*m)");
}

ModelParams resolve(const ParamInputs& in) {
    ModelParams p;
    p.n = in.n;
    p.rho = in.rho;
    p.dt = in.dt;
    p.sigma_f = in.sigma_f;
    p.x0 = in.x0;
    p.s_star_0 = in.s_star_0;
    p.steps = in.steps;
    p.burn_in = in.burn_in;
    p.seed = in.seed;
    p.phi_noise = in.phi_noise;
    p.boundary = in.boundary;
    p.a = in.a.value_or(1.0);
    p.m = in.m.value_or(1);

    require(p.n >= 2, "n must be at least 2");
    require(p.m >= 1, "m must be at least 1");
    require(finite_positive(p.a), "a must be a positive finite number");
    const double nd = static_cast<double>(p.n);
    const double am = p.a * static_cast<double>(p.m);

    if (in.b && in.lambda) {
        require(finite_positive(*in.b), "b must be a positive finite number");
        require(finite_positive(*in.lambda),
                "lambda must be a positive finite number");
        const double implied = *in.b * nd / am;
        if (std::abs(implied - *in.lambda) > 1e-12 * *in.lambda) {
            fail(ErrorKind::validation,
                 "contradictory parameters: lambda=" +
                     std::to_string(*in.lambda) + " but b*n/(a*m)=" +
                     std::to_string(implied));
        }
        p.b = *in.b;
        p.lambda = *in.lambda;
    } else if (in.b) {
        require(finite_positive(*in.b), "b must be a positive finite number");
        p.b = *in.b;
        p.lambda = p.b * nd / am;
    } else {
        // lambda given or defaulted: the product a*m is pinned to 1 and b*n
        // is back-solved.
        p.lambda = in.lambda.value_or(1.0);
        require(finite_positive(p.lambda),
                "lambda must be a positive finite number");
        if (in.a || in.m) {
            p.b = p.lambda * am / nd;
        } else {
            p.a = 1.0;
            p.m = 1;
            p.b = p.lambda / nd;
        }
    }
    p.validate();
    return p;
}

double transition_up(double x, double phi) {
    return 1.0 / (1.0 + std::exp(-2.0 * phi * x));
}

double transition_down(double x, double phi) {
    return 1.0 / (1.0 + std::exp(2.0 * phi * x));
}

double drift(double x, double phi) { return std::tanh(phi * x); }

double diffusion(double x, double phi, std::uint64_t n) {
    // 1 - tanh(z) written as 2/(exp(2z)+1) stays positive where tanh rounds
    // to 1.
    return (2.0 / static_cast<double>(n)) * (2.0 / (std::exp(2.0 * phi * x) + 1.0));
}

double interacting_excess_demand(double x, double b, std::uint64_t n) {
    return b * static_cast<double>(n) * x;
}

double fundamentalist_demand(double ln_s, double ln_s_star, double a,
                             std::uint64_t m) {
    return a * static_cast<double>(m) * (ln_s_star - ln_s);
}

double clearing_log_price(double ln_s_star, double x, double lambda) {
    return ln_s_star + lambda * x;
}

Regime market_regime(double x, double eps) {
    if (x > eps) return Regime::bull;
    if (x < -eps) return Regime::bear;
    return Regime::fair;
}

double trading_volume(double x, double b, std::uint64_t n) {
    if (!(std::abs(x) <= 1.0)) {
        fail(ErrorKind::validation,
             "trading_volume: |x| > 1 (x=" + std::to_string(x) + ")");
    }
    return b * static_cast<double>(n) * (1.0 + std::abs(x)) / 2.0;
}

}  // namespace herdmarket
