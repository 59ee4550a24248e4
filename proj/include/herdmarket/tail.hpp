// SPDX-License-Identifier: Apache-2.0
//
// Distribution diagnostics for return and volume samples: moments, survival
// function, Hill tail index, maximum-likelihood comparison of Gaussian,
// exponential and power-law tails, and the autocorrelation of magnitudes.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace herdmarket {

enum class TailFamily { gaussian, exponential, powerlaw };
enum class RegimeKind { gaussian, exponential, powerlaw, indeterminate };

std::string_view to_string(TailFamily f);
std::string_view to_string(RegimeKind r);
RegimeKind to_regime(TailFamily f);

inline constexpr std::size_t kMinTailCount = 50;

struct Point {
    double x;
    double y;
};

/// Central-moment summary, computed in two passes (mean first, then the
/// centred sums) to avoid the cancellation of one-pass power sums.
/// skewness and excess_kurtosis are NaN when degenerate (zero variance).
struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    std::size_t count = 0;
    bool degenerate = false;
};

/// One family fitted by conditional maximum likelihood to the magnitudes
/// above x_min. exponent_or_scale is alpha (power law), the rate
/// (exponential) or sigma (Gaussian).
struct TailFit {
    TailFamily family;
    double exponent_or_scale;
    double x_min;
    double log_likelihood;
    double ks_stat;
    std::size_t n_tail;
};

struct RegimeLabel {
    RegimeKind label;
    TailFamily best;  // argmax family even when label is indeterminate
    double margin;    // log-likelihood gap from winner to runner-up
};

struct HillEstimate {
    double alpha;
    double std_err;
    std::size_t k;
};

/// Empirical survival function P(X > x) at each distinct sample value,
/// ascending in x. The largest value has empirical survival 0, which
/// is replaced by 1/(2N) so the curve stays plottable on log axes.
std::vector<Point> ccdf(std::span<const double> samples);

/// Throws for fewer than 4 samples. A constant sample returns degenerate.
MomentSummary moments(std::span<const double> samples);

/// Type-7 (linear interpolation) quantile of an ascending-sorted range.
double quantile_sorted(std::span<const double> sorted, double q);

/// Hill estimator over the k = ceil(tail_fraction * N) largest values,
/// alpha = k / sum_i ln(x_(i) / x_(k+1)), std_err = alpha / sqrt(k).
/// Samples must be nonnegative magnitudes.
HillEstimate hill_estimate(std::span<const double> samples,
                           double tail_fraction = 0.05);

/// Fits half-Gaussian, exponential and Pareto tails to |samples| above the
/// q_threshold quantile. Order of the result follows TailFamily.
std::array<TailFit, 3> fit_tail_family(std::span<const double> samples,
                                       double q_threshold = 0.9);

RegimeLabel classify_tail(std::span<const double> samples,
                          double q_threshold = 0.9, double margin_min = 2.0);
RegimeLabel classify_fits(const std::array<TailFit, 3>& fits,
                          double margin_min);

/// Sample autocorrelation of |series| at lags 1..max_lag, normalised by the
/// lag-0 autocovariance.
std::vector<double> acf_abs(std::span<const double> series,
                            std::size_t max_lag);

enum class YScale { linear, log };

/// Equal-width density histogram over the sample range, as (bin_center,
/// density) pairs. YScale::log drops empty bins and reports ln(density).
std::vector<Point> histogram(std::span<const double> samples, std::size_t bins,
                             YScale y_scale = YScale::linear);

}  // namespace herdmarket
