// SPDX-License-Identifier: Apache-2.0
#include "herdmarket/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "herdmarket/error.hpp"

namespace herdmarket {

std::string_view to_string(TailFamily f) {
    switch (f) {
        case TailFamily::gaussian: return "gaussian";
        case TailFamily::exponential: return "exponential";
        case TailFamily::powerlaw: return "powerlaw";
    }
    return "gaussian";
}

std::string_view to_string(RegimeKind r) {
    switch (r) {
        case RegimeKind::gaussian: return "gaussian";
        case RegimeKind::exponential: return "exponential";
        case RegimeKind::powerlaw: return "powerlaw";
        case RegimeKind::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

RegimeKind to_regime(TailFamily f) {
    switch (f) {
        case TailFamily::gaussian: return RegimeKind::gaussian;
        case TailFamily::exponential: return RegimeKind::exponential;
        case TailFamily::powerlaw: return RegimeKind::powerlaw;
    }
    return RegimeKind::indeterminate;
}

namespace {

void require_finite(std::span<const double> samples, const char* op) {
    for (double v : samples) {
        if (!std::isfinite(v)) {
            fail(ErrorKind::validation,
                 std::string(op) + ": samples must be finite");
        }
    }
}

std::vector<double> sorted_copy(std::span<const double> samples) {
    std::vector<double> v(samples.begin(), samples.end());
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<double> sorted_magnitudes(std::span<const double> samples) {
    std::vector<double> v;
    v.reserve(samples.size());
    for (double s : samples) v.push_back(std::abs(s));
    std::sort(v.begin(), v.end());
    return v;
}

// ln P(Z > z) for standard normal Z, accurate far into the upper tail.
double log_normal_sf(double z) {
    if (z < 30.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
    const double z2 = z * z;
    const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) -
                          15.0 / (z2 * z2 * z2);
    return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) +
           std::log(series);
}

template <typename Cdf>
double ks_statistic(std::span<const double> tail_sorted, Cdf cdf) {
    const double k = static_cast<double>(tail_sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < tail_sorted.size(); ++i) {
        const double f = std::clamp(cdf(tail_sorted[i]), 0.0, 1.0);
        d = std::max({d, (static_cast<double>(i) + 1.0) / k - f,
                      f - static_cast<double>(i) / k});
    }
    return std::clamp(d, 0.0, 1.0);
}

TailFit fit_gaussian(std::span<const double> tail, double x_min) {
    const double k = static_cast<double>(tail.size());
    double sum_sq = 0.0;
    for (double t : tail) sum_sq += t * t;
    const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi);
    // Zero-mean normal conditioned on exceeding x_min; the half-normal factor
    // of 2 cancels in the conditioning.
    auto neg_ll = [&](double log_sigma) {
        const double sigma = std::exp(log_sigma);
        return sum_sq / (2.0 * sigma * sigma) + k * log_sigma + k * log_norm +
               k * log_normal_sf(x_min / sigma);
    };

    const double centre = 0.5 * std::log(sum_sq / k);
    const double lo = centre - 12.0;
    const double hi = centre + 6.0;
    constexpr int grid = 90;
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double u = lo + (hi - lo) * i / grid;
        const double v = neg_ll(u);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double step = (hi - lo) / grid;
    const double a = lo + step * std::max(best - 1, 0);
    const double b = lo + step * std::min(best + 1, grid);
    const auto [log_sigma, value] =
        boost::math::tools::brent_find_minima(neg_ll, a, b, 52);
    const double sigma = std::exp(log_sigma);
    const double log_sf_min = log_normal_sf(x_min / sigma);

    TailFit fit{TailFamily::gaussian, sigma, x_min, -value, 0.0, tail.size()};
    fit.ks_stat = ks_statistic(tail, [&](double x) {
        return 1.0 - std::exp(log_normal_sf(x / sigma) - log_sf_min);
    });
    return fit;
}

TailFit fit_exponential(std::span<const double> tail, double x_min) {
    const double k = static_cast<double>(tail.size());
    double excess = 0.0;
    for (double t : tail) excess += t - x_min;
    const double rate = k / excess;
    TailFit fit{TailFamily::exponential, rate, x_min,
                k * std::log(rate) - rate * excess, 0.0, tail.size()};
    fit.ks_stat = ks_statistic(
        tail, [&](double x) { return 1.0 - std::exp(-rate * (x - x_min)); });
    return fit;
}

TailFit fit_pareto(std::span<const double> tail, double x_min) {
    const double k = static_cast<double>(tail.size());
    double log_ratio = 0.0;
    for (double t : tail) log_ratio += std::log(t / x_min);
    const double alpha = k / log_ratio;
    // sum ln f = k ln(alpha) - k ln(x_min) - (alpha+1) sum ln(t/x_min)
    const double ll =
        k * std::log(alpha) - k * std::log(x_min) - (alpha + 1.0) * log_ratio;
    TailFit fit{TailFamily::powerlaw, alpha, x_min, ll, 0.0, tail.size()};
    fit.ks_stat = ks_statistic(
        tail, [&](double x) { return 1.0 - std::pow(x / x_min, -alpha); });
    return fit;
}

}  // namespace

std::vector<Point> ccdf(std::span<const double> samples) {
    if (samples.size() < 2) {
        fail(ErrorKind::validation, "ccdf needs at least 2 samples");
    }
    require_finite(samples, "ccdf");
    const auto v = sorted_copy(samples);
    const double count = static_cast<double>(v.size());
    std::vector<Point> out;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        const double above = static_cast<double>(v.size() - j);
        const double p = above > 0 ? above / count : 1.0 / (2.0 * count);
        out.push_back({v[i], p});
        i = j;
    }
    return out;
}

MomentSummary moments(std::span<const double> samples) {
    if (samples.size() < 4) {
        fail(ErrorKind::validation, "moments need at least 4 samples");
    }
    require_finite(samples, "moments");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : samples) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    MomentSummary s;
    s.mean = mean;
    s.variance = m2;
    s.count = samples.size();
    if (m2 <= 0.0) {
        s.degenerate = true;
        s.skewness = std::numeric_limits<double>::quiet_NaN();
        s.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return s;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) fail(ErrorKind::validation, "quantile of empty range");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

HillEstimate hill_estimate(std::span<const double> samples,
                           double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 0.5)) {
        fail(ErrorKind::validation, "tail_fraction must lie in (0, 0.5]");
    }
    require_finite(samples, "hill_estimate");
    for (double v : samples) {
        if (v < 0.0) {
            fail(ErrorKind::validation,
                 "hill_estimate expects nonnegative magnitudes");
        }
    }
    const auto k = static_cast<std::size_t>(
        std::ceil(tail_fraction * static_cast<double>(samples.size())));
    if (k < kMinTailCount || k + 1 > samples.size()) {
        fail(ErrorKind::degenerate,
             "hill_estimate: tail holds " + std::to_string(k) +
                 " points, need at least " + std::to_string(kMinTailCount));
    }
    std::vector<double> v(samples.begin(), samples.end());
    // Descending order statistics x_(1) >= ... >= x_(k+1).
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k),
                     v.end(), std::greater<>());
    const double threshold = v[k];
    if (!(threshold > 0.0)) {
        fail(ErrorKind::degenerate,
             "hill_estimate: order statistic x_(k+1) is not positive");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(v[i] / threshold);
    if (!(sum > 0.0)) {
        fail(ErrorKind::degenerate, "hill_estimate: tail has no spread");
    }
    const double alpha = static_cast<double>(k) / sum;
    return {alpha, alpha / std::sqrt(static_cast<double>(k)), k};
}

std::array<TailFit, 3> fit_tail_family(std::span<const double> samples,
                                       double q_threshold) {
    if (!(q_threshold > 0.5 && q_threshold < 1.0)) {
        fail(ErrorKind::validation, "q_threshold must lie in (0.5, 1)");
    }
    require_finite(samples, "fit_tail_family");
    const auto mags = sorted_magnitudes(samples);
    if (mags.empty() || mags.front() == mags.back()) {
        fail(ErrorKind::degenerate,
             "fit_tail_family: sample magnitudes have zero variance");
    }
    const double x_min = quantile_sorted(mags, q_threshold);
    if (!(x_min > 0.0)) {
        fail(ErrorKind::degenerate,
             "fit_tail_family: tail threshold is zero; too many zero values");
    }
    const auto first = std::upper_bound(mags.begin(), mags.end(), x_min);
    const std::span<const double> tail(first, mags.end());
    if (tail.size() < kMinTailCount) {
        fail(ErrorKind::degenerate,
             "fit_tail_family: only " + std::to_string(tail.size()) +
                 " points above the tail threshold, need " +
                 std::to_string(kMinTailCount));
    }
    return {fit_gaussian(tail, x_min), fit_exponential(tail, x_min),
            fit_pareto(tail, x_min)};
}

RegimeLabel classify_fits(const std::array<TailFit, 3>& fits,
                          double margin_min) {
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) {
        return fits[l].log_likelihood > fits[r].log_likelihood;
    });
    const TailFit& best = fits[order[0]];
    const double margin = best.log_likelihood - fits[order[1]].log_likelihood;
    const RegimeKind label =
        margin < margin_min ? RegimeKind::indeterminate : to_regime(best.family);
    return {label, best.family, margin};
}

RegimeLabel classify_tail(std::span<const double> samples, double q_threshold,
                          double margin_min) {
    return classify_fits(fit_tail_family(samples, q_threshold), margin_min);
}

std::vector<double> acf_abs(std::span<const double> series,
                            std::size_t max_lag) {
    if (max_lag < 1) fail(ErrorKind::validation, "max_lag must be positive");
    if (series.size() <= 10 * max_lag) {
        fail(ErrorKind::validation,
             "acf_abs: series length must exceed 10*max_lag");
    }
    require_finite(series, "acf_abs");
    const std::size_t n = series.size();
    std::vector<double> d(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = std::abs(series[i]);
        mean += d[i];
    }
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (auto& v : d) {
        v -= mean;
        c0 += v * v;
    }
    if (!(c0 > 0.0)) {
        fail(ErrorKind::degenerate, "acf_abs: |series| has zero variance");
    }
    std::vector<double> out(max_lag);
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double c = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) c += d[t] * d[t + lag];
        out[lag - 1] = c / c0;
    }
    return out;
}

std::vector<Point> histogram(std::span<const double> samples, std::size_t bins,
                             YScale y_scale) {
    if (bins < 2) fail(ErrorKind::validation, "histogram needs at least 2 bins");
    if (samples.empty()) fail(ErrorKind::validation, "histogram of no samples");
    require_finite(samples, "histogram");
    auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    for (double v : samples) {
        auto idx = static_cast<std::size_t>((v - lo) / width);
        ++counts[std::min(idx, bins - 1)];
    }
    const double norm = 1.0 / (static_cast<double>(samples.size()) * width);
    std::vector<Point> out;
    out.reserve(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        const double centre = lo + (static_cast<double>(i) + 0.5) * width;
        const double density = static_cast<double>(counts[i]) * norm;
        if (y_scale == YScale::log) {
            if (counts[i] == 0) continue;
            out.push_back({centre, std::log(density)});
        } else {
            out.push_back({centre, density});
        }
    }
    return out;
}

}  // namespace herdmarket
