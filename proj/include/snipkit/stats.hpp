#pragma once

// Statistical kernels: means, order statistics, correlation, DIFF.
// All reductions use Neumaier-compensated summation so results are stable
// against input order to well below 1e-12.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace snipkit::stats {

class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty input");
    return sum(xs) / static_cast<double>(xs.size());
}

struct WeightedSample {
    std::vector<double> values;
    std::vector<double> weights;
};

inline double weighted_mean(const WeightedSample& sample) {
    if (sample.values.size() != sample.weights.size())
        throw std::invalid_argument("weighted_mean: values/weights length mismatch");
    CompensatedSum wx, w;
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        if (sample.weights[i] < 0.0)
            throw std::invalid_argument("weighted_mean: negative weight");
        wx.add(sample.weights[i] * sample.values[i]);
        w.add(sample.weights[i]);
    }
    if (!(w.value() > 0.0)) throw std::invalid_argument("weighted_mean: zero weight sum");
    return wx.value() / w.value();
}

// n / sum(1/x); all inputs must be positive.
inline double harmonic_mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("harmonic_mean: empty input");
    CompensatedSum inv;
    for (double x : xs) {
        if (!(x > 0.0)) throw std::invalid_argument("harmonic_mean: non-positive value");
        inv.add(1.0 / x);
    }
    return static_cast<double>(xs.size()) / inv.value();
}

// Middle order statistic; mean of the two central values for even counts.
inline double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median: empty input");
    std::size_t n = xs.size();
    std::size_t mid = n / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
    double upper = xs[mid];
    if (n % 2 == 1) return upper;
    double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
    return lower + (upper - lower) / 2.0;
}

enum class PercentileMethod { linear, nearest_rank };

// Linear interpolation between order statistics at rank p*(n-1), or the
// classical nearest-rank statistic.
inline double percentile(std::vector<double> xs, double p,
                         PercentileMethod method = PercentileMethod::linear) {
    if (xs.empty()) throw std::invalid_argument("percentile: empty input");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percentile: p outside [0,1]");
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    if (method == PercentileMethod::nearest_rank) {
        std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
        if (rank < 1) rank = 1;
        if (rank > n) rank = n;
        return xs[rank - 1];
    }
    double r = p * static_cast<double>(n - 1);
    std::size_t lo = static_cast<std::size_t>(r);
    if (lo >= n - 1) return xs[n - 1];
    double frac = r - static_cast<double>(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

// 1-based ranks; ties receive the mean of the rank positions they span.
inline std::vector<double> average_ranks(std::span<const double> xs) {
    std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

// Sample correlation coefficient, two-pass.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("pearson: need at least 2 points");
    double mx = mean(x);
    double my = mean(y);
    CompensatedSum sxy, sxx, syy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy.add(dx * dy);
        sxx.add(dx * dx);
        syy.add(dy * dy);
    }
    if (!(sxx.value() > 0.0) || !(syy.value() > 0.0))
        throw std::invalid_argument("pearson: degenerate variance");
    double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
    return std::clamp(r, -1.0, 1.0);
}

// Pearson correlation of average ranks.
inline double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("spearman: need at least 2 points");
    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    return pearson(rx, ry);
}

// 100*(m - o)/o
inline double diff_pct(double m, double o) {
    if (o == 0.0) throw std::invalid_argument("diff_pct: reference value is zero");
    return 100.0 * (m - o) / o;
}

inline double population_stddev(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("population_stddev: empty input");
    double m = mean(xs);
    CompensatedSum s;
    for (double x : xs) s.add((x - m) * (x - m));
    return std::sqrt(s.value() / static_cast<double>(xs.size()));
}

}  // namespace snipkit::stats
