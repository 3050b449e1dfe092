#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <snipkit/stats.hpp>

using namespace snipkit;

namespace {

// Brute-force oracles, kept independent of the implementations they check.

double oracle_median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

double oracle_percentile_linear(std::vector<double> xs, double p) {
    std::sort(xs.begin(), xs.end());
    double rank = p * static_cast<double>(xs.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    std::size_t hi = static_cast<std::size_t>(std::ceil(rank));
    if (hi >= xs.size()) hi = xs.size() - 1;
    return xs[lo] + (rank - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

// Definitional two-pass Pearson, no compensation.
double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Counting-based fractional ranks.
std::vector<double> oracle_ranks(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t below = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++below;
            if (v[j] == v[i]) ++equal;
        }
        out[i] = static_cast<double>(below) + 1.0 +
                 static_cast<double>(equal - 1) / 2.0;
    }
    return out;
}

double oracle_spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return oracle_pearson(oracle_ranks(x), oracle_ranks(y));
}

std::vector<double> random_values(std::mt19937& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(n);
    for (auto& v : out) v = dist(rng);
    return out;
}

double round1(double x) { return std::round(x * 10.0) / 10.0; }

}  // namespace

TEST_CASE("weighted mean") {
    CHECK(stats::weighted_mean({{2, 4}, {1, 1}}) == Catch::Approx(3.0));
    CHECK(stats::weighted_mean({{2, 4}, {3, 1}}) == Catch::Approx(2.5));
    CHECK_THROWS_AS(stats::weighted_mean({{1, 2}, {0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(stats::weighted_mean({{1, 2}, {1}}), std::invalid_argument);

    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto vs = random_values(rng, 20, -5, 5);
        stats::WeightedSample s{vs, std::vector<double>(20, 2.5)};
        CHECK(stats::weighted_mean(s) == Catch::Approx(stats::mean(vs)).margin(1e-12));
    }
}

TEST_CASE("harmonic mean") {
    CHECK(stats::harmonic_mean(std::vector<double>{3, 3, 3}) == Catch::Approx(3.0));
    CHECK(stats::harmonic_mean(std::vector<double>{2, 4}) == Catch::Approx(8.0 / 3.0));
    CHECK_THROWS_AS(stats::harmonic_mean(std::vector<double>{1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(stats::harmonic_mean(std::vector<double>{1, -2}), std::invalid_argument);
    CHECK_THROWS_AS(stats::harmonic_mean(std::vector<double>{}), std::invalid_argument);

    // AM-HM inequality, equality only for constant input
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto vs = random_values(rng, 12, 0.1, 50);
        double hm = stats::harmonic_mean(vs);
        double am = stats::mean(vs);
        CHECK(hm <= am + 1e-12);
        bool constant = std::all_of(vs.begin(), vs.end(), [&](double v) { return v == vs[0]; });
        if (!constant) CHECK(hm < am);
    }
}

TEST_CASE("median") {
    CHECK(stats::median({1, 2, 4}) == 2.0);
    CHECK(stats::median({1, 2, 4, 10}) == 3.0);
    CHECK_THROWS_AS(stats::median({}), std::invalid_argument);

    std::mt19937 rng(3);
    for (int i = 0; i < 100; ++i) {
        auto vs = random_values(rng, 1 + static_cast<std::size_t>(rng() % 40), -100, 100);
        CHECK(stats::median(vs) == oracle_median(vs));
    }
    auto big = random_values(rng, 1000, -1e6, 1e6);
    CHECK(stats::median(big) == oracle_median(big));
}

TEST_CASE("percentile") {
    std::vector<double> xs{10, 20, 30, 40};
    CHECK(stats::percentile(xs, 0.25) == Catch::Approx(17.5));
    CHECK(stats::percentile(xs, 0.0) == 10.0);
    CHECK(stats::percentile(xs, 1.0) == 40.0);
    CHECK(stats::percentile({5, 1, 9}, 0.5) == stats::median({5, 1, 9}));
    CHECK(stats::percentile(xs, 0.25, stats::PercentileMethod::nearest_rank) == 10.0);
    CHECK(stats::percentile(xs, 0.5, stats::PercentileMethod::nearest_rank) == 20.0);
    CHECK_THROWS_AS(stats::percentile({}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(stats::percentile(xs, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(stats::percentile(xs, -0.1), std::invalid_argument);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> pd(0, 1);
    for (int i = 0; i < 200; ++i) {
        auto vs = random_values(rng, 2 + static_cast<std::size_t>(rng() % 30), -50, 50);
        double p = pd(rng);
        CHECK(stats::percentile(vs, p) ==
              Catch::Approx(oracle_percentile_linear(vs, p)).margin(1e-12));
    }

    // monotone non-decreasing in p
    auto vs = random_values(rng, 25, -10, 10);
    double prev = stats::percentile(vs, 0.0);
    for (double p = 0.05; p <= 1.0; p += 0.05) {
        double cur = stats::percentile(vs, p);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
}

TEST_CASE("pearson") {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> neg{-1, -2, -3, -4, -5};
    CHECK(stats::pearson(x, x) == Catch::Approx(1.0));
    CHECK(stats::pearson(x, neg) == Catch::Approx(-1.0));
    CHECK_THROWS_AS(stats::pearson(x, std::vector<double>{1, 1, 1, 1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(stats::pearson(std::vector<double>{1}, std::vector<double>{2}),
                    std::invalid_argument);

    std::mt19937 rng(13);
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = 5 + static_cast<std::size_t>(rng() % 60);
        auto a = random_values(rng, n, -10, 10);
        auto b = random_values(rng, n, -10, 10);
        double got = stats::pearson(a, b);
        double want = oracle_pearson(a, b);
        CHECK(std::abs(got - want) < 1e-12);

        // symmetry and affine invariance
        CHECK(stats::pearson(b, a) == Catch::Approx(got).margin(1e-12));
        std::vector<double> a2(a);
        for (auto& v : a2) v = 3.5 * v + 2.0;
        CHECK(stats::pearson(a2, b) == Catch::Approx(got).margin(1e-9));
    }
}

TEST_CASE("spearman") {
    std::vector<double> x{1, 2, 3, 4, 5, 6};
    std::vector<double> fx;
    for (double v : x) fx.push_back(v * v * v + 2.0);  // strictly monotone
    CHECK(stats::spearman(x, fx) == Catch::Approx(1.0));

    std::vector<double> rev(x.rbegin(), x.rend());
    CHECK(stats::spearman(x, rev) == Catch::Approx(-1.0));

    auto ranks = stats::average_ranks(std::vector<double>{1, 2, 2, 4});
    CHECK(ranks == std::vector<double>{1.0, 2.5, 2.5, 4.0});

    CHECK_THROWS_AS(stats::spearman(std::vector<double>{1, 1, 1},
                                    std::vector<double>{2, 3, 4}),
                    std::invalid_argument);

    std::mt19937 rng(17);
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = 5 + static_cast<std::size_t>(rng() % 40);
        auto a = random_values(rng, n, -10, 10);
        auto b = random_values(rng, n, -10, 10);
        double got = stats::spearman(a, b);
        CHECK(std::abs(got - oracle_spearman(a, b)) < 1e-12);

        // invariance under strictly increasing transform
        std::vector<double> a2(a);
        for (auto& v : a2) v = std::exp(v / 10.0);
        CHECK(stats::spearman(a2, b) == Catch::Approx(got).margin(1e-12));
    }
}

TEST_CASE("diff percentage") {
    CHECK(round1(stats::diff_pct(4259574, 4460165)) == -4.5);
    CHECK(round1(stats::diff_pct(8371042, 9024382)) == -7.2);
    CHECK(stats::diff_pct(5, 5) == 0.0);
    CHECK_THROWS_AS(stats::diff_pct(1, 0), std::invalid_argument);
}

TEST_CASE("population stddev") {
    CHECK(stats::population_stddev(std::vector<double>{2, 2, 2}) == 0.0);
    CHECK(stats::population_stddev(std::vector<double>{1, 3}) == Catch::Approx(1.0));
}
