#include "oracles.hpp"

#include <blc/convolution.hpp>
#include <blc/isoperimetry.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace blc;

namespace {

GridDensity make(const DistributionSpec& s, std::size_t n = 2048) {
    MaterializeOptions o;
    o.n_points = n;
    return materialize(s, o);
}

GaussianMixture pair(double a, double sd = 1.0) { return {{0.5, 0.5}, {-a, a}, {sd, sd}}; }

double min_cov(const ConvolutionCriterionReport& r) { return std::min(r.min_lower, r.min_upper); }

}  // namespace

TEST(Convolve, GaussianClosure) {
    const auto g = make(Gaussian{0, 1});
    const auto sum = convolve(g, g);
    const auto law = oracle::normal(0, std::sqrt(2.0));
    double err = 0.0;
    for (std::size_t k = 0; k < sum.size(); ++k) err = std::max(err, std::abs(sum.fs[k] - law.pdf(sum.xs[k])));
    EXPECT_LE(err, 1e-5);
    EXPECT_NEAR(sum.lo(), 2 * g.lo(), 1e-12);
    EXPECT_NEAR(sum.hi(), 2 * g.hi(), 1e-12);
}

TEST(Convolve, MixtureWithGaussian) {
    for (double sigma : {0.5, 1.0}) {
        const auto sum = convolve(make(pair(1.34)), make(Gaussian{0, sigma}));
        const auto law = oracle::symmetric_pair(1.34, std::sqrt(1 + sigma * sigma));
        double err = 0.0;
        for (std::size_t k = 0; k < sum.size(); ++k) err = std::max(err, std::abs(sum.fs[k] - law.pdf(sum.xs[k])));
        EXPECT_LE(err, 1e-5) << sigma;
    }
}

TEST(Convolve, UniformTriangle) {
    const auto u = make(Uniform{0, 1});
    const auto sum = convolve(u, u);
    EXPECT_NEAR(sum.lo(), 0.0, 1e-12);
    EXPECT_NEAR(sum.hi(), 2.0, 1e-12);
    EXPECT_NEAR(density_at(sum, 1.0), 1.0, 2e-3);
    double err = 0.0;
    for (std::size_t k = 0; k < sum.size(); ++k) err = std::max(err, std::abs(sum.fs[k] - (1 - std::abs(sum.xs[k] - 1))));
    EXPECT_LE(err, 2e-3);
    EXPECT_NEAR(cdf_at(sum, 0.5), 0.125, 1e-5);
}

TEST(Convolve, DistributionFunctionConsistency) {
    const std::vector<std::tuple<DistributionSpec, DistributionSpec, oracle::Law, oracle::Law>> cases{
        {pair(1.34), Laplace{0, 1}, oracle::symmetric_pair(1.34), oracle::laplace(0, 1)},
        {Logistic{0, 1}, Gaussian{0, 0.5}, oracle::logistic(0, 1), oracle::normal(0, 0.5)},
        {pair(2.0), pair(2.0), oracle::symmetric_pair(2.0), oracle::symmetric_pair(2.0)}};
    for (const auto& [sx, sy, lx, ly] : cases) {
        const auto sum = convolve(make(sx), make(sy));
        double errF = 0.0, errS = 0.0;
        for (int i = 1; i <= 50; ++i) {
            const double z = quantile(sum, i / 51.0);
            errF = std::max(errF, std::abs(cdf_at(sum, z) - oracle::convolution_cdf(lx, ly, z)));
            errS = std::max(errS, std::abs(sf_at(sum, z) - oracle::convolution_sf(lx, ly, z)));
        }
        EXPECT_LE(errF, 1e-5);
        EXPECT_LE(errS, 1e-5);
    }
}

TEST(Convolve, DegenerateInput) {
    GridDensity empty;
    EXPECT_THROW(convolve(empty, make(Gaussian{0, 1})), Error);
}

TEST(WeightedMeasure, Examples) {
    const auto g = make(Gaussian{0, 1});
    const auto m = weighted_measure(g, g, 0.0, Tail::Lower);
    EXPECT_NEAR(m.normalizer, 0.5, 1e-5);
    const auto w = trapezoid_weights(m.ys);
    double q = 0.0;
    for (std::size_t k = 0; k < m.ys.size(); ++k) q += w[k] * m.weights[k];
    EXPECT_NEAR(q, 1.0, 1e-5);

    const auto far = weighted_measure(g, g, 6.0, Tail::Lower);
    double err = 0.0;
    for (std::size_t k = 0; k < far.ys.size(); ++k) err = std::max(err, std::abs(far.weights[k] - g.fs[k]));
    EXPECT_LE(err, 1e-5);

    const auto x = make(pair(1.34));
    const auto lo = weighted_measure(x, x, 0.0, Tail::Lower);
    const auto up = weighted_measure(x, x, 0.0, Tail::Upper);
    const std::size_t n = lo.ys.size();
    for (std::size_t k = 0; k < n; k += 37) EXPECT_NEAR(lo.weights[k], up.weights[n - 1 - k], 1e-7);

    EXPECT_THROW(weighted_measure(g, g, 40.0, Tail::Lower), Error);
}

TEST(WeightedMeasure, NormalizerMatchesConvolution) {
    const auto x = make(pair(1.34));
    const auto y = make(Logistic{0, 1});
    const auto sum = convolve(x, y);
    for (double z : {-3.0, -0.5, 1.0, 2.5}) {
        EXPECT_NEAR(weighted_measure(x, y, z, Tail::Lower).normalizer, cdf_at(sum, z), 1e-5);
        EXPECT_NEAR(weighted_measure(x, y, z, Tail::Upper).normalizer, sf_at(sum, z), 1e-5);
    }
}

TEST(Criterion, Examples) {
    const auto x = make(pair(1.34));
    const auto n01 = make(Gaussian{0, 1});
    const auto a = covariance_criterion(x, n01, default_criterion_anchors(convolve(x, n01)));
    EXPECT_EQ(a.verdict, Verdict::Stable);
    EXPECT_EQ(a.xs.size(), 41u);
    EXPECT_GE(a.min_lower, 0.0);
    EXPECT_GE(a.min_upper, 0.0);

    const auto self = covariance_criterion(x, x, default_criterion_anchors(convolve(x, x)));
    EXPECT_EQ(self.verdict, Verdict::Stable);

    const auto gg = covariance_criterion(n01, n01, default_criterion_anchors(convolve(n01, n01)));
    for (std::size_t k = 0; k < gg.xs.size(); ++k) {
        EXPECT_GE(gg.cov_lower[k], 0.0);
        EXPECT_GE(gg.cov_upper[k], 0.0);
    }
}

TEST(Criterion, CovarianceEqualsLogConcavityDefect) {
    // cov_lower(x) = -(log F_{X+Y})''(x) from the oracle's second differences.
    const auto lx = oracle::symmetric_pair(1.34), ly = oracle::logistic(0, 1);
    const auto rep = covariance_criterion(make(pair(1.34)), make(Logistic{0, 1}), std::vector<double>{-1.0, 0.0, 1.5});
    const double h = 1e-2;
    for (std::size_t k = 0; k < rep.xs.size(); ++k) {
        const double z = rep.xs[k];
        auto lF = [&](double t) { return std::log(oracle::convolution_cdf(lx, ly, t)); };
        auto lS = [&](double t) { return std::log(oracle::convolution_sf(lx, ly, t)); };
        const double dF = -(lF(z + h) - 2 * lF(z) + lF(z - h)) / (h * h);
        const double dS = -(lS(z + h) - 2 * lS(z) + lS(z - h)) / (h * h);
        EXPECT_NEAR(rep.cov_lower[k], dF, 1e-4);
        EXPECT_NEAR(rep.cov_upper[k], dS, 1e-4);
    }
}

TEST(Criterion, SkipsAnchorsOutsideSupport) {
    const auto g = make(Gaussian{0, 1});
    const auto rep = covariance_criterion(g, g, std::vector<double>{-100.0, 0.0, 100.0});
    EXPECT_EQ(rep.xs.size(), 1u);
    EXPECT_EQ(rep.skipped.size(), 2u);
    const auto none = covariance_criterion(g, g, std::vector<double>{100.0});
    EXPECT_EQ(none.verdict, Verdict::Inconclusive);
}

TEST(Criterion, LogConcaveYEveryAnchor) {
    for (const DistributionSpec& sx : {DistributionSpec{pair(1.34)}, DistributionSpec{pair(1.0)},
                                       DistributionSpec{Logistic{0, 1}}}) {
        for (const DistributionSpec& sy : {DistributionSpec{Gaussian{0, 1}}, DistributionSpec{Laplace{0, 1}},
                                           DistributionSpec{Logistic{0, 1}}}) {
            const auto gx = make(sx), gy = make(sy);
            const auto rep = covariance_criterion(gx, gy, default_criterion_anchors(convolve(gx, gy)));
            for (std::size_t k = 0; k < rep.xs.size(); ++k) {
                EXPECT_GE(rep.cov_lower[k], -1e-6) << family_name(sx) << "*" << family_name(sy);
                EXPECT_GE(rep.cov_upper[k], -1e-6) << family_name(sx) << "*" << family_name(sy);
            }
        }
    }
}

TEST(Criterion, BiconditionalOnTestPairs) {
    // Both directions, including pairs whose inputs fail BLC.
    const std::vector<std::pair<DistributionSpec, DistributionSpec>> pairs{
        {pair(1.34), pair(1.34)}, {pair(1.34), Laplace{0, 1}}, {Gaussian{0, 1}, Gaussian{0, 1}},
        {pair(2.0), pair(2.0)},   {pair(3.0), Gaussian{0, 0.3}}, {pair(1.0), pair(1.0)},
        {pair(2.5), pair(2.5)}};
    for (const auto& [sx, sy] : pairs) {
        const auto gx = make(sx), gy = make(sy);
        const auto sum = convolve(gx, gy);
        const auto rep = covariance_criterion(gx, gy, default_criterion_anchors(sum));
        const auto cert = certify_blc(sum);
        EXPECT_EQ(rep.verdict == Verdict::Stable, cert.certified()) << "min cov " << min_cov(rep);
    }
}

TEST(Consistency, Examples) {
    const std::vector<std::pair<DistributionSpec, DistributionSpec>> pairs{
        {pair(1.34), pair(1.34)}, {pair(1.34), Laplace{0, 1}}, {Gaussian{0, 1}, Gaussian{0, 1}}};
    for (const auto& [sx, sy] : pairs) {
        const auto c = check_convolution_blc_consistency(make(sx), make(sy), {});
        EXPECT_TRUE(c.certified()) << c.detail;
    }
    EXPECT_THROW(check_convolution_blc_consistency(make(pair(3.0)), make(Gaussian{0, 1}), {}), Error);
}

TEST(IntegrationByParts, GaussianStein) {
    const auto g = make(Gaussian{0, 1});
    const auto lin = integration_by_parts_check(g, sample_on_grid(g, [](double x) { return x; }));
    EXPECT_NEAR(lin.lhs, 1.0, 1e-6);
    EXPECT_NEAR(lin.rhs, 1.0, 1e-6);
    const auto sq = integration_by_parts_check(g, sample_on_grid(g, [](double x) { return x * x; }));
    EXPECT_NEAR(sq.lhs, 0.0, 1e-6);
    EXPECT_NEAR(sq.rhs, 0.0, 1e-6);
}

TEST(IntegrationByParts, LogisticTanhAgainstOracle) {
    const auto g = make(Logistic{0, 1});
    const auto r = integration_by_parts_check(g, sample_on_grid(g, [](double x) { return std::tanh(x); }));
    const auto law = oracle::logistic(0, 1);
    const double expect = oracle::integrate([&](double x) { return law.pdf(x) / std::pow(std::cosh(x), 2); }, -60, 60);
    EXPECT_NEAR(r.lhs, expect, 1e-4);
    EXPECT_NEAR(r.rhs, expect, 1e-4);
}

TEST(IntegrationByParts, Preconditions) {
    std::vector<double> xs, fs;
    for (int i = 0; i <= 300; ++i) {
        xs.push_back(i * 0.01);
        fs.push_back((xs.back() <= 1 || xs.back() >= 2) ? 0.5 : 0.0);
    }
    const auto tb = materialize(GridSpec{xs, fs});
    EXPECT_THROW(integration_by_parts_check(tb, sample_on_grid(tb, [](double x) { return x; })), Error);
    const auto u = make(Uniform{0, 1});
    EXPECT_THROW(integration_by_parts_check(u, sample_on_grid(u, [](double x) { return x; })), Error);
    const auto g = make(Gaussian{0, 1});
    EXPECT_THROW(integration_by_parts_check(g, std::vector<double>(3, 0.0)), Error);
}

TEST(Smooth, MixtureSequence) {
    const std::vector<double> sigmas{1.0, 0.5, 0.25, 0.1};
    const std::vector<LpNorm> norms{LpNorm::L1, LpNorm::L2, LpNorm::Linf};
    const auto seq = smooth_sequence(make(pair(1.34)), sigmas, norms);
    ASSERT_EQ(seq.steps.size(), 4u);
    for (const auto& s : seq.steps) EXPECT_TRUE(s.certificate.certified()) << s.sigma;
    EXPECT_TRUE(seq.distances_monotone);
    EXPECT_LT(seq.steps.back().distances.at("L1"), 0.05);
}

TEST(Smooth, LaplaceLinf) {
    const std::vector<double> sigmas{0.5, 0.1};
    const std::vector<LpNorm> norms{LpNorm::Linf};
    const auto seq = smooth_sequence(make(Laplace{0, 1}), sigmas, norms);
    EXPECT_LT(seq.steps[1].distances.at("Linf"), seq.steps[0].distances.at("Linf"));
}

TEST(Smooth, Preconditions) {
    const std::vector<LpNorm> norms{LpNorm::L1};
    EXPECT_THROW(smooth_sequence(make(Gaussian{0, 1}), std::vector<double>{0.1, 0.5}, norms), Error);
    EXPECT_THROW(smooth_sequence(make(Gaussian{0, 1}), std::vector<double>{-1.0}, norms), Error);
    EXPECT_THROW(smooth_sequence(make(pair(3.0)), std::vector<double>{0.5}, norms), Error);
}

TEST(Csv, CriterionReport) {
    const auto g = make(Gaussian{0, 1});
    std::ostringstream out;
    write_csv(covariance_criterion(g, g, std::vector<double>{0.0}), out);
    EXPECT_EQ(out.str().substr(0, 21), "x,cov_lower,cov_upper");
}
