// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "oracles.hpp"

#include <blc/convolution.hpp>
#include <blc/isoperimetry.hpp>
#include <blc/multivariate.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

using namespace blc;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note << " [failed: " << what << "]";
        }
    }
};

GridDensity make(const DistributionSpec& s, std::size_t n = 2048) {
    MaterializeOptions o;
    o.n_points = n;
    return materialize(s, o);
}

GaussianMixture pair(double a, double sd = 1.0) { return {{0.5, 0.5}, {-a, a}, {sd, sd}}; }

struct Case {
    DistributionSpec spec;
    std::optional<oracle::Law> law;
};

// Ten BLC measures: the three classical laws, three mixtures, four affine variants.
std::vector<Case> blc_corpus() {
    return {{Gaussian{0, 1}, oracle::normal(0, 1)},
            {Logistic{0, 1}, oracle::logistic(0, 1)},
            {Laplace{0, 1}, oracle::laplace(0, 1)},
            {pair(0.5), oracle::symmetric_pair(0.5)},
            {pair(1.0), oracle::symmetric_pair(1.0)},
            {pair(1.34), oracle::symmetric_pair(1.34)},
            {Gaussian{2, 3}, oracle::normal(2, 3)},
            {Logistic{-1, 0.5}, oracle::logistic(-1, 0.5)},
            {Laplace{3, 2}, oracle::laplace(3, 2)},
            {affine_image(pair(1.34), 2.0, 1.0), oracle::mixture({0.5, 0.5}, {1.0 - 2.68, 1.0 + 2.68}, {2.0, 2.0})}};
}

GridSpec two_bump() {
    GridSpec tb;
    for (int i = 0; i <= 3000; ++i) {
        const double x = i * 0.001;
        tb.abscissas.push_back(x);
        tb.density_values.push_back((x <= 1.0 || x >= 2.0) ? 0.5 : 0.0);
    }
    return tb;
}

double min_cov(const ConvolutionCriterionReport& r) { return std::min(r.min_lower, r.min_upper); }

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

Eigen::MatrixXd eye(int d) { return Eigen::MatrixXd::Identity(d, d); }

SymmetricMixtureNd pair2(double a) { return SymmetricMixtureNd::pair(vec({a, 0.0}), eye(2)); }

// --- criteria -------------------------------------------------------------

void logistic_profile(Outcome& o) {
    const auto ps = probability_grid(0.01, 0.99, 99);
    const auto prof = iso_profile(make(Logistic{0, 1}, 4096), ps);
    double err = 0.0;
    for (std::size_t k = 0; k < ps.size(); ++k) err = std::max(err, std::abs(prof.values[k] - ps[k] * (1 - ps[k])));
    o.note << "max|I(p) - p(1-p)| = " << err;
    o.require(err <= 1e-5, "error <= 1e-5");
}

void laplace_profile(Outcome& o) {
    const auto ps = probability_grid(0.01, 0.99, 99);
    const auto g = make(Laplace{0, 1}, 4096);
    const auto prof = iso_profile(g, ps);
    double err = 0.0;
    for (std::size_t k = 0; k < ps.size(); ++k)
        err = std::max(err, std::abs(prof.values[k] - std::min(ps[k], 1 - ps[k])));
    const double bh = bobkov_houdre_constant(g), is = blc_isoperimetric_constant(g);
    o.note << "max|I(p) - min(p,1-p)| = " << err << ", ess-inf Is = " << bh << ", 2f(m) = " << is;
    o.require(err <= 1e-5, "error <= 1e-5");
    o.require(std::abs(bh - 1.0) <= 1e-3, "ess-inf Is = 1 +- 1e-3");
    o.require(std::abs(is - 1.0) <= 1e-3, "2f(m) = 1 +- 1e-3");
}

void iso_agreement(Outcome& o) {
    double worst = 0.0, worst_oracle = 0.0;
    int count = 0;
    for (const auto& c : blc_corpus()) {
        const auto g = make(c.spec);
        if (!certify_blc(g).certified()) {
            o.require(false, family_name(c.spec) + " certified");
            continue;
        }
        ++count;
        const double is = blc_isoperimetric_constant(g), bh = bobkov_houdre_constant(g);
        worst = std::max(worst, std::abs(is - bh) / is);
        const double m = oracle::quantile(*c.law, 0.5);
        worst_oracle = std::max(worst_oracle, std::abs(is - 2 * c.law->pdf(m)) / is);
    }
    o.note << count << " measures, max rel |2f(m) - ess-inf| = " << worst << ", max rel |2f(m) - oracle| = "
           << worst_oracle;
    o.require(count == 10, "10 certified measures");
    o.require(worst <= 1e-3, "relative gap <= 1e-3");
    o.require(worst_oracle <= 1e-3, "oracle 2f(m) within 1e-3");
}

void equivalence(Outcome& o) {
    std::vector<DistributionSpec> corpus;
    for (const auto& c : blc_corpus()) corpus.push_back(c.spec);
    for (const DistributionSpec& s : {DistributionSpec{pair(1.5)}, DistributionSpec{pair(2.0)},
                                      DistributionSpec{pair(3.0)}, DistributionSpec{Uniform{0, 1}},
                                      DistributionSpec{GaussianMixture{{0.3, 0.7}, {-1, 1}, {0.8, 1.2}}},
                                      DistributionSpec{two_bump()}})
        corpus.push_back(s);
    int certified = 0, violated = 0;
    auto only = [](Condition c) {
        CertifyOptions opts;
        opts.check_set = {c};
        return opts;
    };
    for (const auto& s : corpus) {
        const auto g = make(s);
        const auto e = certify_blc(g, only(Condition::Envelope)).status;
        const auto h = certify_blc(g, only(Condition::Hazards)).status;
        const auto d = certify_blc(g, only(Condition::Sandwich)).status;
        o.require(e == h && h == d, family_name(s) + " conditions agree");
        o.require(e != Status::Inconclusive, family_name(s) + " decided");
        certified += e == Status::Certified;
        violated += e == Status::Violated;
    }
    const auto m3 = certify_blc(make(pair(3.0))).status;
    const auto tb = certify_blc(materialize(two_bump())).status;
    o.note << corpus.size() << " measures, " << certified << " certified, " << violated << " violated";
    o.require(m3 == Status::Violated, "mixture(+-3) refuted");
    o.require(tb == Status::Violated, "two-bump refuted");
}

void convolution_stability(Outcome& o) {
    int certified = 0;
    double worst = INFINITY;
    for (double a : {0.5, 1.0, 1.34}) {
        const auto gx = make(pair(a));
        o.require(certify_blc(gx).certified(), "X BLC");
        for (const DistributionSpec& sy : {DistributionSpec{Gaussian{0, 1}}, DistributionSpec{Gaussian{0, 0.5}},
                                           DistributionSpec{Laplace{0, 1}}, DistributionSpec{Logistic{0, 1}}}) {
            const auto gy = make(sy);
            o.require(check_log_concave(gy).certified(), family_name(sy) + " log-concave");
            const auto cert = certify_blc(convolve(gx, gy));
            worst = std::min(worst, cert.slack);
            if (cert.certified())
                ++certified;
            else
                o.require(false, "mixture(" + std::to_string(a) + ") * " + family_name(sy));
        }
    }
    o.note << certified << "/12 sums certified, min slack " << worst;
}

void criterion_biconditional(Outcome& o) {
    const auto x = make(pair(1.34));
    const auto sum = convolve(x, x);
    const auto rep = covariance_criterion(x, x, default_criterion_anchors(sum));
    const auto cert = certify_blc(sum);
    o.note << "self mixture(+-1.34): min cov " << min_cov(rep) << " (" << to_string(rep.verdict) << "), certificate "
           << to_string(cert.status);
    o.require(rep.verdict == Verdict::Stable, "criterion Stable");
    o.require(min_cov(rep) >= -1e-6, "min covariance >= -1e-6");
    o.require(cert.certified(), "self-convolution certified");

    // Separation scan for a pair where both routes fail.
    std::optional<double> found;
    for (int i = 0; i <= 32 && !found; ++i) {
        const double a = 1.4 + 0.05 * i;
        const auto g = make(pair(a));
        const auto s = convolve(g, g);
        const auto r = covariance_criterion(g, g, default_criterion_anchors(s));
        if (r.verdict == Verdict::Unstable && certify_blc(s).violated()) {
            found = a;
            o.note << "; refuting pair X = Y = mixture(+-" << a << "): min cov " << min_cov(r);
        }
    }
    o.require(found.has_value(), "refuting pair found in separations [1.4, 3.0]");
}

void integration_by_parts(Outcome& o) {
    struct Fn {
        const char* name;
        std::function<double(double)> g, dg;
    };
    const std::vector<Fn> fns{{"x", [](double x) { return x; }, [](double) { return 1.0; }},
                              {"x^2", [](double x) { return x * x; }, [](double x) { return 2 * x; }},
                              {"tanh", [](double x) { return std::tanh(x); },
                               [](double x) { return 1.0 / (std::cosh(x) * std::cosh(x)); }},
                              {"sin", [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }}};
    const std::vector<Case> measures{{Gaussian{0, 1}, oracle::normal(0, 1)},
                                     {Logistic{0, 1}, oracle::logistic(0, 1)},
                                     {pair(1.34), oracle::symmetric_pair(1.34)}};
    double worst = 0.0, worst_oracle = 0.0;
    for (const auto& m : measures) {
        const auto g = make(m.spec);
        for (const auto& f : fns) {
            const auto r = integration_by_parts_check(g, sample_on_grid(g, f.g));
            worst = std::max(worst, std::abs(r.lhs - r.rhs) / (1 + std::abs(r.lhs)));
            const auto& law = *m.law;
            const double expect = oracle::integrate([&](double x) { return law.pdf(x) * f.dg(x); }, law.lo, law.hi, 64);
            worst_oracle = std::max(worst_oracle, std::abs(r.lhs - expect) / (1 + std::abs(expect)));
        }
    }
    const auto n01 = make(Gaussian{0, 1});
    const auto lin = integration_by_parts_check(n01, sample_on_grid(n01, fns[0].g));
    const auto sq = integration_by_parts_check(n01, sample_on_grid(n01, fns[1].g));
    o.note << "max |lhs - rhs| / (1 + |lhs|) = " << worst << ", vs oracle " << worst_oracle << "; Stein x: " << lin.lhs
           << " / " << lin.rhs << ", x^2: " << sq.lhs << " / " << sq.rhs;
    o.require(worst <= 1e-4, "identity within 1e-4 (1 + |lhs|)");
    o.require(worst_oracle <= 1e-4, "lhs matches oracle");
    o.require(std::abs(lin.lhs - 1) <= 1e-4 && std::abs(lin.rhs - 1) <= 1e-4, "Stein lhs = rhs = 1");
    o.require(std::abs(sq.lhs) <= 1e-4 && std::abs(sq.rhs) <= 1e-4, "Stein lhs = rhs = 0");
}

void concentration_and_poincare(Outcome& o) {
    std::vector<double> rs;
    for (int i = 1; i <= 12; ++i) rs.push_back(0.5 * i);
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(0.2, 3.0), phase(0.0, 6.283185307179586);
    double min_gap = INFINITY, min_margin = INFINITY;
    int measures = 0;
    auto cases = blc_corpus();
    cases.push_back({Uniform{0, 1}, std::nullopt});
    for (const auto& c : cases) {
        const auto g = make(c.spec);
        if (!certify_blc(g).certified()) continue;
        ++measures;
        const auto rep = concentration_check(g, rs);
        o.require(rep.all_within(), family_name(c.spec) + " tails within bound");
        for (std::size_t k = 0; k < rs.size(); ++k) {
            double tail = rep.empirical[k];
            if (c.law) {
                const double m = oracle::quantile(*c.law, 0.5);
                tail = std::max(c.law->sf(m + rs[k]), c.law->cdf(m - rs[k]));
            }
            min_gap = std::min(min_gap, rep.bound[k] - tail);
        }
        const double pc = poincare_constant(g);
        const double sd = moments(g).sd;
        for (int t = 0; t < 20; ++t) {
            const double a1 = amp(rng), a2 = amp(rng), w1 = freq(rng) / sd, w2 = freq(rng) / sd, p1 = phase(rng),
                         p2 = phase(rng), kink = amp(rng) * sd;
            auto h = [&](double x) {
                return a1 * std::sin(w1 * x + p1) + a2 * std::tanh(w2 * (x - kink) + p2) + 0.1 * a1 * x;
            };
            const auto v = variance_functional(g, sample_on_grid(g, h));
            min_margin = std::min(min_margin, v.dirichlet - pc * v.variance);
        }
    }
    o.note << measures << " measures; min(bound - oracle tail) = " << min_gap << ", min Poincare margin = " << min_margin;
    o.require(measures == 11, "11 certified measures");
    o.require(min_gap >= 0.0, "oracle tails within exp(-r f(m)/3)");
    o.require(min_margin >= 0.0, "Poincare margin >= 0");
}

void smoothing(Outcome& o) {
    const std::vector<double> sigmas{1.0, 0.5, 0.25, 0.1};
    const std::vector<LpNorm> norms{LpNorm::L1};
    const auto seq = smooth_sequence(make(pair(1.34)), sigmas, norms);
    const auto base = oracle::symmetric_pair(1.34);
    o.note << "L1:";
    double prev_oracle = INFINITY;
    for (const auto& s : seq.steps) {
        o.require(s.certificate.certified(), "sigma " + std::to_string(s.sigma) + " certified");
        const auto smooth = oracle::symmetric_pair(1.34, std::sqrt(1.0 + s.sigma * s.sigma));
        const double l1 = oracle::integrate([&](double x) { return std::abs(smooth.pdf(x) - base.pdf(x)); }, -30, 30, 64);
        o.note << " " << s.distances.at("L1") << " (oracle " << l1 << ")";
        o.require(l1 < prev_oracle, "oracle L1 decreasing");
        prev_oracle = l1;
    }
    o.require(seq.distances_monotone, "L1 monotone");
    o.require(seq.steps.back().distances.at("L1") < 0.05, "final L1 < 0.05");
    o.require(prev_oracle < 0.05, "oracle final L1 < 0.05");
}

void multivariate(Outcome& o) {
    const auto ps = probability_grid(0.01, 0.99, 99);
    for (int d : {2, 3}) {
        const auto g = SymmetricMixtureNd::gaussian(eye(d));
        o.require(weak_star_check(g, 64).verdict == Status::Certified, std::to_string(d) + "-D Gaussian weak-*");
        o.require(weak_blc_check_nd(g, ps, 64).certified(), std::to_string(d) + "-D Gaussian weak");
    }
    o.require(weak_star_check(pair2(1.34), 64).verdict == Status::Certified, "mixture(+-1.34 e1) weak-*");
    o.require(weak_blc_check_nd(pair2(1.34), ps, 64).certified(), "mixture(+-1.34 e1) weak");
    const auto bad = weak_star_check(pair2(3.0), 64);
    const double angle = std::acos(std::min(1.0, std::abs(bad.worst_direction[0]))) * 180.0 / std::numbers::pi;
    o.note << "(a,b) mixture(+-3 e1) " << to_string(bad.verdict) << ", worst direction " << angle << " deg from e1";
    o.require(bad.verdict == Status::Violated, "mixture(+-3 e1) fails");
    o.require(angle <= 5.0, "worst direction within 5 deg of e1");

    const std::vector<SymmetricMixtureNd> scans{
        pair2(0.5), pair2(1.0), pair2(1.34), pair2(2.0), pair2(3.0), SymmetricMixtureNd::gaussian(eye(2)),
        SymmetricMixtureNd::gaussian(eye(3)),
        SymmetricMixtureNd({{0.5, vec({1.0, 0.8}), eye(2)}, {0.5, vec({-1.0, -0.8}), eye(2)}}),
        SymmetricMixtureNd({{0.3, vec({1.0, -0.5, 0.5}), eye(3)},
                            {0.3, vec({-1.0, 0.5, -0.5}), eye(3)},
                            {0.4, vec({0.0, 0.0, 0.0}), 2 * eye(3)}})};
    int implied = 0, certified_scans = 0;
    for (const auto& m : scans) {
        if (weak_star_check(m, 64).verdict != Status::Certified) continue;
        ++certified_scans;
        if (weak_blc_check_nd(m, ps, 64).certified())
            ++implied;
        else
            o.require(false, "weak-* implies weak");
    }
    o.note << "; (c) weak holds on " << implied << "/" << certified_scans << " certified scans";

    const auto m1 = pair2(1.34);
    const SymmetricMixtureNd m2({{0.5, vec({0.3, 1.0}), 0.5 * eye(2)}, {0.5, vec({-0.3, -1.0}), 0.5 * eye(2)}});
    const auto joint = convolve_nd(m1, m2);
    double err = 0.0;
    for (const auto& u : direction_set(2, 16)) {
        const auto direct = project_to_line(joint, u);
        const auto numeric = convolve(project_to_line(m1, u), project_to_line(m2, u));
        for (std::size_t k = 0; k < numeric.size(); ++k)
            err = std::max(err, std::abs(numeric.fs[k] - density_at(direct, numeric.xs[k])));
    }
    o.note << "; (d) projection-convolution sup error " << err;
    o.require(err <= 1e-5, "commutation within 1e-5");
}

struct Criterion {
    int id;
    const char* title;
    double budget_s;  // 0 when no runtime bound applies
    void (*run)(Outcome&);
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "logistic profile p(1-p)", 1.0, logistic_profile},
        {2, "laplace profile min(p,1-p) and Is = 1", 0.0, laplace_profile},
        {3, "Is = 2f(m) agrees with ess-inf formula", 10.0, iso_agreement},
        {4, "envelope, hazard and sandwich conditions agree", 0.0, equivalence},
        {5, "BLC * log-concave is BLC", 60.0, convolution_stability},
        {6, "covariance criterion matches certificate", 0.0, criterion_biconditional},
        {7, "integration by parts identity", 0.0, integration_by_parts},
        {8, "concentration and Poincare bounds", 0.0, concentration_and_poincare},
        {9, "Gaussian smoothing approximation", 0.0, smoothing},
        {10, "multivariate weak and weak-* checks", 120.0, multivariate},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0) o.require(secs < c.budget_s, "runtime < " + std::to_string(c.budget_s) + " s");
        failures += !o.pass;
        std::printf("criterion %2d %s: %s (%.2f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, secs,
                    o.note.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
