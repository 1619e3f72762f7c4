#pragma once

#include <blc/certify.hpp>
#include <blc/grid_density.hpp>
#include <blc/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace blc {

/// Density of X + Y for independent X ~ gX, Y ~ gY by direct quadrature over
/// gY's nodes:
///   f(z) = int f_X(z - y) f_Y(y) dy,
///   F(z) = int F_X(z - y) f_Y(y) dy,  1 - F(z) = int (1 - F_X)(z - y) f_Y(y) dy.
/// The output grid is uniform over the Minkowski sum of the two grid hulls
/// at resolution max(nX, nY).
inline GridDensity convolve(const GridDensity& gX, const GridDensity& gY) {
    detail::require_non_degenerate(gX);
    detail::require_non_degenerate(gY);
    const std::size_t n = std::max(gX.size(), gY.size());
    const double lo = gX.lo() + gY.lo(), hi = gX.hi() + gY.hi();

    const auto tw = trapezoid_weights(gY.xs);
    std::vector<double> omega(gY.size());
    double mass = 0.0;
    for (std::size_t j = 0; j < gY.size(); ++j) {
        omega[j] = tw[j] * gY.fs[j];
        mass += omega[j];
    }

    std::vector<double> xs(n), fs(n), Fs(n), Ss(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) xs[k] = lo + h * static_cast<double>(k);
    xs.back() = hi;

    parallel_for(n, [&](std::size_t k) {
        double f = 0.0, F = 0.0, S = 0.0;
        for (std::size_t j = 0; j < gY.size(); ++j) {
            if (omega[j] == 0.0) continue;
            const double t = xs[k] - gY.xs[j];
            f += omega[j] * density_at(gX, t);
            F += omega[j] * law_cdf(gX, t);
            S += omega[j] * law_sf(gX, t);
        }
        fs[k] = f / mass;
        Fs[k] = F / mass;
        Ss[k] = S / mass;
    });
    Fs.front() = 0.0;
    Ss.front() = 1.0;
    Fs.back() = 1.0;
    Ss.back() = 0.0;
    return tabulate_with_cdf(std::move(xs), std::move(fs), std::move(Fs), std::move(Ss),
                             std::max(gX.mass_tol, gY.mass_tol));
}

enum class Tail { Lower, Upper };

/// m_x (Lower, density prop. to f_Y(y) F_X(x - y)) or its upper-tail
/// counterpart with 1 - F_X, tabulated on gY's nodes.
struct WeightedMeasure {
    double anchor_x = 0.0;
    std::vector<double> ys;
    std::vector<double> weights;
    double normalizer = 0.0;
    Tail kind = Tail::Lower;
};

inline WeightedMeasure weighted_measure(const GridDensity& gX, const GridDensity& gY, double x, Tail kind) {
    const auto tw = trapezoid_weights(gY.xs);
    WeightedMeasure m;
    m.anchor_x = x;
    m.kind = kind;
    m.ys = gY.xs;
    m.weights.resize(gY.size());
    double mass = 0.0;
    for (std::size_t j = 0; j < gY.size(); ++j) {
        const double t = x - gY.xs[j];
        m.weights[j] = gY.fs[j] * (kind == Tail::Lower ? law_cdf(gX, t) : law_sf(gX, t));
        m.normalizer += tw[j] * m.weights[j];
        mass += tw[j] * gY.fs[j];
    }
    m.normalizer /= mass;
    const double tol = std::max(gX.mass_tol, gY.mass_tol);
    if (!(m.normalizer > tol && m.normalizer < 1.0 - tol)) throw Error("weighted_measure: x outside J(F_{X+Y})");
    for (auto& w : m.weights) w /= m.normalizer * mass;
    return m;
}

enum class Verdict { Stable, Unstable, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "Stable";
        case Verdict::Unstable: return "Unstable";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct CriterionOptions {
    double tolerance = 1e-6;
    /// Nodes with f_Y below floor * max f_Y are left out of the quadrature.
    double density_floor = 1e-12;
};

/// Per-anchor covariances whose signs decide whether X + Y is
/// bi-log-concave. With a(y) = (-log f_Y)'(y):
///   cov_lower(x) = cov_{m_x}(a, d/dy[-log F_X(x - y)]) = cov_{m_x}(a, rho_X(x - y)),
///   cov_upper(x) = cov_{m̄_x}(a, d/dy[-log(1 - F_X)(x - y)]) = cov_{m̄_x}(a, -h_X(x - y)),
/// with rho_X = f_X/F_X and h_X = f_X/(1 - F_X). These equal -(log F_{X+Y})''(x)
/// and -(log(1 - F_{X+Y}))''(x).
struct ConvolutionCriterionReport {
    std::vector<double> xs;
    std::vector<double> cov_lower;
    std::vector<double> cov_upper;
    double min_lower = std::numeric_limits<double>::infinity();
    double min_upper = std::numeric_limits<double>::infinity();
    double argmin_x = 0.0;
    std::vector<double> skipped;
    double excluded_weight = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Inconclusive;
};

/// 41 quantiles of F_{X+Y} between 0.02 and 0.98.
inline std::vector<double> default_criterion_anchors(const GridDensity& sum) {
    std::vector<double> out;
    for (int i = 0; i <= 40; ++i) out.push_back(quantile(sum, 0.02 + 0.96 * i / 40.0));
    return out;
}

inline ConvolutionCriterionReport covariance_criterion(const GridDensity& gX, const GridDensity& gY,
                                                       std::span<const double> anchors,
                                                       const CriterionOptions& opts = {}) {
    detail::require_non_degenerate(gX);
    detail::require_non_degenerate(gY);
    const auto tw = trapezoid_weights(gY.xs);
    const double fmax = *std::max_element(gY.fs.begin(), gY.fs.end());
    const double floor = opts.density_floor * fmax;

    std::vector<std::size_t> used;
    std::vector<double> a;
    double total = 0.0, excluded = 0.0;
    for (std::size_t j = 0; j < gY.size(); ++j) {
        const double w = tw[j] * gY.fs[j];
        total += w;
        if (gY.fs[j] < floor || gY.fs[j] <= 0.0) {
            excluded += w;
            continue;
        }
        used.push_back(j);
        a.push_back(-node_derivative(gY, j) / gY.fs[j]);
    }
    const double tol = std::max(gX.mass_tol, gY.mass_tol);

    ConvolutionCriterionReport rep;
    rep.tolerance = opts.tolerance;
    rep.excluded_weight = total > 0.0 ? excluded / total : 0.0;
    struct AnchorResult {
        double lower = 0.0, upper = 0.0;
        bool valid = false;
    };
    std::vector<AnchorResult> results(anchors.size());
    parallel_for(anchors.size(), [&](std::size_t i) {
        const double x = anchors[i];
        double Wl = 0.0, Wu = 0.0, Al = 0.0, Au = 0.0, Bl = 0.0, Bu = 0.0;
        std::vector<double> bl(used.size()), bu(used.size()), wl(used.size()), wu(used.size());
        for (std::size_t u = 0; u < used.size(); ++u) {
            const std::size_t j = used[u];
            const double t = x - gY.xs[j];
            const double fx = density_at(gX, t), Fx = law_cdf(gX, t), Sx = law_sf(gX, t);
            const double base = tw[j] * gY.fs[j];
            wl[u] = Fx > 0.0 ? base * Fx : 0.0;
            wu[u] = Sx > 0.0 ? base * Sx : 0.0;
            bl[u] = Fx > 0.0 ? fx / Fx : 0.0;
            bu[u] = Sx > 0.0 ? -fx / Sx : 0.0;
            Wl += wl[u];
            Wu += wu[u];
            Al += wl[u] * a[u];
            Au += wu[u] * a[u];
            Bl += wl[u] * bl[u];
            Bu += wu[u] * bu[u];
        }
        if (!(Wl / total > tol && Wu / total > tol)) return;
        Al /= Wl;
        Bl /= Wl;
        Au /= Wu;
        Bu /= Wu;
        double cl = 0.0, cu = 0.0;
        for (std::size_t u = 0; u < used.size(); ++u) {
            cl += wl[u] * (a[u] - Al) * (bl[u] - Bl);
            cu += wu[u] * (a[u] - Au) * (bu[u] - Bu);
        }
        results[i] = {cl / Wl, cu / Wu, true};
    });

    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (!results[i].valid) {
            rep.skipped.push_back(anchors[i]);
            continue;
        }
        rep.xs.push_back(anchors[i]);
        rep.cov_lower.push_back(results[i].lower);
        rep.cov_upper.push_back(results[i].upper);
        const double worst = std::min(results[i].lower, results[i].upper);
        if (worst < std::min(rep.min_lower, rep.min_upper)) rep.argmin_x = anchors[i];
        rep.min_lower = std::min(rep.min_lower, results[i].lower);
        rep.min_upper = std::min(rep.min_upper, results[i].upper);
    }
    if (rep.xs.empty()) {
        rep.verdict = Verdict::Inconclusive;
    } else {
        rep.verdict = std::min(rep.min_lower, rep.min_upper) >= -opts.tolerance ? Verdict::Stable : Verdict::Unstable;
    }
    return rep;
}

/// Cross-validates the covariance verdict against certify_blc of the
/// numerical convolution; Certified iff the two routes agree.
inline Certificate check_convolution_blc_consistency(const GridDensity& gX, const GridDensity& gY,
                                                     std::span<const double> anchors,
                                                     const CriterionOptions& copts = {},
                                                     const CertifyOptions& opts = {}) {
    if (!certify_blc(gX, opts).certified() || !certify_blc(gY, opts).certified())
        throw Error("requires BLC certificate for both summands");
    const auto sum = convolve(gX, gY);
    std::vector<double> xs(anchors.begin(), anchors.end());
    if (xs.empty()) xs = default_criterion_anchors(sum);
    const auto rep = covariance_criterion(gX, gY, xs, copts);
    const auto cert = certify_blc(sum, opts);
    Certificate out;
    out.condition_id = "convolution_consistency";
    out.tolerance_used = 0.0;
    const bool criterion_ok = rep.verdict == Verdict::Stable;
    out.detail = std::string("criterion=") + to_string(rep.verdict) + ", certify=" + to_string(cert.status);
    if (rep.verdict == Verdict::Inconclusive || cert.status == Status::Inconclusive) {
        out.status = Status::Inconclusive;
        out.slack = 0.0;
    } else if (criterion_ok == cert.certified()) {
        out.status = Status::Certified;
        out.slack = 0.0;
    } else {
        out.status = Status::Violated;
        out.slack = -1.0;
        out.witness_x = cert.witness_x ? *cert.witness_x : rep.argmin_x;
    }
    return out;
}

struct IntegrationByParts {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// E_nu[g'] against cov_nu(g, phi') with phi = -log f. Refuses inputs whose
/// density vanishes inside the grid or where f (g - E g) has not decayed at
/// the grid ends.
inline IntegrationByParts integration_by_parts_check(const GridDensity& nu, std::span<const double> samples,
                                                     double decay_tol = 1e-6) {
    const std::size_t n = nu.size();
    if (samples.size() != n) throw Error("integration_by_parts_check: sample count must match the grid");
    for (std::size_t k = 1; k + 1 < n; ++k)
        if (!(nu.fs[k] > 0.0)) throw Error("integration_by_parts_check: density vanishes at an interior node");
    const auto w = trapezoid_weights(nu.xs);
    double mass = 0.0, mg = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mass += w[k] * nu.fs[k];
        mg += w[k] * nu.fs[k] * samples[k];
    }
    mg /= mass;
    double peak = 0.0;
    for (std::size_t k = 0; k < n; ++k) peak = std::max(peak, std::abs(nu.fs[k] * (samples[k] - mg)));
    const double edge = std::max(std::abs(nu.fs.front() * (samples.front() - mg)),
                                 std::abs(nu.fs.back() * (samples.back() - mg)));
    if (edge > decay_tol * peak) throw Error("integration_by_parts_check: boundary term f (g - E g) does not decay");

    double lhs = 0.0, mphi = 0.0, mgphi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dg = detail::three_point_derivative(nu.xs, samples, k);
        const double f = nu.fs[k];
        const double dphi = f > 0.0 ? -node_derivative(nu, k) / f : 0.0;
        lhs += w[k] * f * dg;
        mphi += w[k] * f * dphi;
        mgphi += w[k] * f * (samples[k] - mg) * dphi;
    }
    (void)mphi;
    return {lhs / mass, mgphi / mass};
}

struct SmoothStep {
    double sigma = 0.0;
    GridDensity density;
    Certificate certificate;
    std::map<std::string, double> distances;
};

struct SmoothSequence {
    std::vector<SmoothStep> steps;
    /// Every requested distance is non-increasing along the sequence.
    bool distances_monotone = true;
};

enum class LpNorm { L1, L2, Linf };

inline const char* to_string(LpNorm p) {
    switch (p) {
        case LpNorm::L1: return "L1";
        case LpNorm::L2: return "L2";
        case LpNorm::Linf: return "Linf";
    }
    return "?";
}

/// ||a - b||_p with b read through density_at on a's grid.
inline double lp_distance(const GridDensity& a, const GridDensity& b, LpNorm p) {
    const auto w = trapezoid_weights(a.xs);
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = std::abs(a.fs[k] - density_at(b, a.xs[k]));
        switch (p) {
            case LpNorm::L1: acc += w[k] * d; break;
            case LpNorm::L2: acc += w[k] * d * d; break;
            case LpNorm::Linf: acc = std::max(acc, d); break;
        }
    }
    return p == LpNorm::L2 ? std::sqrt(acc) : acc;
}

/// Gaussian smoothings g * N(0, sigma^2) along decreasing sigmas; each is
/// certified and compared with g in the requested L_p norms.
inline SmoothSequence smooth_sequence(const GridDensity& g, std::span<const double> sigmas,
                                      std::span<const LpNorm> norms, const CertifyOptions& opts = {},
                                      double monotone_tol = 1e-9) {
    if (!certify_blc(g, opts).certified()) throw Error("requires BLC certificate");
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        if (!(sigmas[i] > 0.0)) throw Error("smooth_sequence: sigmas must be > 0");
        if (i > 0 && !(sigmas[i] < sigmas[i - 1])) throw Error("smooth_sequence: sigmas must be decreasing");
    }
    SmoothSequence out;
    MaterializeOptions mopts;
    mopts.n_points = std::max(g.size(), kMinGridPoints);
    mopts.mass_tol = g.mass_tol;
    for (double sigma : sigmas) {
        SmoothStep step;
        step.sigma = sigma;
        step.density = convolve(g, materialize(Gaussian{0.0, sigma}, mopts));
        step.certificate = certify_blc(step.density, opts);
        for (LpNorm p : norms) step.distances[to_string(p)] = lp_distance(step.density, g, p);
        if (!out.steps.empty()) {
            for (const auto& [name, d] : step.distances)
                if (d > out.steps.back().distances.at(name) + monotone_tol) out.distances_monotone = false;
        }
        out.steps.push_back(std::move(step));
    }
    return out;
}

inline void write_csv(const ConvolutionCriterionReport& r, std::ostream& out) {
    out << "x,cov_lower,cov_upper\n";
    for (std::size_t k = 0; k < r.xs.size(); ++k)
        out << format_number(r.xs[k]) << ',' << format_number(r.cov_lower[k]) << ',' << format_number(r.cov_upper[k])
            << '\n';
}

}  // namespace blc
