#pragma once

#include <blc/certify.hpp>
#include <blc/grid_density.hpp>

#include <cmath>
#include <ostream>
#include <span>
#include <vector>

namespace blc {

enum class ProfileKind { Full1d, Halfspace1d, HalfspaceNd };

inline const char* to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::Full1d: return "full_1d";
        case ProfileKind::Halfspace1d: return "halfspace_1d";
        case ProfileKind::HalfspaceNd: return "halfspace_nd";
    }
    return "?";
}

/// Tabulated p -> I(p).
struct IsoProfile {
    std::vector<double> ps;
    std::vector<double> values;
    ProfileKind kind = ProfileKind::Full1d;
};

/// `count` equispaced probabilities from start to stop inclusive, all inside
/// (0, 1); e.g. (0.01, 0.99, 99).
inline std::vector<double> probability_grid(double start, double stop, std::size_t count) {
    if (!(start > 0.0 && stop < 1.0 && start <= stop) || count == 0) throw Error("probability grid must lie in (0, 1)");
    std::vector<double> ps(count);
    for (std::size_t k = 0; k < count; ++k)
        ps[k] = count == 1 ? start : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1);
    return ps;
}

/// ess inf over J(F) of f / min(F, 1 - F), realized on the tested nodes plus
/// the switch point F = 1/2 of the denominator.
inline double bobkov_houdre_constant(const GridDensity& g) {
    detail::require_non_degenerate(g);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k : detail::tested_nodes(g)) best = std::min(best, g.fs[k] / std::min(g.Fs[k], g.Ss[k]));
    const double m = median(g);
    const double denom = std::min(cdf_at(g, m), sf_at(g, m));
    if (denom > 0.0) best = std::min(best, density_at(g, m) / denom);
    return best;
}

namespace detail {

inline void require_blc(const GridDensity& g, const CertifyOptions& opts) {
    const auto cert = certify_blc(g, opts);
    if (!cert.certified()) throw Error("requires BLC certificate (" + std::string(to_string(cert.status)) + ")");
}

}  // namespace detail

/// Is = 2 f(m); only valid for bi-log-concave laws, which is checked first.
inline double blc_isoperimetric_constant(const GridDensity& g, const CertifyOptions& opts = {}) {
    detail::require_blc(g, opts);
    return 2.0 * density_at(g, median(g));
}

/// Cheeger lower bound f(m)^2 on the spectral gap.
inline double poincare_constant(const GridDensity& g, const CertifyOptions& opts = {}) {
    detail::require_blc(g, opts);
    const double fm = density_at(g, median(g));
    return fm * fm;
}

/// I(p) = f(F^{-1}(p)).
inline IsoProfile iso_profile(const GridDensity& g, std::span<const double> ps) {
    IsoProfile out{std::vector<double>(ps.begin(), ps.end()), std::vector<double>(ps.size()), ProfileKind::Full1d};
    for (std::size_t k = 0; k < ps.size(); ++k) out.values[k] = density_at(g, quantile(g, ps[k]));
    return out;
}

/// min{f(F^{-1}(p)), f(F^{-1}(1 - p))}: the two half-lines of mass p.
inline IsoProfile halfspace_profile_1d(const GridDensity& g, std::span<const double> ps) {
    IsoProfile out{std::vector<double>(ps.begin(), ps.end()), std::vector<double>(ps.size()),
                   ProfileKind::Halfspace1d};
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const double left = density_at(g, quantile(g, ps[k]));
        const double right = density_at(g, quantile(g, 1.0 - ps[k]));
        out.values[k] = std::min(left, right);
    }
    return out;
}

/// p -> I(p)/p non-increasing over consecutive grid probabilities; the
/// witness is the probability where the ratio rises.
inline Certificate weak_blc_ratio_check(const IsoProfile& profile, double tolerance = 1e-7) {
    if (profile.kind == ProfileKind::Full1d) throw Error("weak_blc_ratio_check: needs a half-space profile");
    if (profile.ps.size() != profile.values.size()) throw Error("weak_blc_ratio_check: malformed profile");
    SlackTracker tracker;
    for (std::size_t k = 0; k + 1 < profile.ps.size(); ++k) {
        const double r0 = profile.values[k] / profile.ps[k];
        const double r1 = profile.values[k + 1] / profile.ps[k + 1];
        tracker.observe(detail::relative(r0 - r1, std::max(r0, r1)), profile.ps[k + 1]);
    }
    return tracker.finish("weak_blc_ratio", tolerance);
}

struct ConcentrationReport {
    std::vector<double> rs;
    std::vector<double> bound;
    std::vector<double> empirical;
    std::vector<bool> within_bound;
    double f_at_median = 0.0;
    double median = 0.0;
    double tolerance = 0.0;

    bool all_within() const {
        for (bool ok : within_bound)
            if (!ok) return false;
        return true;
    }
};

/// Half-line tails max(1 - F(m + r), F(m - r)) against exp(-r f(m) / 3).
/// Half-lines at the median are the sets of mass 1/2 this checks; the full
/// concentration function takes a supremum over all such sets, so passing is
/// a necessary condition only.
inline ConcentrationReport concentration_check(const GridDensity& g, std::span<const double> rs,
                                               double tolerance = 1e-12, const CertifyOptions& opts = {}) {
    detail::require_blc(g, opts);
    ConcentrationReport rep;
    rep.median = median(g);
    rep.f_at_median = density_at(g, rep.median);
    rep.tolerance = tolerance;
    for (double r : rs) {
        if (!(r > 0.0)) throw Error("concentration_check: radii must be > 0");
        const double tail = std::max(sf_at(g, rep.median + r), cdf_at(g, rep.median - r));
        const double bound = std::exp(-r * rep.f_at_median / 3.0);
        rep.rs.push_back(r);
        rep.empirical.push_back(tail);
        rep.bound.push_back(bound);
        rep.within_bound.push_back(tail <= bound + tolerance);
    }
    return rep;
}

struct VarianceFunctional {
    double variance = 0.0;
    double dirichlet = 0.0;
};

/// Var_mu(h) and the Dirichlet energy int (h')^2 dmu for h sampled on the
/// grid nodes; h' by three-point finite differences.
inline VarianceFunctional variance_functional(const GridDensity& g, std::span<const double> samples) {
    if (samples.size() != g.size()) throw Error("variance_functional: sample count must match the grid");
    const auto w = trapezoid_weights(g.xs);
    double mass = 0.0, m1 = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        mass += w[k] * g.fs[k];
        m1 += w[k] * g.fs[k] * samples[k];
    }
    const double mean = m1 / mass;
    VarianceFunctional out;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double d = detail::three_point_derivative(g.xs, samples, k);
        out.variance += w[k] * g.fs[k] * (samples[k] - mean) * (samples[k] - mean);
        out.dirichlet += w[k] * g.fs[k] * d * d;
    }
    out.variance /= mass;
    out.dirichlet /= mass;
    return out;
}

template <class Fn>
std::vector<double> sample_on_grid(const GridDensity& g, Fn&& fn) {
    std::vector<double> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = fn(g.xs[k]);
    return out;
}

inline void write_csv(const IsoProfile& p, std::ostream& out) {
    out << "p,I\n";
    for (std::size_t k = 0; k < p.ps.size(); ++k) out << format_number(p.ps[k]) << ',' << format_number(p.values[k]) << '\n';
}

inline void write_csv(const ConcentrationReport& r, std::ostream& out) {
    out << "r,empirical,bound\n";
    for (std::size_t k = 0; k < r.rs.size(); ++k)
        out << format_number(r.rs[k]) << ',' << format_number(r.empirical[k]) << ',' << format_number(r.bound[k]) << '\n';
}

}  // namespace blc
