#pragma once

#include <blc/certificate.hpp>
#include <blc/grid_density.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <vector>

namespace blc {

/// Characterization conditions: envelope bounds on F(x + t), monotone
/// hazards, and the derivative sandwich.
enum class Condition { Envelope, Hazards, Sandwich };

inline const char* condition_id(Condition c) {
    switch (c) {
        case Condition::Envelope: return "ii";
        case Condition::Hazards: return "iii";
        case Condition::Sandwich: return "iv";
    }
    return "?";
}

struct CertifyOptions {
    double tolerance = 1e-7;
    /// Offsets t for the envelope check; defaults to 21 points on [-3 sd, 3 sd].
    std::optional<std::vector<double>> envelope_t_grid;
    /// Anchors for the envelope check inside certify_blc; defaults to the
    /// 1st..99th percentiles.
    std::optional<std::vector<double>> envelope_anchors;
    std::set<Condition> check_set{Condition::Envelope, Condition::Hazards, Condition::Sandwich};
};

namespace detail {

inline void check_options(const CertifyOptions& opts) {
    if (!(opts.tolerance >= 0.0)) throw Error("CertifyOptions: tolerance must be >= 0");
    if (opts.envelope_t_grid && opts.envelope_t_grid->empty() && opts.check_set.contains(Condition::Envelope))
        throw Error("CertifyOptions: envelope_t_grid must be nonempty");
}

inline void require_non_degenerate(const GridDensity& g) {
    if (!g.non_degenerate()) throw Error("degenerate density: J(F) is empty on the grid");
}

/// Nodes of J(F) away from the numerically ill-conditioned tails.
inline std::vector<std::size_t> tested_nodes(const GridDensity& g) {
    std::vector<std::size_t> out;
    const double edge = 10.0 * g.mass_tol;
    for (std::size_t k = g.j_lo; k <= g.j_hi && k < g.size(); ++k)
        if (g.Fs[k] >= edge && g.Ss[k] >= edge) out.push_back(k);
    return out;
}

inline double relative(double margin, double scale) {
    if (scale > 0.0 && std::isfinite(scale)) return margin / scale;
    return margin == 0.0 ? 0.0 : (margin > 0.0 ? 1.0 : -1.0);
}

}  // namespace detail

/// Monotone hazard f/(1-F) (non-decreasing) and reverse hazard f/F
/// (non-increasing), tested on consecutive nodes.
inline Certificate check_hazards(const GridDensity& g, const CertifyOptions& opts = {}) {
    detail::check_options(opts);
    detail::require_non_degenerate(g);
    const auto nodes = detail::tested_nodes(g);
    SlackTracker tracker;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const std::size_t a = nodes[i], b = nodes[i + 1];
        if (b != a + 1) continue;
        const double ha = g.fs[a] / g.Ss[a], hb = g.fs[b] / g.Ss[b];
        const double ra = g.fs[a] / g.Fs[a], rb = g.fs[b] / g.Fs[b];
        const double mid = 0.5 * (g.xs[a] + g.xs[b]);
        tracker.observe(detail::relative(hb - ha, std::max(ha, hb)), mid);
        tracker.observe(detail::relative(ra - rb, std::max(ra, rb)), mid);
    }
    return tracker.finish(condition_id(Condition::Hazards), opts.tolerance);
}

/// -f^2/(1-F) <= f' <= f^2/F with f > 0 on J(F). Nodes within one cell of
/// a kink of the source density are skipped.
inline Certificate check_derivative_sandwich(const GridDensity& g, const CertifyOptions& opts = {}) {
    detail::check_options(opts);
    detail::require_non_degenerate(g);
    const double sd = moments(g).sd;
    SlackTracker tracker;
    for (std::size_t k : detail::tested_nodes(g)) {
        const double f = g.fs[k];
        if (f * sd <= g.mass_tol) {
            Certificate c;
            c.status = Status::Violated;
            c.slack = -1.0;
            c.witness_x = g.xs[k];
            c.condition_id = condition_id(Condition::Sandwich);
            c.tolerance_used = opts.tolerance;
            c.detail = "density not strictly positive on J(F)";
            return c;
        }
        if (near_kink(g, k)) continue;
        const double df = node_derivative(g, k);
        const double lower = f * f / g.Ss[k];
        const double upper = f * f / g.Fs[k];
        tracker.observe(detail::relative(df + lower, lower + std::abs(df)), g.xs[k]);
        tracker.observe(detail::relative(upper - df, upper + std::abs(df)), g.xs[k]);
    }
    return tracker.finish(condition_id(Condition::Sandwich), opts.tolerance);
}

/// Default offsets: 21 points spanning three standard deviations each way.
inline std::vector<double> default_t_grid(const GridDensity& g) {
    const double sd = moments(g).sd;
    std::vector<double> ts(21);
    for (int i = 0; i < 21; ++i) ts[i] = sd * (-3.0 + 0.3 * i);
    ts[10] = 0.0;
    return ts;
}

inline std::vector<double> default_anchors(const GridDensity& g) {
    std::vector<double> out;
    for (int i = 1; i <= 99; ++i) {
        const double x = quantile(g, i / 100.0);
        if (g.in_support_interior(x)) out.push_back(x);
    }
    return out;
}

/// 1 - (1-F(x)) exp(-f(x) t/(1-F(x))) <= F(x+t) <= F(x) exp(f(x) t/F(x)) on
/// an anchor x offset t grid. F is interpolated geometrically between nodes;
/// the upper-tail side is compared in survival form.
inline Certificate check_envelope(const GridDensity& g, const std::vector<double>& anchors,
                                  const CertifyOptions& opts = {}) {
    detail::check_options(opts);
    detail::require_non_degenerate(g);
    const std::vector<double> ts = opts.envelope_t_grid ? *opts.envelope_t_grid : default_t_grid(g);
    if (ts.empty()) throw Error("check_envelope: empty offset grid");
    constexpr double kMaxExponent = 700.0;
    SlackTracker tracker;
    for (double x : anchors) {
        if (!g.in_support_interior(x)) throw Error("check_envelope: anchor outside J(F)");
        const double F = cdf_at_geometric(g, x);
        const double S = sf_at_geometric(g, x);
        const double f = density_at(g, x);
        if (!(F > 0.0 && S > 0.0)) throw Error("check_envelope: anchor outside J(F)");
        for (double t : ts) {
            const double Ft = cdf_at_geometric(g, x + t);
            const double St = sf_at_geometric(g, x + t);
            const double up_exp = f * t / F;
            if (up_exp < kMaxExponent) {
                const double bound = F * std::exp(up_exp);
                tracker.observe(detail::relative(bound - Ft, std::max(bound, Ft)), x);
            }
            const double lo_exp = -f * t / S;
            if (lo_exp < kMaxExponent) {
                const double bound = S * std::exp(lo_exp);
                tracker.observe(detail::relative(bound - St, std::max(bound, St)), x);
            }
        }
    }
    return tracker.finish(condition_id(Condition::Envelope), opts.tolerance);
}

/// Bi-log-concavity: conjunction of the requested characterization checks.
/// The returned certificate carries the worst slack across them.
inline Certificate certify_blc(const GridDensity& g, const CertifyOptions& opts = {}) {
    detail::check_options(opts);
    detail::require_non_degenerate(g);
    if (opts.check_set.empty()) throw Error("certify_blc: empty check set");
    std::vector<Certificate> parts;
    if (opts.check_set.contains(Condition::Hazards)) parts.push_back(check_hazards(g, opts));
    if (opts.check_set.contains(Condition::Sandwich)) parts.push_back(check_derivative_sandwich(g, opts));
    if (opts.check_set.contains(Condition::Envelope))
        parts.push_back(check_envelope(g, opts.envelope_anchors ? *opts.envelope_anchors : default_anchors(g), opts));

    auto rank = [](const Certificate& c) {
        return c.status == Status::Violated ? 0 : c.status == Status::Inconclusive ? 1 : 2;
    };
    const Certificate* worst = &parts.front();
    for (const auto& c : parts) {
        if (rank(c) < rank(*worst) || (rank(c) == rank(*worst) && c.slack < worst->slack)) worst = &c;
    }
    Certificate out = *worst;
    std::string ids;
    for (const auto& c : parts) {
        if (!ids.empty()) ids += ',';
        ids += c.condition_id + "=" + to_string(c.status);
    }
    out.detail = out.detail.empty() ? ids : out.detail + "; " + ids;
    return out;
}

/// Concavity of log f through second differences, scaled by the variance so
/// the slack is affine invariant (a standard Gaussian has slack 1).
inline Certificate check_log_concave(const GridDensity& g, const CertifyOptions& opts = {}) {
    detail::check_options(opts);
    detail::require_non_degenerate(g);
    const std::string id = "log_concave";
    const std::size_t first = g.j_lo, last = std::min(g.j_hi, g.size() - 1);
    for (std::size_t k = first; k <= last; ++k) {
        if (!(g.fs[k] > 0.0)) return inconclusive(id, opts.tolerance, g.xs[k], "nonpositive density node");
    }
    const double sd = moments(g).sd;
    const double var = sd * sd;
    SlackTracker tracker;
    for (std::size_t k = std::max<std::size_t>(first, 1); k + 1 <= last && k + 1 < g.size(); ++k) {
        const double h1 = g.xs[k] - g.xs[k - 1], h2 = g.xs[k + 1] - g.xs[k];
        if (!(g.fs[k - 1] > 0.0 && g.fs[k + 1] > 0.0)) continue;
        const double s1 = (std::log(g.fs[k]) - std::log(g.fs[k - 1])) / h1;
        const double s2 = (std::log(g.fs[k + 1]) - std::log(g.fs[k])) / h2;
        const double second = 2.0 * (s2 - s1) / (h1 + h2);
        tracker.observe(-second * var, g.xs[k]);
    }
    return tracker.finish(id, opts.tolerance);
}

}  // namespace blc
