#pragma once

#include <blc/distribution.hpp>
#include <blc/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

namespace blc {

inline constexpr double kDefaultMassTol = 1e-6;
inline constexpr double kDefaultCoverage = 1.0 - 1e-10;
inline constexpr std::size_t kDefaultGridPoints = 2048;
inline constexpr std::size_t kMinGridPoints = 64;

struct MaterializeOptions {
    std::size_t n_points = kDefaultGridPoints;
    double coverage = kDefaultCoverage;
    double mass_tol = kDefaultMassTol;
};

/// A one-dimensional law tabulated on a strictly increasing grid.
///
/// `Fs` and `Ss` hold F and 1 - F separately so that upper-tail quantities
/// keep their relative precision. When the law came from a parametric family,
/// `source` evaluates it off-grid; `source_norm` is the retained mass of the
/// truncation window (fs = pdf / source_norm).
struct GridDensity {
    std::vector<double> xs;
    std::vector<double> fs;
    std::vector<double> Fs;
    std::vector<double> Ss;
    std::size_t j_lo = 0;
    std::size_t j_hi = 0;
    double total_mass = 0.0;
    double mass_tol = kDefaultMassTol;
    std::shared_ptr<const AnalyticLaw> source;
    double source_norm = 1.0;
    double source_cut_lo = 0.0;
    double source_cut_hi = 0.0;

    std::size_t size() const noexcept { return xs.size(); }
    double lo() const { return xs.front(); }
    double hi() const { return xs.back(); }

    /// J(F) is nonempty on the grid.
    bool non_degenerate() const noexcept { return !xs.empty() && j_lo <= j_hi; }

    /// x lies in the grid hull of J(F).
    bool in_support_interior(double x) const { return non_degenerate() && x >= xs[j_lo] && x <= xs[j_hi]; }
};

namespace detail {

/// Second-order three-point derivative of samples `v` at node k.
inline double three_point_derivative(std::span<const double> x, std::span<const double> v, std::size_t k) {
    const std::size_t n = x.size();
    if (n < 3) return n == 2 ? (v[1] - v[0]) / (x[1] - x[0]) : 0.0;
    if (k == 0) {
        const double h1 = x[1] - x[0], h2 = x[2] - x[1];
        return -(2 * h1 + h2) / (h1 * (h1 + h2)) * v[0] + (h1 + h2) / (h1 * h2) * v[1] -
               h1 / (h2 * (h1 + h2)) * v[2];
    }
    if (k == n - 1) {
        const double h1 = x[n - 2] - x[n - 3], h2 = x[n - 1] - x[n - 2];
        return h2 / (h1 * (h1 + h2)) * v[n - 3] - (h1 + h2) / (h1 * h2) * v[n - 2] +
               (2 * h2 + h1) / (h2 * (h1 + h2)) * v[n - 1];
    }
    const double h1 = x[k] - x[k - 1], h2 = x[k + 1] - x[k];
    return -h2 / (h1 * (h1 + h2)) * v[k - 1] + (h2 - h1) / (h1 * h2) * v[k] + h1 / (h2 * (h1 + h2)) * v[k + 1];
}

inline std::size_t stencil_begin(std::size_t n, std::size_t k) {
    if (k == 0) return 0;
    if (k + 1 >= n) return n - 3;
    return k - 1;
}

/// Index of the cell [x_k, x_{k+1}] containing t (clamped to valid cells).
inline std::size_t cell_of(std::span<const double> xs, double t) {
    auto it = std::upper_bound(xs.begin(), xs.end(), t);
    std::size_t k = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    return std::min(k, xs.size() - 2);
}

inline double lerp_table(std::span<const double> xs, std::span<const double> vs, double t) {
    if (t <= xs.front()) return vs.front();
    if (t >= xs.back()) return vs.back();
    const std::size_t k = cell_of(xs, t);
    const double w = (t - xs[k]) / (xs[k + 1] - xs[k]);
    return vs[k] + w * (vs[k + 1] - vs[k]);
}

/// Cubic Hermite interpolation of a monotone table with node slopes
/// sign * ds, limited per cell (Fritsch-Carlson) so the result stays monotone.
inline double monotone_hermite(std::span<const double> xs, std::span<const double> vs, std::span<const double> ds,
                               double sign, double t) {
    if (t <= xs.front()) return vs.front();
    if (t >= xs.back()) return vs.back();
    const std::size_t k = cell_of(xs, t);
    const double h = xs[k + 1] - xs[k];
    const double delta = (vs[k + 1] - vs[k]) / h;
    double m0 = sign * ds[k], m1 = sign * ds[k + 1];
    if (delta == 0.0 || m0 * delta < 0.0 || m1 * delta < 0.0) {
        const double w = (t - xs[k]) / h;
        return vs[k] + w * (vs[k + 1] - vs[k]);
    }
    const double a = m0 / delta, b = m1 / delta, r = a * a + b * b;
    if (r > 9.0) {
        const double tau = 3.0 / std::sqrt(r);
        m0 *= tau;
        m1 *= tau;
    }
    const double w = (t - xs[k]) / h, w2 = w * w, w3 = w2 * w;
    return (2 * w3 - 3 * w2 + 1) * vs[k] + (w3 - 2 * w2 + w) * h * m0 + (-2 * w3 + 3 * w2) * vs[k + 1] +
           (w3 - w2) * h * m1;
}

/// Geometric interpolation; exact for exponential tails and below the chord
/// of any log-concave table.
inline double loglerp_table(std::span<const double> xs, std::span<const double> vs, double t) {
    if (t <= xs.front()) return vs.front();
    if (t >= xs.back()) return vs.back();
    const std::size_t k = cell_of(xs, t);
    const double w = (t - xs[k]) / (xs[k + 1] - xs[k]);
    if (vs[k] <= 0.0 || vs[k + 1] <= 0.0) return vs[k] + w * (vs[k + 1] - vs[k]);
    return std::exp(std::log(vs[k]) + w * (std::log(vs[k + 1]) - std::log(vs[k])));
}

inline void locate_support(GridDensity& g) {
    const std::size_t n = g.size();
    g.j_lo = n;
    g.j_hi = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (g.Fs[k] > g.mass_tol && g.Ss[k] > g.mass_tol) {
            g.j_lo = std::min(g.j_lo, k);
            g.j_hi = k;
        }
    }
    if (g.j_lo == n) g.j_lo = 1, g.j_hi = 0;
}

inline double find_tail_point(const AnalyticLaw& law, double tail, bool lower) {
    auto [center, spread] = law.bracket_hint();
    auto mass = [&](double x) { return lower ? law.cdf(x) : law.sf(x); };
    double inner = center;
    double step = spread;
    double outer = lower ? center - step : center + step;
    for (int i = 0; i < 200 && mass(outer) > tail; ++i) {
        inner = outer;
        step *= 2.0;
        outer = lower ? center - step : center + step;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (inner + outer);
        if (mid == inner || mid == outer) break;
        (mass(mid) > tail ? inner : outer) = mid;
    }
    return outer;
}

}  // namespace detail

/// Per-cell integrals: trapezoid plus the Euler-Maclaurin end correction
/// h^2 (f'(x_k+) - f'(x_{k+1}-)) / 12, clamped at zero so cumulative sums stay
/// monotone. `left_slope[k]` / `right_slope[k]` are the derivatives at the
/// two ends of cell k. Size n - 1.
inline std::vector<double> cell_masses(std::span<const double> xs, std::span<const double> fs,
                                       std::span<const double> left_slope, std::span<const double> right_slope) {
    const std::size_t n = xs.size();
    std::vector<double> out(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = xs[k + 1] - xs[k];
        const double trap = 0.5 * h * (fs[k] + fs[k + 1]);
        out[k] = std::max(0.0, trap + h * h * (left_slope[k] - right_slope[k]) / 12.0);
    }
    return out;
}

namespace detail {

/// Derivatives at both ends of cell k from the quadratic through nodes
/// (b, b+1, b+2).
inline std::pair<double, double> quadratic_end_slopes(std::span<const double> x, std::span<const double> v,
                                                      std::size_t b, std::size_t k) {
    const double x0 = x[b], x1 = x[b + 1], x2 = x[b + 2];
    const double d01 = (v[b + 1] - v[b]) / (x1 - x0), d12 = (v[b + 2] - v[b + 1]) / (x2 - x1);
    const double c = (d12 - d01) / (x2 - x0);
    auto slope = [&](double t) { return d01 + c * ((t - x0) + (t - x1)); };
    return {slope(x[k]), slope(x[k + 1])};
}

}  // namespace detail

/// Same, with end slopes from the smoother of the two three-point stencils
/// containing each cell, so a kink at a node does not leak into its
/// neighbours. Positive stencils are differentiated in log space, which is
/// exact for Gaussian and exponential pieces.
inline std::vector<double> cell_masses(std::span<const double> xs, std::span<const double> fs) {
    const std::size_t n = xs.size();
    if (n < 3) {
        std::vector<double> out(n > 1 ? n - 1 : 0);
        for (std::size_t k = 0; k + 1 < n; ++k) out[k] = 0.5 * (xs[k + 1] - xs[k]) * (fs[k] + fs[k + 1]);
        return out;
    }
    std::vector<double> logs(n);
    for (std::size_t k = 0; k < n; ++k) logs[k] = fs[k] > 0.0 ? std::log(fs[k]) : -INFINITY;
    auto positive = [&](std::size_t b) { return fs[b] > 0.0 && fs[b + 1] > 0.0 && fs[b + 2] > 0.0; };
    auto roughness = [&](std::size_t b) {
        const std::span<const double> v = positive(b) ? std::span<const double>(logs) : fs;
        const double d01 = (v[b + 1] - v[b]) / (xs[b + 1] - xs[b]);
        const double d12 = (v[b + 2] - v[b + 1]) / (xs[b + 2] - xs[b + 1]);
        return std::abs(d12 - d01) / (xs[b + 2] - xs[b]);
    };
    std::vector<double> left(n - 1), right(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t b;
        if (k == 0) {
            b = 0;
        } else if (k + 2 >= n) {
            b = n - 3;
        } else {
            const bool lp = positive(k - 1), rp = positive(k);
            if (lp != rp) b = lp ? k - 1 : k;
            else b = roughness(k - 1) <= roughness(k) ? k - 1 : k;
        }
        if (positive(b)) {
            auto [sl, sr] = detail::quadratic_end_slopes(xs, logs, b, k);
            left[k] = fs[k] * sl;
            right[k] = fs[k + 1] * sr;
        } else {
            auto [sl, sr] = detail::quadratic_end_slopes(xs, fs, b, k);
            left[k] = sl;
            right[k] = sr;
        }
    }
    return cell_masses(xs, fs, left, right);
}

/// Cumulative integral of a sampled density starting at 0.
inline std::vector<double> cumulative_quadrature(std::span<const double> xs, std::span<const double> fs) {
    const auto cells = cell_masses(xs, fs);
    std::vector<double> F(xs.size(), 0.0);
    for (std::size_t k = 0; k < cells.size(); ++k) F[k + 1] = F[k] + cells[k];
    return F;
}

/// Plain trapezoid weights on a nonuniform grid.
inline std::vector<double> trapezoid_weights(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = 0.5 * (xs[k + 1] - xs[k]);
        w[k] += h;
        w[k + 1] += h;
    }
    return w;
}

/// Builds a GridDensity from a sampled (unnormalized) density by quadrature.
inline GridDensity tabulate(std::vector<double> xs, std::vector<double> fs, double mass_tol = kDefaultMassTol) {
    if (xs.size() != fs.size() || xs.size() < 3) throw Error("tabulate: need >= 3 matching samples");
    const auto cells = cell_masses(xs, fs);
    double mass = 0.0;
    for (double c : cells) mass += c;
    if (!(mass > 0.0) || !std::isfinite(mass)) throw Error("degenerate density");
    GridDensity g;
    const std::size_t n = xs.size();
    g.Fs.assign(n, 0.0);
    g.Ss.assign(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) g.Fs[k + 1] = g.Fs[k] + cells[k] / mass;
    for (std::size_t k = n - 1; k-- > 0;) g.Ss[k] = g.Ss[k + 1] + cells[k] / mass;
    for (auto& f : fs) f /= mass;
    g.xs = std::move(xs);
    g.fs = std::move(fs);
    g.total_mass = 1.0;
    g.mass_tol = mass_tol;
    detail::locate_support(g);
    return g;
}

/// Builds a GridDensity from externally computed F and 1 - F tables.
inline GridDensity tabulate_with_cdf(std::vector<double> xs, std::vector<double> fs, std::vector<double> Fs,
                                     std::vector<double> Ss, double mass_tol = kDefaultMassTol) {
    const std::size_t n = xs.size();
    if (fs.size() != n || Fs.size() != n || Ss.size() != n || n < 3) throw Error("tabulate_with_cdf: size mismatch");
    GridDensity g;
    g.xs = std::move(xs);
    g.fs = std::move(fs);
    g.Fs = std::move(Fs);
    g.Ss = std::move(Ss);
    for (std::size_t k = 0; k < n; ++k) {
        g.Fs[k] = std::clamp(g.Fs[k], 0.0, 1.0);
        g.Ss[k] = std::clamp(g.Ss[k], 0.0, 1.0);
        if (k > 0) {
            g.Fs[k] = std::max(g.Fs[k], g.Fs[k - 1]);
            g.Ss[n - 1 - k] = std::max(g.Ss[n - 1 - k], g.Ss[n - k]);
        }
    }
    for (auto& f : g.fs) f = std::max(f, 0.0);
    const auto cells = cell_masses(g.xs, g.fs);
    g.total_mass = 0.0;
    for (double c : cells) g.total_mass += c;
    g.mass_tol = mass_tol;
    detail::locate_support(g);
    return g;
}

inline GridDensity materialize(const DistributionSpec& spec, const MaterializeOptions& opts = {}) {
    validate(spec);
    if (opts.n_points < kMinGridPoints) throw SpecError("n_points", "must be >= 64");
    if (!(opts.coverage >= 1.0 - 1e-6 && opts.coverage < 1.0)) throw SpecError("coverage", "must lie in [1-1e-6, 1)");
    if (!(opts.mass_tol > 0.0)) throw SpecError("mass_tol", "must be > 0");

    if (const auto* grid = std::get_if<GridSpec>(&spec)) {
        return tabulate(grid->abscissas, grid->density_values, opts.mass_tol);
    }

    auto law = std::make_shared<const AnalyticLaw>(spec);
    double a = 0.0, b = 0.0;
    if (auto support = law->bounded_support()) {
        std::tie(a, b) = *support;
    } else {
        const double tail = 0.5 * (1.0 - opts.coverage);
        a = detail::find_tail_point(*law, tail, true);
        b = detail::find_tail_point(*law, tail, false);
    }
    const std::size_t n = opts.n_points;
    GridDensity g;
    g.xs.resize(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) g.xs[k] = a + h * static_cast<double>(k);
    g.xs.back() = b;
    // Put kinks on nodes so tabulated values straddle them exactly.
    for (double kink : law->kinks()) {
        if (kink <= a || kink >= b) continue;
        const auto k = static_cast<std::size_t>(std::lround((kink - a) / h));
        if (k > 0 && k + 1 < n) g.xs[k] = kink;
    }

    const double cut_lo = law->cdf(a), cut_hi = law->sf(b);
    const double norm = 1.0 - cut_lo - cut_hi;
    g.fs.resize(n);
    g.Fs.resize(n);
    g.Ss.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = g.xs[k];
        g.fs[k] = law->pdf(x) / norm;
        g.Fs[k] = std::clamp((law->cdf(x) - cut_lo) / norm, 0.0, 1.0);
        g.Ss[k] = std::clamp((law->sf(x) - cut_hi) / norm, 0.0, 1.0);
    }
    g.Fs.front() = 0.0;
    g.Ss.front() = 1.0;
    g.Fs.back() = 1.0;
    g.Ss.back() = 0.0;
    std::vector<double> left(n - 1), right(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        left[k] = law->dpdf(std::nextafter(g.xs[k], b)) / norm;
        right[k] = law->dpdf(std::nextafter(g.xs[k + 1], a)) / norm;
    }
    for (double c : cell_masses(g.xs, g.fs, left, right)) g.total_mass += c;
    g.mass_tol = opts.mass_tol;
    g.source = std::move(law);
    g.source_norm = norm;
    g.source_cut_lo = cut_lo;
    g.source_cut_hi = cut_hi;
    if (std::abs(g.total_mass - 1.0) > g.mass_tol)
        throw Error("materialize: grid too coarse, quadrature mass " + std::to_string(g.total_mass));
    detail::locate_support(g);
    return g;
}

/// F(x) by monotone cubic Hermite interpolation with slopes f; clamps to 0 / 1
/// off the grid.
inline double cdf_at(const GridDensity& g, double x) {
    if (x <= g.lo()) return 0.0;
    if (x >= g.hi()) return 1.0;
    return detail::monotone_hermite(g.xs, g.Fs, g.fs, 1.0, x);
}

/// 1 - F(x), interpolated from the survival table.
inline double sf_at(const GridDensity& g, double x) {
    if (x <= g.lo()) return 1.0;
    if (x >= g.hi()) return 0.0;
    return detail::monotone_hermite(g.xs, g.Ss, g.fs, -1.0, x);
}

/// F(x) by geometric interpolation between nodes.
inline double cdf_at_geometric(const GridDensity& g, double x) {
    if (x <= g.lo()) return 0.0;
    if (x >= g.hi()) return 1.0;
    return detail::loglerp_table(g.xs, g.Fs, x);
}

inline double sf_at_geometric(const GridDensity& g, double x) {
    if (x <= g.lo()) return 1.0;
    if (x >= g.hi()) return 0.0;
    return detail::loglerp_table(g.xs, g.Ss, x);
}

/// f(x); closed form when available, else linear interpolation.
inline double density_at(const GridDensity& g, double x) {
    if (x < g.lo() || x > g.hi()) return 0.0;
    if (g.source) return g.source->pdf(x) / g.source_norm;
    return detail::lerp_table(g.xs, g.fs, x);
}

/// F(x) from the source law when present (exact off-grid), else cdf_at.
inline double law_cdf(const GridDensity& g, double x) {
    if (x <= g.lo()) return 0.0;
    if (x >= g.hi()) return 1.0;
    if (g.source) return std::clamp((g.source->cdf(x) - g.source_cut_lo) / g.source_norm, 0.0, 1.0);
    return detail::lerp_table(g.xs, g.Fs, x);
}

inline double law_sf(const GridDensity& g, double x) {
    if (x <= g.lo()) return 1.0;
    if (x >= g.hi()) return 0.0;
    if (g.source) return std::clamp((g.source->sf(x) - g.source_cut_hi) / g.source_norm, 0.0, 1.0);
    return detail::lerp_table(g.xs, g.Ss, x);
}

namespace detail {

/// Root of a monotone function on [a, b] given a sign change; bisection.
template <class Fn>
double bisect(Fn&& fn, double a, double b) {
    double fa = fn(a);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = fn(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// Inverse of F. Grid inversion brackets the root, which is then refined
/// inside the bracketing cell against the closed-form source when present,
/// else against cdf_at / sf_at.
inline double quantile(const GridDensity& g, double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error("quantile: p must lie in (0, 1)");
    if (p <= 0.5) {
        auto it = std::lower_bound(g.Fs.begin(), g.Fs.end(), p);
        if (it == g.Fs.end()) return g.hi();
        const auto k = static_cast<std::size_t>(it - g.Fs.begin());
        if (k == 0) return g.lo();
        if (g.source)
            return detail::bisect([&](double x) { return law_cdf(g, x) - p; }, g.xs[k - 1], g.xs[k]);
        return detail::bisect([&](double x) { return cdf_at(g, x) - p; }, g.xs[k - 1], g.xs[k]);
    }
    const double q = 1.0 - p;
    // Ss is nonincreasing: first node with Ss <= q closes the bracketing cell.
    auto it = std::lower_bound(g.Ss.begin(), g.Ss.end(), q, [](double s, double v) { return s > v; });
    if (it == g.Ss.end()) return g.hi();
    const auto k = static_cast<std::size_t>(it - g.Ss.begin());
    if (k == 0) return g.lo();
    if (g.source) return detail::bisect([&](double x) { return q - law_sf(g, x); }, g.xs[k - 1], g.xs[k]);
    return detail::bisect([&](double x) { return q - sf_at(g, x); }, g.xs[k - 1], g.xs[k]);
}

inline double median(const GridDensity& g) { return quantile(g, 0.5); }

/// Second-order finite-difference derivative of f at node k, taken on log f
/// where the stencil is positive (exact for Gaussian and exponential pieces).
inline double finite_difference_derivative(const GridDensity& g, std::size_t k) {
    const std::size_t n = g.size();
    const std::size_t s = detail::stencil_begin(n, k);
    const bool positive = g.fs[s] > 0.0 && g.fs[s + 1] > 0.0 && g.fs[s + 2] > 0.0;
    if (!positive) return detail::three_point_derivative(g.xs, g.fs, k);
    const std::span<const double> x(g.xs.data() + s, 3);
    const double logs[3] = {std::log(g.fs[s]), std::log(g.fs[s + 1]), std::log(g.fs[s + 2])};
    return g.fs[k] * detail::three_point_derivative(x, logs, k - s);
}

/// f'(x_k): closed form when the source provides one, else finite differences.
inline double node_derivative(const GridDensity& g, std::size_t k) {
    if (g.source) return g.source->dpdf(g.xs[k]) / g.source_norm;
    return finite_difference_derivative(g, k);
}

/// Whether node k lies within one grid cell of a non-differentiable point.
inline bool near_kink(const GridDensity& g, std::size_t k) {
    if (!g.source) return false;
    const double left = k > 0 ? g.xs[k] - g.xs[k - 1] : 0.0;
    const double right = k + 1 < g.size() ? g.xs[k + 1] - g.xs[k] : 0.0;
    const double reach = std::max(left, right) * (1.0 + 1e-9);
    for (double kink : g.source->kinks()) {
        if (std::abs(g.xs[k] - kink) <= reach) return true;
    }
    return false;
}

inline double density_derivative(const GridDensity& g, double x) {
    if (!g.in_support_interior(x)) throw Error("outside J(F)");
    if (g.source) return g.source->dpdf(x) / g.source_norm;
    const std::size_t k = detail::cell_of(g.xs, x);
    const double w = (x - g.xs[k]) / (g.xs[k + 1] - g.xs[k]);
    return (1.0 - w) * finite_difference_derivative(g, k) + w * finite_difference_derivative(g, k + 1);
}

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

inline Moments moments(const GridDensity& g) {
    const auto w = trapezoid_weights(g.xs);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        m0 += w[k] * g.fs[k];
        m1 += w[k] * g.fs[k] * g.xs[k];
    }
    const double mean = m1 / m0;
    double var = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) var += w[k] * g.fs[k] * (g.xs[k] - mean) * (g.xs[k] - mean);
    return {mean, std::sqrt(var / m0)};
}

/// Fixed 12-significant-digit formatting used by every CSV export.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void write_csv(const GridDensity& g, std::ostream& out) {
    out << "x,f,F\n";
    for (std::size_t k = 0; k < g.size(); ++k)
        out << format_number(g.xs[k]) << ',' << format_number(g.fs[k]) << ',' << format_number(g.Fs[k]) << '\n';
}

}  // namespace blc
