#pragma once

#include <blc/certify.hpp>
#include <blc/distribution.hpp>
#include <blc/grid_density.hpp>
#include <blc/isoperimetry.hpp>
#include <blc/parallel.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

namespace blc {

struct MixtureComponentNd {
    double weight = 0.0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

inline constexpr double kEigenvalueFloor = 1e-10;
inline constexpr double kSymmetryTol = 1e-12;

/// Gaussian mixture on R^d whose component set is closed under x -> -x.
class SymmetricMixtureNd {
public:
    explicit SymmetricMixtureNd(std::vector<MixtureComponentNd> components)
        : components_(std::move(components)) {
        validate();
    }

    std::size_t dimension() const { return static_cast<std::size_t>(components_.front().mean.size()); }
    const std::vector<MixtureComponentNd>& components() const { return components_; }

    /// N(0, cov).
    static SymmetricMixtureNd gaussian(const Eigen::MatrixXd& cov) {
        return SymmetricMixtureNd({{1.0, Eigen::VectorXd::Zero(cov.rows()), cov}});
    }

    /// 1/2 N(-mean, cov) + 1/2 N(mean, cov).
    static SymmetricMixtureNd pair(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
        return SymmetricMixtureNd({{0.5, -mean, cov}, {0.5, mean, cov}});
    }

private:
    void validate() const {
        if (components_.empty()) throw SpecError("components", "at least one component required");
        const Eigen::Index d = components_.front().mean.size();
        if (d < 1) throw SpecError("dimension", "must be >= 1");
        double total = 0.0;
        for (std::size_t i = 0; i < components_.size(); ++i) {
            const auto& c = components_[i];
            const std::string at = "components[" + std::to_string(i) + "]";
            if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) throw SpecError(at + ".weight", "must be >= 0");
            if (c.mean.size() != d) throw SpecError(at + ".mean", "dimension mismatch");
            if (c.cov.rows() != d || c.cov.cols() != d) throw SpecError(at + ".cov", "must be d x d");
            if (!c.mean.allFinite() || !c.cov.allFinite()) throw SpecError(at, "non-finite entries");
            const double scale = std::max(1.0, c.cov.cwiseAbs().maxCoeff());
            if ((c.cov - c.cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
                throw SpecError(at + ".cov", "must be symmetric");
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c.cov, Eigen::EigenvaluesOnly);
            if (eig.eigenvalues().minCoeff() <= kEigenvalueFloor)
                throw SpecError(at + ".cov", "must be positive definite (eigenvalue floor 1e-10)");
            total += c.weight;
        }
        if (std::abs(total - 1.0) > 1e-9) throw SpecError("components", "weights must sum to 1");

        std::vector<bool> used(components_.size(), false);
        for (std::size_t i = 0; i < components_.size(); ++i) {
            if (used[i]) continue;
            const auto& c = components_[i];
            const double mscale = std::max(1.0, c.mean.cwiseAbs().maxCoeff());
            const double cscale = std::max(1.0, c.cov.cwiseAbs().maxCoeff());
            auto mirrors = [&](const MixtureComponentNd& o) {
                return std::abs(o.weight - c.weight) <= kSymmetryTol &&
                       (o.mean + c.mean).cwiseAbs().maxCoeff() <= kSymmetryTol * mscale &&
                       (o.cov - c.cov).cwiseAbs().maxCoeff() <= kSymmetryTol * cscale;
            };
            if (c.mean.cwiseAbs().maxCoeff() <= kSymmetryTol * mscale) {
                used[i] = true;
                continue;
            }
            bool found = false;
            for (std::size_t j = i + 1; j < components_.size() && !found; ++j) {
                if (!used[j] && mirrors(components_[j])) {
                    used[i] = used[j] = true;
                    found = true;
                }
            }
            if (!found)
                throw SpecError("components[" + std::to_string(i) + "]", "mirrored component (w, -mean, cov) missing");
        }
    }

    std::vector<MixtureComponentNd> components_;
};

namespace detail {

inline Eigen::VectorXd unit(const Eigen::VectorXd& u) {
    const double norm = u.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw Error("direction must be a nonzero vector");
    return u / norm;
}

}  // namespace detail

/// Law of X.u: a 1-D mixture with means mu_i.u and variances u' Sigma_i u.
inline DistributionSpec projected_spec(const SymmetricMixtureNd& m, const Eigen::VectorXd& direction) {
    if (static_cast<std::size_t>(direction.size()) != m.dimension()) throw Error("direction has wrong dimension");
    const Eigen::VectorXd u = detail::unit(direction);
    GaussianMixture out;
    double total = 0.0;
    for (const auto& c : m.components()) total += c.weight;
    for (const auto& c : m.components()) {
        if (c.weight == 0.0) continue;
        out.weights.push_back(c.weight / total);
        out.means.push_back(c.mean.dot(u));
        out.sds.push_back(std::sqrt(u.dot(c.cov * u)));
    }
    return out;
}

inline GridDensity project_to_line(const SymmetricMixtureNd& m, const Eigen::VectorXd& direction,
                                   const MaterializeOptions& opts = {}) {
    return materialize(projected_spec(m, direction), opts);
}

namespace detail {

inline double radical_inverse(std::size_t index, unsigned base) {
    double inv = 1.0 / base, scale = inv, out = 0.0;
    while (index > 0) {
        out += static_cast<double>(index % base) * scale;
        index /= base;
        scale *= inv;
    }
    return out;
}

inline unsigned nth_prime(std::size_t k) {
    unsigned p = 1;
    for (std::size_t found = 0; found <= k;) {
        ++p;
        bool prime = true;
        for (unsigned q = 2; q * q <= p; ++q)
            if (p % q == 0) prime = false;
        if (prime) ++found;
    }
    return p;
}

/// Representative of {u, -u} with its first nonzero coordinate positive.
inline Eigen::VectorXd upper_half(Eigen::VectorXd u) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u[i] > 0.0) break;
        if (u[i] < 0.0) {
            u = -u;
            break;
        }
    }
    return u;
}

}  // namespace detail

/// Deterministic directions on the half-sphere: angles pi k/n in d = 2, a
/// Fibonacci lattice on the upper hemisphere in d = 3, and the coordinate
/// axes followed by Halton points accepted inside the unit ball for d > 3.
inline std::vector<Eigen::VectorXd> direction_set(std::size_t d, std::size_t n) {
    if (d < 1) throw Error("direction_set: dimension must be >= 1");
    std::vector<Eigen::VectorXd> out;
    if (d == 1) {
        out.push_back(Eigen::VectorXd::Ones(1));
        return out;
    }
    if (n < 2 * d) throw Error("n_directions must be >= 2d");
    if (d == 2) {
        for (std::size_t k = 0; k < n; ++k) {
            const double t = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            Eigen::VectorXd u(2);
            u << std::cos(t), std::sin(t);
            out.push_back(u);
        }
        return out;
    }
    if (d == 3) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (std::size_t k = 0; k < n; ++k) {
            const double z = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
            const double r = std::sqrt(1.0 - z * z);
            const double phi = golden * static_cast<double>(k);
            Eigen::VectorXd u(3);
            u << r * std::cos(phi), r * std::sin(phi), z;
            out.push_back(u);
        }
        return out;
    }
    for (std::size_t i = 0; i < d; ++i) out.push_back(Eigen::VectorXd::Unit(static_cast<Eigen::Index>(d),
                                                                         static_cast<Eigen::Index>(i)));
    std::vector<unsigned> bases(d);
    for (std::size_t i = 0; i < d; ++i) bases[i] = detail::nth_prime(i);
    for (std::size_t index = 1; out.size() < n; ++index) {
        Eigen::VectorXd v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = 2.0 * detail::radical_inverse(index, bases[i]) - 1.0;
        const double norm = v.norm();
        if (norm > 1.0 || norm < 1e-3) continue;
        out.push_back(detail::upper_half(v / norm));
    }
    return out;
}

struct ScanOptions {
    MaterializeOptions grid;
    CertifyOptions certify;
    /// Probabilities for the per-direction half-space profiles.
    std::vector<double> ps = probability_grid(0.01, 0.99, 99);
};

struct DirectionScan {
    std::vector<Eigen::VectorXd> directions;
    std::vector<Certificate> certificates;
    std::vector<IsoProfile> profiles;
    Eigen::VectorXd worst_direction;
    Status verdict = Status::Inconclusive;
    double slack = 0.0;
};

/// Certifies every line projection; Certified here is up to the scan
/// resolution, Violated is conclusive.
inline DirectionScan weak_star_check(const SymmetricMixtureNd& m, std::vector<Eigen::VectorXd> directions,
                                     const ScanOptions& opts = {}) {
    if (directions.empty()) throw Error("weak_star_check: no directions");
    DirectionScan scan;
    for (auto& u : directions) {
        if (static_cast<std::size_t>(u.size()) != m.dimension()) throw Error("direction has wrong dimension");
        u = detail::unit(u);
    }
    scan.directions = std::move(directions);
    const std::size_t n = scan.directions.size();
    scan.certificates.resize(n);
    scan.profiles.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const auto g = project_to_line(m, scan.directions[i], opts.grid);
        scan.certificates[i] = certify_blc(g, opts.certify);
        scan.profiles[i] = halfspace_profile_1d(g, opts.ps);
    });
    auto rank = [](const Certificate& c) {
        return c.status == Status::Violated ? 0 : c.status == Status::Inconclusive ? 1 : 2;
    };
    std::size_t worst = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const auto& c = scan.certificates[i];
        const auto& w = scan.certificates[worst];
        if (rank(c) < rank(w) || (rank(c) == rank(w) && c.slack < w.slack)) worst = i;
    }
    scan.worst_direction = scan.directions[worst];
    scan.verdict = scan.certificates[worst].status;
    scan.slack = scan.certificates[worst].slack;
    return scan;
}

inline DirectionScan weak_star_check(const SymmetricMixtureNd& m, std::size_t n_directions,
                                     const ScanOptions& opts = {}) {
    return weak_star_check(m, direction_set(m.dimension(), n_directions), opts);
}

/// I^H(p) as the minimum over the given lines through the origin of the
/// projected 1-D half-space profiles.
inline IsoProfile halfspace_profile_nd(const SymmetricMixtureNd& m, std::span<const double> ps,
                                       const std::vector<Eigen::VectorXd>& directions,
                                       const MaterializeOptions& grid = {}) {
    if (directions.empty()) throw Error("halfspace_profile_nd: no directions");
    std::vector<IsoProfile> per(directions.size());
    parallel_for(directions.size(), [&](std::size_t i) {
        per[i] = halfspace_profile_1d(project_to_line(m, directions[i], grid), ps);
    });
    IsoProfile out{std::vector<double>(ps.begin(), ps.end()), per.front().values, ProfileKind::HalfspaceNd};
    for (const auto& p : per)
        for (std::size_t k = 0; k < ps.size(); ++k) out.values[k] = std::min(out.values[k], p.values[k]);
    return out;
}

inline IsoProfile halfspace_profile_nd(const SymmetricMixtureNd& m, std::span<const double> ps,
                                       std::size_t n_directions, const MaterializeOptions& grid = {}) {
    return halfspace_profile_nd(m, ps, direction_set(m.dimension(), n_directions), grid);
}

inline Certificate weak_blc_check_nd(const SymmetricMixtureNd& m, std::span<const double> ps,
                                     const std::vector<Eigen::VectorXd>& directions, const ScanOptions& opts = {}) {
    return weak_blc_ratio_check(halfspace_profile_nd(m, ps, directions, opts.grid), opts.certify.tolerance);
}

inline Certificate weak_blc_check_nd(const SymmetricMixtureNd& m, std::span<const double> ps,
                                     std::size_t n_directions, const ScanOptions& opts = {}) {
    return weak_blc_check_nd(m, ps, direction_set(m.dimension(), n_directions), opts);
}

/// Law of X + Y for independent mixtures: pairwise products of weights,
/// sums of means and covariances.
inline SymmetricMixtureNd convolve_nd(const SymmetricMixtureNd& a, const SymmetricMixtureNd& b) {
    if (a.dimension() != b.dimension()) throw Error("convolve_nd: dimension mismatch");
    std::vector<MixtureComponentNd> out;
    for (const auto& x : a.components())
        for (const auto& y : b.components()) out.push_back({x.weight * y.weight, x.mean + y.mean, x.cov + y.cov});
    return SymmetricMixtureNd(std::move(out));
}

/// Law of A X.
inline SymmetricMixtureNd linear_image(const SymmetricMixtureNd& m, const Eigen::MatrixXd& A) {
    if (A.cols() != static_cast<Eigen::Index>(m.dimension())) throw Error("linear_image: dimension mismatch");
    std::vector<MixtureComponentNd> out;
    for (const auto& c : m.components()) out.push_back({c.weight, A * c.mean, A * c.cov * A.transpose()});
    return SymmetricMixtureNd(std::move(out));
}

inline void write_csv(const DirectionScan& scan, std::ostream& out) {
    const Eigen::Index d = scan.directions.empty() ? 0 : scan.directions.front().size();
    for (Eigen::Index i = 0; i < d; ++i) out << "u_" << (i + 1) << ',';
    out << "slack,status\n";
    for (std::size_t k = 0; k < scan.directions.size(); ++k) {
        for (Eigen::Index i = 0; i < d; ++i) out << format_number(scan.directions[k][i]) << ',';
        out << format_number(scan.certificates[k].slack) << ',' << to_string(scan.certificates[k].status) << '\n';
    }
}

}  // namespace blc
