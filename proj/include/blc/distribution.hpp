#pragma once

#include <blc/error.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace blc {

// Parametric families ----------------------------------------------------

struct Gaussian {
    double mean = 0.0;
    double sd = 1.0;
};

struct Logistic {
    double location = 0.0;
    double scale = 1.0;
};

struct Laplace {
    double location = 0.0;
    double scale = 1.0;
};

struct GaussianMixture {
    std::vector<double> weights;
    std::vector<double> means;
    std::vector<double> sds;
};

struct Uniform {
    double lo = 0.0;
    double hi = 1.0;
};

/// Tabulated density; values need not be normalized.
struct GridSpec {
    std::vector<double> abscissas;
    std::vector<double> density_values;
};

using DistributionSpec = std::variant<Gaussian, Logistic, Laplace, GaussianMixture, Uniform, GridSpec>;

inline constexpr double kMixtureWeightTol = 1e-12;
inline constexpr std::size_t kMinGridSpecPoints = 8;

inline std::string family_name(const DistributionSpec& spec) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Gaussian>) return "gaussian";
            else if constexpr (std::is_same_v<T, Logistic>) return "logistic";
            else if constexpr (std::is_same_v<T, Laplace>) return "laplace";
            else if constexpr (std::is_same_v<T, GaussianMixture>) return "gaussian_mixture";
            else if constexpr (std::is_same_v<T, Uniform>) return "uniform";
            else return "grid";
        },
        spec);
}

inline void validate(const DistributionSpec& spec) {
    auto positive = [](double v, const char* field) {
        if (!(std::isfinite(v) && v > 0.0)) throw SpecError(field, "must be a finite positive number");
    };
    auto finite = [](double v, const char* field) {
        if (!std::isfinite(v)) throw SpecError(field, "must be finite");
    };
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                finite(d.mean, "params.mean");
                positive(d.sd, "params.sd");
            } else if constexpr (std::is_same_v<T, Logistic> || std::is_same_v<T, Laplace>) {
                finite(d.location, "params.location");
                positive(d.scale, "params.scale");
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                if (d.weights.empty()) throw SpecError("params.weights", "must be nonempty");
                if (d.means.size() != d.weights.size() || d.sds.size() != d.weights.size())
                    throw SpecError("params.means", "weights, means and sds must have equal length");
                double total = 0.0;
                for (double w : d.weights) {
                    if (!(std::isfinite(w) && w >= 0.0)) throw SpecError("params.weights", "entries must be >= 0");
                    total += w;
                }
                if (std::abs(total - 1.0) > kMixtureWeightTol) throw SpecError("params.weights", "must sum to 1");
                for (double m : d.means) finite(m, "params.means");
                for (double s : d.sds) positive(s, "params.sds");
            } else if constexpr (std::is_same_v<T, Uniform>) {
                finite(d.lo, "params.lo");
                finite(d.hi, "params.hi");
                if (!(d.hi > d.lo)) throw SpecError("params.hi", "must exceed params.lo");
            } else {
                if (d.abscissas.size() < kMinGridSpecPoints)
                    throw SpecError("params.abscissas", "needs at least 8 points");
                if (d.density_values.size() != d.abscissas.size())
                    throw SpecError("params.density_values", "length must match abscissas");
                for (std::size_t k = 0; k < d.abscissas.size(); ++k) {
                    finite(d.abscissas[k], "params.abscissas");
                    if (k > 0 && !(d.abscissas[k] > d.abscissas[k - 1]))
                        throw SpecError("params.abscissas", "must be strictly increasing");
                    if (!(std::isfinite(d.density_values[k]) && d.density_values[k] >= 0.0))
                        throw SpecError("params.density_values", "entries must be finite and >= 0");
                }
            }
        },
        spec);
}

/// Law of a*X + b for X ~ spec, a != 0.
inline DistributionSpec affine_image(const DistributionSpec& spec, double a, double b) {
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) throw Error("affine_image: need finite a != 0");
    const double s = std::abs(a);
    return std::visit(
        [&](const auto& d) -> DistributionSpec {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return Gaussian{a * d.mean + b, s * d.sd};
            } else if constexpr (std::is_same_v<T, Logistic>) {
                return Logistic{a * d.location + b, s * d.scale};
            } else if constexpr (std::is_same_v<T, Laplace>) {
                return Laplace{a * d.location + b, s * d.scale};
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                GaussianMixture out = d;
                for (auto& m : out.means) m = a * m + b;
                for (auto& sd : out.sds) sd *= s;
                return out;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                const double u = a * d.lo + b, v = a * d.hi + b;
                return Uniform{std::min(u, v), std::max(u, v)};
            } else {
                GridSpec out;
                const std::size_t n = d.abscissas.size();
                out.abscissas.resize(n);
                out.density_values.resize(n);
                for (std::size_t k = 0; k < n; ++k) {
                    const std::size_t src = a > 0 ? k : n - 1 - k;
                    out.abscissas[k] = a * d.abscissas[src] + b;
                    out.density_values[k] = d.density_values[src] / s;
                }
                return out;
            }
        },
        spec);
}

// Closed-form evaluation ---------------------------------------------------

namespace detail {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

inline double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }
inline double normal_sf(double z) { return 0.5 * std::erfc(z * std::numbers::sqrt2 / 2.0); }

inline double logistic_cdf(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace detail

/// Density, distribution function, survival function and density derivative
/// of a parametric family. `GridSpec` has no closed form.
class AnalyticLaw {
public:
    explicit AnalyticLaw(DistributionSpec spec) : spec_(std::move(spec)) {
        validate(spec_);
        if (std::holds_alternative<GridSpec>(spec_)) throw Error("AnalyticLaw: grid specs have no closed form");
    }

    const DistributionSpec& spec() const noexcept { return spec_; }

    double pdf(double x) const {
        return std::visit([x](const auto& d) { return pdf_of(d, x); }, spec_);
    }
    double cdf(double x) const {
        return std::visit([x](const auto& d) { return cdf_of(d, x); }, spec_);
    }
    double sf(double x) const {
        return std::visit([x](const auto& d) { return sf_of(d, x); }, spec_);
    }
    double dpdf(double x) const {
        return std::visit([x](const auto& d) { return dpdf_of(d, x); }, spec_);
    }

    /// Points where the density is not differentiable.
    std::vector<double> kinks() const {
        if (const auto* l = std::get_if<Laplace>(&spec_)) return {l->location};
        if (const auto* u = std::get_if<Uniform>(&spec_)) return {u->lo, u->hi};
        return {};
    }

    /// Support of the uniform family; unbounded families return nullopt.
    std::optional<std::pair<double, double>> bounded_support() const {
        if (const auto* u = std::get_if<Uniform>(&spec_)) return std::pair{u->lo, u->hi};
        return std::nullopt;
    }

    /// A location and spread used to bracket tail quantiles.
    std::pair<double, double> bracket_hint() const {
        return std::visit(
            [](const auto& d) -> std::pair<double, double> {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Gaussian>) return {d.mean, d.sd};
                else if constexpr (std::is_same_v<T, Logistic> || std::is_same_v<T, Laplace>)
                    return {d.location, d.scale};
                else if constexpr (std::is_same_v<T, GaussianMixture>) {
                    const auto [lo, hi] = std::minmax_element(d.means.begin(), d.means.end());
                    const double sd = *std::max_element(d.sds.begin(), d.sds.end());
                    return {0.5 * (*lo + *hi), 0.5 * (*hi - *lo) + sd};
                } else if constexpr (std::is_same_v<T, Uniform>)
                    return {0.5 * (d.lo + d.hi), d.hi - d.lo};
                else
                    return {0.0, 1.0};
            },
            spec_);
    }

private:
    static double pdf_of(const Gaussian& d, double x) { return detail::normal_pdf((x - d.mean) / d.sd) / d.sd; }
    static double cdf_of(const Gaussian& d, double x) { return detail::normal_cdf((x - d.mean) / d.sd); }
    static double sf_of(const Gaussian& d, double x) { return detail::normal_sf((x - d.mean) / d.sd); }
    static double dpdf_of(const Gaussian& d, double x) {
        const double z = (x - d.mean) / d.sd;
        return -z * detail::normal_pdf(z) / (d.sd * d.sd);
    }

    static double pdf_of(const Logistic& d, double x) {
        const double e = std::exp(-std::abs((x - d.location) / d.scale));
        return e / (d.scale * (1.0 + e) * (1.0 + e));
    }
    static double cdf_of(const Logistic& d, double x) { return detail::logistic_cdf((x - d.location) / d.scale); }
    static double sf_of(const Logistic& d, double x) { return detail::logistic_cdf(-(x - d.location) / d.scale); }
    static double dpdf_of(const Logistic& d, double x) {
        const double z = (x - d.location) / d.scale;
        return -std::tanh(0.5 * z) * pdf_of(d, x) / d.scale;
    }

    static double pdf_of(const Laplace& d, double x) {
        return std::exp(-std::abs(x - d.location) / d.scale) / (2.0 * d.scale);
    }
    static double cdf_of(const Laplace& d, double x) {
        const double z = (x - d.location) / d.scale;
        return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    static double sf_of(const Laplace& d, double x) {
        const double z = (x - d.location) / d.scale;
        return z > 0.0 ? 0.5 * std::exp(-z) : 1.0 - 0.5 * std::exp(z);
    }
    static double dpdf_of(const Laplace& d, double x) {
        if (x == d.location) return 0.0;
        const double sign = x > d.location ? -1.0 : 1.0;
        return sign * pdf_of(d, x) / d.scale;
    }

    template <class Fn>
    static double mix_sum(const GaussianMixture& d, Fn&& fn) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d.weights.size(); ++i) acc += d.weights[i] * fn(Gaussian{d.means[i], d.sds[i]});
        return acc;
    }
    static double pdf_of(const GaussianMixture& d, double x) {
        return mix_sum(d, [x](const Gaussian& g) { return pdf_of(g, x); });
    }
    static double cdf_of(const GaussianMixture& d, double x) {
        return mix_sum(d, [x](const Gaussian& g) { return cdf_of(g, x); });
    }
    static double sf_of(const GaussianMixture& d, double x) {
        return mix_sum(d, [x](const Gaussian& g) { return sf_of(g, x); });
    }
    static double dpdf_of(const GaussianMixture& d, double x) {
        return mix_sum(d, [x](const Gaussian& g) { return dpdf_of(g, x); });
    }

    static double pdf_of(const Uniform& d, double x) { return (x < d.lo || x > d.hi) ? 0.0 : 1.0 / (d.hi - d.lo); }
    static double cdf_of(const Uniform& d, double x) { return std::clamp((x - d.lo) / (d.hi - d.lo), 0.0, 1.0); }
    static double sf_of(const Uniform& d, double x) { return std::clamp((d.hi - x) / (d.hi - d.lo), 0.0, 1.0); }
    static double dpdf_of(const Uniform&, double) { return 0.0; }

    static double pdf_of(const GridSpec&, double) { return 0.0; }
    static double cdf_of(const GridSpec&, double) { return 0.0; }
    static double sf_of(const GridSpec&, double) { return 0.0; }
    static double dpdf_of(const GridSpec&, double) { return 0.0; }

    DistributionSpec spec_;
};

}  // namespace blc
