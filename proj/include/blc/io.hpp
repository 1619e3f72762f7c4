#pragma once

#include <blc/certificate.hpp>
#include <blc/convolution.hpp>
#include <blc/distribution.hpp>
#include <blc/multivariate.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace blc {

using json = nlohmann::json;

namespace detail {

inline const json& require_field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw SpecError(path.empty() ? std::string("<root>") : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SpecError(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

inline double read_number(const json& j, const std::string& key, const std::string& path) {
    const auto& v = require_field(j, key, path);
    if (!v.is_number()) throw SpecError(path + "." + key, "expected a number");
    return v.get<double>();
}

inline std::vector<double> read_vector(const json& v, const std::string& field) {
    if (!v.is_array()) throw SpecError(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw SpecError(field + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

inline std::vector<double> read_vector(const json& j, const std::string& key, const std::string& path) {
    return read_vector(require_field(j, key, path), path + "." + key);
}

}  // namespace detail

/// {"family": ..., "params": {...}}; the result is validated.
inline DistributionSpec spec_from_json(const json& j) {
    const auto& fam = detail::require_field(j, "family", "");
    if (!fam.is_string()) throw SpecError("family", "expected a string");
    const std::string family = fam.get<std::string>();
    const auto& p = detail::require_field(j, "params", "");
    if (!p.is_object()) throw SpecError("params", "expected an object");
    DistributionSpec spec;
    if (family == "gaussian") {
        spec = Gaussian{detail::read_number(p, "mean", "params"), detail::read_number(p, "sd", "params")};
    } else if (family == "logistic") {
        spec = Logistic{detail::read_number(p, "location", "params"), detail::read_number(p, "scale", "params")};
    } else if (family == "laplace") {
        spec = Laplace{detail::read_number(p, "location", "params"), detail::read_number(p, "scale", "params")};
    } else if (family == "gaussian_mixture") {
        spec = GaussianMixture{detail::read_vector(p, "weights", "params"), detail::read_vector(p, "means", "params"),
                               detail::read_vector(p, "sds", "params")};
    } else if (family == "uniform") {
        spec = Uniform{detail::read_number(p, "lo", "params"), detail::read_number(p, "hi", "params")};
    } else if (family == "grid") {
        spec = GridSpec{detail::read_vector(p, "abscissas", "params"),
                        detail::read_vector(p, "density_values", "params")};
    } else {
        throw SpecError("family", "unknown family '" + family + "'");
    }
    validate(spec);
    return spec;
}

inline json to_json(const DistributionSpec& spec) {
    json p;
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Gaussian>) p = {{"mean", d.mean}, {"sd", d.sd}};
            if constexpr (std::is_same_v<T, Logistic> || std::is_same_v<T, Laplace>)
                p = {{"location", d.location}, {"scale", d.scale}};
            if constexpr (std::is_same_v<T, GaussianMixture>)
                p = {{"weights", d.weights}, {"means", d.means}, {"sds", d.sds}};
            if constexpr (std::is_same_v<T, Uniform>) p = {{"lo", d.lo}, {"hi", d.hi}};
            if constexpr (std::is_same_v<T, GridSpec>)
                p = {{"abscissas", d.abscissas}, {"density_values", d.density_values}};
        },
        spec);
    return {{"family", family_name(spec)}, {"params", p}};
}

/// {"dimension": d, "components": [{"weight", "mean", "cov"}]} with cov
/// given as a list of rows.
inline SymmetricMixtureNd mixture_nd_from_json(const json& j) {
    const auto& dim = detail::require_field(j, "dimension", "");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) throw SpecError("dimension", "expected an integer >= 1");
    const auto d = static_cast<Eigen::Index>(dim.get<long long>());
    const auto& comps = detail::require_field(j, "components", "");
    if (!comps.is_array() || comps.empty()) throw SpecError("components", "expected a nonempty array");
    std::vector<MixtureComponentNd> out;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string at = "components[" + std::to_string(i) + "]";
        MixtureComponentNd c;
        c.weight = detail::read_number(comps[i], "weight", at);
        const auto mean = detail::read_vector(comps[i], "mean", at);
        if (static_cast<Eigen::Index>(mean.size()) != d) throw SpecError(at + ".mean", "length must equal dimension");
        c.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), d);
        const auto& cov = detail::require_field(comps[i], "cov", at);
        if (!cov.is_array() || static_cast<Eigen::Index>(cov.size()) != d)
            throw SpecError(at + ".cov", "expected d rows");
        c.cov.resize(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            const auto row = detail::read_vector(cov[r], at + ".cov[" + std::to_string(r) + "]");
            if (static_cast<Eigen::Index>(row.size()) != d)
                throw SpecError(at + ".cov[" + std::to_string(r) + "]", "expected d entries");
            for (Eigen::Index col = 0; col < d; ++col) c.cov(r, col) = row[col];
        }
        out.push_back(std::move(c));
    }
    return SymmetricMixtureNd(std::move(out));
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(path + ": malformed JSON: " + e.what());
    }
}

inline json to_json(const Certificate& c) {
    json j = {{"status", to_string(c.status)},
              {"slack", c.slack},
              {"condition_id", c.condition_id},
              {"tolerance", c.tolerance_used}};
    j["witness_x"] = c.witness_x ? json(*c.witness_x) : json(nullptr);
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

inline json to_json(const ConvolutionCriterionReport& r) {
    json j = {{"min_lower", r.min_lower},
              {"min_upper", r.min_upper},
              {"verdict", to_string(r.verdict)},
              {"tolerance", r.tolerance},
              {"anchors", r.xs.size()},
              {"excluded_weight", r.excluded_weight}};
    if (!r.skipped.empty()) j["skipped"] = r.skipped;
    return j;
}

}  // namespace blc
