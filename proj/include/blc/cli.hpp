#pragma once

#include <blc/certify.hpp>
#include <blc/convolution.hpp>
#include <blc/grid_density.hpp>
#include <blc/io.hpp>
#include <blc/isoperimetry.hpp>
#include <blc/multivariate.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace blc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 3;
inline constexpr int kExitRuntime = 4;

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"certify", "iso", "convolve", "criterion", "smooth", "project",
                                                "scan-nd"};
    return names;
}

struct RunConfig {
    std::string command;
    std::string spec;
    std::string x;
    std::string y;
    /// Directory receiving CSV/JSON artifacts; empty writes only the summary.
    std::string out;
    std::size_t n = kDefaultGridPoints;
    std::optional<double> tol;
    std::size_t directions = 64;
    std::string pgrid = "0.01:0.99:99";
    std::string rgrid = "0.5:6:12";
    std::string sigmas = "1,0.5,0.25,0.1";
    std::string u;
};

class UsageError : public Error {
public:
    using Error::Error;
};

/// "start:stop:count" (inclusive, equispaced) or a comma list.
inline std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw UsageError(flag + ": cannot parse '" + s + "'");
        }
        if (used != s.size()) throw UsageError(flag + ": cannot parse '" + s + "'");
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
        if (parts.size() != 3) throw UsageError(flag + ": expected start:stop:count");
        const double a = number(parts[0]), b = number(parts[1]), c = number(parts[2]);
        if (!(c >= 1.0) || c != std::floor(c)) throw UsageError(flag + ": count must be a positive integer");
        const auto count = static_cast<std::size_t>(c);
        for (std::size_t k = 0; k < count; ++k)
            out.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
        return out;
    }
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(number(item));
    if (out.empty()) throw UsageError(flag + ": empty list");
    return out;
}

inline int exit_code(Status s) {
    switch (s) {
        case Status::Certified: return kExitOk;
        case Status::Violated: return kExitViolated;
        case Status::Inconclusive: return kExitInconclusive;
    }
    return kExitRuntime;
}

inline int exit_code(Verdict v) {
    switch (v) {
        case Verdict::Stable: return kExitOk;
        case Verdict::Unstable: return kExitViolated;
        case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitRuntime;
}

namespace detail {

inline void require_file(const std::string& path, const std::string& flag) {
    if (path.empty()) throw UsageError(flag + " is required");
    if (!std::filesystem::exists(path)) throw UsageError(flag + ": no such file " + path);
}

inline DistributionSpec load_spec(const std::string& path) {
    try {
        return spec_from_json(read_json_file(path));
    } catch (const SpecError& e) {
        throw SpecError(path + ": " + e.field(), e.reason());
    }
}

inline SymmetricMixtureNd load_mixture_nd(const std::string& path) {
    try {
        return mixture_nd_from_json(read_json_file(path));
    } catch (const SpecError& e) {
        throw SpecError(path + ": " + e.field(), e.reason());
    }
}

class Artifacts {
public:
    explicit Artifacts(std::string dir) : dir_(std::move(dir)) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    template <class Writer>
    void write(const std::string& name, Writer&& writer) const {
        if (dir_.empty()) return;
        const auto path = std::filesystem::path(dir_) / name;
        std::ofstream out(path);
        if (!out) throw Error("cannot write " + path.string());
        writer(out);
    }

    void write_json(const std::string& name, const json& j) const {
        write(name, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
    }

private:
    std::string dir_;
};

inline std::vector<double> probability_grid_checked(std::vector<double> ps) {
    for (double p : ps)
        if (!(p > 0.0 && p < 1.0)) throw UsageError("--pgrid: probabilities must lie in (0, 1)");
    return ps;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace detail

/// Runs one command, printing a JSON summary to `out`. Returns the exit
/// status: 0 Certified/Stable, 1 Violated/Unstable, 2 Inconclusive.
/// Throws UsageError/SpecError for bad input and Error for failures.
inline int run(const RunConfig& cfg, std::ostream& out) {
    if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end())
        throw UsageError("unknown command '" + cfg.command + "'");
    if (cfg.n < kMinGridPoints) throw UsageError("--n must be >= 64");
    if (cfg.tol && !(*cfg.tol >= 0.0)) throw UsageError("--tol must be >= 0");

    MaterializeOptions mopts;
    mopts.n_points = cfg.n;
    CertifyOptions copts;
    if (cfg.tol) copts.tolerance = *cfg.tol;
    const detail::Artifacts artifacts(cfg.out);
    json summary{{"command", cfg.command}};
    int code = kExitOk;

    if (cfg.command == "certify") {
        detail::require_file(cfg.spec, "--spec");
        const auto g = materialize(detail::load_spec(cfg.spec), mopts);
        const auto cert = certify_blc(g, copts);
        summary["certificate"] = to_json(cert);
        artifacts.write_json("certificate.json", to_json(cert));
        code = exit_code(cert.status);
    } else if (cfg.command == "iso") {
        detail::require_file(cfg.spec, "--spec");
        const auto g = materialize(detail::load_spec(cfg.spec), mopts);
        const auto ps = detail::probability_grid_checked(parse_grid(cfg.pgrid, "--pgrid"));
        const auto cert = certify_blc(g, copts);
        const auto profile = iso_profile(g, ps);
        artifacts.write("profile.csv", [&](std::ostream& o) { write_csv(profile, o); });
        json constants{{"bobkov_houdre", detail::number_or_null(bobkov_houdre_constant(g))},
                       {"median", median(g)},
                       {"f_median", density_at(g, median(g))}};
        if (cert.certified()) {
            constants["isoperimetric_2fm"] = blc_isoperimetric_constant(g, copts);
            constants["poincare"] = poincare_constant(g, copts);
            const auto rs = parse_grid(cfg.rgrid, "--rgrid");
            const auto conc = concentration_check(g, rs, 1e-12, copts);
            constants["concentration_within_bound"] = conc.all_within();
            artifacts.write("concentration.csv", [&](std::ostream& o) { write_csv(conc, o); });
        }
        summary["certificate"] = to_json(cert);
        summary["constants"] = constants;
        artifacts.write_json("constants.json", constants);
        code = exit_code(cert.status);
    } else if (cfg.command == "convolve" || cfg.command == "criterion") {
        detail::require_file(cfg.x, "--x");
        detail::require_file(cfg.y, "--y");
        const auto gx = materialize(detail::load_spec(cfg.x), mopts);
        const auto gy = materialize(detail::load_spec(cfg.y), mopts);
        const auto sum = convolve(gx, gy);
        if (cfg.command == "convolve") {
            const auto cert = certify_blc(sum, copts);
            artifacts.write("density.csv", [&](std::ostream& o) { write_csv(sum, o); });
            artifacts.write_json("certificate.json", to_json(cert));
            summary["certificate"] = to_json(cert);
            code = exit_code(cert.status);
        } else {
            CriterionOptions crit;
            if (cfg.tol) crit.tolerance = *cfg.tol;
            const auto rep = covariance_criterion(gx, gy, default_criterion_anchors(sum), crit);
            json j = to_json(rep);
            j["min_lower"] = detail::number_or_null(rep.min_lower);
            j["min_upper"] = detail::number_or_null(rep.min_upper);
            artifacts.write("criterion.csv", [&](std::ostream& o) { write_csv(rep, o); });
            artifacts.write_json("criterion.json", j);
            summary["criterion"] = j;
            code = exit_code(rep.verdict);
        }
    } else if (cfg.command == "smooth") {
        detail::require_file(cfg.spec, "--spec");
        const auto g = materialize(detail::load_spec(cfg.spec), mopts);
        const auto sigmas = parse_grid(cfg.sigmas, "--sigmas");
        const std::vector<LpNorm> norms{LpNorm::L1, LpNorm::L2, LpNorm::Linf};
        const auto seq = smooth_sequence(g, sigmas, norms, copts);
        json steps = json::array();
        bool all_certified = true;
        for (const auto& s : seq.steps) {
            steps.push_back({{"sigma", s.sigma}, {"status", to_string(s.certificate.status)}, {"distances", s.distances}});
            all_certified = all_certified && s.certificate.certified();
        }
        artifacts.write("smooth.csv", [&](std::ostream& o) {
            o << "sigma,L1,L2,Linf,status\n";
            for (const auto& s : seq.steps)
                o << format_number(s.sigma) << ',' << format_number(s.distances.at("L1")) << ','
                  << format_number(s.distances.at("L2")) << ',' << format_number(s.distances.at("Linf")) << ','
                  << to_string(s.certificate.status) << '\n';
        });
        summary["steps"] = steps;
        summary["distances_monotone"] = seq.distances_monotone;
        code = all_certified && seq.distances_monotone ? kExitOk : kExitViolated;
    } else if (cfg.command == "project") {
        detail::require_file(cfg.spec, "--spec");
        const auto m = detail::load_mixture_nd(cfg.spec);
        if (cfg.u.empty()) throw UsageError("--u is required for project");
        const auto coords = parse_grid(cfg.u, "--u");
        if (coords.size() != m.dimension()) throw UsageError("--u: expected " + std::to_string(m.dimension()) + " coordinates");
        const Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size()));
        const auto g = project_to_line(m, u, mopts);
        const auto cert = certify_blc(g, copts);
        artifacts.write("projected.csv", [&](std::ostream& o) { write_csv(g, o); });
        summary["projection"] = to_json(projected_spec(m, u));
        summary["certificate"] = to_json(cert);
        code = exit_code(cert.status);
    } else {
        detail::require_file(cfg.spec, "--spec");
        const auto m = detail::load_mixture_nd(cfg.spec);
        ScanOptions sopts;
        sopts.grid = mopts;
        sopts.certify = copts;
        sopts.ps = detail::probability_grid_checked(parse_grid(cfg.pgrid, "--pgrid"));
        const auto dirs = direction_set(m.dimension(), cfg.directions);
        const auto scan = weak_star_check(m, dirs, sopts);
        const auto weak = weak_blc_check_nd(m, sopts.ps, dirs, sopts);
        json verdict{{"verdict", to_string(scan.verdict)},
                     {"slack", scan.slack},
                     {"worst_direction", std::vector<double>(scan.worst_direction.data(),
                                                             scan.worst_direction.data() + scan.worst_direction.size())},
                     {"n_directions", dirs.size()},
                     {"weak_blc", to_json(weak)}};
        artifacts.write("scan.csv", [&](std::ostream& o) { write_csv(scan, o); });
        artifacts.write_json("verdict.json", verdict);
        summary["scan"] = verdict;
        code = exit_code(scan.verdict);
    }
    out << summary.dump(2) << '\n';
    return code;
}

}  // namespace blc::cli
