#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace blc {

enum class Status { Certified, Violated, Inconclusive };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Certified: return "Certified";
        case Status::Violated: return "Violated";
        case Status::Inconclusive: return "Inconclusive";
    }
    return "?";
}

/// Outcome of a shape-constraint check on a discretization.
///
/// `slack` is the worst signed margin found (scale-free for the 1-D checks);
/// Violated iff slack < -tolerance_used, in which case witness_x locates it.
/// Inconclusive marks checks whose preconditions failed on the grid.
struct Certificate {
    Status status = Status::Certified;
    double slack = std::numeric_limits<double>::infinity();
    std::optional<double> witness_x;
    std::string condition_id;
    double tolerance_used = 0.0;
    std::string detail;

    bool certified() const noexcept { return status == Status::Certified; }
    bool violated() const noexcept { return status == Status::Violated; }
};

/// Running minimum of signed margins with the location that produced it.
class SlackTracker {
public:
    void observe(double margin, double x) {
        if (std::isnan(margin)) return;
        if (margin < slack_) {
            slack_ = margin;
            witness_ = x;
        }
    }

    double slack() const noexcept { return slack_; }
    std::optional<double> witness() const noexcept { return witness_; }

    Certificate finish(std::string condition_id, double tolerance) const {
        Certificate c;
        c.condition_id = std::move(condition_id);
        c.tolerance_used = tolerance;
        c.slack = slack_;
        c.witness_x = witness_;
        c.status = (slack_ < -tolerance && witness_) ? Status::Violated : Status::Certified;
        if (c.status == Status::Certified && !std::isfinite(c.slack)) c.slack = 0.0;
        return c;
    }

private:
    double slack_ = std::numeric_limits<double>::infinity();
    std::optional<double> witness_;
};

inline Certificate inconclusive(std::string condition_id, double tolerance, std::optional<double> witness,
                                std::string detail) {
    Certificate c;
    c.status = Status::Inconclusive;
    c.slack = 0.0;
    c.witness_x = witness;
    c.condition_id = std::move(condition_id);
    c.tolerance_used = tolerance;
    c.detail = std::move(detail);
    return c;
}

}  // namespace blc
