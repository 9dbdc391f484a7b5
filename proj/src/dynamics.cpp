#include "loglab/dynamics.hpp"

#include <cmath>

namespace loglab {

namespace {

bool positive_finite(double v) {
    return std::isfinite(v) && v > 0.0;
}

void require_no_control(std::optional<double> u) {
    if (u.has_value()) {
        throw UsageError("a control rate is only accepted in scheduled mode");
    }
}

} // namespace

ModelParams::ModelParams(double r_, double k_) : r(r_), k(k_) {
    if (!positive_finite(r)) {
        throw ValidationError("r", "growth rate r must be positive and finite");
    }
    if (!positive_finite(k)) {
        throw ValidationError("k", "carrying capacity k must be positive and finite");
    }
}

ConstantEffort::ConstantEffort(double e_) : e(e_) {
    if (!(std::isfinite(e) && e >= 0.0)) {
        throw ValidationError("effort", "effort rate must be nonnegative and finite");
    }
}

ConstantQuota::ConstantQuota(double h_) : h(h_) {
    if (!(std::isfinite(h) && h >= 0.0)) {
        throw ValidationError("quota", "quota rate must be nonnegative and finite");
    }
}

State::State(double x_, double t_) : x(x_), t(t_) {
    if (!(std::isfinite(x) && x >= 0.0)) {
        throw ValidationError("x", "population must be nonnegative and finite");
    }
    if (!(std::isfinite(t) && t >= 0.0)) {
        throw ValidationError("t", "time must be nonnegative and finite");
    }
}

double vector_field(const ModelParams& p, const HarvestMode& mode, double x,
                    std::optional<double> u) {
    if (!(std::isfinite(x) && x >= 0.0)) {
        throw DomainError("vector_field: population must be nonnegative and finite");
    }
    const double growth = p.r * x * (1.0 - x / p.k);
    if (std::get_if<Unexploited>(&mode)) {
        require_no_control(u);
        return growth;
    }
    if (const auto* m = std::get_if<ConstantEffort>(&mode)) {
        require_no_control(u);
        return growth - m->e * x;
    }
    if (const auto* m = std::get_if<ConstantQuota>(&mode)) {
        require_no_control(u);
        return growth - m->h;
    }
    // Scheduled
    if (!u.has_value()) {
        throw UsageError("scheduled mode requires a control rate");
    }
    if (!(std::isfinite(*u) && *u >= 0.0)) {
        throw DomainError("vector_field: control rate must be nonnegative and finite");
    }
    return growth - *u;
}

double closed_form(const ModelParams& p, double x0, double t) {
    if (!(std::isfinite(x0) && x0 > 0.0)) {
        throw DomainError("closed_form: initial population must be positive and finite");
    }
    if (!(std::isfinite(t) && t >= 0.0)) {
        throw DomainError("closed_form: time must be nonnegative and finite");
    }
    const double decay = std::exp(-p.r * t);
    return p.k / (1.0 + (p.k / x0 - 1.0) * decay);
}

double per_capita_growth(const ModelParams& p, const HarvestMode& mode, double x) {
    if (!(std::isfinite(x) && x >= 0.0)) {
        throw DomainError("per_capita_growth: population must be nonnegative and finite");
    }
    const double base = p.r * (1.0 - x / p.k);
    if (std::get_if<Unexploited>(&mode)) {
        return base;
    }
    if (const auto* m = std::get_if<ConstantEffort>(&mode)) {
        return base - m->e;
    }
    if (const auto* m = std::get_if<ConstantQuota>(&mode)) {
        if (x == 0.0) {
            throw DomainError("per_capita_growth: quota mode is undefined at x = 0");
        }
        return base - m->h / x;
    }
    throw UsageError("per-head growth is not defined for scheduled control");
}

} // namespace loglab
