#pragma once

#include <optional>
#include <variant>

#include "loglab/errors.hpp"

namespace loglab {

struct PolicySchedule; // declared in control.hpp

// Growth rate r and carrying capacity k of the logistic field
// x' = r x (1 - x/k). Both strictly positive and finite.
struct ModelParams {
    double r;
    double k;

    ModelParams(double r, double k);

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// No harvesting.
struct Unexploited {
    friend bool operator==(const Unexploited&, const Unexploited&) = default;
};

// Removal proportional to the standing population: rate e * x.
struct ConstantEffort {
    double e;

    explicit ConstantEffort(double e);

    friend bool operator==(const ConstantEffort&, const ConstantEffort&) = default;
};

// Removal at a fixed absolute rate h, independent of the population.
struct ConstantQuota {
    double h;

    explicit ConstantQuota(double h);

    friend bool operator==(const ConstantQuota&, const ConstantQuota&) = default;
};

// The harvest rate follows a synthesized control plan. The instantaneous
// rate is supplied by the caller at evaluation time; the policy simulator
// resolves the plan into per-interval levels.
struct Scheduled {
    const PolicySchedule* schedule = nullptr;

    friend bool operator==(const Scheduled&, const Scheduled&) = default;
};

using HarvestMode = std::variant<Unexploited, ConstantEffort, ConstantQuota, Scheduled>;

// Population x at time t. The state space is x >= 0; negative populations
// are rejected everywhere.
struct State {
    double x;
    double t;

    State(double x, double t);

    friend bool operator==(const State&, const State&) = default;
};

// Right-hand side of the harvested logistic equation at population x.
// `u` must be supplied exactly when the mode is Scheduled. x = 0 is a
// valid input; in quota mode the field is -h there (the quota keeps
// pulling even as the population vanishes).
double vector_field(const ModelParams& p, const HarvestMode& mode, double x,
                    std::optional<double> u = std::nullopt);

// Exact solution of the unexploited model with x(0) = x0, evaluated at
// t >= 0. Algebraically x0*k*e^{rt} / (k + x0*(e^{rt} - 1)); computed as
// k / (1 + (k/x0 - 1)*e^{-rt}) so that large r*t underflows to k instead
// of overflowing.
double closed_form(const ModelParams& p, double x0, double t);

// The per-head growth factor f with x' = x * f(x). Quota mode divides the
// removal rate by x, so x must be positive there; other modes accept
// x >= 0.
double per_capita_growth(const ModelParams& p, const HarvestMode& mode, double x);

} // namespace loglab
