#pragma once

#include <optional>
#include <vector>

#include "loglab/dynamics.hpp"

namespace loglab {

// Closed time interval for an integration run.
struct TimeSpan {
    double t0;
    double t1;

    TimeSpan(double t0, double t1);
};

enum class Termination { HorizonEnd, Extinction };

// One grid sample. `u` is the control applied on [t, t + dt); empty when
// the mode carries no explicit control.
struct Sample {
    double t;
    double x;
    std::optional<double> u;
};

// Uniformly spaced solution samples, t_i = t0 + i*dt (computed by
// multiplication, never by accumulation). On extinction the final sample
// is the grid point at which the state was clamped to zero and
// `t_extinction` carries the sub-step crossing estimate.
struct Trajectory {
    std::vector<Sample> samples;
    Termination termination = Termination::HorizonEnd;
    std::optional<double> t_extinction;
    double dt = 0.0;
};

enum class CrossingDirection { Upward, Downward };

// A strict sign change of (x - threshold) between two consecutive samples.
// t_cross is linearly interpolated inside the step, so it is accurate to
// O(dt^2). A run that starts exactly on a threshold emits no event for it.
struct CrossingEvent {
    double threshold;
    double t_cross;
    CrossingDirection direction;
};

// The harvested logistic right-hand side with the mode folded into two
// coefficients: f(x) = r x (1 - x/k) - lin*x - con.
struct FieldEval {
    double r = 0.0;
    double k = 1.0;
    double lin = 0.0;
    double con = 0.0;

    double operator()(double x) const {
        return r * x * (1.0 - x / k) - lin * x - con;
    }
};

// Folds a harvest mode into a FieldEval. `u` must be supplied exactly when
// the mode is Scheduled.
FieldEval make_field(const ModelParams& p, const HarvestMode& mode,
                     std::optional<double> u = std::nullopt);

// Result of one classical fourth-order step. Each sub-stage value is
// checked before the field is evaluated there: a non-finite value raises
// NumericalError, a negative one stops the step and reports extinction at
// the linearly interpolated zero crossing, with the state clamped to 0.
// This keeps the quota field from ever being evaluated at negative
// populations, at the cost of declaring extinction up to one stage early.
struct StepResult {
    double x = 0.0;
    bool extinct = false;
    double t_extinction = 0.0;
};

StepResult rk4_step(const FieldEval& f, double t, double x, double dt);

// Fixed-step integration of x' = f(x) from x0 over [t0, t1]. The step
// count is floor((t1 - t0)/dt + 1e-9), so spans that are an exact multiple
// of dt are not truncated by rounding.
Trajectory integrate(const ModelParams& p, const HarvestMode& mode, double x0,
                     TimeSpan span, double dt,
                     std::optional<double> u = std::nullopt);

struct EventTrajectory {
    Trajectory trajectory;
    std::vector<CrossingEvent> events;
};

// Same integration, with threshold crossings detected as the run streams.
// Events are ordered by crossing time; a sample landing exactly on a
// threshold produces no event (the product of signed offsets must be
// strictly negative).
EventTrajectory integrate_with_events(const ModelParams& p, const HarvestMode& mode,
                                      double x0, TimeSpan span, double dt,
                                      const std::vector<double>& thresholds,
                                      std::optional<double> u = std::nullopt);

} // namespace loglab
