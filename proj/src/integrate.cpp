#include "loglab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace loglab {

namespace {

constexpr std::size_t kMaxSteps = 200'000'000;

std::size_t step_count(TimeSpan span, double dt) {
    const double raw = (span.t1 - span.t0) / dt + 1e-9;
    if (raw > static_cast<double>(kMaxSteps)) {
        throw ValidationError("dt", "step too small for the requested span");
    }
    return static_cast<std::size_t>(raw);
}

// Emits events for one sample pair, ordered by crossing time within the
// step. Equality with a threshold never fires (strict sign change only).
void scan_pair(double t_prev, double dt, double x_prev, double x_next,
               const std::vector<double>& thresholds,
               std::vector<CrossingEvent>& out) {
    std::vector<CrossingEvent> batch;
    for (double th : thresholds) {
        const double a = x_prev - th;
        const double b = x_next - th;
        if (a * b < 0.0) {
            const double frac = a / (a - b);
            batch.push_back({th, t_prev + frac * dt,
                             x_next > x_prev ? CrossingDirection::Upward
                                             : CrossingDirection::Downward});
        }
    }
    std::sort(batch.begin(), batch.end(),
              [](const CrossingEvent& lhs, const CrossingEvent& rhs) {
                  return lhs.t_cross < rhs.t_cross;
              });
    out.insert(out.end(), batch.begin(), batch.end());
}

Trajectory run_integration(const FieldEval& f, double x0, TimeSpan span, double dt,
                           std::optional<double> sample_u,
                           const std::vector<double>* thresholds,
                           std::vector<CrossingEvent>* events) {
    const std::size_t n = step_count(span, dt);

    Trajectory traj;
    traj.dt = dt;
    traj.samples.reserve(n + 1);
    traj.samples.push_back({span.t0, x0, sample_u});

    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = span.t0 + static_cast<double>(i) * dt;
        const double t_next = span.t0 + static_cast<double>(i + 1) * dt;
        const StepResult step = rk4_step(f, t, x, dt);
        if (step.extinct) {
            traj.samples.push_back({t_next, 0.0, sample_u});
            if (thresholds) {
                scan_pair(t, dt, x, 0.0, *thresholds, *events);
            }
            traj.termination = Termination::Extinction;
            traj.t_extinction = step.t_extinction;
            return traj;
        }
        if (thresholds) {
            scan_pair(t, dt, x, step.x, *thresholds, *events);
        }
        x = step.x;
        traj.samples.push_back({t_next, x, sample_u});
    }
    traj.termination = Termination::HorizonEnd;
    return traj;
}

void validate_run_inputs(double x0, double dt) {
    if (!(std::isfinite(x0) && x0 >= 0.0)) {
        throw DomainError("integrate: initial population must be nonnegative and finite");
    }
    if (!(std::isfinite(dt) && dt > 0.0)) {
        throw ValidationError("dt", "step must be positive and finite");
    }
}

} // namespace

TimeSpan::TimeSpan(double t0_, double t1_) : t0(t0_), t1(t1_) {
    if (!std::isfinite(t0) || !std::isfinite(t1)) {
        throw ValidationError("t_span", "time span endpoints must be finite");
    }
    if (!(t1 > t0)) {
        throw ValidationError("t_span", "time span must have t1 > t0");
    }
}

FieldEval make_field(const ModelParams& p, const HarvestMode& mode,
                     std::optional<double> u) {
    FieldEval f;
    f.r = p.r;
    f.k = p.k;
    if (std::get_if<Unexploited>(&mode)) {
        if (u) throw UsageError("a control rate is only accepted in scheduled mode");
    } else if (const auto* m = std::get_if<ConstantEffort>(&mode)) {
        if (u) throw UsageError("a control rate is only accepted in scheduled mode");
        f.lin = m->e;
    } else if (const auto* m = std::get_if<ConstantQuota>(&mode)) {
        if (u) throw UsageError("a control rate is only accepted in scheduled mode");
        f.con = m->h;
    } else {
        if (!u) throw UsageError("scheduled mode requires a control rate");
        if (!(std::isfinite(*u) && *u >= 0.0)) {
            throw DomainError("control rate must be nonnegative and finite");
        }
        f.con = *u;
    }
    return f;
}

StepResult rk4_step(const FieldEval& f, double t, double x, double dt) {
    // Checks each intermediate state before the field sees it. `frac` is
    // the position of the stage inside the step, for extinction-time
    // interpolation.
    const auto guard = [&](double stage, double frac, StepResult& out) {
        if (!std::isfinite(stage)) {
            throw NumericalError("non-finite state during integration step", t);
        }
        if (stage < 0.0) {
            out.extinct = true;
            out.x = 0.0;
            out.t_extinction = t + frac * dt * (x / (x - stage));
            return true;
        }
        return false;
    };
    const auto slope = [&](double at) {
        const double v = f(at);
        if (!std::isfinite(v)) {
            throw NumericalError("non-finite derivative during integration step", t);
        }
        return v;
    };

    StepResult out;
    const double k1 = slope(x);
    const double x2 = x + 0.5 * dt * k1;
    if (guard(x2, 0.5, out)) return out;
    const double k2 = slope(x2);
    const double x3 = x + 0.5 * dt * k2;
    if (guard(x3, 0.5, out)) return out;
    const double k3 = slope(x3);
    const double x4 = x + dt * k3;
    if (guard(x4, 1.0, out)) return out;
    const double k4 = slope(x4);
    const double x_next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (guard(x_next, 1.0, out)) return out;
    out.x = x_next;
    return out;
}

Trajectory integrate(const ModelParams& p, const HarvestMode& mode, double x0,
                     TimeSpan span, double dt, std::optional<double> u) {
    validate_run_inputs(x0, dt);
    const FieldEval f = make_field(p, mode, u);
    const bool scheduled = std::holds_alternative<Scheduled>(mode);
    return run_integration(f, x0, span, dt, scheduled ? u : std::nullopt,
                           nullptr, nullptr);
}

EventTrajectory integrate_with_events(const ModelParams& p, const HarvestMode& mode,
                                      double x0, TimeSpan span, double dt,
                                      const std::vector<double>& thresholds,
                                      std::optional<double> u) {
    validate_run_inputs(x0, dt);
    for (double th : thresholds) {
        if (!(std::isfinite(th) && th >= 0.0)) {
            throw ValidationError("thresholds",
                                  "crossing thresholds must be nonnegative and finite");
        }
    }
    const FieldEval f = make_field(p, mode, u);
    const bool scheduled = std::holds_alternative<Scheduled>(mode);
    EventTrajectory result;
    result.trajectory = run_integration(f, x0, span, dt,
                                        scheduled ? u : std::nullopt,
                                        &thresholds, &result.events);
    return result;
}

} // namespace loglab
