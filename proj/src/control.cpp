#include "loglab/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "loglab/stability.hpp"

namespace loglab {

namespace {

constexpr double kSingularTol = 1e-12;      // relative, for u_max vs r*k/4
constexpr double kDeadBandFactor = 1e-3;    // hysteresis half-width, times k

bool positive_finite(double v) {
    return std::isfinite(v) && v > 0.0;
}

void validate_schedule(const ControlProblem& prob, const PolicySchedule& s) {
    const SingularPair sp = singular_pair(prob.params);
    const auto check_segment = [&](const PlannedSegment& seg) {
        if (!(std::isfinite(seg.level) && seg.level >= 0.0 && seg.level <= prob.u_max)) {
            throw ValidationError("schedule", "segment level outside [0, u_max]");
        }
        switch (seg.mode) {
        case SegmentMode::Singular:
            if (prob.u_max < sp.control * (1.0 - kSingularTol)) {
                throw ValidationError("schedule",
                                      "singular hold needs u_max >= r*k/4");
            }
            if (std::abs(seg.level - std::min(sp.control, prob.u_max)) >
                kSingularTol * sp.control) {
                throw ValidationError("schedule",
                                      "singular segments must hold the level r*k/4");
            }
            break;
        case SegmentMode::Zero:
            if (seg.level != 0.0) {
                throw ValidationError("schedule", "closed segments must hold level 0");
            }
            break;
        case SegmentMode::BangMax:
            break;
        }
    };

    if (s.hysteresis.has_value()) {
        if (!s.plan.empty()) {
            throw ValidationError("schedule",
                                  "a hysteresis rule and a planned sequence are exclusive");
        }
        if (!(positive_finite(s.hysteresis->threshold) &&
              positive_finite(s.hysteresis->band))) {
            throw ValidationError("schedule",
                                  "hysteresis threshold and band must be positive");
        }
        return;
    }
    if (s.plan.empty()) {
        throw ValidationError("schedule", "plan must contain at least one segment");
    }
    if (!std::holds_alternative<FromStart>(s.plan.front().trigger)) {
        throw ValidationError("schedule", "the first segment must start at t = 0");
    }
    for (std::size_t i = 0; i < s.plan.size(); ++i) {
        if (i > 0 && !std::holds_alternative<OnCrossing>(s.plan[i].trigger)) {
            throw ValidationError("schedule",
                                  "later segments must be triggered by a crossing");
        }
        check_segment(s.plan[i]);
    }
}

} // namespace

ControlProblem::ControlProblem(ModelParams params_, double horizon_, double x0_,
                               double x_floor_, double u_max_, int lambda0_)
    : params(params_), horizon(horizon_), x0(x0_), x_floor(x_floor_),
      u_max(u_max_), lambda0(lambda0_) {
    if (!positive_finite(horizon)) {
        throw ValidationError("t1", "horizon must be positive and finite");
    }
    if (!positive_finite(x0)) {
        throw ValidationError("x0", "initial population must be positive and finite");
    }
    if (!(std::isfinite(x_floor) && x_floor >= 0.0)) {
        throw ValidationError("xb", "terminal floor must be nonnegative and finite");
    }
    if (!positive_finite(u_max)) {
        throw ValidationError("umax", "control bound must be positive and finite");
    }
    if (lambda0 != 0 && lambda0 != 1) {
        throw ValidationError("lambda0", "multiplier normalization must be 0 or 1");
    }
}

Costate::Costate(double lambda_, int lambda0_) : lambda(lambda_), lambda0(lambda0_) {
    if (!std::isfinite(lambda)) {
        throw ValidationError("lambda", "adjoint value must be finite");
    }
    if (lambda0 != 0 && lambda0 != 1) {
        throw ValidationError("lambda0", "multiplier normalization must be 0 or 1");
    }
    if (lambda0 == 0 && lambda == 0.0) {
        throw ValidationError("lambda", "the zero multiplier pair is inadmissible");
    }
}

double hamiltonian(const ControlProblem& prob, double x, double u,
                   const Costate& costate) {
    if (!(std::isfinite(x) && x >= 0.0)) {
        throw DomainError("hamiltonian: population must be nonnegative and finite");
    }
    if (!(std::isfinite(u) && u >= 0.0 && u <= prob.u_max)) {
        throw DomainError("hamiltonian: control must lie in [0, u_max]");
    }
    const ModelParams& p = prob.params;
    const double growth = p.r * x * (1.0 - x / p.k);
    return static_cast<double>(costate.lambda0) * u + costate.lambda * (growth - u);
}

double adjoint_rhs(const ControlProblem& prob, double x, double lambda) {
    if (!(std::isfinite(x) && x >= 0.0)) {
        throw DomainError("adjoint_rhs: population must be nonnegative and finite");
    }
    if (!std::isfinite(lambda)) {
        throw DomainError("adjoint_rhs: adjoint value must be finite");
    }
    const ModelParams& p = prob.params;
    return -lambda * (p.r / p.k) * (p.k - 2.0 * x);
}

SingularPair singular_pair(const ModelParams& p) {
    return {p.k / 2.0, p.r * p.k / 4.0};
}

GohCertificate goh_certificate(const ControlProblem& prob) {
    if (prob.lambda0 != 1) {
        throw UsageError("the certificate covers the normal case lambda0 = 1 only");
    }
    const ModelParams& p = prob.params;
    const SingularPair sp = singular_pair(p);

    // d/dt(dH/du) on the arc, with lambda = 1 there.
    const double first_order = (p.r / p.k) * (p.k - 2.0 * sp.state);

    // Bracket of d^2/dt^2(dH/du) = lambda*(r/k)*[ -(r/k)(k-2x)^2
    //   - (2 r x / k)(k - x) + 2u ], evaluated at the singular pair. It
    // must vanish there; its u-coefficient is +2, so pushing u above the
    // singular level drives dH/du down, which is the strengthened
    // condition (reported negated).
    const auto bracket = [&](double x, double u) {
        const double a = p.k - 2.0 * x;
        return -(p.r / p.k) * a * a - (2.0 * p.r * x / p.k) * (p.k - x) + 2.0 * u;
    };
    const double arc_residual = bracket(sp.state, sp.control);
    const double strengthened = -2.0;

    // Numerical cross-checks of the analytic statements above.
    const double scale = std::max(1.0, p.r * p.k);
    const double u_mid = 0.5 * prob.u_max;
    const double du = 0.25 * prob.u_max;
    const Costate probe(0.7, 1);
    const double x_probe = 0.3 * p.k;
    const double h_low = hamiltonian(prob, x_probe, u_mid - du, probe);
    const double h_mid = hamiltonian(prob, x_probe, u_mid, probe);
    const double h_high = hamiltonian(prob, x_probe, u_mid + du, probe);
    const double curvature_check = h_high - 2.0 * h_mid + h_low;
    const double slope_check = bracket(sp.state, sp.control + 1.0) - arc_residual;

    GohCertificate cert;
    cert.hamiltonian_u_curvature = 0.0;
    cert.first_order = first_order;
    cert.arc_residual = arc_residual;
    cert.strengthened = strengthened;
    cert.satisfied = first_order == 0.0 &&
                     std::abs(arc_residual) <= 1e-12 * scale &&
                     std::abs(curvature_check) <= 1e-12 * std::max(1.0, std::abs(h_mid)) &&
                     std::abs(slope_check - 2.0) <= 1e-9 &&
                     strengthened < 0.0;
    return cert;
}

PolicySchedule synthesize_policy(const ControlProblem& prob) {
    const SingularPair sp = singular_pair(prob.params);
    const double singular_level = std::min(sp.control, prob.u_max);

    if (prob.u_max >= sp.control * (1.0 - kSingularTol)) {
        PolicySchedule s;
        s.regime = Regime::AboveSingularCap;
        if (prob.x0 == sp.state) {
            s.plan.push_back({SegmentMode::Singular, singular_level, FromStart{}});
        } else if (prob.x0 > sp.state) {
            s.plan.push_back({SegmentMode::BangMax, prob.u_max, FromStart{}});
            s.plan.push_back({SegmentMode::Singular, singular_level,
                              OnCrossing{sp.state, CrossingDirection::Downward}});
        } else {
            s.plan.push_back({SegmentMode::Zero, 0.0, FromStart{}});
            s.plan.push_back({SegmentMode::Singular, singular_level,
                              OnCrossing{sp.state, CrossingDirection::Upward}});
        }
        return s;
    }

    // The bound cannot sustain the singular level. Chatter around the lower
    // rest point of the quota model with h = u_max; above it full harvest
    // still lets the population climb to the upper rest point.
    const QuotaRoots roots = quota_equilibria(prob.params, prob.u_max);
    PolicySchedule s;
    s.regime = Regime::BelowSingularCap;
    s.hysteresis = HysteresisRule{*roots.lower, kDeadBandFactor * prob.params.k};
    return s;
}

PolicySchedule immediate_singular_schedule(const ControlProblem& prob) {
    const SingularPair sp = singular_pair(prob.params);
    if (prob.u_max < sp.control * (1.0 - kSingularTol)) {
        throw ValidationError("umax", "singular hold needs u_max >= r*k/4");
    }
    PolicySchedule s;
    s.regime = Regime::AboveSingularCap;
    s.plan.push_back({SegmentMode::Singular, std::min(sp.control, prob.u_max),
                      FromStart{}});
    return s;
}

PolicyRun simulate_policy(const ControlProblem& prob, const PolicySchedule& schedule,
                          double dt, const SimulateOptions& options) {
    if (!(std::isfinite(dt) && dt > 0.0)) {
        throw ValidationError("dt", "step must be positive and finite");
    }
    validate_schedule(prob, schedule);

    const double raw_steps = prob.horizon / dt + 1e-9;
    if (raw_steps > 2e8) {
        throw ValidationError("dt", "step too small for the requested horizon");
    }
    const std::size_t n = static_cast<std::size_t>(raw_steps);
    if (n == 0) {
        throw ValidationError("dt", "step larger than the horizon");
    }

    const SingularPair sp = singular_pair(prob.params);

    PolicyRun run;
    run.trajectory.dt = dt;
    auto& samples = run.trajectory.samples;
    samples.reserve(n + 1);

    SegmentMode mode;
    double level;
    std::optional<OnCrossing> armed;
    std::size_t plan_next = 0;
    bool high = false;

    const bool feedback = schedule.hysteresis.has_value();
    if (feedback) {
        const HysteresisRule& rule = *schedule.hysteresis;
        high = prob.x0 >= rule.threshold;
        mode = high ? SegmentMode::BangMax : SegmentMode::Zero;
        level = high ? prob.u_max : 0.0;
        armed = high ? OnCrossing{rule.threshold - rule.band, CrossingDirection::Downward}
                     : OnCrossing{rule.threshold + rule.band, CrossingDirection::Upward};
    } else {
        mode = schedule.plan[0].mode;
        level = schedule.plan[0].level;
        plan_next = 1;
        armed = plan_next < schedule.plan.size()
                    ? std::optional<OnCrossing>(
                          std::get<OnCrossing>(schedule.plan[plan_next].trigger))
                    : std::nullopt;
    }

    double x = prob.x0;
    samples.push_back({0.0, x, level});
    std::size_t seg_begin = 0;

    const auto note_singular = [&](double value) {
        if (mode == SegmentMode::Singular) {
            run.max_singular_deviation =
                std::max(run.max_singular_deviation, std::abs(value - sp.state));
        }
    };
    note_singular(x);

    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double t_next = static_cast<double>(i + 1) * dt;
        const FieldEval f{prob.params.r, prob.params.k, 0.0, level};
        const StepResult step = rk4_step(f, t, x, dt);

        if (step.extinct) {
            samples.push_back({t_next, 0.0, level});
            run.segments.push_back({mode, level,
                                    static_cast<double>(seg_begin) * dt, t_next});
            run.extinct = true;
            run.t_extinction = step.t_extinction;
            run.trajectory.termination = Termination::Extinction;
            run.trajectory.t_extinction = step.t_extinction;
            break;
        }

        double x_new = step.x;
        bool switched = false;
        double t_cross = 0.0;
        if (armed) {
            const double a = x - armed->threshold;
            const double b = x_new - armed->threshold;
            if (a * b < 0.0) {
                const CrossingDirection dir = x_new > x ? CrossingDirection::Upward
                                                        : CrossingDirection::Downward;
                if (dir == armed->direction) {
                    switched = true;
                    t_cross = t + dt * (a / (a - b));
                }
            }
        }

        if (switched) {
            run.switch_times.push_back(t_cross);
            run.segments.push_back({mode, level,
                                    static_cast<double>(seg_begin) * dt, t_next});
            seg_begin = i + 1;
            if (feedback) {
                const HysteresisRule& rule = *schedule.hysteresis;
                high = !high;
                mode = high ? SegmentMode::BangMax : SegmentMode::Zero;
                level = high ? prob.u_max : 0.0;
                armed = high
                            ? OnCrossing{rule.threshold - rule.band,
                                         CrossingDirection::Downward}
                            : OnCrossing{rule.threshold + rule.band,
                                         CrossingDirection::Upward};
            } else {
                mode = schedule.plan[plan_next].mode;
                level = schedule.plan[plan_next].level;
                if (mode == SegmentMode::Singular && options.re_anchor) {
                    x_new = sp.state;
                }
                ++plan_next;
                armed = plan_next < schedule.plan.size()
                            ? std::optional<OnCrossing>(
                                  std::get<OnCrossing>(schedule.plan[plan_next].trigger))
                            : std::nullopt;
            }
        }

        x = x_new;
        samples.push_back({t_next, x, level});
        note_singular(x);
    }

    if (!run.extinct && seg_begin + 1 <= samples.size() - 1) {
        run.segments.push_back({mode, level, static_cast<double>(seg_begin) * dt,
                                samples.back().t});
    }

    double yield = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        yield += 0.5 * (*samples[i].u + *samples[i + 1].u) * dt;
    }
    run.yield = yield;
    run.terminal_state = samples.back().x;
    run.terminal_feasible = !run.extinct && run.terminal_state >= prob.x_floor;
    return run;
}

} // namespace loglab
