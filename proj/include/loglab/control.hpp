#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "loglab/dynamics.hpp"
#include "loglab/integrate.hpp"

namespace loglab {

// Fixed-horizon harvest maximization: choose u(t) in [0, u_max] to
// maximize the integral of u over [0, horizon], subject to the harvested
// logistic dynamics, x(0) = x0 and the terminal requirement
// x(horizon) >= x_floor. lambda0 is the multiplier normalization; the
// normal case (1) is the one the synthesizer covers.
struct ControlProblem {
    ModelParams params;
    double horizon;
    double x0;
    double x_floor;
    double u_max;
    int lambda0;

    ControlProblem(ModelParams params, double horizon, double x0, double x_floor,
                   double u_max, int lambda0 = 1);

    friend bool operator==(const ControlProblem&, const ControlProblem&) = default;
};

// Adjoint multiplier paired with the normalization flag. The pair
// (lambda0, lambda) = (0, 0) is inadmissible.
struct Costate {
    double lambda;
    int lambda0;

    explicit Costate(double lambda, int lambda0 = 1);

    friend bool operator==(const Costate&, const Costate&) = default;
};

// Control Hamiltonian lambda0 * u + lambda * (r x (1 - x/k) - u).
// Requires 0 <= u <= u_max.
double hamiltonian(const ControlProblem& prob, double x, double u, const Costate& costate);

// Adjoint equation right-hand side: -lambda * (r/k) * (k - 2x). Does not
// depend on the control, so it holds across bang and singular arcs alike.
double adjoint_rhs(const ControlProblem& prob, double x, double lambda);

// The singular arc: population held at k/2, harvested at the peak
// regrowth rate r k / 4.
struct SingularPair {
    double state;
    double control;

    friend bool operator==(const SingularPair&, const SingularPair&) = default;
};

SingularPair singular_pair(const ModelParams& p);

// Legendre-Clebsch data for the singular arc in the normal case. The
// Hamiltonian is linear in u, so the curvature in u is identically zero;
// optimality instead rests on time derivatives of dH/du along the arc.
// `strengthened` is the u-coefficient of the second time derivative,
// negated; it must be strictly negative (here it is exactly -2).
struct GohCertificate {
    double hamiltonian_u_curvature;
    double first_order;
    double arc_residual;
    double strengthened;
    bool satisfied;
};

GohCertificate goh_certificate(const ControlProblem& prob);

// Policy regimes. AboveSingularCap: the bound allows the singular level,
// so the policy is a bang (or coast) arc into the singular hold at k/2.
// BelowSingularCap: the singular level is unreachable and the policy
// chatters between full effort and closure around the lower rest point of
// the quota model with h = u_max, with a dead band to keep switches at a
// sane rate.
enum class Regime { AboveSingularCap, BelowSingularCap };

enum class SegmentMode { BangMax, Zero, Singular };

struct FromStart {
    friend bool operator==(const FromStart&, const FromStart&) = default;
};

struct OnCrossing {
    double threshold;
    CrossingDirection direction;

    friend bool operator==(const OnCrossing&, const OnCrossing&) = default;
};

using SegmentTrigger = std::variant<FromStart, OnCrossing>;

struct PlannedSegment {
    SegmentMode mode;
    double level;
    SegmentTrigger trigger;

    friend bool operator==(const PlannedSegment&, const PlannedSegment&) = default;
};

// Feedback rule for the below-cap regime: harvest at u_max while the
// population sits above `threshold`, close the fishery while below it.
// Switches trigger at threshold -/+ band (dead band 1e-3 k).
struct HysteresisRule {
    double threshold;
    double band;

    friend bool operator==(const HysteresisRule&, const HysteresisRule&) = default;
};

struct PolicySchedule {
    Regime regime;
    std::vector<PlannedSegment> plan;
    std::optional<HysteresisRule> hysteresis;

    friend bool operator==(const PolicySchedule&, const PolicySchedule&) = default;
};

// Builds the schedule for the problem's regime. Above the cap the plan is
// bang-max (from above) or closure (from below) until the trajectory
// crosses k/2, then the singular hold; starting exactly at k/2 goes
// singular immediately. A bound within 1e-12 relative of r k / 4 counts
// as above (the bang and singular levels coincide there).
PolicySchedule synthesize_policy(const ControlProblem& prob);

// Alternative construction for comparison: apply the singular level from
// t = 0 regardless of x0, letting the state relax toward k/2 instead of
// steering there at full bang. Only admissible above the cap.
PolicySchedule immediate_singular_schedule(const ControlProblem& prob);

// One realized stretch of constant control, half-open [t_begin, t_end).
struct ResolvedSegment {
    SegmentMode mode;
    double level;
    double t_begin;
    double t_end;

    friend bool operator==(const ResolvedSegment&, const ResolvedSegment&) = default;
};

struct PolicyRun {
    Trajectory trajectory;
    double yield = 0.0;
    double terminal_state = 0.0;
    bool terminal_feasible = false;
    bool extinct = false;
    std::optional<double> t_extinction;
    std::vector<double> switch_times;
    std::vector<ResolvedSegment> segments;
    double max_singular_deviation = 0.0;
};

struct SimulateOptions {
    // Snap the state to exactly k/2 when a crossing starts a singular
    // segment. Without it the O(dt) overshoot at the switch sample is
    // carried into the hold and shows up in max_singular_deviation.
    bool re_anchor = true;
};

// Integrates the closed-loop system on the uniform grid t_i = i*dt.
// Control changes take effect at the first grid sample after the
// triggering crossing; the reported switch time is the interpolated
// crossing itself. Yield is the trapezoid integral of the applied
// control. The terminal floor is reported, not enforced.
PolicyRun simulate_policy(const ControlProblem& prob, const PolicySchedule& schedule,
                          double dt, const SimulateOptions& options = {});

} // namespace loglab
