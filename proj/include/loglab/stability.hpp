#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loglab/dynamics.hpp"

namespace loglab {

enum class Verdict {
    GloballyAsymptoticallyStable,
    Unstable,
    StableWithRegion,
    Trivial,
};

// An equilibrium together with its classification. `region_lower` is set
// for StableWithRegion and gives the open lower boundary of the basin:
// every start above it converges to `value`.
struct Equilibrium {
    double value = 0.0;
    Verdict verdict = Verdict::Trivial;
    std::optional<double> region_lower;
    std::string rationale;

    friend bool operator==(const Equilibrium&, const Equilibrium&) = default;
};

enum class QuotaCase { NoEquilibrium, Tangent, TwoEquilibria };

struct StabilityReport {
    ModelParams params;
    HarvestMode mode;
    std::optional<QuotaCase> quota_case;
    std::optional<std::string> note;
    std::vector<Equilibrium> equilibria;

    friend bool operator==(const StabilityReport&, const StabilityReport&) = default;
};

// Positive roots of r x (1 - x/k) = h, solved without cancellation: the
// larger root comes from the quadratic formula, the smaller from the root
// product h k / r. Within 1e-12 relative of the peak h = r k / 4 the case
// is reported as tangent with the double root k/2.
struct QuotaRoots {
    QuotaCase kind = QuotaCase::NoEquilibrium;
    std::optional<double> lower;
    std::optional<double> upper;
};

QuotaRoots quota_equilibria(const ModelParams& p, double h);

// All equilibria of the mode, ascending. Unexploited: {0, k}. Constant
// effort: {0} plus k(1 - e/r) when e < r. Constant quota: the positive
// roots only (x = 0 is not a rest point there; the field is -h at zero).
std::vector<double> equilibria(const ModelParams& p, const HarvestMode& mode);

// V(x) = x - x_eq - x_eq * ln(x / x_eq): zero at x_eq, positive elsewhere
// on x > 0, radially unbounded.
double lyapunov_value(double x, double x_eq);

// Time derivative of V along solutions: (x - x_eq) * f(x) with f the
// per-head growth. x_eq must actually be an equilibrium of the mode.
double lyapunov_derivative(const ModelParams& p, const HarvestMode& mode,
                           double x, double x_eq);

// Grid sign tests backing the classification, run on 10^4 log-spaced
// points spanning (1e-6 k, 1e2 k). Points within 1e-9 relative of an
// equilibrium are skipped.
//
// sign_test_gas: field positive below x_eq and negative above it, which
// makes V' negative definite and x_eq globally attracting on x > 0.
bool sign_test_gas(const ModelParams& p, const HarvestMode& mode, double x_eq);

// sign_test_quota_pattern: two-root quota pattern, field negative below
// the lower root, positive between the roots, negative above the upper.
bool sign_test_quota_pattern(const ModelParams& p, double h);

// Classification by the direct method. The trivial equilibrium x = 0 is
// reported but excluded from the Lyapunov analysis. Scheduled mode has no
// static equilibria and is rejected.
StabilityReport classify(const ModelParams& p, const HarvestMode& mode);

} // namespace loglab
