#include "loglab/stability.hpp"

#include <algorithm>
#include <cmath>

namespace loglab {

namespace {

constexpr int kGridPoints = 10000;
constexpr double kGridLowerFactor = 1e-6;
constexpr double kGridDecades = 1e8; // spans (1e-6 k, 1e2 k)
constexpr double kEquilibriumGuard = 1e-9;

double grid_point(double k, int i) {
    const double frac = static_cast<double>(i) / (kGridPoints - 1);
    return kGridLowerFactor * k * std::pow(kGridDecades, frac);
}

bool near(double x, double ref) {
    return std::abs(x - ref) <= kEquilibriumGuard * ref;
}

double equilibrium_residual_bound(const ModelParams& p) {
    return 1e-10 * std::max(1.0, p.r * p.k);
}

// Tangent quota: the field is nonpositive everywhere and vanishes only at
// the double root k/2.
bool sign_test_tangent(const ModelParams& p, double h) {
    const HarvestMode mode = ConstantQuota{h};
    const double half = 0.5 * p.k;
    for (int i = 0; i < kGridPoints; ++i) {
        const double x = grid_point(p.k, i);
        if (near(x, half)) continue;
        if (!(vector_field(p, mode, x) < 0.0)) return false;
    }
    return true;
}

} // namespace

QuotaRoots quota_equilibria(const ModelParams& p, double h) {
    if (!(std::isfinite(h) && h >= 0.0)) {
        throw ValidationError("quota", "quota rate must be nonnegative and finite");
    }
    const double peak = p.r * p.k / 4.0;
    QuotaRoots roots;
    if (std::abs(h - peak) <= 1e-12 * peak) {
        roots.kind = QuotaCase::Tangent;
        roots.lower = 0.5 * p.k;
        roots.upper = 0.5 * p.k;
        return roots;
    }
    if (h > peak) {
        roots.kind = QuotaCase::NoEquilibrium;
        return roots;
    }
    const double disc = p.k * p.k - 4.0 * h * p.k / p.r;
    const double upper = 0.5 * (p.k + std::sqrt(disc));
    roots.kind = QuotaCase::TwoEquilibria;
    roots.upper = upper;
    roots.lower = (h * p.k / p.r) / upper;
    return roots;
}

std::vector<double> equilibria(const ModelParams& p, const HarvestMode& mode) {
    if (std::get_if<Unexploited>(&mode)) {
        return {0.0, p.k};
    }
    if (const auto* m = std::get_if<ConstantEffort>(&mode)) {
        std::vector<double> out{0.0};
        if (m->e < p.r) {
            out.push_back(p.k * (1.0 - m->e / p.r));
        }
        return out;
    }
    if (const auto* m = std::get_if<ConstantQuota>(&mode)) {
        const QuotaRoots roots = quota_equilibria(p, m->h);
        std::vector<double> out;
        if (roots.kind == QuotaCase::Tangent) {
            out.push_back(*roots.lower);
        } else if (roots.kind == QuotaCase::TwoEquilibria) {
            if (*roots.lower > 0.0) out.push_back(*roots.lower);
            out.push_back(*roots.upper);
        }
        return out;
    }
    throw UsageError("scheduled control has no static equilibria");
}

double lyapunov_value(double x, double x_eq) {
    if (!(std::isfinite(x) && x > 0.0)) {
        throw DomainError("lyapunov_value: x must be positive and finite");
    }
    if (!(std::isfinite(x_eq) && x_eq > 0.0)) {
        throw DomainError("lyapunov_value: equilibrium must be positive and finite");
    }
    return x - x_eq - x_eq * std::log(x / x_eq);
}

double lyapunov_derivative(const ModelParams& p, const HarvestMode& mode,
                           double x, double x_eq) {
    if (!(std::isfinite(x) && x > 0.0)) {
        throw DomainError("lyapunov_derivative: x must be positive and finite");
    }
    if (!(std::isfinite(x_eq) && x_eq > 0.0) ||
        std::abs(vector_field(p, mode, x_eq)) > equilibrium_residual_bound(p)) {
        throw DomainError("lyapunov_derivative: x_eq is not an equilibrium of this mode");
    }
    return (x - x_eq) * per_capita_growth(p, mode, x);
}

bool sign_test_gas(const ModelParams& p, const HarvestMode& mode, double x_eq) {
    for (int i = 0; i < kGridPoints; ++i) {
        const double x = grid_point(p.k, i);
        if (near(x, x_eq)) continue;
        const double v = vector_field(p, mode, x);
        if (x < x_eq ? !(v > 0.0) : !(v < 0.0)) return false;
    }
    return true;
}

bool sign_test_quota_pattern(const ModelParams& p, double h) {
    const QuotaRoots roots = quota_equilibria(p, h);
    if (roots.kind != QuotaCase::TwoEquilibria) return false;
    const HarvestMode mode = ConstantQuota{h};
    const double lo = *roots.lower;
    const double hi = *roots.upper;
    for (int i = 0; i < kGridPoints; ++i) {
        const double x = grid_point(p.k, i);
        if (near(x, lo) || near(x, hi)) continue;
        const double v = vector_field(p, mode, x);
        if (x < lo) {
            if (!(v < 0.0)) return false;
        } else if (x < hi) {
            if (!(v > 0.0)) return false;
        } else {
            if (!(v < 0.0)) return false;
        }
    }
    return true;
}

StabilityReport classify(const ModelParams& p, const HarvestMode& mode) {
    StabilityReport report{p, mode, std::nullopt, std::nullopt, {}};

    const auto checked = [&](bool ok, double where) {
        if (!ok) {
            throw NumericalError("grid sign test contradicts the classification", where);
        }
    };

    if (std::get_if<Unexploited>(&mode)) {
        checked(sign_test_gas(p, mode, p.k), p.k);
        report.equilibria.push_back(
            {0.0, Verdict::Trivial, std::nullopt,
             "rest point of the unharvested field; excluded from the direct method"});
        report.equilibria.push_back(
            {p.k, Verdict::GloballyAsymptoticallyStable, std::nullopt,
             "growth is positive below k and negative above, so V decreases along "
             "every positive solution"});
        return report;
    }

    if (const auto* m = std::get_if<ConstantEffort>(&mode)) {
        report.equilibria.push_back(
            {0.0, Verdict::Trivial, std::nullopt,
             "rest point of the harvested field; excluded from the direct method"});
        if (m->e < p.r) {
            const double xe = p.k * (1.0 - m->e / p.r);
            checked(sign_test_gas(p, mode, xe), xe);
            report.equilibria.push_back(
                {xe, Verdict::GloballyAsymptoticallyStable, std::nullopt,
                 "net growth is positive below the equilibrium and negative above it"});
        } else {
            report.note =
                "effort meets or exceeds the growth rate; every positive solution "
                "declines to zero";
        }
        return report;
    }

    if (const auto* m = std::get_if<ConstantQuota>(&mode)) {
        const QuotaRoots roots = quota_equilibria(p, m->h);
        report.quota_case = roots.kind;
        switch (roots.kind) {
        case QuotaCase::NoEquilibrium:
            report.note =
                "quota exceeds the peak regrowth rate r*k/4; every solution reaches "
                "zero in finite time";
            break;
        case QuotaCase::Tangent:
            checked(sign_test_tangent(p, m->h), *roots.lower);
            report.equilibria.push_back(
                {*roots.lower, Verdict::Unstable, std::nullopt,
                 "V increases strictly below the tangent point, so any dip is "
                 "unrecoverable"});
            report.note =
                "the two rest points coincide at k/2; harvesting at the peak "
                "regrowth rate leaves no margin";
            break;
        case QuotaCase::TwoEquilibria: {
            checked(sign_test_quota_pattern(p, m->h), *roots.lower);
            if (*roots.lower > 0.0) {
                report.equilibria.push_back(
                    {*roots.lower, Verdict::Unstable, std::nullopt,
                     "the field is negative just below this root, pushing solutions "
                     "toward zero"});
            }
            report.equilibria.push_back(
                {*roots.upper, Verdict::StableWithRegion, *roots.lower,
                 "V decreases on the region above the lower root, which is the "
                 "basin of attraction"});
            break;
        }
        }
        return report;
    }

    throw UsageError("scheduled control has no static equilibria");
}

} // namespace loglab
