#include "loglab/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace loglab {

namespace {

constexpr double kDenomTol = 1e-14;
constexpr std::size_t kMaxWitnesses = 10;
constexpr std::uint64_t kDefaultSeed = 1729;

void check_state(double x, const char* who) {
    if (!(std::isfinite(x) && x >= 0.0)) {
        throw DomainError(std::string(who) + ": state must be nonnegative and finite");
    }
}

// (0, 1] uniform from the top 53 bits, so draws depend only on the
// engine's standardized output sequence.
double unit_open_low(std::mt19937_64& gen) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return 1.0 - u;
}

// First violating orbit index from (r, k, x0), or nothing. Exception-free
// on the hot path apart from the singular-denominator throw, which is
// caught here.
std::optional<std::size_t> first_violation(const MapKind& kind, const ModelParams& p,
                                           double x0, std::size_t n) {
    double x = x0;
    for (std::size_t i = 1; i <= n; ++i) {
        double next;
        try {
            next = map_step(kind, p, x);
        } catch (const SingularDenominator&) {
            return i;
        }
        if (!std::isfinite(next) || next < 0.0) {
            return i;
        }
        x = next;
    }
    return std::nullopt;
}

} // namespace

NonstandardH::NonstandardH(double step_) : step(step_) {
    if (!(std::isfinite(step) && step > 0.0)) {
        throw ValidationError("step", "map step must be positive and finite");
    }
}

ExplicitEulerZ::ExplicitEulerZ(double step_) : step(step_) {
    if (!(std::isfinite(step) && step > 0.0)) {
        throw ValidationError("step", "map step must be positive and finite");
    }
}

double map_time_step(const MapKind& kind) {
    if (const auto* m = std::get_if<NonstandardH>(&kind)) return m->step;
    if (const auto* m = std::get_if<ExplicitEulerZ>(&kind)) return m->step;
    return 1.0;
}

SingularDenominator::SingularDenominator(double x)
    : DomainError("map denominator vanishes at this state"), x_(x) {}

double streipert_step(const ModelParams& p, double x) {
    check_state(x, "streipert_step");
    const double denom = 1.0 - p.r * (1.0 - x / p.k);
    if (std::abs(denom) <= kDenomTol) {
        throw SingularDenominator(x);
    }
    return x / denom;
}

double nsfd_step(const ModelParams& p, double x) {
    check_state(x, "nsfd_step");
    return (p.r + 1.0) * p.k * x / (p.k + p.r * x);
}

double euler_step(const ModelParams& p, double x, double step) {
    check_state(x, "euler_step");
    return x + step * p.r * x * (1.0 - x / p.k);
}

double map_step(const MapKind& kind, const ModelParams& p, double x) {
    if (std::get_if<StreipertZ>(&kind)) return streipert_step(p, x);
    if (std::get_if<NonstandardZ>(&kind)) return nsfd_step(p, x);
    if (const auto* m = std::get_if<NonstandardH>(&kind)) {
        check_state(x, "nsfd_step");
        const double rh = p.r * m->step;
        return (rh + 1.0) * p.k * x / (p.k + rh * x);
    }
    const auto& m = std::get<ExplicitEulerZ>(kind);
    return euler_step(p, x, m.step);
}

OrbitReport iterate(const MapKind& kind, const ModelParams& p, double x0,
                    std::size_t n) {
    check_state(x0, "iterate");
    OrbitReport report;
    report.orbit.reserve(n + 1);
    report.orbit.push_back(x0);
    double x = x0;
    for (std::size_t i = 1; i <= n; ++i) {
        double next;
        try {
            next = map_step(kind, p, x);
        } catch (const SingularDenominator&) {
            report.violations.push_back({i, ViolationReason::Undefined});
            return report;
        }
        if (!std::isfinite(next)) {
            report.violations.push_back({i, ViolationReason::NonFinite});
            return report;
        }
        report.orbit.push_back(next);
        if (next < 0.0) {
            report.violations.push_back({i, ViolationReason::Negative});
            return report;
        }
        x = next;
    }
    const std::size_t len = report.orbit.size();
    if (len >= 2 &&
        std::abs(report.orbit[len - 1] - report.orbit[len - 2]) < 1e-12 * p.k) {
        report.limit = report.orbit[len - 1];
    }
    return report;
}

ScanSummary positivity_scan(const MapKind& kind, std::span<const ScanPoint> points,
                            std::size_t n, Execution exec) {
    ScanSummary summary;
    summary.orbit_count = points.size();

#ifdef _OPENMP
    if (exec == Execution::Parallel) {
        std::size_t violations = 0;
        std::vector<ScanWitness> merged;
        const auto total = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel reduction(+ : violations)
        {
            // Any point among the 10 earliest violations overall is also
            // among the 10 earliest seen by its own thread, so per-thread
            // prefixes merge into the exact serial witness list.
            std::vector<ScanWitness> local;
#pragma omp for schedule(static) nowait
            for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
                const auto i = static_cast<std::size_t>(idx);
                const ScanPoint& pt = points[i];
                const ModelParams p(pt.r, pt.k);
                const auto hit = first_violation(kind, p, pt.x0, n);
                if (hit) {
                    ++violations;
                    if (local.size() < kMaxWitnesses) {
                        local.push_back({i, pt, *hit});
                    }
                }
            }
#pragma omp critical
            merged.insert(merged.end(), local.begin(), local.end());
        }
        std::sort(merged.begin(), merged.end(),
                  [](const ScanWitness& a, const ScanWitness& b) {
                      return a.point_index < b.point_index;
                  });
        if (merged.size() > kMaxWitnesses) {
            merged.resize(kMaxWitnesses);
        }
        summary.violation_count = violations;
        summary.witnesses = std::move(merged);
        return summary;
    }
#else
    (void)exec;
#endif

    for (std::size_t i = 0; i < points.size(); ++i) {
        const ScanPoint& pt = points[i];
        const ModelParams p(pt.r, pt.k);
        const auto hit = first_violation(kind, p, pt.x0, n);
        if (hit) {
            ++summary.violation_count;
            if (summary.witnesses.size() < kMaxWitnesses) {
                summary.witnesses.push_back({i, pt, *hit});
            }
        }
    }
    return summary;
}

std::vector<ScanPoint> grid_scan_points(std::span<const double> r_values,
                                        std::span<const double> k_values,
                                        std::span<const double> x0_fractions) {
    std::vector<ScanPoint> points;
    points.reserve(r_values.size() * k_values.size() * x0_fractions.size());
    for (double r : r_values) {
        for (double k : k_values) {
            for (double frac : x0_fractions) {
                if (!(std::isfinite(frac) && frac > 0.0)) {
                    throw ValidationError("x0frac",
                                          "state fractions must be positive and finite");
                }
                points.push_back({r, k, frac * k});
            }
        }
    }
    return points;
}

std::vector<ScanPoint> random_scan_points(std::uint64_t seed, std::size_t count,
                                          double r_max, double k_max,
                                          double x0_max_fraction) {
    if (!(std::isfinite(r_max) && r_max > 0.0)) {
        throw ValidationError("rmax", "r_max must be positive and finite");
    }
    if (!(std::isfinite(k_max) && k_max > 0.0)) {
        throw ValidationError("kmax", "k_max must be positive and finite");
    }
    if (!(std::isfinite(x0_max_fraction) && x0_max_fraction > 0.0)) {
        throw ValidationError("x0frac", "x0_max_fraction must be positive and finite");
    }
    std::mt19937_64 gen(seed);
    std::vector<ScanPoint> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double r = r_max * unit_open_low(gen);
        const double k = k_max * unit_open_low(gen);
        const double x0 = x0_max_fraction * k * unit_open_low(gen);
        points.push_back({r, k, x0});
    }
    return points;
}

std::uint64_t default_scan_seed() {
    if (const char* env = std::getenv("LOGLAB_SEED")) {
        char* end = nullptr;
        const unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') {
            return static_cast<std::uint64_t>(parsed);
        }
    }
    return kDefaultSeed;
}

ConsistencyResult consistency_compare(const MapKind& kind, const ModelParams& p,
                                      double x0, std::size_t n) {
    if (!(std::isfinite(x0) && x0 > 0.0)) {
        throw DomainError("consistency_compare: x0 must be positive and finite");
    }
    const OrbitReport report = iterate(kind, p, x0, n);
    ConsistencyResult result;
    result.violations = report.violations;
    if (!report.violations.empty()) {
        return result;
    }
    const double step = map_time_step(kind);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < report.orbit.size(); ++i) {
        const double t = static_cast<double>(i) * step;
        max_dev = std::max(max_dev,
                           std::abs(report.orbit[i] - closed_form(p, x0, t)));
    }
    result.max_deviation = max_dev;
    return result;
}

} // namespace loglab
