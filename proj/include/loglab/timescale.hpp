#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "loglab/dynamics.hpp"

namespace loglab {

// Exact discretization on integer time: x(t+1) = x / (1 - r (1 - x/k)).
// The denominator vanishes on the line x = k (r - 1) / r and the map can
// produce negative values; both are reported, not hidden.
struct StreipertZ {
    friend bool operator==(const StreipertZ&, const StreipertZ&) = default;
};

// Denominator-shifted scheme on integer time:
// x(t+1) = (r + 1) k x / (k + r x). Positive for every positive state.
struct NonstandardZ {
    friend bool operator==(const NonstandardZ&, const NonstandardZ&) = default;
};

// Experimental step-h variant of the denominator-shifted scheme:
// x(t+h) = (r h + 1) k x / (k + r h x). Reduces to NonstandardZ at
// step = 1; kept for exploring uniform grids with spacing other than 1.
struct NonstandardH {
    double step;

    explicit NonstandardH(double step);

    friend bool operator==(const NonstandardH&, const NonstandardH&) = default;
};

// Forward Euler baseline x(t+h) = x + h r x (1 - x/k); loses positivity
// for large h r.
struct ExplicitEulerZ {
    double step;

    explicit ExplicitEulerZ(double step);

    friend bool operator==(const ExplicitEulerZ&, const ExplicitEulerZ&) = default;
};

using MapKind = std::variant<StreipertZ, NonstandardZ, NonstandardH, ExplicitEulerZ>;

// Sample spacing of the map in continuous time.
double map_time_step(const MapKind& kind);

// Raised when a StreipertZ step lands within 1e-14 of the vanishing
// denominator; carries the offending state.
class SingularDenominator : public DomainError {
public:
    explicit SingularDenominator(double x);

    double state() const noexcept { return x_; }

private:
    double x_;
};

double streipert_step(const ModelParams& p, double x);
double nsfd_step(const ModelParams& p, double x);
double euler_step(const ModelParams& p, double x, double step);
double map_step(const MapKind& kind, const ModelParams& p, double x);

enum class ViolationReason { Negative, Undefined, NonFinite };

struct Violation {
    std::size_t index;
    ViolationReason reason;

    friend bool operator==(const Violation&, const Violation&) = default;
};

// Orbit from x0, truncated at the first violation. A negative value is
// kept in the orbit (it is the evidence); an undefined or non-finite step
// truncates before storing. `limit` is the final value when the last two
// entries agree within 1e-12 k.
struct OrbitReport {
    std::vector<double> orbit;
    std::vector<Violation> violations;
    std::optional<double> limit;

    friend bool operator==(const OrbitReport&, const OrbitReport&) = default;
};

OrbitReport iterate(const MapKind& kind, const ModelParams& p, double x0, std::size_t n);

struct ScanPoint {
    double r;
    double k;
    double x0;

    friend bool operator==(const ScanPoint&, const ScanPoint&) = default;
};

struct ScanWitness {
    std::size_t point_index;
    ScanPoint point;
    std::size_t orbit_index;

    friend bool operator==(const ScanWitness&, const ScanWitness&) = default;
};

// `witnesses` holds the first violations in point order, capped at 10,
// identical for serial and parallel execution.
struct ScanSummary {
    std::size_t orbit_count = 0;
    std::size_t violation_count = 0;
    std::vector<ScanWitness> witnesses;

    friend bool operator==(const ScanSummary&, const ScanSummary&) = default;
};

enum class Execution { Serial, Parallel };

// Runs n iterations from every scan point and counts orbits that violate
// positivity (or hit an undefined step). Orbits are independent, so the
// parallel path splits the point set across threads and merges
// deterministically; the serial path is the reference.
ScanSummary positivity_scan(const MapKind& kind, std::span<const ScanPoint> points,
                            std::size_t n, Execution exec = Execution::Parallel);

// Cartesian grid of scan points; x0 = fraction * k per (k, fraction) pair.
std::vector<ScanPoint> grid_scan_points(std::span<const double> r_values,
                                        std::span<const double> k_values,
                                        std::span<const double> x0_fractions);

// Uniform random draws r in (0, r_max], k in (0, k_max],
// x0 in (0, x0_max_fraction * k]. Fully determined by the seed.
std::vector<ScanPoint> random_scan_points(std::uint64_t seed, std::size_t count,
                                          double r_max, double k_max,
                                          double x0_max_fraction);

// Seed for randomized scans: the LOGLAB_SEED environment variable when it
// parses as an unsigned integer, otherwise a fixed default.
std::uint64_t default_scan_seed();

// Discrete orbit versus the continuous closed form at the shared times
// 0, step, 2*step, ... Diagnostic only; no convergence claim. When the
// orbit violates, the report carries the violation instead of a
// deviation.
struct ConsistencyResult {
    std::optional<double> max_deviation;
    std::vector<Violation> violations;

    friend bool operator==(const ConsistencyResult&, const ConsistencyResult&) = default;
};

ConsistencyResult consistency_compare(const MapKind& kind, const ModelParams& p,
                                      double x0, std::size_t n);

} // namespace loglab
