#pragma once

#include <json.hpp>

#include "loglab/control.hpp"
#include "loglab/stability.hpp"
#include "loglab/timescale.hpp"

namespace loglab {

// Reports use ordered JSON so field order, and therefore the emitted
// bytes, are deterministic for identical inputs.
using OrderedJson = nlohmann::ordered_json;

// Summary of a policy run, everything except the bulky trajectory (which
// travels as CSV). This is the document the policy command emits.
struct PolicyReport {
    ControlProblem problem;
    PolicySchedule schedule;
    double yield = 0.0;
    double terminal_state = 0.0;
    bool terminal_feasible = false;
    bool extinct = false;
    std::optional<double> t_extinction;
    std::vector<double> switch_times;
    std::vector<ResolvedSegment> segments;
    double max_singular_deviation = 0.0;

    friend bool operator==(const PolicyReport&, const PolicyReport&) = default;
};

PolicyReport make_policy_report(const ControlProblem& prob,
                                const PolicySchedule& schedule,
                                const PolicyRun& run);

OrderedJson encode(const ModelParams& p);
OrderedJson encode(const HarvestMode& mode);
OrderedJson encode(const StabilityReport& report);
OrderedJson encode(const ControlProblem& prob);
OrderedJson encode(const PolicySchedule& schedule);
OrderedJson encode(const PolicyReport& report);
OrderedJson encode(const MapKind& kind);
OrderedJson encode(const OrbitReport& report);
OrderedJson encode(const ScanSummary& summary);
OrderedJson encode(const ConsistencyResult& result);

// Decoders rebuild values through the validating constructors, so a
// malformed document fails the same way malformed flags do.
ModelParams decode_params(const OrderedJson& j);
HarvestMode decode_mode(const OrderedJson& j);
StabilityReport decode_stability_report(const OrderedJson& j);
ControlProblem decode_control_problem(const OrderedJson& j);
PolicySchedule decode_schedule(const OrderedJson& j);
PolicyReport decode_policy_report(const OrderedJson& j);
MapKind decode_map_kind(const OrderedJson& j);
OrbitReport decode_orbit_report(const OrderedJson& j);
ScanSummary decode_scan_summary(const OrderedJson& j);
ConsistencyResult decode_consistency(const OrderedJson& j);

} // namespace loglab
