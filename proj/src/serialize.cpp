#include "loglab/serialize.hpp"

#include <string>

namespace loglab {

namespace {

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::GloballyAsymptoticallyStable: return "globally_asymptotically_stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::StableWithRegion: return "stable_with_region";
    case Verdict::Trivial: return "trivial";
    }
    throw ValidationError("verdict", "unrepresentable verdict");
}

Verdict verdict_from(const std::string& s) {
    if (s == "globally_asymptotically_stable") return Verdict::GloballyAsymptoticallyStable;
    if (s == "unstable") return Verdict::Unstable;
    if (s == "stable_with_region") return Verdict::StableWithRegion;
    if (s == "trivial") return Verdict::Trivial;
    throw ValidationError("verdict", "unknown verdict '" + s + "'");
}

std::string case_name(QuotaCase c) {
    switch (c) {
    case QuotaCase::NoEquilibrium: return "no_equilibrium";
    case QuotaCase::Tangent: return "tangent";
    case QuotaCase::TwoEquilibria: return "two_equilibria";
    }
    throw ValidationError("case", "unrepresentable case");
}

QuotaCase case_from(const std::string& s) {
    if (s == "no_equilibrium") return QuotaCase::NoEquilibrium;
    if (s == "tangent") return QuotaCase::Tangent;
    if (s == "two_equilibria") return QuotaCase::TwoEquilibria;
    throw ValidationError("case", "unknown case '" + s + "'");
}

std::string regime_name(Regime r) {
    return r == Regime::AboveSingularCap ? "above_singular_cap" : "below_singular_cap";
}

Regime regime_from(const std::string& s) {
    if (s == "above_singular_cap") return Regime::AboveSingularCap;
    if (s == "below_singular_cap") return Regime::BelowSingularCap;
    throw ValidationError("regime", "unknown regime '" + s + "'");
}

std::string segment_mode_name(SegmentMode m) {
    switch (m) {
    case SegmentMode::BangMax: return "bang_max";
    case SegmentMode::Zero: return "zero";
    case SegmentMode::Singular: return "singular";
    }
    throw ValidationError("mode", "unrepresentable segment mode");
}

SegmentMode segment_mode_from(const std::string& s) {
    if (s == "bang_max") return SegmentMode::BangMax;
    if (s == "zero") return SegmentMode::Zero;
    if (s == "singular") return SegmentMode::Singular;
    throw ValidationError("mode", "unknown segment mode '" + s + "'");
}

std::string direction_name(CrossingDirection d) {
    return d == CrossingDirection::Upward ? "upward" : "downward";
}

CrossingDirection direction_from(const std::string& s) {
    if (s == "upward") return CrossingDirection::Upward;
    if (s == "downward") return CrossingDirection::Downward;
    throw ValidationError("direction", "unknown direction '" + s + "'");
}

std::string reason_name(ViolationReason r) {
    switch (r) {
    case ViolationReason::Negative: return "negative";
    case ViolationReason::Undefined: return "undefined";
    case ViolationReason::NonFinite: return "non_finite";
    }
    throw ValidationError("reason", "unrepresentable violation reason");
}

ViolationReason reason_from(const std::string& s) {
    if (s == "negative") return ViolationReason::Negative;
    if (s == "undefined") return ViolationReason::Undefined;
    if (s == "non_finite") return ViolationReason::NonFinite;
    throw ValidationError("reason", "unknown violation reason '" + s + "'");
}

OrderedJson encode_trigger(const SegmentTrigger& trigger) {
    OrderedJson j;
    if (std::holds_alternative<FromStart>(trigger)) {
        j["kind"] = "start";
        return j;
    }
    const auto& c = std::get<OnCrossing>(trigger);
    j["kind"] = "crossing";
    j["threshold"] = c.threshold;
    j["direction"] = direction_name(c.direction);
    return j;
}

SegmentTrigger decode_trigger(const OrderedJson& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "start") return FromStart{};
    if (kind == "crossing") {
        return OnCrossing{j.at("threshold").get<double>(),
                          direction_from(j.at("direction").get<std::string>())};
    }
    throw ValidationError("trigger", "unknown trigger kind '" + kind + "'");
}

OrderedJson encode_violations(const std::vector<Violation>& violations) {
    OrderedJson arr = OrderedJson::array();
    for (const Violation& v : violations) {
        arr.push_back({{"index", v.index}, {"reason", reason_name(v.reason)}});
    }
    return arr;
}

std::vector<Violation> decode_violations(const OrderedJson& arr) {
    std::vector<Violation> out;
    for (const auto& v : arr) {
        out.push_back({v.at("index").get<std::size_t>(),
                       reason_from(v.at("reason").get<std::string>())});
    }
    return out;
}

} // namespace

PolicyReport make_policy_report(const ControlProblem& prob,
                                const PolicySchedule& schedule,
                                const PolicyRun& run) {
    PolicyReport report{prob, schedule, run.yield, run.terminal_state,
                        run.terminal_feasible, run.extinct, run.t_extinction,
                        run.switch_times, run.segments, run.max_singular_deviation};
    return report;
}

OrderedJson encode(const ModelParams& p) {
    return OrderedJson{{"r", p.r}, {"k", p.k}};
}

OrderedJson encode(const HarvestMode& mode) {
    OrderedJson j;
    if (std::holds_alternative<Unexploited>(mode)) {
        j["kind"] = "unexploited";
    } else if (const auto* m = std::get_if<ConstantEffort>(&mode)) {
        j["kind"] = "constant_effort";
        j["effort"] = m->e;
    } else if (const auto* m = std::get_if<ConstantQuota>(&mode)) {
        j["kind"] = "constant_quota";
        j["quota"] = m->h;
    } else {
        j["kind"] = "scheduled";
    }
    return j;
}

OrderedJson encode(const StabilityReport& report) {
    OrderedJson j;
    j["mode"] = encode(report.mode);
    j["params"] = encode(report.params);
    if (report.quota_case) {
        j["case"] = case_name(*report.quota_case);
    }
    if (report.note) {
        j["note"] = *report.note;
    }
    OrderedJson eqs = OrderedJson::array();
    for (const Equilibrium& e : report.equilibria) {
        OrderedJson je;
        je["value"] = e.value;
        je["verdict"] = verdict_name(e.verdict);
        if (e.region_lower) {
            je["region_lower"] = *e.region_lower;
        }
        je["rationale"] = e.rationale;
        eqs.push_back(std::move(je));
    }
    j["equilibria"] = std::move(eqs);
    return j;
}

OrderedJson encode(const ControlProblem& prob) {
    OrderedJson j;
    j["params"] = encode(prob.params);
    j["horizon"] = prob.horizon;
    j["x0"] = prob.x0;
    j["x_floor"] = prob.x_floor;
    j["u_max"] = prob.u_max;
    j["lambda0"] = prob.lambda0;
    return j;
}

OrderedJson encode(const PolicySchedule& schedule) {
    OrderedJson j;
    j["regime"] = regime_name(schedule.regime);
    if (schedule.hysteresis) {
        j["hysteresis"] = OrderedJson{{"threshold", schedule.hysteresis->threshold},
                                      {"band", schedule.hysteresis->band}};
        return j;
    }
    OrderedJson plan = OrderedJson::array();
    for (const PlannedSegment& seg : schedule.plan) {
        plan.push_back({{"mode", segment_mode_name(seg.mode)},
                        {"level", seg.level},
                        {"trigger", encode_trigger(seg.trigger)}});
    }
    j["plan"] = std::move(plan);
    return j;
}

OrderedJson encode(const PolicyReport& report) {
    OrderedJson j;
    j["problem"] = encode(report.problem);
    j["schedule"] = encode(report.schedule);
    j["yield"] = report.yield;
    j["terminal_state"] = report.terminal_state;
    j["terminal_feasible"] = report.terminal_feasible;
    j["extinct"] = report.extinct;
    j["t_extinction"] = report.t_extinction ? OrderedJson(*report.t_extinction)
                                            : OrderedJson(nullptr);
    j["switch_times"] = report.switch_times;
    OrderedJson segs = OrderedJson::array();
    for (const ResolvedSegment& s : report.segments) {
        segs.push_back({{"mode", segment_mode_name(s.mode)},
                        {"level", s.level},
                        {"t_begin", s.t_begin},
                        {"t_end", s.t_end}});
    }
    j["segments"] = std::move(segs);
    j["max_singular_deviation"] = report.max_singular_deviation;
    return j;
}

OrderedJson encode(const MapKind& kind) {
    OrderedJson j;
    if (std::holds_alternative<StreipertZ>(kind)) {
        j["kind"] = "streipert";
    } else if (std::holds_alternative<NonstandardZ>(kind)) {
        j["kind"] = "nsfd";
    } else if (const auto* m = std::get_if<NonstandardH>(&kind)) {
        j["kind"] = "nsfd";
        j["step"] = m->step;
    } else {
        j["kind"] = "euler";
        j["step"] = std::get<ExplicitEulerZ>(kind).step;
    }
    return j;
}

OrderedJson encode(const OrbitReport& report) {
    OrderedJson j;
    j["orbit"] = report.orbit;
    j["violations"] = encode_violations(report.violations);
    j["limit"] = report.limit ? OrderedJson(*report.limit) : OrderedJson(nullptr);
    return j;
}

OrderedJson encode(const ScanSummary& summary) {
    OrderedJson j;
    j["orbits"] = summary.orbit_count;
    j["violations"] = summary.violation_count;
    OrderedJson wits = OrderedJson::array();
    for (const ScanWitness& w : summary.witnesses) {
        wits.push_back({{"point_index", w.point_index},
                        {"r", w.point.r},
                        {"k", w.point.k},
                        {"x0", w.point.x0},
                        {"orbit_index", w.orbit_index}});
    }
    j["witnesses"] = std::move(wits);
    return j;
}

OrderedJson encode(const ConsistencyResult& result) {
    OrderedJson j;
    j["max_deviation"] = result.max_deviation ? OrderedJson(*result.max_deviation)
                                              : OrderedJson(nullptr);
    j["violations"] = encode_violations(result.violations);
    return j;
}

ModelParams decode_params(const OrderedJson& j) {
    return ModelParams(j.at("r").get<double>(), j.at("k").get<double>());
}

HarvestMode decode_mode(const OrderedJson& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "unexploited") return Unexploited{};
    if (kind == "constant_effort") return ConstantEffort(j.at("effort").get<double>());
    if (kind == "constant_quota") return ConstantQuota(j.at("quota").get<double>());
    if (kind == "scheduled") return Scheduled{};
    throw ValidationError("mode", "unknown harvest mode '" + kind + "'");
}

StabilityReport decode_stability_report(const OrderedJson& j) {
    StabilityReport report{decode_params(j.at("params")), decode_mode(j.at("mode")),
                           std::nullopt, std::nullopt, {}};
    if (j.contains("case")) {
        report.quota_case = case_from(j.at("case").get<std::string>());
    }
    if (j.contains("note")) {
        report.note = j.at("note").get<std::string>();
    }
    for (const auto& je : j.at("equilibria")) {
        Equilibrium e;
        e.value = je.at("value").get<double>();
        e.verdict = verdict_from(je.at("verdict").get<std::string>());
        if (je.contains("region_lower")) {
            e.region_lower = je.at("region_lower").get<double>();
        }
        e.rationale = je.at("rationale").get<std::string>();
        report.equilibria.push_back(std::move(e));
    }
    return report;
}

ControlProblem decode_control_problem(const OrderedJson& j) {
    return ControlProblem(decode_params(j.at("params")),
                          j.at("horizon").get<double>(), j.at("x0").get<double>(),
                          j.at("x_floor").get<double>(), j.at("u_max").get<double>(),
                          j.at("lambda0").get<int>());
}

PolicySchedule decode_schedule(const OrderedJson& j) {
    PolicySchedule s;
    s.regime = regime_from(j.at("regime").get<std::string>());
    if (j.contains("hysteresis")) {
        const auto& h = j.at("hysteresis");
        s.hysteresis = HysteresisRule{h.at("threshold").get<double>(),
                                      h.at("band").get<double>()};
        return s;
    }
    for (const auto& js : j.at("plan")) {
        s.plan.push_back({segment_mode_from(js.at("mode").get<std::string>()),
                          js.at("level").get<double>(),
                          decode_trigger(js.at("trigger"))});
    }
    return s;
}

PolicyReport decode_policy_report(const OrderedJson& j) {
    PolicyReport report{decode_control_problem(j.at("problem")),
                        decode_schedule(j.at("schedule")),
                        j.at("yield").get<double>(),
                        j.at("terminal_state").get<double>(),
                        j.at("terminal_feasible").get<bool>(),
                        j.at("extinct").get<bool>(),
                        std::nullopt,
                        j.at("switch_times").get<std::vector<double>>(),
                        {},
                        j.at("max_singular_deviation").get<double>()};
    if (!j.at("t_extinction").is_null()) {
        report.t_extinction = j.at("t_extinction").get<double>();
    }
    for (const auto& js : j.at("segments")) {
        report.segments.push_back({segment_mode_from(js.at("mode").get<std::string>()),
                                   js.at("level").get<double>(),
                                   js.at("t_begin").get<double>(),
                                   js.at("t_end").get<double>()});
    }
    return report;
}

MapKind decode_map_kind(const OrderedJson& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "streipert") return StreipertZ{};
    if (kind == "nsfd") {
        if (j.contains("step")) return NonstandardH(j.at("step").get<double>());
        return NonstandardZ{};
    }
    if (kind == "euler") return ExplicitEulerZ(j.at("step").get<double>());
    throw ValidationError("map", "unknown map kind '" + kind + "'");
}

OrbitReport decode_orbit_report(const OrderedJson& j) {
    OrbitReport report;
    report.orbit = j.at("orbit").get<std::vector<double>>();
    report.violations = decode_violations(j.at("violations"));
    if (!j.at("limit").is_null()) {
        report.limit = j.at("limit").get<double>();
    }
    return report;
}

ScanSummary decode_scan_summary(const OrderedJson& j) {
    ScanSummary summary;
    summary.orbit_count = j.at("orbits").get<std::size_t>();
    summary.violation_count = j.at("violations").get<std::size_t>();
    for (const auto& jw : j.at("witnesses")) {
        summary.witnesses.push_back(
            {jw.at("point_index").get<std::size_t>(),
             {jw.at("r").get<double>(), jw.at("k").get<double>(),
              jw.at("x0").get<double>()},
             jw.at("orbit_index").get<std::size_t>()});
    }
    return summary;
}

ConsistencyResult decode_consistency(const OrderedJson& j) {
    ConsistencyResult result;
    if (!j.at("max_deviation").is_null()) {
        result.max_deviation = j.at("max_deviation").get<double>();
    }
    result.violations = decode_violations(j.at("violations"));
    return result;
}

} // namespace loglab
