#include "loglab/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "loglab/control.hpp"
#include "loglab/csv.hpp"
#include "loglab/serialize.hpp"
#include "loglab/stability.hpp"
#include "loglab/timescale.hpp"

namespace loglab {

namespace {

double need(const std::optional<double>& v, const char* name) {
    if (!v) {
        throw ValidationError(name, std::string("missing required value '") + name + "'");
    }
    return *v;
}

std::uint64_t need_count(const std::optional<std::uint64_t>& v, const char* name) {
    if (!v) {
        throw ValidationError(name, std::string("missing required value '") + name + "'");
    }
    return *v;
}

// Whole documents are assembled in memory and written in one shot, so
// identical runs produce identical bytes.
void write_text(const std::optional<std::string>& path, const std::string& text,
                const char* field) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) {
        throw ValidationError(field, "cannot open output file '" + *path + "'");
    }
    out << text;
}

HarvestMode mode_from(const Scenario& sc) {
    if (sc.effort && sc.quota) {
        throw ValidationError("effort", "effort and quota are mutually exclusive");
    }
    if (sc.effort) return ConstantEffort(*sc.effort);
    if (sc.quota) return ConstantQuota(*sc.quota);
    return Unexploited{};
}

MapKind map_from(const Scenario& sc) {
    if (!sc.map_name) {
        throw ValidationError("map", "missing required value 'map'");
    }
    const std::string& name = *sc.map_name;
    if (name == "streipert") {
        if (sc.step) {
            throw ValidationError("step", "the streipert map has unit step");
        }
        return StreipertZ{};
    }
    if (name == "nsfd") {
        if (sc.step) return NonstandardH(*sc.step);
        return NonstandardZ{};
    }
    if (name == "euler") {
        return ExplicitEulerZ(sc.step.value_or(1.0));
    }
    throw ValidationError("map", "unknown map '" + name + "' (streipert, nsfd, euler)");
}

std::string json_text(const OrderedJson& j) {
    return j.dump(2) + "\n";
}

} // namespace

int run_simulate(const Scenario& sc) {
    const ModelParams params(need(sc.r, "r"), need(sc.k, "k"));
    const HarvestMode mode = mode_from(sc);
    const TimeSpan span(sc.t0.value_or(0.0), need(sc.t1, "t1"));
    const Trajectory traj =
        integrate(params, mode, need(sc.x0, "x0"), span, need(sc.dt, "dt"));
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_text(sc.out_path, csv.str(), "out");
    return 0;
}

int run_stability(const Scenario& sc) {
    const ModelParams params(need(sc.r, "r"), need(sc.k, "k"));
    const StabilityReport report = classify(params, mode_from(sc));
    write_text(sc.report_path, json_text(encode(report)), "report");
    return 0;
}

int run_policy(const Scenario& sc) {
    const ModelParams params(need(sc.r, "r"), need(sc.k, "k"));
    const ControlProblem prob(params, need(sc.t1, "t1"), need(sc.x0, "x0"),
                              need(sc.xb, "xb"), need(sc.umax, "umax"));
    const PolicySchedule schedule = sc.singular_from_start
                                        ? immediate_singular_schedule(prob)
                                        : synthesize_policy(prob);
    SimulateOptions options;
    options.re_anchor = !sc.no_reanchor;
    const PolicyRun run = simulate_policy(prob, schedule, need(sc.dt, "dt"), options);

    write_text(sc.report_path, json_text(encode(make_policy_report(prob, schedule, run))),
               "report");

    if (sc.out_path) {
        std::vector<std::string> footers;
        for (double t : run.switch_times) {
            footers.push_back("switch t=" + format_double(t));
        }
        std::ostringstream csv;
        write_trajectory_csv(csv, run.trajectory, footers);
        write_text(sc.out_path, csv.str(), "out");
    }
    return 0;
}

int run_discrete(const Scenario& sc) {
    const MapKind kind = map_from(sc);

    if (sc.scan) {
        const std::uint64_t seed = sc.seed.value_or(default_scan_seed());
        const auto points = random_scan_points(
            seed, sc.draws.value_or(100000), sc.rmax.value_or(10.0),
            sc.kmax.value_or(10.0), sc.x0frac.value_or(3.0));
        const ScanSummary summary =
            positivity_scan(kind, points, sc.n.value_or(100), Execution::Parallel);
        OrderedJson j;
        j["map"] = encode(kind);
        j["seed"] = seed;
        j["n"] = sc.n.value_or(100);
        j["scan"] = encode(summary);
        write_text(sc.report_path, json_text(j), "report");
        return 0;
    }

    const ModelParams params(need(sc.r, "r"), need(sc.k, "k"));
    const double x0 = need(sc.x0, "x0");
    const std::uint64_t n = need_count(sc.n, "n");
    const OrbitReport report = iterate(kind, params, x0, n);

    OrderedJson j;
    j["map"] = encode(kind);
    j["params"] = encode(params);
    j["x0"] = x0;
    j["n"] = n;
    j["orbit"] = encode(report);
    if (sc.compare) {
        j["consistency"] = encode(consistency_compare(kind, params, x0, n));
    }
    write_text(sc.report_path, json_text(j), "report");

    if (sc.out_path) {
        std::ostringstream csv;
        write_orbit_csv(csv, kind, report);
        write_text(sc.out_path, csv.str(), "out");
    }
    return 0;
}

} // namespace loglab
