#include <sstream>

#include <doctest.h>

#include "loglab/csv.hpp"
#include "loglab/serialize.hpp"

using namespace loglab;

TEST_CASE("model parameters round-trip") {
    const ModelParams p(0.1, 150.0);
    const OrderedJson j = encode(p);
    CHECK(j.dump() == R"({"r":0.1,"k":150.0})");
    CHECK(decode_params(j) == p);
    CHECK(decode_params(OrderedJson::parse(j.dump())) == p);
    CHECK_THROWS_AS(decode_params(OrderedJson{{"r", -1.0}, {"k", 1.0}}),
                    ValidationError);
    CHECK_THROWS(decode_params(OrderedJson{{"r", 1.0}}));
}

TEST_CASE("harvest modes round-trip") {
    const HarvestMode modes[] = {Unexploited{}, ConstantEffort(0.2),
                                 ConstantQuota(0.05)};
    for (const HarvestMode& mode : modes) {
        CHECK(decode_mode(encode(mode)) == mode);
    }
    CHECK(encode(HarvestMode(Unexploited{})).dump() == R"({"kind":"unexploited"})");
    CHECK(encode(HarvestMode(ConstantQuota(0.05))).dump() ==
          R"({"kind":"constant_quota","quota":0.05})");
    const HarvestMode scheduled = Scheduled{};
    CHECK(encode(scheduled).dump() == R"({"kind":"scheduled"})");
    CHECK(decode_mode(encode(scheduled)) == scheduled);
    CHECK_THROWS_AS(decode_mode(OrderedJson{{"kind", "seasonal"}}), ValidationError);
}

TEST_CASE("stability reports round-trip") {
    const ModelParams p(0.5, 0.8);
    for (const HarvestMode& mode :
         {HarvestMode(Unexploited{}), HarvestMode(ConstantEffort(0.2)),
          HarvestMode(ConstantEffort(0.6)), HarvestMode(ConstantQuota(0.05)),
          HarvestMode(ConstantQuota(0.1)), HarvestMode(ConstantQuota(0.2))}) {
        const StabilityReport report = classify(p, mode);
        CHECK(decode_stability_report(encode(report)) == report);
    }
    SUBCASE("optional keys appear only when set") {
        const OrderedJson plain = encode(classify(p, Unexploited{}));
        CHECK_FALSE(plain.contains("case"));
        CHECK_FALSE(plain.contains("note"));
        CHECK_FALSE(plain["equilibria"][1].contains("region_lower"));
        const OrderedJson quota = encode(classify(p, ConstantQuota(0.05)));
        CHECK(quota["case"] == "two_equilibria");
        CHECK(quota["equilibria"][1]["verdict"] == "stable_with_region");
        CHECK(quota["equilibria"][1].contains("region_lower"));
        const OrderedJson spent = encode(classify(p, ConstantQuota(0.2)));
        CHECK(spent["case"] == "no_equilibrium");
        CHECK(spent.contains("note"));
    }
    SUBCASE("field order is pinned") {
        const std::string text = encode(classify(p, Unexploited{})).dump();
        CHECK(text.rfind(R"({"mode":{"kind":"unexploited"},"params":)", 0) == 0);
    }
    SUBCASE("identical inputs give identical bytes") {
        CHECK(encode(classify(p, ConstantQuota(0.05))).dump(2) ==
              encode(classify(p, ConstantQuota(0.05))).dump(2));
    }
}

TEST_CASE("control problems and schedules round-trip") {
    const ControlProblem prob(ModelParams(0.01, 0.05), 500.0, 0.04, 0.001, 2e-4);
    CHECK(decode_control_problem(encode(prob)) == prob);
    {
        OrderedJson j = encode(prob);
        j["horizon"] = -1.0;
        CHECK_THROWS_AS(decode_control_problem(j), ValidationError);
    }
    const PolicySchedule planned = synthesize_policy(prob);
    const OrderedJson jp = encode(planned);
    CHECK(jp.contains("plan"));
    CHECK_FALSE(jp.contains("hysteresis"));
    CHECK(jp["plan"][0]["trigger"]["kind"] == "start");
    CHECK(jp["plan"][1]["trigger"]["kind"] == "crossing");
    CHECK(jp["plan"][1]["trigger"]["direction"] == "downward");
    CHECK(decode_schedule(jp) == planned);

    const ControlProblem tight(ModelParams(0.01, 0.05), 500.0, 0.03, 0.001, 1e-4);
    const PolicySchedule feedback = synthesize_policy(tight);
    const OrderedJson jf = encode(feedback);
    CHECK(jf.contains("hysteresis"));
    CHECK_FALSE(jf.contains("plan"));
    CHECK(decode_schedule(jf) == feedback);
    CHECK_THROWS_AS(decode_schedule(OrderedJson{{"regime", "sideways"}, {"plan", OrderedJson::array()}}),
                    ValidationError);
}

TEST_CASE("policy reports round-trip") {
    const ControlProblem prob(ModelParams(0.01, 0.05), 500.0, 0.04, 0.001, 2e-4);
    const PolicySchedule schedule = synthesize_policy(prob);
    const PolicyRun run = simulate_policy(prob, schedule, 0.05);
    const PolicyReport report = make_policy_report(prob, schedule, run);
    CHECK(report.yield == run.yield);
    CHECK(report.switch_times == run.switch_times);
    const OrderedJson j = encode(report);
    CHECK(j["t_extinction"].is_null());
    CHECK(j["segments"].size() == 2);
    CHECK(decode_policy_report(j) == report);
    CHECK(decode_policy_report(OrderedJson::parse(j.dump(2))) == report);

    SUBCASE("extinction fields serialize when present") {
        const ControlProblem doomed(ModelParams(0.01, 0.05), 500.0, 0.04, 0.001, 0.5);
        const PolicySchedule bang{Regime::AboveSingularCap,
                                  {{SegmentMode::BangMax, 0.5, FromStart{}}},
                                  {}};
        const PolicyRun crash = simulate_policy(doomed, bang, 0.01);
        const PolicyReport rep = make_policy_report(doomed, bang, crash);
        const OrderedJson jc = encode(rep);
        CHECK(jc["extinct"] == true);
        CHECK(jc["t_extinction"].is_number());
        CHECK(decode_policy_report(jc) == rep);
    }
}

TEST_CASE("map kinds round-trip") {
    CHECK(encode(MapKind(StreipertZ{})).dump() == R"({"kind":"streipert"})");
    CHECK(encode(MapKind(NonstandardZ{})).dump() == R"({"kind":"nsfd"})");
    CHECK(encode(MapKind(NonstandardH(0.5))).dump() == R"({"kind":"nsfd","step":0.5})");
    CHECK(encode(MapKind(ExplicitEulerZ(0.25))).dump() ==
          R"({"kind":"euler","step":0.25})");
    for (const MapKind& kind :
         {MapKind(StreipertZ{}), MapKind(NonstandardZ{}), MapKind(NonstandardH(0.5)),
          MapKind(ExplicitEulerZ(0.25))}) {
        CHECK(decode_map_kind(encode(kind)) == kind);
    }
    CHECK_THROWS_AS(decode_map_kind(OrderedJson{{"kind", "verlet"}}), ValidationError);
    CHECK_THROWS(decode_map_kind(OrderedJson{{"kind", "euler"}}));
    CHECK_THROWS_AS(decode_map_kind(OrderedJson{{"kind", "nsfd"}, {"step", 0.0}}),
                    ValidationError);
}

TEST_CASE("orbit and scan documents round-trip") {
    SUBCASE("violating orbit") {
        const OrbitReport report = iterate(StreipertZ{}, ModelParams(2.0, 5.0), 2.0, 10);
        const OrderedJson j = encode(report);
        CHECK(j["limit"].is_null());
        CHECK(j["violations"][0]["reason"] == "negative");
        CHECK(decode_orbit_report(j) == report);
    }
    SUBCASE("settled orbit") {
        const OrbitReport report =
            iterate(NonstandardZ{}, ModelParams(2.0, 5.0), 2.0, 50);
        const OrderedJson j = encode(report);
        CHECK(j["limit"].is_number());
        CHECK(decode_orbit_report(j) == report);
    }
    SUBCASE("scan summary with witnesses") {
        const auto pts = random_scan_points(11, 200, 10.0, 10.0, 3.0);
        const ScanSummary summary =
            positivity_scan(StreipertZ{}, pts, 20, Execution::Serial);
        CHECK(summary.violation_count > 0);
        const OrderedJson j = encode(summary);
        CHECK(j["witnesses"][0].contains("point_index"));
        CHECK(decode_scan_summary(j) == summary);
    }
    SUBCASE("consistency both ways") {
        const ConsistencyResult clean =
            consistency_compare(NonstandardZ{}, ModelParams(0.1, 150.0), 30.0, 50);
        CHECK(decode_consistency(encode(clean)) == clean);
        const ConsistencyResult broken =
            consistency_compare(StreipertZ{}, ModelParams(2.0, 5.0), 2.0, 10);
        const OrderedJson j = encode(broken);
        CHECK(j["max_deviation"].is_null());
        CHECK(decode_consistency(j) == broken);
    }
}

TEST_CASE("doubles survive a dump and parse cycle bit for bit") {
    const double values[] = {0.1,    1.0 / 3.0, 0.013819660112501052, 1e-300,
                             1e300,  0.000125,  150.0,                2.5e-17};
    for (double v : values) {
        OrderedJson j;
        j["v"] = v;
        CHECK(OrderedJson::parse(j.dump()).at("v").get<double>() == v);
    }
}

TEST_CASE("shortest double formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(150.0) == "150");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-10.0) == "-10");
    CHECK(format_double(0.000125) == "0.000125");
    CHECK(format_double(1e300) == "1e+300");
    CHECK(format_double(0.013819660112501052) == "0.013819660112501053");
}

TEST_CASE("trajectory csv layout") {
    const ModelParams p(0.5, 0.8);
    SUBCASE("plain run with controls") {
        Trajectory traj;
        traj.dt = 0.5;
        traj.samples = {{0.0, 0.4, 0.1}, {0.5, 0.42, 0.1}, {1.0, 0.44, std::nullopt}};
        std::ostringstream out;
        write_trajectory_csv(out, traj);
        CHECK(out.str() == "t,x,u\n0,0.4,0.1\n0.5,0.42,0.1\n1,0.44,\n");
    }
    SUBCASE("extinction footer and extras") {
        const Trajectory traj =
            integrate(p, ConstantQuota(0.15), 0.4, TimeSpan(0, 50), 0.001);
        std::ostringstream out;
        write_trajectory_csv(out, traj, {"note one"});
        const std::string text = out.str();
        CHECK(text.rfind("t,x,u\n", 0) == 0);
        CHECK(text.find("\n# note one\n# extinction t=") != std::string::npos);
        CHECK(text.back() == '\n');
    }
}

TEST_CASE("orbit csv layout") {
    SUBCASE("negative value flagged in place") {
        const OrbitReport report = iterate(StreipertZ{}, ModelParams(2.0, 5.0), 2.0, 10);
        std::ostringstream out;
        write_orbit_csv(out, StreipertZ{}, report);
        CHECK(out.str() == "t,x,flag\n0,2,\n1,-10.000000000000002,VIOLATION\n");
    }
    SUBCASE("undefined step leaves a footer") {
        const OrbitReport report = iterate(StreipertZ{}, ModelParams(2.0, 5.0), 2.5, 10);
        std::ostringstream out;
        write_orbit_csv(out, StreipertZ{}, report);
        CHECK(out.str() == "t,x,flag\n0,2.5,\n# singular denominator at t=1\n");
    }
    SUBCASE("fractional step scales the time column") {
        OrbitReport report;
        report.orbit = {1.0, 2.0, 3.0};
        std::ostringstream out;
        write_orbit_csv(out, NonstandardH(0.5), report);
        CHECK(out.str() == "t,x,flag\n0,1,\n0.5,2,\n1,3,\n");
    }
}
