#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

#ifndef LOGLAB_CLI_PATH
#error "LOGLAB_CLI_PATH must point at the built binary"
#endif

namespace {

using nlohmann::json;

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd = env_prefix + LOGLAB_CLI_PATH + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        res.out.append(buf, got);
    }
    const int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::filesystem::path temp_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("loglab_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

} // namespace

TEST_CASE("simulate writes csv to stdout") {
    const RunResult res = run_cli("simulate --r 0.1 --k 150 --x0 30 --t1 1 --dt 0.1");
    CHECK(res.code == 0);
    CHECK(res.out.rfind("t,x,u\n0,30,\n", 0) == 0);
    CHECK(count_lines(res.out) == 12);
    CHECK(res.out.back() == '\n');
}

TEST_CASE("identical invocations produce identical bytes") {
    const std::string args = "simulate --r 0.1 --k 150 --x0 30 --t1 20 --dt 0.05";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("simulate --out routes the csv to a file") {
    const auto path = temp_dir() / "traj.csv";
    const RunResult direct = run_cli("simulate --r 0.1 --k 150 --x0 30 --t1 1 --dt 0.1");
    const RunResult filed = run_cli(
        "simulate --r 0.1 --k 150 --x0 30 --t1 1 --dt 0.1 --out " + path.string());
    CHECK(filed.code == 0);
    CHECK(filed.out.empty());
    CHECK(slurp(path) == direct.out);
}

TEST_CASE("simulate reports extinction in the footer") {
    const RunResult res =
        run_cli("simulate --r 0.5 --k 0.8 --quota 0.15 --x0 0.4 --t1 50 --dt 0.001");
    CHECK(res.code == 0);
    CHECK(res.out.find("\n# extinction t=") != std::string::npos);
}

TEST_CASE("missing required values exit with code 2 and name the field") {
    const RunResult res = run_cli("simulate --r 0.1 --k 150");
    CHECK(res.code == 2);
    CHECK(res.out.find("error: t1: missing required value 't1'") != std::string::npos);
}

TEST_CASE("conflicting harvest flags exit with code 2") {
    const RunResult res =
        run_cli("stability --r 0.5 --k 0.8 --effort 0.2 --quota 0.05");
    CHECK(res.code == 2);
    CHECK(res.out.find("effort and quota are mutually exclusive") != std::string::npos);
}

TEST_CASE("parser failures exit with code 2") {
    CHECK(run_cli("simulate --r banana --k 150 --x0 30 --t1 1 --dt 0.1").code == 2);
    CHECK(run_cli("simulate --bogus 1").code == 2);
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("orbit --r 1").code == 2);
}

TEST_CASE("help exits cleanly") {
    const RunResult top = run_cli("--help");
    CHECK(top.code == 0);
    CHECK(top.out.find("simulate") != std::string::npos);
    CHECK(top.out.find("discrete") != std::string::npos);
    CHECK(run_cli("policy --help").code == 0);
}

TEST_CASE("numerical blowups exit with code 3") {
    const RunResult res = run_cli("simulate --r 1e300 --k 1 --x0 0.5 --t1 2 --dt 1");
    CHECK(res.code == 3);
    CHECK(res.out.find("numerical failure at t=0") != std::string::npos);
}

TEST_CASE("invalid model parameters exit with code 2") {
    const RunResult res = run_cli("simulate --r -1 --k 150 --x0 30 --t1 1 --dt 0.1");
    CHECK(res.code == 2);
    CHECK(res.out.find("error: r:") != std::string::npos);
}

TEST_CASE("stability emits a classification document") {
    const RunResult res = run_cli("stability --r 0.5 --k 0.8 --quota 0.05");
    REQUIRE(res.code == 0);
    CHECK(res.out.back() == '\n');
    const json j = json::parse(res.out);
    CHECK(j.at("case") == "two_equilibria");
    REQUIRE(j.at("equilibria").size() == 2);
    CHECK(j.at("equilibria")[0].at("verdict") == "unstable");
    CHECK(j.at("equilibria")[1].at("verdict") == "stable_with_region");
    CHECK(j.at("equilibria")[1].at("region_lower") ==
          j.at("equilibria")[0].at("value"));
    const RunResult again = run_cli("stability --r 0.5 --k 0.8 --quota 0.05");
    CHECK(again.out == res.out);

    const auto path = temp_dir() / "stability.json";
    const RunResult filed =
        run_cli("stability --r 0.5 --k 0.8 --quota 0.05 --report " + path.string());
    CHECK(filed.code == 0);
    CHECK(filed.out.empty());
    CHECK(slurp(path) == res.out);
}

TEST_CASE("policy reports the bang-singular run") {
    const std::string base =
        "policy --r 0.01 --k 0.05 --x0 0.04 --t1 500 --xb 0.001 --umax 0.0002 --dt 0.05";
    const RunResult res = run_cli(base);
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    CHECK(j.at("schedule").at("regime") == "above_singular_cap");
    CHECK(j.at("schedule").at("plan").size() == 2);
    REQUIRE(j.at("switch_times").size() == 1);
    CHECK(std::abs(j.at("switch_times")[0].get<double>() - 170.168) < 0.01);
    CHECK(j.at("terminal_state").get<double>() == 0.025);
    CHECK(j.at("terminal_feasible") == true);
    CHECK(j.at("extinct") == false);
    CHECK(j.at("t_extinction").is_null());
    CHECK(j.at("max_singular_deviation").get<double>() == 0.0);
    const double yield = j.at("yield").get<double>();
    CHECK(std::abs(yield - 0.0753) < 0.001);

    SUBCASE("trajectory file carries switch footers") {
        const auto path = temp_dir() / "policy.csv";
        const RunResult filed = run_cli(base + " --out " + path.string());
        CHECK(filed.code == 0);
        const std::string csv = slurp(path);
        CHECK(csv.rfind("t,x,u\n", 0) == 0);
        CHECK(csv.find("\n# switch t=") != std::string::npos);
    }
    SUBCASE("relaxing onto the arc harvests less") {
        const RunResult relaxed = run_cli(base + " --singular-from-start");
        REQUIRE(relaxed.code == 0);
        const json jr = json::parse(relaxed.out);
        CHECK(jr.at("schedule").at("plan").size() == 1);
        CHECK(jr.at("yield").get<double>() < yield);
    }
    SUBCASE("without the re-anchor a small deviation shows up") {
        const RunResult loose = run_cli(base + " --no-reanchor");
        REQUIRE(loose.code == 0);
        const json jl = json::parse(loose.out);
        const double dev = jl.at("max_singular_deviation").get<double>();
        CHECK(dev > 0.0);
        CHECK(dev < 1e-5);
    }
}

TEST_CASE("discrete orbit document and csv") {
    const RunResult res = run_cli("discrete --map streipert --r 2 --k 5 --x0 2 --n 5");
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    CHECK(j.at("map").at("kind") == "streipert");
    CHECK(j.at("orbit").at("orbit").size() == 2);
    CHECK(j.at("orbit").at("orbit")[1].get<double>() < 0.0);
    CHECK(j.at("orbit").at("violations")[0].at("reason") == "negative");
    CHECK(j.at("orbit").at("limit").is_null());

    const auto path = temp_dir() / "orbit.csv";
    const RunResult filed = run_cli(
        "discrete --map streipert --r 2 --k 5 --x0 2 --n 5 --out " + path.string());
    CHECK(filed.code == 0);
    CHECK(slurp(path).find(",VIOLATION\n") != std::string::npos);
}

TEST_CASE("discrete map selection") {
    const RunResult stepped =
        run_cli("discrete --map nsfd --step 0.5 --r 2 --k 5 --x0 2 --n 5");
    REQUIRE(stepped.code == 0);
    CHECK(json::parse(stepped.out).at("map").at("step") == 0.5);

    const RunResult plain = run_cli("discrete --map nsfd --r 2 --k 5 --x0 2 --n 5");
    REQUIRE(plain.code == 0);
    CHECK_FALSE(json::parse(plain.out).at("map").contains("step"));

    const RunResult bad =
        run_cli("discrete --map streipert --step 1 --r 2 --k 5 --x0 2 --n 5");
    CHECK(bad.code == 2);
    CHECK(bad.out.find("unit step") != std::string::npos);

    const RunResult unknown = run_cli("discrete --map verlet --r 2 --k 5 --x0 2 --n 5");
    CHECK(unknown.code == 2);
    CHECK(unknown.out.find("unknown map") != std::string::npos);
}

TEST_CASE("discrete --compare includes the deviation") {
    const RunResult res =
        run_cli("discrete --map nsfd --r 0.1 --k 150 --x0 30 --n 50 --compare");
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    REQUIRE(j.contains("consistency"));
    CHECK(j.at("consistency").at("max_deviation").is_number());
    CHECK(j.at("consistency").at("violations").empty());
}

TEST_CASE("discrete scans") {
    SUBCASE("clean scan with an explicit seed") {
        const std::string args =
            "discrete --map nsfd --scan --draws 2000 --n 50 --seed 7";
        const RunResult res = run_cli(args);
        REQUIRE(res.code == 0);
        const json j = json::parse(res.out);
        CHECK(j.at("seed") == 7);
        CHECK(j.at("n") == 50);
        CHECK(j.at("scan").at("orbits") == 2000);
        CHECK(j.at("scan").at("violations") == 0);
        CHECK(j.at("scan").at("witnesses").empty());
        CHECK(run_cli(args).out == res.out);
    }
    SUBCASE("seed falls back to the environment") {
        const RunResult res = run_cli("discrete --map nsfd --scan --draws 100 --n 20",
                                      "LOGLAB_SEED=123 ");
        REQUIRE(res.code == 0);
        CHECK(json::parse(res.out).at("seed") == 123);
    }
    SUBCASE("a violating scan lists capped witnesses") {
        const RunResult res = run_cli(
            "discrete --map euler --step 3 --scan --draws 500 --n 30 --seed 5");
        REQUIRE(res.code == 0);
        const json j = json::parse(res.out);
        CHECK(j.at("scan").at("violations").get<std::size_t>() > 0);
        const auto& wits = j.at("scan").at("witnesses");
        CHECK(wits.size() > 0);
        CHECK(wits.size() <= 10);
        CHECK(wits[0].contains("point_index"));
        CHECK(wits[0].contains("orbit_index"));
    }
}

TEST_CASE("config files") {
    const auto cfg = temp_dir() / "stability.jsonc";
    spit(cfg, R"({"r": 0.5, "k": 0.8, "quota": 0.05})");
    SUBCASE("config supplies the values") {
        const RunResult from_cfg = run_cli("stability --config " + cfg.string());
        const RunResult from_flags = run_cli("stability --r 0.5 --k 0.8 --quota 0.05");
        CHECK(from_cfg.code == 0);
        CHECK(from_cfg.out == from_flags.out);
    }
    SUBCASE("flags override the config") {
        const RunResult merged =
            run_cli("stability --config " + cfg.string() + " --quota 0.1");
        const RunResult direct = run_cli("stability --r 0.5 --k 0.8 --quota 0.1");
        CHECK(merged.code == 0);
        CHECK(merged.out == direct.out);
    }
    SUBCASE("unknown keys are rejected by name") {
        const auto bad = temp_dir() / "bad_key.json";
        spit(bad, R"({"r": 0.5, "quotaa": 0.05})");
        const RunResult res = run_cli("stability --config " + bad.string());
        CHECK(res.code == 2);
        CHECK(res.out.find("quotaa") != std::string::npos);
    }
    SUBCASE("wrong value types are rejected") {
        const auto bad = temp_dir() / "bad_type.json";
        spit(bad, R"({"r": "fast", "k": 0.8})");
        const RunResult res = run_cli("stability --config " + bad.string());
        CHECK(res.code == 2);
        CHECK(res.out.find("must be a number") != std::string::npos);
    }
    SUBCASE("malformed json is reported") {
        const auto bad = temp_dir() / "broken.json";
        spit(bad, "{\"r\": 0.5,");
        const RunResult res = run_cli("stability --config " + bad.string());
        CHECK(res.code == 2);
        CHECK(res.out.find("invalid JSON") != std::string::npos);
    }
    SUBCASE("missing config file") {
        const RunResult res =
            run_cli("stability --config " + (temp_dir() / "nope.json").string());
        CHECK(res.code == 2);
        CHECK(res.out.find("cannot open config file") != std::string::npos);
    }
    SUBCASE("boolean keys work from config") {
        const auto pol = temp_dir() / "policy.json";
        spit(pol, R"({"r": 0.01, "k": 0.05, "x0": 0.04, "t1": 500, "xb": 0.001,
                      "umax": 0.0002, "dt": 0.05, "singular-from-start": true})");
        const RunResult from_cfg = run_cli("policy --config " + pol.string());
        const RunResult from_flags = run_cli(
            "policy --r 0.01 --k 0.05 --x0 0.04 --t1 500 --xb 0.001 --umax 0.0002 "
            "--dt 0.05 --singular-from-start");
        CHECK(from_cfg.code == 0);
        CHECK(from_cfg.out == from_flags.out);
    }
}

TEST_CASE("unwritable output paths are reported") {
    const RunResult res = run_cli(
        "stability --r 0.5 --k 0.8 --report /nonexistent_path_zz/out.json");
    CHECK(res.code == 2);
    CHECK(res.out.find("cannot open output file") != std::string::npos);
}
