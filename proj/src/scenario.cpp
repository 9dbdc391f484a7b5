#include "loglab/scenario.hpp"

#include <fstream>

#include <json.hpp>

#include "loglab/errors.hpp"

namespace loglab {

namespace {

using nlohmann::json;

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) {
        throw ValidationError(key, "configuration key '" + key + "' must be a number");
    }
    return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& key) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ValidationError(key, "configuration key '" + key +
                                       "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::string as_text(const json& v, const std::string& key) {
    if (!v.is_string()) {
        throw ValidationError(key, "configuration key '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

bool as_flag(const json& v, const std::string& key) {
    if (!v.is_boolean()) {
        throw ValidationError(key, "configuration key '" + key + "' must be a boolean");
    }
    return v.get<bool>();
}

} // namespace

Scenario load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("config", "cannot open config file '" + path + "'");
    }
    json doc = json::parse(in); // parse errors propagate as json exceptions
    if (!doc.is_object()) {
        throw ValidationError("config", "config must be a flat JSON object");
    }

    Scenario sc;
    for (const auto& [key, value] : doc.items()) {
        if (key == "r") sc.r = as_number(value, key);
        else if (key == "k") sc.k = as_number(value, key);
        else if (key == "x0") sc.x0 = as_number(value, key);
        else if (key == "effort") sc.effort = as_number(value, key);
        else if (key == "quota") sc.quota = as_number(value, key);
        else if (key == "umax") sc.umax = as_number(value, key);
        else if (key == "xb") sc.xb = as_number(value, key);
        else if (key == "t0") sc.t0 = as_number(value, key);
        else if (key == "t1") sc.t1 = as_number(value, key);
        else if (key == "dt") sc.dt = as_number(value, key);
        else if (key == "step") sc.step = as_number(value, key);
        else if (key == "rmax") sc.rmax = as_number(value, key);
        else if (key == "kmax") sc.kmax = as_number(value, key);
        else if (key == "x0frac") sc.x0frac = as_number(value, key);
        else if (key == "n") sc.n = as_count(value, key);
        else if (key == "draws") sc.draws = as_count(value, key);
        else if (key == "seed") sc.seed = as_count(value, key);
        else if (key == "map") sc.map_name = as_text(value, key);
        else if (key == "out") sc.out_path = as_text(value, key);
        else if (key == "report") sc.report_path = as_text(value, key);
        else if (key == "scan") sc.scan = as_flag(value, key);
        else if (key == "compare") sc.compare = as_flag(value, key);
        else if (key == "singular-from-start") sc.singular_from_start = as_flag(value, key);
        else if (key == "no-reanchor") sc.no_reanchor = as_flag(value, key);
        else throw ValidationError(key, "unknown configuration key '" + key + "'");
    }
    return sc;
}

Scenario merge_scenarios(Scenario base, const Scenario& overrides) {
    const auto take = [](auto& dst, const auto& src) {
        if (src.has_value()) dst = src;
    };
    take(base.r, overrides.r);
    take(base.k, overrides.k);
    take(base.x0, overrides.x0);
    take(base.effort, overrides.effort);
    take(base.quota, overrides.quota);
    take(base.umax, overrides.umax);
    take(base.xb, overrides.xb);
    take(base.t0, overrides.t0);
    take(base.t1, overrides.t1);
    take(base.dt, overrides.dt);
    take(base.step, overrides.step);
    take(base.rmax, overrides.rmax);
    take(base.kmax, overrides.kmax);
    take(base.x0frac, overrides.x0frac);
    take(base.n, overrides.n);
    take(base.draws, overrides.draws);
    take(base.seed, overrides.seed);
    take(base.map_name, overrides.map_name);
    take(base.out_path, overrides.out_path);
    take(base.report_path, overrides.report_path);
    base.scan = base.scan || overrides.scan;
    base.compare = base.compare || overrides.compare;
    base.singular_from_start = base.singular_from_start || overrides.singular_from_start;
    base.no_reanchor = base.no_reanchor || overrides.no_reanchor;
    return base;
}

} // namespace loglab
