#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace loglab {

// Raw inputs for one CLI invocation, before command-specific validation.
// Every knob is optional here; each command demands the fields it needs.
// Values come from a flat JSON config file, command-line flags, or both,
// with flags taking precedence.
struct Scenario {
    std::optional<double> r;
    std::optional<double> k;
    std::optional<double> x0;
    std::optional<double> effort;
    std::optional<double> quota;
    std::optional<double> umax;
    std::optional<double> xb;
    std::optional<double> t0;
    std::optional<double> t1;
    std::optional<double> dt;
    std::optional<double> step;
    std::optional<double> rmax;
    std::optional<double> kmax;
    std::optional<double> x0frac;
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> draws;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> map_name;
    std::optional<std::string> out_path;
    std::optional<std::string> report_path;
    bool scan = false;
    bool compare = false;
    bool singular_from_start = false;
    bool no_reanchor = false;
};

// Reads a flat JSON object whose keys match the long flag names. Unknown
// keys and wrong value types are rejected by name.
Scenario load_config(const std::string& path);

// Field-wise overlay: any value present in `overrides` wins; boolean
// switches combine with OR (a flag can enable but not disable a config
// setting).
Scenario merge_scenarios(Scenario base, const Scenario& overrides);

} // namespace loglab
