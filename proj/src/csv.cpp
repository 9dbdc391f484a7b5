#include "loglab/csv.hpp"

#include <array>
#include <charconv>

namespace loglab {

std::string format_double(double v) {
    std::array<char, 32> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<std::string>& extra_footers) {
    out << "t,x,u\n";
    for (const Sample& s : traj.samples) {
        out << format_double(s.t) << ',' << format_double(s.x) << ',';
        if (s.u) {
            out << format_double(*s.u);
        }
        out << '\n';
    }
    for (const std::string& footer : extra_footers) {
        out << "# " << footer << '\n';
    }
    if (traj.termination == Termination::Extinction && traj.t_extinction) {
        out << "# extinction t=" << format_double(*traj.t_extinction) << '\n';
    }
}

void write_orbit_csv(std::ostream& out, const MapKind& kind, const OrbitReport& report) {
    const double step = map_time_step(kind);
    out << "t,x,flag\n";
    for (std::size_t i = 0; i < report.orbit.size(); ++i) {
        out << format_double(static_cast<double>(i) * step) << ','
            << format_double(report.orbit[i]) << ',';
        for (const Violation& v : report.violations) {
            if (v.index == i && v.reason == ViolationReason::Negative) {
                out << "VIOLATION";
            }
        }
        out << '\n';
    }
    for (const Violation& v : report.violations) {
        const double t = static_cast<double>(v.index) * step;
        if (v.reason == ViolationReason::Undefined) {
            out << "# singular denominator at t=" << format_double(t) << '\n';
        } else if (v.reason == ViolationReason::NonFinite) {
            out << "# non-finite value at t=" << format_double(t) << '\n';
        }
    }
}

} // namespace loglab
