#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "loglab/timescale.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double run_ms(const loglab::MapKind& kind, const std::vector<loglab::ScanPoint>& pts,
              std::size_t iters, loglab::Execution exec, loglab::ScanSummary& out) {
    const auto start = Clock::now();
    out = loglab::positivity_scan(kind, pts, iters, exec);
    const auto stop = Clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

} // namespace

int main(int argc, char** argv) {
    std::size_t points = 200000;
    std::size_t iters = 200;
    std::string map_name = "nsfd";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--quick") {
            points = 20000;
            iters = 50;
        } else if (arg == "--points" && i + 1 < argc) {
            points = std::stoull(argv[++i]);
        } else if (arg == "--iters" && i + 1 < argc) {
            iters = std::stoull(argv[++i]);
        } else if (arg == "--map" && i + 1 < argc) {
            map_name = argv[++i];
        } else {
            std::fprintf(stderr,
                         "usage: %s [--quick] [--points N] [--iters N] "
                         "[--map nsfd|streipert|euler]\n",
                         argv[0]);
            return 2;
        }
    }

    loglab::MapKind kind = loglab::NonstandardZ{};
    if (map_name == "streipert") {
        kind = loglab::StreipertZ{};
    } else if (map_name == "euler") {
        kind = loglab::ExplicitEulerZ(1.0);
    } else if (map_name != "nsfd") {
        std::fprintf(stderr, "unknown map '%s'\n", map_name.c_str());
        return 2;
    }

    const auto pts = loglab::random_scan_points(loglab::default_scan_seed(), points,
                                               10.0, 10.0, 3.0);

    // One throwaway parallel pass to spin up the thread pool before timing.
    (void)loglab::positivity_scan(kind, pts, 1, loglab::Execution::Parallel);

    loglab::ScanSummary serial, parallel;
    const double t_serial = run_ms(kind, pts, iters, loglab::Execution::Serial, serial);
    const double t_parallel =
        run_ms(kind, pts, iters, loglab::Execution::Parallel, parallel);

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif

    std::printf("map=%s points=%zu iters=%zu threads=%d\n", map_name.c_str(), points,
                iters, threads);
    std::printf("serial:   %9.2f ms  violations=%zu\n", t_serial,
                serial.violation_count);
    std::printf("parallel: %9.2f ms  violations=%zu  speedup=%.2fx\n", t_parallel,
                parallel.violation_count,
                t_parallel > 0.0 ? t_serial / t_parallel : 0.0);

    if (!(serial == parallel)) {
        std::fprintf(stderr, "mismatch between serial and parallel summaries\n");
        return 1;
    }
    return 0;
}
