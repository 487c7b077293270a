// Compares the OpenMP path kernels against their serial reference
// implementations: identical tallies, wall-clock speedup.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "levyhit/mc.hpp"

using namespace levyhit;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<McReport()>& fn, McReport& out) {
    const auto t0 = clock_type::now();
    out = fn();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms,
            bool identical) {
    std::printf("%-24s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   "
                "tallies %s\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "identical" : "DIFFER");
}

}  // namespace

int main() {
    {
        PointSet set({0.0, 1.0, 3.0});
        PathConfig cfg;
        cfg.paths = 20000000;
        cfg.seed = 4242;
        McReport ser, par;
        const double ts =
            time_ms([&] { return simulate_bm_hitting_serial(2.0, set, cfg); }, ser);
        const double tp = time_ms(
            [&] { return simulate_bm_hitting(2.0, set, cfg, 0.0, 1.0, true); },
            par);
        report("bm exact bernoulli", ts, tp, ser.counts == par.counts);
    }
    {
        auto m = ProcessModel::stable_beta(1.5, 0.0);
        PointSet set({0.0, 1.0});
        PathConfig cfg;
        cfg.paths = 20000;
        cfg.eps = 5e-3;
        cfg.step = 2e-3;
        cfg.horizon = 20.0;
        cfg.seed = 4242;
        McReport ser, par;
        const double ts = time_ms(
            [&] { return simulate_stable_eps_hitting_serial(m, 0.25, set, cfg); },
            ser);
        const double tp = time_ms(
            [&] { return simulate_stable_eps_hitting(m, 0.25, set, cfg, true); },
            par);
        report("stable eps walk", ts, tp, ser.counts == par.counts);
    }
    return 0;
}
