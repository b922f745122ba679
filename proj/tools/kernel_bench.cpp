// Wall-clock comparison of the parallel kernels against their serial
// reference implementations: edge generation and the bad-pair scan.

#include <chrono>
#include <cstdio>

#include "thetaforge/construct.hpp"

using namespace thetaforge;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& fn) {
    const auto start = Clock::now();
    fn();
    const auto stop = Clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

int main() {
    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial ms", "parallel", "speedup");

    struct Config {
        std::uint32_t ell, q, d;
    };
    for (Config cfg : {Config{2, 7, 8}, Config{2, 11, 8}, Config{3, 3, 18}}) {
        Field field(cfg.q);
        auto sys = sample_system(cfg.ell, field, cfg.d, 1);
        BipartiteGraph gp, gs;
        const double tp = time_ms([&] { gp = edges_from_system_parallel(sys, field); });
        const double ts = time_ms([&] { gs = edges_from_system_serial(sys, field); });
        if (gp.edge_count() != gs.edge_count()) {
            std::fprintf(stderr, "kernel mismatch at ell=%u q=%u\n", cfg.ell, cfg.q);
            return 1;
        }
        char name[64];
        std::snprintf(name, sizeof name, "edges ell=%u q=%u", cfg.ell, cfg.q);
        std::printf("%-28s %10.1f %10.1f %7.1fx\n", name, ts, tp, ts / tp);
    }

    for (Config cfg : {Config{2, 11, 8}, Config{3, 3, 12}}) {
        Field field(cfg.q);
        auto g = random_algebraic_graph(cfg.ell, field, cfg.d, 1);
        BadPairOptions par, ser;
        par.parallel = true;
        ser.parallel = false;
        std::vector<VertexPair> bp, bs;
        const double tp = time_ms([&] { bp = find_bad_pairs(g, 4, cfg.ell, par); });
        const double ts = time_ms([&] { bs = find_bad_pairs(g, 4, cfg.ell, ser); });
        if (bp != bs) {
            std::fprintf(stderr, "bad-pair mismatch at ell=%u q=%u\n", cfg.ell, cfg.q);
            return 1;
        }
        char name[64];
        std::snprintf(name, sizeof name, "bad pairs ell=%u q=%u", cfg.ell, cfg.q);
        std::printf("%-28s %10.1f %10.1f %7.1fx\n", name, ts, tp, ts / tp);
    }
    return 0;
}
