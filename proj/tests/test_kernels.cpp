#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "thetaforge/construct.hpp"

using namespace thetaforge;

// The parallel kernels must be bit-identical to their serial references
// regardless of thread count or schedule.

TEST_CASE("edge generation: parallel kernel equals the serial reference") {
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
        CAPTURE(q);
        Field f(q);
        for (std::uint32_t ell : {2u, 3u}) {
            if (ell == 3 && q > 3) continue;  // keep the serial reference fast
            for (std::uint64_t seed : {1ull, 99ull}) {
                auto sys = sample_system(ell, f, ell == 2 ? 6u : 4u, seed);
                auto par = edges_from_system_parallel(sys, f);
                auto ser = edges_from_system_serial(sys, f);
                REQUIRE(par.vertex_count() == ser.vertex_count());
                REQUIRE(par.edge_count() == ser.edge_count());
                for (Vertex v = 0; v < par.vertex_count(); ++v) {
                    REQUIRE(par.adj[v].size() == ser.adj[v].size());
                    for (std::size_t i = 0; i < par.adj[v].size(); ++i)
                        CHECK(par.adj[v][i].to == ser.adj[v][i].to);
                }
            }
        }
    }
}

TEST_CASE("bad pair scan: parallel equals serial") {
    Field f5(5);
    Rng seeds(42);
    for (int trial = 0; trial < 5; ++trial) {
        auto g = random_algebraic_graph(2, f5, 6, seeds.next());
        for (std::uint64_t threshold : {2ull, 5ull}) {
            BadPairOptions par, ser;
            par.parallel = true;
            ser.parallel = false;
            CHECK(find_bad_pairs(g, threshold, 2, par) == find_bad_pairs(g, threshold, 2, ser));
        }
    }
}
