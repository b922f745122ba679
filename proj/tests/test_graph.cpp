#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include "thetaforge/graph.hpp"

using namespace thetaforge;

namespace {

BipartiteGraph complete_bipartite(Vertex a, Vertex b) {
    BipartiteGraph g(a, b);
    for (Vertex u = 0; u < a; ++u)
        for (Vertex v = 0; v < b; ++v) g.add_edge(u, a + v);
    return g;
}

// C_{2n}: alternating left/right vertices 0..2n-1 around the cycle; left
// ids are the even positions
BipartiteGraph even_cycle(int n2) {
    const int n = n2 / 2;
    BipartiteGraph g(n, n);
    for (int i = 0; i < n2; ++i) {
        const int j = (i + 1) % n2;
        const Vertex u = i / 2 + (i % 2 ? n : 0);
        const Vertex v = j / 2 + (j % 2 ? n : 0);
        g.add_edge(std::min(u, v), std::max(u, v));
    }
    return g;
}

// walk-matrix path oracle: count simple paths by DFS over an adjacency
// matrix, independent implementation
std::uint64_t matrix_path_oracle(const BipartiteGraph& g, Vertex x, Vertex y, int max_len) {
    const Vertex n = g.vertex_count();
    std::vector<std::vector<std::uint64_t>> w(n, std::vector<std::uint64_t>(n, 0));
    for (Vertex u = 0; u < n; ++u)
        for (const Edge& e : g.adj[u]) w[u][e.to] = e.mult;
    std::uint64_t total = 0;
    std::vector<char> used(n, 0);
    used[x] = 1;
    std::function<void(Vertex, int, std::uint64_t)> rec = [&](Vertex v, int len, std::uint64_t mult) {
        if (v == y && len > 0) {
            total += mult;
            return;  // simple paths cannot continue past y and return
        }
        if (len == max_len) return;
        for (Vertex nxt = 0; nxt < n; ++nxt) {
            if (w[v][nxt] == 0 || used[nxt]) continue;
            used[nxt] = 1;
            rec(nxt, len + 1, mult * w[v][nxt]);
            used[nxt] = 0;
        }
    };
    rec(x, 0, 1);
    return total;
}

BipartiteGraph random_graph(Rng& rng, Vertex a, Vertex b, int percent) {
    BipartiteGraph g(a, b);
    for (Vertex u = 0; u < a; ++u)
        for (Vertex v = 0; v < b; ++v)
            if (rng.below(100) < static_cast<std::uint64_t>(percent)) g.add_edge(u, a + v);
    return g;
}

}  // namespace

TEST_CASE("path counting on canonical hosts") {
    auto k33 = complete_bipartite(3, 3);
    CHECK(count_paths_upto(k33, 0, 3, 3) == 5);  // one edge + four length-3 paths
    CHECK(count_paths_upto(k33, 0, 1, 1) == 0);  // same side, length-1 parity
    auto c6 = even_cycle(6);
    // antipodal pair: positions 0 and 3 are vertices 0 and 3+1
    CHECK(count_paths_upto(c6, 0, 4, 3) == 2);
    CHECK_THROWS(count_paths_upto(k33, 0, 3, 0));
}

TEST_CASE("path counts match the independent matrix oracle on random hosts") {
    Rng rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_graph(rng, 4 + rng.below(4), 4 + rng.below(4), 40);
        const int max_len = 2 + static_cast<int>(rng.below(3));
        for (Vertex x = 0; x < g.vertex_count(); ++x) {
            const auto counts = path_counts_from(g, x, max_len);
            for (Vertex y = 0; y < g.vertex_count(); ++y) {
                if (x == y) continue;
                CHECK(counts[y] == matrix_path_oracle(g, x, y, max_len));
            }
        }
    }
}

TEST_CASE("bipartite parity of enumerated paths") {
    Rng rng(7);
    auto g = random_graph(rng, 5, 5, 50);
    for (Vertex x = 0; x < g.vertex_count(); ++x)
        for (Vertex y = 0; y < g.vertex_count(); ++y) {
            if (x == y) continue;
            const auto lst = enumerate_paths_upto(g, x, y, 4);
            for (const auto& pth : lst.paths) {
                CHECK(is_path(g, pth));
                const bool same = g.same_side(x, y);
                CHECK((pth.size() - 1) % 2 == (same ? 0 : 1));
            }
        }
}

TEST_CASE("bad pair detection") {
    auto k2t = complete_bipartite(2, 5);
    auto bad = find_bad_pairs(k2t, 5, 2);
    CHECK(std::find(bad.begin(), bad.end(), VertexPair{0, 1}) != bad.end());

    // threshold 1 marks at least every adjacent pair
    auto one = find_bad_pairs(k2t, 1, 2);
    for (Vertex u = 0; u < 2; ++u)
        for (Vertex v = 2; v < 7; ++v)
            CHECK(std::find(one.begin(), one.end(), VertexPair{u, v}) != one.end());

    // cross-side restriction drops the same-side pair
    BadPairOptions opts;
    opts.cross_side_only = true;
    auto cross = find_bad_pairs(k2t, 5, 2, opts);
    CHECK(std::find(cross.begin(), cross.end(), VertexPair{0, 1}) == cross.end());

    // serial and parallel scans agree
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = random_graph(rng, 6, 6, 50);
        BadPairOptions ser;
        ser.parallel = false;
        CHECK(find_bad_pairs(g, 3, 3) == find_bad_pairs(g, 3, 3, ser));
    }
}

TEST_CASE("bad pair removal deletes both endpoints") {
    auto k33 = complete_bipartite(3, 3);
    auto unchanged = remove_bad_pairs(k33, {});
    CHECK(unchanged.graph.edge_count() == 9);
    CHECK(unchanged.vertices_removed == 0);

    auto removed = remove_bad_pairs(k33, {{0, 3}});
    CHECK(removed.vertices_removed == 2);
    CHECK(removed.graph.vertex_count() == 4);
    // brute-force recount: edges not touching 0 or 3
    std::uint64_t expect = 0;
    for (Vertex u = 0; u < 3; ++u)
        for (Vertex v = 3; v < 6; ++v)
            if (u != 0 && v != 3) ++expect;
    CHECK(removed.graph.edge_count() == expect);
    CHECK(removed.edges_removed == 9 - expect);

    // overlapping pairs: idempotent vertex deletion
    auto overlap = remove_bad_pairs(k33, {{0, 3}, {0, 4}});
    CHECK(overlap.vertices_removed == 3);
    CHECK(overlap.graph.vertex_count() == 3);
}

TEST_CASE("blowup identity and supervertex structure") {
    BipartiteGraph single(1, 1);
    single.add_edge(0, 1);
    auto k33 = blowup(single, 3);
    CHECK(k33.vertex_count() == 6);
    CHECK(k33.edge_count() == 9);

    auto c6 = even_cycle(6);
    auto doubled = blowup(c6, 2);
    CHECK(doubled.vertex_count() == 12);
    CHECK(doubled.edge_count() == 24);

    auto identity = blowup(c6, 1);
    CHECK(identity.edge_count() == c6.edge_count());
    for (Vertex v = 0; v < identity.vertex_count(); ++v) CHECK(identity.supervertex[v] == v);

    // quotient check: every blowup edge projects to an edge of c6, and each
    // superedge is a full block
    for (Vertex v = 0; v < doubled.vertex_count(); ++v)
        for (const Edge& e : doubled.adj[v])
            CHECK(c6.has_edge(doubled.supervertex[v], doubled.supervertex[e.to]));
    CHECK_THROWS(blowup(c6, 1000, 100));
}

TEST_CASE("blowup of a random graph has m^2 e edges") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = random_graph(rng, 3 + rng.below(3), 3 + rng.below(3), 50);
        const int m = 1 + static_cast<int>(rng.below(3));
        auto big = blowup(g, m);
        CHECK(big.edge_count() == static_cast<std::uint64_t>(m) * m * g.edge_count());
    }
}

TEST_CASE("union multigraph and simplify") {
    auto k33 = complete_bipartite(3, 3);
    auto same = union_multigraph({k33});
    CHECK(same.edge_count() == 9);
    CHECK(same.edge_count_with_multiplicity() == 9);

    auto twice = union_multigraph({k33, k33});
    CHECK(twice.edge_count() == 9);
    CHECK(twice.edge_count_with_multiplicity() == 18);
    auto simp = simplify(twice);
    CHECK(simp.excess_removed == 9);
    CHECK(simp.graph.edge_count() == 9);

    // random overlap matches direct edge-set intersection
    Rng rng(13);
    auto g1 = random_graph(rng, 5, 5, 40), g2 = random_graph(rng, 5, 5, 40);
    auto u = union_multigraph({g1, g2});
    std::uint64_t overlap = 0;
    for (Vertex v = 0; v < 5; ++v)
        for (const Edge& e : g1.adj[v]) overlap += g2.has_edge(v, e.to);
    CHECK(simplify(u).excess_removed == overlap);
    // tags record constituents
    for (Vertex v = 0; v < u.vertex_count(); ++v)
        for (const Edge& e : u.adj[v]) {
            CHECK(((e.tags & 1) != 0) == g1.has_edge(v, e.to));
            CHECK(((e.tags & 2) != 0) == g2.has_edge(v, e.to));
        }

    BipartiteGraph mismatched(4, 4);
    CHECK_THROWS(union_multigraph({k33, mismatched}));
}

TEST_CASE("multigraph path counts weight multiplicities") {
    auto k22 = complete_bipartite(2, 2);
    auto doubled = union_multigraph({k22, k22});
    // x=0,y=2: direct edge (mult 2) + path 0-3-1-2 with mult 2^3
    CHECK(count_paths_upto(doubled, 0, 2, 3) == 2 + 8);
    CHECK(matrix_path_oracle(doubled, 0, 2, 3) == 10);
}

TEST_CASE("projection of blowup paths") {
    // path graph P4 as bipartite: 0-2-1-3 (left {0,1}, right {2,3})
    BipartiteGraph p4(2, 2);
    p4.add_edge(0, 2);
    p4.add_edge(1, 2);
    p4.add_edge(1, 3);
    auto blown = blowup(p4, 2);
    // vertices v*2+copy: 0,1 -> super 0; path through distinct supervertices
    auto img = [&](Vertex super, int copy) { return super * 2 + copy; };
    std::vector<Vertex> clean = {img(0, 0), img(2, 0), img(1, 0), img(3, 0)};
    auto proj1 = project_to_supergraph(blown, clean);
    CHECK(proj1.walk == std::vector<Vertex>{0, 2, 1, 3});
    CHECK(proj1.reduced_path == proj1.walk);

    // revisit supervertex 2 via both copies: 0a-2a-1a-2b-1b... build a valid
    // blowup path that repeats supervertices 2 and 1
    std::vector<Vertex> repeat = {img(0, 0), img(2, 0), img(1, 0), img(2, 1), img(1, 1), img(3, 0)};
    auto proj2 = project_to_supergraph(blown, repeat);
    CHECK(proj2.walk.size() == 6);
    CHECK(proj2.reduced_path.size() < proj2.walk.size());
    CHECK(proj2.reduced_path.front() == 0);
    CHECK(proj2.reduced_path.back() == 3);
    // parity preserved mod 2
    CHECK((proj2.reduced_path.size() - proj2.walk.size()) % 2 == 0);

    std::vector<Vertex> notpath = {img(0, 0), img(3, 0)};
    CHECK_THROWS(project_to_supergraph(blown, notpath));
}

TEST_CASE("edge list round trip with provenance header") {
    auto g = complete_bipartite(3, 4);
    g.meta_ell = 2;
    g.meta_q = 3;
    g.meta_seed = 42;
    std::ostringstream os;
    write_edgelist(os, g);
    std::istringstream is(os.str());
    auto back = read_edgelist(is);
    CHECK(back.left_count == 3);
    CHECK(back.right_count == 4);
    CHECK(back.edge_count() == 12);
    CHECK(back.meta_ell == 2);
    CHECK(back.meta_q == 3);
    CHECK(back.meta_seed == 42);
    for (Vertex u = 0; u < 3; ++u)
        for (Vertex v = 3; v < 7; ++v) CHECK(back.has_edge(u, v));
}

TEST_CASE("graph report JSON mentions the basics") {
    auto g = complete_bipartite(2, 2);
    const std::string rep = graph_report_json(g);
    CHECK(rep.find("\"edges\"") != std::string::npos);
    CHECK(rep.find("\"left\"") != std::string::npos);
}
