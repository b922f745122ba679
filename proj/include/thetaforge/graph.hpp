#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thetaforge/field.hpp"

namespace thetaforge {

using Vertex = int;
using VertexPair = std::pair<Vertex, Vertex>;

struct Edge {
    Vertex to = 0;
    std::uint32_t mult = 1;   // edge multiplicity (>= 1)
    std::uint32_t tags = 0;   // bitmask of constituent graphs in a union
};

// Bipartite (multi)graph. Vertices are dense integer ids: left side
// occupies [0, left_count), right side [left_count, left_count +
// right_count). Adjacency is symmetric; neighbor lists are kept sorted.
struct BipartiteGraph {
    Vertex left_count = 0;
    Vertex right_count = 0;
    std::vector<std::vector<Edge>> adj;

    // optional provenance
    std::vector<std::vector<FieldElement>> labels;  // F_q^ell coordinates per vertex
    std::vector<Vertex> supervertex;                // blowup quotient map, empty if none
    std::uint32_t meta_ell = 0;
    std::uint32_t meta_q = 0;
    std::uint64_t meta_seed = 0;
    std::string provenance;

    BipartiteGraph() = default;
    BipartiteGraph(Vertex left, Vertex right)
        : left_count(left), right_count(right), adj(static_cast<std::size_t>(left) + right) {}

    Vertex vertex_count() const { return left_count + right_count; }
    bool on_left(Vertex v) const { return v < left_count; }
    bool same_side(Vertex a, Vertex b) const { return on_left(a) == on_left(b); }

    void add_edge(Vertex u, Vertex v, std::uint32_t mult = 1, std::uint32_t tags = 0);
    const Edge* find_edge(Vertex u, Vertex v) const;
    std::uint32_t multiplicity(Vertex u, Vertex v) const;
    bool has_edge(Vertex u, Vertex v) const { return multiplicity(u, v) > 0; }

    // distinct edges / total multiplicity mass
    std::uint64_t edge_count() const;
    std::uint64_t edge_count_with_multiplicity() const;
};

struct PathList {
    Vertex x = 0, y = 0;
    std::vector<std::vector<Vertex>> paths;  // each starts at x, ends at y
};

// Number of distinct simple x-y paths of length <= max_len, each weighted
// by the product of its edge multiplicities.
std::uint64_t count_paths_upto(const BipartiteGraph& g, Vertex x, Vertex y, int max_len);

// Multiplicity-weighted counts of simple paths of length <= max_len from
// x to every other vertex; one depth-capped DFS.
std::vector<std::uint64_t> path_counts_from(const BipartiteGraph& g, Vertex x, int max_len);

PathList enumerate_paths_upto(const BipartiteGraph& g, Vertex x, Vertex y, int max_len);

struct BadPairOptions {
    bool cross_side_only = false;   // restrict to pairs in opposite parts
    bool parallel = true;           // OpenMP over source vertices
    std::size_t sample_pairs = 0;   // 0 = exhaustive scan
    std::uint64_t sample_seed = 0;
};

// Pairs {x, y} (x < y) joined by at least `threshold` simple paths of
// length <= max_len.
std::vector<VertexPair> find_bad_pairs(const BipartiteGraph& g, std::uint64_t threshold, int max_len,
                                       const BadPairOptions& opts = {});

struct RemovalResult {
    BipartiteGraph graph;
    std::vector<Vertex> old_to_new;  // -1 for deleted vertices
    std::uint64_t edges_removed = 0;
    std::size_t vertices_removed = 0;
};

// Deletes both endpoint vertices of every listed pair, with incident edges.
RemovalResult remove_bad_pairs(const BipartiteGraph& g, const std::vector<VertexPair>& pairs);

// Replace each vertex by an independent set of size m and each edge by a
// complete bipartite block; populates the supervertex map.
BipartiteGraph blowup(const BipartiteGraph& g, int m, std::uint64_t vertex_cap = 2'000'000);

// Multiplicity = number of constituent graphs containing each edge; tag
// bit i marks membership in graphs[i] (requires at most 32 constituents).
BipartiteGraph union_multigraph(const std::vector<BipartiteGraph>& graphs);

struct SimplifyResult {
    BipartiteGraph graph;
    std::uint64_t excess_removed = 0;  // multiplicity mass above 1 per edge
};

SimplifyResult simplify(const BipartiteGraph& g);

struct ProjectedPath {
    std::vector<Vertex> walk;          // supervertex image of the input path
    std::vector<Vertex> reduced_path;  // walk with cycles excised
};

// Projects a path in a blowup to its quotient walk and the simple path
// obtained by excising cycles.
ProjectedPath project_to_supergraph(const BipartiteGraph& blown, const std::vector<Vertex>& path);

bool is_path(const BipartiteGraph& g, const std::vector<Vertex>& seq);

// Edge-list text format with a provenance header.
void write_edgelist(std::ostream& out, const BipartiteGraph& g);
BipartiteGraph read_edgelist(std::istream& in);

std::string graph_report_json(const BipartiteGraph& g);

}  // namespace thetaforge
