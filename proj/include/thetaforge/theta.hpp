#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thetaforge/graph.hpp"

namespace thetaforge {

// Two endpoints joined by t internally vertex-disjoint paths of exactly
// ell edges each.
struct ThetaWitness {
    Vertex x = 0, y = 0;
    std::vector<std::vector<Vertex>> paths;
};

// All simple x-y paths of length exactly ell, plus the conflict relation:
// candidate pairs sharing an internal vertex.
struct PackingInstance {
    Vertex x = 0, y = 0;
    std::vector<std::vector<Vertex>> paths;
    std::vector<std::vector<std::uint64_t>> conflict;  // bitset rows, paths.size() bits
    bool conflicts(std::size_t i, std::size_t j) const {
        return (conflict[i][j >> 6] >> (j & 63)) & 1;
    }
};

struct ThetaCaps {
    std::size_t max_candidates = 100'000;  // abort enumeration past this
    std::uint64_t node_budget = 50'000'000;  // branch-and-bound search nodes
};

PackingInstance enumerate_exact_paths(const BipartiteGraph& g, Vertex x, Vertex y, int ell,
                                      std::size_t max_candidates = 100'000);

struct PackingResult {
    int size = 0;
    std::vector<std::size_t> chosen;  // indices into instance.paths
    bool exact = true;                // false when the node budget ran out
};

// Maximum set of pairwise non-conflicting candidates: branch-and-bound
// seeded with a greedy solution and pruned by a greedy clique-cover bound.
PackingResult max_disjoint_packing(const PackingInstance& inst,
                                   std::uint64_t node_budget = 50'000'000);

struct PairMaximum {
    Vertex x = 0, y = 0;
    int packing = 0;
    bool exact = true;
};

struct ThetaResult {
    std::optional<ThetaWitness> witness;
    bool exact = true;  // false iff some pair aborted before a witness was found
    std::vector<PairMaximum> per_pair;  // freeness certificate when no witness
    std::string note;
};

// Scans all parity-admissible pairs, densest candidate sets first; returns
// the first witness with packing >= t, else the per-pair maxima.
ThetaResult contains_theta(const BipartiteGraph& g, int ell, int t, const ThetaCaps& caps = {});

// Exhaustive subset enumeration over candidate paths. Validation-only:
// requires <= 20 candidates per pair and <= 12 vertices.
ThetaResult brute_force_theta_oracle(const BipartiteGraph& g, int ell, int t);

// Independent witness check: adjacency, exact lengths, internal disjointness.
bool validate_witness(const BipartiteGraph& g, const ThetaWitness& w, int ell, int t,
                      std::string* why = nullptr);

}  // namespace thetaforge
