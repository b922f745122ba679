#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "thetaforge/graph.hpp"
#include "thetaforge/theta.hpp"

namespace thetaforge {

using BigInt = boost::multiprecision::cpp_int;

// Exploration thresholds. Path counts are exact big integers; at desk
// scale the degree-spread factor makes several of the inequalities
// vacuous, which the certificate reports rather than hiding.
struct ExplorationConstants {
    std::uint32_t ell = 0;
    std::uint64_t t = 0;
    BigInt degree_spread;               // (20*ell)^(2*ell)
    std::vector<BigInt> regularity;     // regularity[m]: Catalan-weighted path threshold, m = 0..ell-1
    std::vector<BigInt> bad_set_cap;    // bad_set_cap[j], j = 1..ell-1 (index 0 unused as 0)
    std::vector<BigInt> branching_loss; // branching_loss[k], k = 1..ell (index 0 unused as 0)
};

ExplorationConstants compute_constants(std::uint32_t ell, std::uint64_t t);

BigInt catalan(std::uint32_t m);

// Layered exploration state over a bipartite host. Vertices carry a
// status: layer index, bad, or unexplored.
struct ExplorationState {
    const BipartiteGraph* host = nullptr;
    Vertex root = 0;
    std::vector<std::vector<Vertex>> layers;    // L_0 .. L_k
    std::vector<std::vector<Vertex>> bad_sets;  // B_1 .. B_{k-1}; bad_sets[j-1]
    std::vector<int> status;                    // layer index, kStatusBad, or kStatusUnexplored

    // path_counts[i] maps each vertex of layer i (by position) to its
    // nonzero linear-path counts into later layers
    std::vector<std::vector<std::unordered_map<Vertex, BigInt>>> path_counts;

    static constexpr int kStatusUnexplored = -1;
    static constexpr int kStatusBad = -2;

    int stage() const { return static_cast<int>(layers.size()) - 1; }
    const BigInt& count(int layer, std::size_t pos, Vertex target) const;
    BigInt count_from_root(Vertex target) const;
    BigInt count_from_root_to_set(const std::vector<Vertex>& set) const;
    std::vector<Vertex> children_of(Vertex v) const;   // neighbors one layer deeper
    std::vector<Vertex> parents_of(Vertex v) const;    // neighbors one layer shallower
};

ExplorationState init_exploration(const BipartiteGraph& g, Vertex root);

// Recomputes every linear-path count table by layer-to-layer dynamic
// programming. Layers are disjoint, so linear walks are automatically
// simple paths and the DP is exact.
void recompute_path_counts(ExplorationState& state);

struct BadSetLevel {
    int level = 0;                      // anchor layer index (the v_{i-1} layer)
    Vertex anchor = 0;                  // the witnessing vertex in that layer
    std::vector<Vertex> members;        // vertices of L_k assigned at this anchor
    BigInt anchor_path_mass;            // P(children(anchor), members)
    bool hypotheses_hold = false;       // embedding hypotheses for (anchor, A, members)
};

struct BadSetResult {
    std::vector<Vertex> all;            // the full violator set in L_k
    std::vector<BadSetLevel> levels;    // per-anchor decomposition, outermost level first
    BigInt root_path_mass;              // P(r, violators)
    BigInt certificate_bound;           // 2 k ell t (dmax)^{k-1}
    bool bound_holds = true;
};

// Violators of layer-pair regularity at the current top layer, processed
// outermost anchor layer first with earlier levels excluding
// later-assigned vertices. The certificate bound failing is evidence of a
// theta, not an error.
BadSetResult compute_bad_set(const ExplorationState& state, const ExplorationConstants& c,
                             std::uint64_t dmax);

struct PropertyCheck {
    std::string name;
    bool holds = true;
    bool vacuous = false;
    std::string detail;
};

struct StageReport {
    int stage = 0;
    std::vector<std::size_t> layer_sizes;
    std::vector<std::size_t> bad_set_sizes;
    BigInt root_paths_to_top;  // P(r, L_k)
    std::size_t violators_removed = 0;
    std::size_t heavy_removed = 0;  // vertices with too many bad neighbors
    bool bad_set_bound_holds = true;
    std::vector<PropertyCheck> properties;
};

// One stage advance: computes the violator set and the heavy-neighbor
// set, shrinks the top layer, opens the next one, refreshes the
// path-count tables, and checks every maintained property. Property
// failures are reported, not thrown.
StageReport explore_step(ExplorationState& state, const ExplorationConstants& c, std::uint64_t dmin,
                         std::uint64_t dmax);

struct EmbedFailure {
    std::string part;  // "hypotheses", "trim", "disjoint-paths", "min-degree", "tree", "extend"
    std::string detail;
};

struct EmbedResult {
    std::optional<ThetaWitness> witness;
    std::optional<EmbedFailure> failure;
    bool hypotheses_held = false;
};

// Attempts to extract a theta witness anchored at `anchor` from the path
// families between A (children of the anchor) and B (a subset of the top
// layer): trims weakly-connected members, picks near-disjoint path
// bundles, embeds a spider tree in the contact graph, and joins.
EmbedResult embed_theta(const ExplorationState& state, const ExplorationConstants& c, Vertex anchor,
                        const std::vector<Vertex>& A, const std::vector<Vertex>& B,
                        std::uint64_t dmax);

struct DegreeRegularization {
    BipartiteGraph graph;
    std::vector<Vertex> original_ids;  // per output vertex
    std::uint64_t min_degree = 0;
    std::uint64_t max_degree = 0;
    bool precondition_met = true;  // edge-count precondition of the regularization step
    std::string note;
};

// Greedy bipartization (keeps at least half the edges), iterative
// min-degree peeling (keeps a subgraph of min degree at least half the
// average), then a max-degree trimming loop. Vertices are given as an
// undirected edge list.
DegreeRegularization regularize_degrees(Vertex n, const std::vector<VertexPair>& edges,
                                        std::uint32_t ell, double c);

struct Certificate {
    std::uint32_t ell = 0;
    std::uint64_t t = 0;
    Vertex root = 0;
    std::uint64_t dmin = 0, dmax = 0;
    std::vector<StageReport> stages;
    std::optional<ThetaWitness> witness;
    std::vector<EmbedFailure> embed_failures;
    BigInt final_root_paths;      // P(r, L_ell)
    BigInt final_upper;           // |L_ell| * regularity[ell-1]
    BigInt final_lower;           // dmin^{ell-1} (dmin - branching_loss[ell]), 0 when vacuous
    bool final_lower_vacuous = true;
    bool completed = false;
    std::string note;
    std::string to_json() const;
};

enum class RootPolicy { MaxDegree, Explicit };

// Runs ell exploration stages on a bipartite host with certified degree
// bounds, recording layer sizes, path totals, property checks, and the
// final inequality; attempts an embedding whenever a stage check supplies
// a candidate obstruction.
Certificate run_certifier(const BipartiteGraph& g, std::uint32_t ell, std::uint64_t t,
                          RootPolicy policy = RootPolicy::MaxDegree, Vertex explicit_root = 0);

}  // namespace thetaforge
