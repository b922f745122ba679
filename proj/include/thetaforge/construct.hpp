#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thetaforge/graph.hpp"
#include "thetaforge/poly.hpp"

namespace thetaforge {

inline std::uint32_t default_d_poly(std::uint32_t ell) { return 2 * ell * ell; }

struct GenerationCaps {
    std::size_t coeff_cap = kDefaultCoeffCap;
    std::uint64_t vertex_cap = 100'000;  // per construction, keeps exact verification feasible
};

// Parts U, V are copies of F_q^ell; uv is an edge iff all ell-1 random
// polynomials vanish at (u, v). Coordinates are stored as vertex labels.
BipartiteGraph random_algebraic_graph(std::uint32_t ell, const Field& field, std::uint32_t d_poly,
                                      std::uint64_t seed, const GenerationCaps& caps = {},
                                      PolynomialSystem* system_out = nullptr, bool parallel = true);

// Edge generation kernels. The parallel kernel factors each polynomial
// through the U/V variable split so the per-pair test is a short dot
// product; the serial kernel evaluates every pair directly and is kept as
// the reference implementation.
BipartiteGraph edges_from_system_parallel(const PolynomialSystem& sys, const Field& field,
                                          const GenerationCaps& caps = {});
BipartiteGraph edges_from_system_serial(const PolynomialSystem& sys, const Field& field,
                                        const GenerationCaps& caps = {});

// High quantile of per-pair simple-path counts (length <= max_len),
// excluding pairs whose count exceeds `exclude_above`.
std::uint64_t path_count_quantile(const BipartiteGraph& g, int max_len, double quantile,
                                  std::uint64_t exclude_above);

struct EstimateTResult {
    std::uint64_t T = 0;       // max over seeds of the per-seed threshold
    std::uint64_t min_seed_value = 0;
    std::uint64_t max_seed_value = 0;
    std::vector<std::uint64_t> per_seed;
};

// Empirical surrogate for the bad-pair threshold: per seed, the smallest
// T such that deleting both endpoints of every pair with >= T paths
// (length <= ell) removes at most a (1 - survival_fraction) share of the
// vertices; maximized over seeds.  This is the operational requirement on
// the threshold -- removal must leave most of the graph standing.
EstimateTResult estimate_T(std::uint32_t ell, std::uint32_t q, std::uint32_t d_poly,
                           std::uint32_t num_seeds, std::uint64_t base_seed = 1,
                           double survival_fraction = 0.75, const GenerationCaps& caps = {});

struct BaseGraphResult {
    BipartiteGraph graph;
    PolynomialSystem system;
    FieldSpec field;
    std::uint64_t n_requested = 0;
    std::uint64_t T_eff = 0;
    std::uint64_t edges_before = 0;
    std::uint64_t edges_removed = 0;
    std::size_t bad_pairs_removed = 0;
    std::size_t vertices_removed = 0;
    double quarter_bound = 0;  // (1/4) n^{1+1/ell} for the record
    std::string report_json() const;
};

// Dense graph with no T_eff-bad pair: picks the largest prime power q
// with 2q^ell <= n, generates, removes every T_eff-bad pair, and
// re-verifies that none remain.
BaseGraphResult build_base_graph(std::uint32_t ell, std::uint64_t n, std::uint64_t T_eff,
                                 std::uint64_t seed, std::int64_t d_poly = -1,
                                 bool cross_side_only = false, const GenerationCaps& caps = {});

struct ConstructionParams {
    std::uint32_t ell = 3;
    std::uint64_t t = 2;
    std::uint64_t n = 0;          // target vertex budget
    std::uint64_t T_eff = 0;      // 0 = estimate from seeds
    std::int64_t d_poly = -1;     // -1 = 2*ell^2 default
    std::int64_t h = -1;          // even pipeline; -1 = floor((t/T)^{1/ell})
    std::uint64_t seed = 1;
    bool cross_side_only = false;
    bool count_simple = false;    // even pipeline: count bad-pair paths without multiplicity
    GenerationCaps caps;
};

struct OddConstructionResult {
    BipartiteGraph graph;  // the blowup
    BaseGraphResult base;
    std::uint64_t m = 0;
    double density_ratio = 0;  // edges / (t^{1-1/ell} n^{1+1/ell})
    std::string report_json() const;
};

// Odd ell: blowup of the base graph with m = floor((t-1)/T_eff).
OddConstructionResult build_odd_construction(const ConstructionParams& params);

struct EvenConstructionResult {
    BipartiteGraph graph;  // simplified union with bad pairs removed
    std::vector<PolynomialSystem> systems;
    FieldSpec field;
    std::uint64_t h = 0;
    std::uint64_t T_eff = 0;
    std::uint64_t union_edge_mass = 0;   // edges of the multigraph, with multiplicity
    std::uint64_t multi_excess = 0;      // M: edge slots above 1 removed by simplify
    std::uint64_t edges_removed = 0;
    std::size_t bad_pairs_removed = 0;
    double density_ratio = 0;  // edges / (t^{1/ell} n^{1+1/ell})
    std::string report_json() const;
};

// Even ell: h independent samples unioned, simplified, and stripped of
// T_eff * h^ell - bad pairs.
EvenConstructionResult build_even_construction(const ConstructionParams& params);

}  // namespace thetaforge
