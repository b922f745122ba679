#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "thetaforge/construct.hpp"
#include "thetaforge/graph.hpp"

namespace thetaforge {

// A path type over a union of h tagged constituent graphs: the j-th edge
// must come from constituent indices[j] (1-based).
struct PathType {
    std::vector<int> indices;
    int length() const { return static_cast<int>(indices.size()); }
};

// Number of simple x-y paths of length |type| whose j-th edge carries the
// tag bit of constituent indices[j]. Throws if the type is longer than
// max_len.
std::uint64_t count_typed_paths(const BipartiteGraph& g, Vertex x, Vertex y, const PathType& type,
                                int max_len);

struct SummaryStat {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::vector<double> per_seed;
};

// Empirical mean count of (T_eff * h^ell)-bad pairs over independent
// seeds: each seed draws h constituent graphs, unions them, and counts
// pairs joined by more than the threshold many paths of length <= ell in
// the multigraph.
SummaryStat estimate_bad_pair_expectation(std::uint32_t ell, std::uint64_t q, std::uint32_t h,
                                          std::uint64_t t_eff, std::uint32_t num_seeds,
                                          std::uint64_t base_seed = 1);

struct DichotomyResult {
    std::map<std::uint64_t, std::uint64_t> histogram;  // per-pair exact-length path count -> frequency
    std::uint64_t total_pairs = 0;
    std::uint64_t middle_band = 0;  // counts strictly between probe and q/2
    std::uint64_t large_branch = 0;
    double middle_fraction = 0.0;
    std::uint64_t probe = 0;
    std::uint64_t half_q = 0;
};

// Histogram of per-pair exact-length-r path counts over cross pairs and
// r <= ell, flagged with any mass inside the forbidden middle band
// (probe, q/2).
DichotomyResult dichotomy_scan(std::uint32_t ell, std::uint64_t q, std::uint32_t num_seeds,
                               std::uint64_t probe, std::uint64_t base_seed = 1);

struct MomentResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
};

// Empirical 2*ell-th moment of per-pair exact-length-ell path counts on a
// deterministic sample of cross pairs (default 200 per seed).
MomentResult estimate_moments(std::uint32_t ell, std::uint64_t q, std::uint32_t num_seeds,
                              std::uint32_t pairs_per_seed = 200, std::uint64_t base_seed = 1);

// One CSV text block: header row then data rows, comma-separated.
std::string stats_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

}  // namespace thetaforge
