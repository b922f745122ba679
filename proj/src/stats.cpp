#include "thetaforge/stats.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "thetaforge/field.hpp"

namespace thetaforge {

namespace {

void typed_dfs(const BipartiteGraph& g, Vertex cur, Vertex y, const PathType& type, std::size_t depth,
               std::vector<char>& visited, std::uint64_t& found) {
    if (depth == type.indices.size()) {
        if (cur == y) ++found;
        return;
    }
    const std::uint32_t want_bit = 1u << (type.indices[depth] - 1);
    for (const Edge& e : g.adj[cur]) {
        if (visited[e.to]) continue;
        if ((e.tags & want_bit) == 0) continue;
        visited[e.to] = 1;
        typed_dfs(g, e.to, y, type, depth + 1, visited, found);
        visited[e.to] = 0;
    }
}

// per-length simple-path counts from x: result[r][v] = number of simple
// x-v paths with exactly r edges, r <= max_len
std::vector<std::vector<std::uint64_t>> counts_by_length(const BipartiteGraph& g, Vertex x,
                                                         int max_len) {
    std::vector<std::vector<std::uint64_t>> result(max_len + 1,
                                                   std::vector<std::uint64_t>(g.vertex_count(), 0));
    std::vector<char> visited(g.vertex_count(), 0);
    visited[x] = 1;

    std::function<void(Vertex, int, std::uint64_t)> dfs = [&](Vertex v, int depth, std::uint64_t mult) {
        if (depth > 0) result[depth][v] += mult;
        if (depth == max_len) return;
        for (const Edge& e : g.adj[v]) {
            if (visited[e.to]) continue;
            visited[e.to] = 1;
            dfs(e.to, depth + 1, mult * e.mult);
            visited[e.to] = 0;
        }
    };
    dfs(x, 0, 1);
    return result;
}

void summarize(const std::vector<double>& xs, double& mean, double& stderr_out) {
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    if (xs.size() > 1) var /= static_cast<double>(xs.size() - 1);
    stderr_out = std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace

std::uint64_t count_typed_paths(const BipartiteGraph& g, Vertex x, Vertex y, const PathType& type,
                                int max_len) {
    if (type.length() < 1 || type.length() > max_len)
        throw std::invalid_argument("count_typed_paths: type length out of range");
    std::vector<char> visited(g.vertex_count(), 0);
    visited[x] = 1;
    std::uint64_t found = 0;
    typed_dfs(g, x, y, type, 0, visited, found);
    return found;
}

SummaryStat estimate_bad_pair_expectation(std::uint32_t ell, std::uint64_t q, std::uint32_t h,
                                          std::uint64_t t_eff, std::uint32_t num_seeds,
                                          std::uint64_t base_seed) {
    if (h < 1 || num_seeds < 1)
        throw std::invalid_argument("estimate_bad_pair_expectation: need h >= 1, num_seeds >= 1");
    const Field field(static_cast<std::uint32_t>(q));
    std::uint64_t threshold = t_eff;
    for (std::uint32_t i = 0; i < ell; ++i) threshold *= h;

    SummaryStat out;
    Rng seed_gen(base_seed);
    for (std::uint32_t s = 0; s < num_seeds; ++s) {
        std::vector<BipartiteGraph> parts;
        parts.reserve(h);
        for (std::uint32_t i = 0; i < h; ++i)
            parts.push_back(random_algebraic_graph(ell, field, default_d_poly(ell), seed_gen.next()));
        const BipartiteGraph g = h == 1 ? std::move(parts[0]) : union_multigraph(parts);
        const auto bad = find_bad_pairs(g, threshold, static_cast<int>(ell));
        out.per_seed.push_back(static_cast<double>(bad.size()));
    }
    summarize(out.per_seed, out.mean, out.stderr_);
    return out;
}

DichotomyResult dichotomy_scan(std::uint32_t ell, std::uint64_t q, std::uint32_t num_seeds,
                               std::uint64_t probe, std::uint64_t base_seed) {
    if (q < 5) throw std::invalid_argument("dichotomy_scan: need q >= 5");
    const Field field(static_cast<std::uint32_t>(q));
    DichotomyResult res;
    res.probe = probe;
    res.half_q = q / 2;

    Rng seed_gen(base_seed);
    for (std::uint32_t s = 0; s < num_seeds; ++s) {
        const BipartiteGraph g = random_algebraic_graph(ell, field, default_d_poly(ell), seed_gen.next());
        for (Vertex x = 0; x < g.left_count; ++x) {
            const auto by_len = counts_by_length(g, x, static_cast<int>(ell));
            for (int r = 1; r <= static_cast<int>(ell); ++r) {
                // cross pairs only: r odd lands on the right part, r even back on the left
                const Vertex lo = (r % 2 == 1) ? g.left_count : 0;
                const Vertex hi = (r % 2 == 1) ? g.vertex_count() : g.left_count;
                for (Vertex y = lo; y < hi; ++y) {
                    if (y == x) continue;
                    const std::uint64_t cnt = by_len[r][y];
                    ++res.histogram[cnt];
                    ++res.total_pairs;
                    if (cnt > probe && 2 * cnt < q) ++res.middle_band;
                    if (2 * cnt >= q) ++res.large_branch;
                }
            }
        }
    }
    res.middle_fraction =
        res.total_pairs == 0 ? 0.0
                             : static_cast<double>(res.middle_band) / static_cast<double>(res.total_pairs);
    return res;
}

MomentResult estimate_moments(std::uint32_t ell, std::uint64_t q, std::uint32_t num_seeds,
                              std::uint32_t pairs_per_seed, std::uint64_t base_seed) {
    const Field field(static_cast<std::uint32_t>(q));
    MomentResult res;
    std::vector<double> values;

    Rng seed_gen(base_seed);
    for (std::uint32_t s = 0; s < num_seeds; ++s) {
        const std::uint64_t graph_seed = seed_gen.next();
        const BipartiteGraph g = random_algebraic_graph(ell, field, default_d_poly(ell), graph_seed);
        Rng pair_gen(graph_seed ^ 0x9e3779b97f4a7c15ULL);
        for (std::uint32_t p = 0; p < pairs_per_seed; ++p) {
            const Vertex x = static_cast<Vertex>(pair_gen.below(g.left_count));
            const bool cross = (ell % 2 == 1);
            const Vertex y = cross ? static_cast<Vertex>(g.left_count + pair_gen.below(g.right_count))
                                   : static_cast<Vertex>(pair_gen.below(g.left_count));
            if (x == y) continue;
            const auto by_len = counts_by_length(g, x, static_cast<int>(ell));
            const double cnt = static_cast<double>(by_len[ell][y]);
            values.push_back(std::pow(cnt, 2.0 * ell));
        }
    }
    res.samples = values.size();
    if (!values.empty()) summarize(values, res.mean, res.stderr_);
    return res;
}

std::string stats_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

}  // namespace thetaforge
