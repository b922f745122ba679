#include "thetaforge/theta.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace thetaforge {

namespace {

void dfs_exact(const BipartiteGraph& g, Vertex v, Vertex y, int ell, std::vector<Vertex>& cur,
               std::vector<char>& onpath, std::vector<std::vector<Vertex>>& out,
               std::size_t max_candidates) {
    const int len = static_cast<int>(cur.size()) - 1;
    if (len == ell) {
        if (v == y) {
            if (out.size() >= max_candidates)
                throw std::length_error("enumerate_exact_paths: candidate cap exceeded");
            out.push_back(cur);
        }
        return;
    }
    for (const Edge& e : g.adj[v]) {
        if (onpath[e.to]) continue;
        if (e.to == y && len + 1 != ell) continue;  // may only land on y at full length
        cur.push_back(e.to);
        onpath[e.to] = 1;
        dfs_exact(g, e.to, y, ell, cur, onpath, out, max_candidates);
        onpath[e.to] = 0;
        cur.pop_back();
    }
}

}  // namespace

PackingInstance enumerate_exact_paths(const BipartiteGraph& g, Vertex x, Vertex y, int ell,
                                      std::size_t max_candidates) {
    if (x == y) throw std::invalid_argument("enumerate_exact_paths: endpoints must differ");
    PackingInstance inst;
    inst.x = x;
    inst.y = y;
    std::vector<Vertex> cur = {x};
    std::vector<char> onpath(g.vertex_count(), 0);
    onpath[x] = 1;
    dfs_exact(g, x, y, ell, cur, onpath, inst.paths, max_candidates);

    const std::size_t n = inst.paths.size();
    const std::size_t words = (n + 63) / 64;
    inst.conflict.assign(n, std::vector<std::uint64_t>(words, 0));

    // internal-vertex sets for the pairwise conflict relation
    std::vector<std::set<Vertex>> internals(n);
    for (std::size_t i = 0; i < n; ++i)
        internals[i] = std::set<Vertex>(inst.paths[i].begin() + 1, inst.paths[i].end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool share = std::any_of(internals[i].begin(), internals[i].end(),
                                     [&](Vertex v) { return internals[j].count(v) > 0; });
            if (share) {
                inst.conflict[i][j >> 6] |= std::uint64_t{1} << (j & 63);
                inst.conflict[j][i >> 6] |= std::uint64_t{1} << (i & 63);
            }
        }
    }
    return inst;
}

namespace {

using Bits = std::vector<std::uint64_t>;

int popcount(const Bits& b) {
    int c = 0;
    for (auto w : b) c += __builtin_popcountll(w);
    return c;
}

struct PackingSearch {
    const PackingInstance& inst;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool exhausted = false;
    std::vector<std::size_t> best;
    std::vector<std::size_t> cur;

    explicit PackingSearch(const PackingInstance& i, std::uint64_t b) : inst(i), budget(b) {}

    // Greedy clique cover of the conflict graph restricted to `live`:
    // each clique contributes at most one path to any packing.
    int cover_bound(const Bits& live) const {
        int cliques = 0;
        Bits remaining = live;
        const std::size_t n = inst.paths.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (!((remaining[i >> 6] >> (i & 63)) & 1)) continue;
            ++cliques;
            // grow a clique from i greedily: keep the common conflict set
            Bits common = inst.conflict[i];
            for (std::size_t w = 0; w < common.size(); ++w) common[w] &= remaining[w];
            remaining[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!((common[j >> 6] >> (j & 63)) & 1)) continue;
                remaining[j >> 6] &= ~(std::uint64_t{1} << (j & 63));
                for (std::size_t w = 0; w < common.size(); ++w) common[w] &= inst.conflict[j][w];
            }
        }
        return cliques;
    }

    void run(Bits live) {
        ++nodes;
        if (nodes > budget) {
            exhausted = true;
            return;
        }
        const std::size_t n = inst.paths.size();
        int live_count = popcount(live);
        if (cur.size() + live_count <= best.size()) return;
        if (live_count == 0) {
            if (cur.size() > best.size()) best = cur;
            return;
        }
        if (cur.size() + cover_bound(live) <= best.size()) return;

        // branch on the live path with the most live conflicts
        std::size_t pick = n;
        int maxdeg = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!((live[i >> 6] >> (i & 63)) & 1)) continue;
            int deg = 0;
            for (std::size_t w = 0; w < live.size(); ++w)
                deg += __builtin_popcountll(inst.conflict[i][w] & live[w]);
            if (deg > maxdeg) {
                maxdeg = deg;
                pick = i;
            }
        }
        // include pick
        Bits with = live;
        with[pick >> 6] &= ~(std::uint64_t{1} << (pick & 63));
        for (std::size_t w = 0; w < with.size(); ++w) with[w] &= ~inst.conflict[pick][w];
        cur.push_back(pick);
        run(with);
        cur.pop_back();
        if (exhausted) return;
        // exclude pick
        if (maxdeg > 0) {
            Bits without = live;
            without[pick >> 6] &= ~(std::uint64_t{1} << (pick & 63));
            run(without);
        }
    }
};

std::vector<std::size_t> greedy_packing(const PackingInstance& inst) {
    const std::size_t n = inst.paths.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i) deg[i] = popcount(inst.conflict[i]);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deg[a] < deg[b]; });
    std::vector<std::size_t> chosen;
    for (std::size_t i : order) {
        bool ok = std::none_of(chosen.begin(), chosen.end(),
                               [&](std::size_t j) { return inst.conflicts(i, j); });
        if (ok) chosen.push_back(i);
    }
    return chosen;
}

}  // namespace

PackingResult max_disjoint_packing(const PackingInstance& inst, std::uint64_t node_budget) {
    PackingResult res;
    const std::size_t n = inst.paths.size();
    if (n == 0) return res;

    PackingSearch search(inst, node_budget);
    search.best = greedy_packing(inst);
    Bits live((n + 63) / 64, 0);
    for (std::size_t i = 0; i < n; ++i) live[i >> 6] |= std::uint64_t{1} << (i & 63);
    search.run(live);

    res.size = static_cast<int>(search.best.size());
    res.chosen = search.best;
    res.exact = !search.exhausted;
    std::sort(res.chosen.begin(), res.chosen.end());
    return res;
}

namespace {

bool pair_admissible(const BipartiteGraph& g, Vertex x, Vertex y, int ell) {
    // bipartite parity: odd-length paths cross sides, even-length stay
    const bool cross = !g.same_side(x, y);
    return (ell % 2 == 1) == cross;
}

ThetaWitness make_witness(const PackingInstance& inst, const std::vector<std::size_t>& chosen, int t) {
    ThetaWitness w;
    w.x = inst.x;
    w.y = inst.y;
    for (int i = 0; i < t; ++i) w.paths.push_back(inst.paths[chosen[i]]);
    return w;
}

}  // namespace

ThetaResult contains_theta(const BipartiteGraph& g, int ell, int t, const ThetaCaps& caps) {
    ThetaResult res;
    const Vertex n = g.vertex_count();

    // Exact-length path counts from every source in one pass, used to scan
    // the densest pairs first.
    struct PairInfo {
        Vertex x, y;
        std::uint64_t count;
    };
    std::vector<PairInfo> pairs;
    {
        std::vector<std::vector<std::uint64_t>> exact_counts(n);
#pragma omp parallel for schedule(dynamic)
        for (Vertex x = 0; x < n; ++x) {
            // exact-length variant of the depth-capped DFS
            std::vector<std::uint64_t> counts(n, 0);
            std::vector<char> onpath(n, 0);
            onpath[x] = 1;
            std::vector<Vertex> stack;
            std::function<void(Vertex, int)> rec = [&](Vertex v, int depth) {
                for (const Edge& e : g.adj[v]) {
                    if (onpath[e.to]) continue;
                    if (depth + 1 == ell) {
                        counts[e.to] += 1;
                    } else {
                        onpath[e.to] = 1;
                        rec(e.to, depth + 1);
                        onpath[e.to] = 0;
                    }
                }
            };
            rec(x, 0);
            exact_counts[x] = std::move(counts);
        }
        for (Vertex x = 0; x < n; ++x)
            for (Vertex y = x + 1; y < n; ++y)
                if (pair_admissible(g, x, y, ell) && exact_counts[x][y] > 0)
                    pairs.push_back({x, y, exact_counts[x][y]});
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const PairInfo& a, const PairInfo& b) { return a.count > b.count; });

    for (const PairInfo& pi : pairs) {
        if (pi.count < static_cast<std::uint64_t>(t)) {
            res.per_pair.push_back({pi.x, pi.y, -1, true});  // fewer candidates than t: cannot host
            continue;
        }
        PackingInstance inst;
        try {
            inst = enumerate_exact_paths(g, pi.x, pi.y, ell, caps.max_candidates);
        } catch (const std::length_error&) {
            res.exact = false;
            res.note = "candidate cap exceeded at pair (" + std::to_string(pi.x) + "," +
                       std::to_string(pi.y) + ")";
            res.per_pair.push_back({pi.x, pi.y, 0, false});
            continue;
        }
        PackingResult pr = max_disjoint_packing(inst, caps.node_budget);
        if (!pr.exact) {
            res.exact = false;
            res.note = "node budget exceeded at pair (" + std::to_string(pi.x) + "," +
                       std::to_string(pi.y) + ")";
        }
        if (pr.size >= t) {
            res.witness = make_witness(inst, pr.chosen, t);
            res.exact = true;  // a found witness is exact regardless of other aborts
            return res;
        }
        res.per_pair.push_back({pi.x, pi.y, pr.size, pr.exact});
    }
    std::sort(res.per_pair.begin(), res.per_pair.end(), [](const PairMaximum& a, const PairMaximum& b) {
        return std::tie(a.x, a.y) < std::tie(b.x, b.y);
    });
    return res;
}

ThetaResult brute_force_theta_oracle(const BipartiteGraph& g, int ell, int t) {
    if (g.vertex_count() > 12)
        throw std::invalid_argument("brute_force_theta_oracle: too many vertices");
    ThetaResult res;
    const Vertex n = g.vertex_count();
    for (Vertex x = 0; x < n; ++x) {
        for (Vertex y = x + 1; y < n; ++y) {
            if (!pair_admissible(g, x, y, ell)) continue;
            PackingInstance inst = enumerate_exact_paths(g, x, y, ell, 1u << 20);
            if (inst.paths.size() > 20)
                throw std::invalid_argument("brute_force_theta_oracle: too many candidate paths");
            int best = 0;
            std::vector<std::size_t> best_set;
            const std::uint32_t lim = 1u << inst.paths.size();
            for (std::uint32_t mask = 0; mask < lim; ++mask) {
                std::vector<std::size_t> sel;
                for (std::size_t i = 0; i < inst.paths.size(); ++i)
                    if ((mask >> i) & 1) sel.push_back(i);
                if (static_cast<int>(sel.size()) <= best) continue;
                bool ok = true;
                for (std::size_t a = 0; a < sel.size() && ok; ++a)
                    for (std::size_t b = a + 1; b < sel.size() && ok; ++b)
                        if (inst.conflicts(sel[a], sel[b])) ok = false;
                if (ok) {
                    best = static_cast<int>(sel.size());
                    best_set = sel;
                }
            }
            if (best >= t && !res.witness) {
                res.witness = make_witness(inst, best_set, t);
                return res;
            }
            res.per_pair.push_back({x, y, best, true});
        }
    }
    return res;
}

bool validate_witness(const BipartiteGraph& g, const ThetaWitness& w, int ell, int t,
                      std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (static_cast<int>(w.paths.size()) < t) return fail("fewer than t paths");
    std::set<Vertex> internals_seen;
    for (const auto& path : w.paths) {
        if (static_cast<int>(path.size()) != ell + 1) return fail("path length is not ell");
        if (path.front() != w.x || path.back() != w.y) return fail("path endpoints mismatch");
        std::set<Vertex> on_this(path.begin(), path.end());
        if (on_this.size() != path.size()) return fail("path repeats a vertex");
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            if (!g.has_edge(path[i], path[i + 1])) return fail("non-adjacent consecutive vertices");
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            if (path[i] == w.x || path[i] == w.y) return fail("endpoint used internally");
            if (!internals_seen.insert(path[i]).second) return fail("internal vertex shared");
        }
    }
    return true;
}

}  // namespace thetaforge
