#include "thetaforge/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <tuple>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace thetaforge {

void BipartiteGraph::add_edge(Vertex u, Vertex v, std::uint32_t mult, std::uint32_t tags) {
    if (u == v) throw std::invalid_argument("add_edge: self loop");
    if (same_side(u, v)) throw std::invalid_argument("add_edge: endpoints on the same side");
    auto insert = [&](Vertex a, Vertex b) {
        auto& list = adj[a];
        auto it = std::lower_bound(list.begin(), list.end(), b,
                                   [](const Edge& e, Vertex x) { return e.to < x; });
        if (it != list.end() && it->to == b) {
            it->mult += mult;
            it->tags |= tags;
        } else {
            list.insert(it, Edge{b, mult, tags});
        }
    };
    insert(u, v);
    insert(v, u);
}

const Edge* BipartiteGraph::find_edge(Vertex u, Vertex v) const {
    const auto& list = adj[u];
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Edge& e, Vertex x) { return e.to < x; });
    if (it != list.end() && it->to == v) return &*it;
    return nullptr;
}

std::uint32_t BipartiteGraph::multiplicity(Vertex u, Vertex v) const {
    const Edge* e = find_edge(u, v);
    return e ? e->mult : 0;
}

std::uint64_t BipartiteGraph::edge_count() const {
    std::uint64_t c = 0;
    for (Vertex v = 0; v < left_count; ++v) c += adj[v].size();
    return c;
}

std::uint64_t BipartiteGraph::edge_count_with_multiplicity() const {
    std::uint64_t c = 0;
    for (Vertex v = 0; v < left_count; ++v)
        for (const Edge& e : adj[v]) c += e.mult;
    return c;
}

namespace {

// Depth-capped DFS with an on-path mask, accumulating multiplicity
// products into per-endpoint counts.
void dfs_counts(const BipartiteGraph& g, Vertex v, int depth, int max_len, std::uint64_t w,
                std::vector<char>& onpath, std::vector<std::uint64_t>& counts) {
    for (const Edge& e : g.adj[v]) {
        if (onpath[e.to]) continue;
        const std::uint64_t w2 = w * e.mult;
        counts[e.to] += w2;
        if (depth + 1 < max_len) {
            onpath[e.to] = 1;
            dfs_counts(g, e.to, depth + 1, max_len, w2, onpath, counts);
            onpath[e.to] = 0;
        }
    }
}

}  // namespace

std::vector<std::uint64_t> path_counts_from(const BipartiteGraph& g, Vertex x, int max_len) {
    if (max_len < 1) throw std::invalid_argument("path_counts_from: max_len must be >= 1");
    std::vector<std::uint64_t> counts(g.vertex_count(), 0);
    std::vector<char> onpath(g.vertex_count(), 0);
    onpath[x] = 1;
    dfs_counts(g, x, 0, max_len, 1, onpath, counts);
    return counts;
}

std::uint64_t count_paths_upto(const BipartiteGraph& g, Vertex x, Vertex y, int max_len) {
    if (x == y) throw std::invalid_argument("count_paths_upto: endpoints must differ");
    return path_counts_from(g, x, max_len)[y];
}

namespace {

void dfs_enumerate(const BipartiteGraph& g, Vertex v, Vertex y, int max_len,
                   std::vector<Vertex>& cur, std::vector<char>& onpath,
                   std::vector<std::vector<Vertex>>& out) {
    for (const Edge& e : g.adj[v]) {
        if (onpath[e.to]) continue;
        cur.push_back(e.to);
        if (e.to == y) out.push_back(cur);
        if (static_cast<int>(cur.size()) - 1 < max_len && e.to != y) {
            onpath[e.to] = 1;
            dfs_enumerate(g, e.to, y, max_len, cur, onpath, out);
            onpath[e.to] = 0;
        }
        cur.pop_back();
    }
}

}  // namespace

PathList enumerate_paths_upto(const BipartiteGraph& g, Vertex x, Vertex y, int max_len) {
    PathList pl;
    pl.x = x;
    pl.y = y;
    std::vector<Vertex> cur = {x};
    std::vector<char> onpath(g.vertex_count(), 0);
    onpath[x] = 1;
    dfs_enumerate(g, x, y, max_len, cur, onpath, pl.paths);
    return pl;
}

std::vector<VertexPair> find_bad_pairs(const BipartiteGraph& g, std::uint64_t threshold, int max_len,
                                       const BadPairOptions& opts) {
    const Vertex n = g.vertex_count();
    std::vector<VertexPair> result;

    if (opts.sample_pairs > 0) {
        Rng rng(opts.sample_seed);
        std::set<VertexPair> seen;
        for (std::size_t i = 0; i < opts.sample_pairs && n >= 2; ++i) {
            Vertex a = static_cast<Vertex>(rng.below(n));
            Vertex b = static_cast<Vertex>(rng.below(n));
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            if (opts.cross_side_only && g.same_side(a, b)) continue;
            if (!seen.insert({a, b}).second) continue;
            if (count_paths_upto(g, a, b, max_len) >= threshold) result.push_back({a, b});
        }
        std::sort(result.begin(), result.end());
        return result;
    }

    std::vector<std::vector<Vertex>> per_source(n);
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
    for (Vertex x = 0; x < n; ++x) {
        auto counts = path_counts_from(g, x, max_len);
        for (Vertex y = x + 1; y < n; ++y) {
            if (opts.cross_side_only && g.same_side(x, y)) continue;
            if (counts[y] >= threshold) per_source[x].push_back(y);
        }
    }
    for (Vertex x = 0; x < n; ++x)
        for (Vertex y : per_source[x]) result.push_back({x, y});
    return result;
}

RemovalResult remove_bad_pairs(const BipartiteGraph& g, const std::vector<VertexPair>& pairs) {
    std::vector<char> dead(g.vertex_count(), 0);
    for (const auto& [a, b] : pairs) {
        dead[a] = 1;
        dead[b] = 1;
    }

    RemovalResult res;
    res.old_to_new.assign(g.vertex_count(), -1);
    Vertex new_left = 0, new_right = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (dead[v]) {
            ++res.vertices_removed;
            continue;
        }
        if (g.on_left(v))
            res.old_to_new[v] = new_left++;
        else
            ++new_right;
    }
    // right-side ids follow the new left block
    Vertex next_right = new_left;
    for (Vertex v = g.left_count; v < g.vertex_count(); ++v)
        if (!dead[v]) res.old_to_new[v] = next_right++;

    res.graph = BipartiteGraph(new_left, new_right);
    res.graph.meta_ell = g.meta_ell;
    res.graph.meta_q = g.meta_q;
    res.graph.meta_seed = g.meta_seed;
    res.graph.provenance = g.provenance;
    if (!g.labels.empty()) res.graph.labels.resize(res.graph.vertex_count());

    for (Vertex u = 0; u < g.left_count; ++u) {
        for (const Edge& e : g.adj[u]) {
            if (dead[u] || dead[e.to]) {
                ++res.edges_removed;
                continue;
            }
            res.graph.add_edge(res.old_to_new[u], res.old_to_new[e.to], e.mult, e.tags);
        }
    }
    if (!g.labels.empty()) {
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (!dead[v]) res.graph.labels[res.old_to_new[v]] = g.labels[v];
    }
    return res;
}

BipartiteGraph blowup(const BipartiteGraph& g, int m, std::uint64_t vertex_cap) {
    if (m < 1) throw std::invalid_argument("blowup: m must be >= 1");
    const std::uint64_t total = static_cast<std::uint64_t>(g.vertex_count()) * m;
    if (total > vertex_cap) throw std::length_error("blowup: vertex cap exceeded");

    BipartiteGraph out(g.left_count * m, g.right_count * m);
    out.meta_ell = g.meta_ell;
    out.meta_q = g.meta_q;
    out.meta_seed = g.meta_seed;
    out.provenance = g.provenance.empty() ? "blowup" : g.provenance + "+blowup";
    out.supervertex.resize(out.vertex_count());

    auto image = [&](Vertex v, int copy) {
        return g.on_left(v) ? v * m + copy : g.left_count * m + (v - g.left_count) * m + copy;
    };
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        for (int c = 0; c < m; ++c) out.supervertex[image(v, c)] = v;

    for (Vertex u = 0; u < g.left_count; ++u)
        for (const Edge& e : g.adj[u])
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) out.add_edge(image(u, a), image(e.to, b), e.mult, e.tags);
    return out;
}

BipartiteGraph union_multigraph(const std::vector<BipartiteGraph>& graphs) {
    if (graphs.empty()) throw std::invalid_argument("union_multigraph: empty input");
    if (graphs.size() > 32) throw std::invalid_argument("union_multigraph: at most 32 constituents");
    const auto& g0 = graphs.front();
    for (const auto& g : graphs)
        if (g.left_count != g0.left_count || g.right_count != g0.right_count)
            throw std::invalid_argument("union_multigraph: mismatched vertex sets");

    BipartiteGraph out(g0.left_count, g0.right_count);
    out.meta_ell = g0.meta_ell;
    out.meta_q = g0.meta_q;
    out.provenance = "union";
    out.labels = g0.labels;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const std::uint32_t tag = 1u << i;
        for (Vertex u = 0; u < g0.left_count; ++u)
            for (const Edge& e : graphs[i].adj[u]) out.add_edge(u, e.to, 1, tag);
    }
    return out;
}

SimplifyResult simplify(const BipartiteGraph& g) {
    SimplifyResult res;
    res.graph = g;
    res.graph.provenance = g.provenance.empty() ? "simplified" : g.provenance + "+simplified";
    for (auto& list : res.graph.adj) {
        for (auto& e : list) {
            if (e.mult > 1) e.mult = 1;
        }
    }
    for (Vertex u = 0; u < g.left_count; ++u)
        for (const Edge& e : g.adj[u])
            if (e.mult > 1) res.excess_removed += e.mult - 1;
    return res;
}

bool is_path(const BipartiteGraph& g, const std::vector<Vertex>& seq) {
    if (seq.size() < 2) return seq.size() == 1;
    std::set<Vertex> seen(seq.begin(), seq.end());
    if (seen.size() != seq.size()) return false;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!g.has_edge(seq[i], seq[i + 1])) return false;
    return true;
}

ProjectedPath project_to_supergraph(const BipartiteGraph& blown, const std::vector<Vertex>& path) {
    if (blown.supervertex.empty())
        throw std::invalid_argument("project_to_supergraph: graph has no supervertex map");
    if (!is_path(blown, path)) throw std::invalid_argument("project_to_supergraph: input is not a path");

    ProjectedPath out;
    out.walk.reserve(path.size());
    for (Vertex v : path) out.walk.push_back(blown.supervertex[v]);

    // excise cycles: on a repeat, cut everything back to the first occurrence
    for (Vertex v : out.walk) {
        auto it = std::find(out.reduced_path.begin(), out.reduced_path.end(), v);
        if (it != out.reduced_path.end())
            out.reduced_path.erase(it + 1, out.reduced_path.end());
        else
            out.reduced_path.push_back(v);
    }
    return out;
}

void write_edgelist(std::ostream& out, const BipartiteGraph& g) {
    out << "# ell=" << g.meta_ell << ", q=" << g.meta_q << ", seed=" << g.meta_seed
        << ", sides=" << g.left_count << "," << g.right_count << "\n";
    if (!g.provenance.empty()) out << "# provenance=" << g.provenance << "\n";
    for (Vertex u = 0; u < g.left_count; ++u) {
        for (const Edge& e : g.adj[u]) {
            out << u << " " << e.to;
            if (e.mult != 1) out << " " << e.mult;
            out << "\n";
        }
    }
}

BipartiteGraph read_edgelist(std::istream& in) {
    BipartiteGraph g;
    bool have_sides = false;
    std::vector<std::tuple<Vertex, Vertex, std::uint32_t>> edges;
    std::string line;
    Vertex max_id = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("sides=");
            if (pos != std::string::npos) {
                int L, R;
                if (std::sscanf(line.c_str() + pos, "sides=%d,%d", &L, &R) == 2) {
                    g.left_count = L;
                    g.right_count = R;
                    have_sides = true;
                }
            }
            pos = line.find("ell=");
            if (pos != std::string::npos) g.meta_ell = std::strtoul(line.c_str() + pos + 4, nullptr, 10);
            pos = line.find("q=");
            if (pos != std::string::npos && (pos == 2 || line[pos - 1] == ' '))
                g.meta_q = std::strtoul(line.c_str() + pos + 2, nullptr, 10);
            pos = line.find("seed=");
            if (pos != std::string::npos) g.meta_seed = std::strtoull(line.c_str() + pos + 5, nullptr, 10);
            continue;
        }
        std::istringstream ss(line);
        Vertex u, v;
        std::uint32_t mult = 1;
        if (!(ss >> u >> v)) throw std::runtime_error("read_edgelist: malformed edge line: " + line);
        ss >> mult;
        edges.emplace_back(u, v, mult == 0 ? 1 : mult);
        max_id = std::max({max_id, u, v});
    }
    if (!have_sides) throw std::runtime_error("read_edgelist: missing sides= header");
    if (max_id >= g.left_count + g.right_count)
        throw std::runtime_error("read_edgelist: vertex id out of range");
    g.adj.resize(g.vertex_count());
    for (auto& [u, v, m] : edges) g.add_edge(u, v, m);
    return g;
}

std::string graph_report_json(const BipartiteGraph& g) {
    nlohmann::json j;
    j["left"] = g.left_count;
    j["right"] = g.right_count;
    j["edges"] = g.edge_count();
    j["edge_mass"] = g.edge_count_with_multiplicity();
    std::map<std::uint32_t, std::uint64_t> hist;
    for (Vertex u = 0; u < g.left_count; ++u)
        for (const Edge& e : g.adj[u]) ++hist[e.mult];
    j["multiplicity_histogram"] = hist;
    j["ell"] = g.meta_ell;
    j["q"] = g.meta_q;
    j["seed"] = g.meta_seed;
    j["provenance"] = g.provenance;
    return j.dump(2);
}

}  // namespace thetaforge
