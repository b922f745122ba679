#include "thetaforge/explore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace thetaforge {

BigInt catalan(std::uint32_t m) {
    // binomial(2m, m) / (m + 1), exact
    BigInt binom = 1;
    for (std::uint32_t i = 1; i <= m; ++i) binom = binom * (m + i) / i;
    return binom / (m + 1);
}

ExplorationConstants compute_constants(std::uint32_t ell, std::uint64_t t) {
    if (ell < 2 || t < 2) throw std::invalid_argument("compute_constants: need ell >= 2, t >= 2");
    ExplorationConstants c;
    c.ell = ell;
    c.t = t;
    c.degree_spread = boost::multiprecision::pow(BigInt(20 * ell), 2 * ell);

    c.regularity.resize(ell);
    for (std::uint32_t m = 0; m < ell; ++m)
        c.regularity[m] =
            boost::multiprecision::pow(BigInt(2 * ell), m) * catalan(m) * boost::multiprecision::pow(BigInt(t), m);

    // bad_set_cap[j] = 2*ell*t * sum_{i=0}^{j-1} (i+1) * spread^i, j >= 1
    c.bad_set_cap.resize(ell);
    c.bad_set_cap[0] = 0;
    BigInt spread_pow = 1, cap_sum = 0;
    for (std::uint32_t j = 1; j < ell; ++j) {
        cap_sum += BigInt(j) * spread_pow;  // term i = j-1
        c.bad_set_cap[j] = BigInt(2) * ell * t * cap_sum;
        spread_pow *= c.degree_spread;
    }

    // branching_loss[k] = sum_{i=0}^{k-2} ((spread+1) R_i + 2 (i+1) ell t spread^i + cap_i)
    c.branching_loss.resize(ell + 1);
    c.branching_loss[0] = 0;
    c.branching_loss[1] = 0;
    BigInt loss = 0;
    spread_pow = 1;
    for (std::uint32_t k = 2; k <= ell; ++k) {
        const std::uint32_t i = k - 2;
        loss += (c.degree_spread + 1) * c.regularity[i] + BigInt(2) * (i + 1) * ell * t * spread_pow +
                (i < ell ? c.bad_set_cap[i] : BigInt(0));
        c.branching_loss[k] = loss;
        spread_pow *= c.degree_spread;
    }
    return c;
}

const BigInt& ExplorationState::count(int layer, std::size_t pos, Vertex target) const {
    static const BigInt zero = 0;
    const auto& m = path_counts[layer][pos];
    auto it = m.find(target);
    return it == m.end() ? zero : it->second;
}

BigInt ExplorationState::count_from_root(Vertex target) const {
    return count(0, 0, target);
}

BigInt ExplorationState::count_from_root_to_set(const std::vector<Vertex>& set) const {
    BigInt total = 0;
    for (Vertex v : set) total += count_from_root(v);
    return total;
}

std::vector<Vertex> ExplorationState::children_of(Vertex v) const {
    std::vector<Vertex> out;
    const int lay = status[v];
    for (const Edge& e : host->adj[v])
        if (status[e.to] == lay + 1) out.push_back(e.to);
    return out;
}

std::vector<Vertex> ExplorationState::parents_of(Vertex v) const {
    std::vector<Vertex> out;
    const int lay = status[v];
    for (const Edge& e : host->adj[v])
        if (lay >= 1 && status[e.to] == lay - 1) out.push_back(e.to);
    return out;
}

ExplorationState init_exploration(const BipartiteGraph& g, Vertex root) {
    ExplorationState st;
    st.host = &g;
    st.root = root;
    st.status.assign(g.vertex_count(), ExplorationState::kStatusUnexplored);
    st.layers.push_back({root});
    st.status[root] = 0;
    std::vector<Vertex> first;
    for (const Edge& e : g.adj[root]) {
        first.push_back(e.to);
        st.status[e.to] = 1;
    }
    std::sort(first.begin(), first.end());
    st.layers.push_back(std::move(first));
    recompute_path_counts(st);
    return st;
}

void recompute_path_counts(ExplorationState& state) {
    const int k = state.stage();
    state.path_counts.assign(k + 1, {});
    for (int i = 0; i <= k; ++i) {
        state.path_counts[i].assign(state.layers[i].size(), {});
        for (std::size_t pos = 0; pos < state.layers[i].size(); ++pos) {
            auto& table = state.path_counts[i][pos];
            std::unordered_map<Vertex, BigInt> frontier{{state.layers[i][pos], 1}};
            for (int j = i + 1; j <= k; ++j) {
                std::unordered_map<Vertex, BigInt> next;
                for (const auto& [v, cnt] : frontier) {
                    for (const Edge& e : state.host->adj[v])
                        if (state.status[e.to] == j) next[e.to] += cnt;
                }
                for (const auto& [v, cnt] : next) table[v] = cnt;
                frontier = std::move(next);
                if (frontier.empty()) break;
            }
        }
    }
}

namespace {

std::size_t layer_pos(const ExplorationState& st, int layer, Vertex v) {
    const auto& L = st.layers[layer];
    auto it = std::find(L.begin(), L.end(), v);
    if (it == L.end()) throw std::logic_error("layer_pos: vertex not in layer");
    return static_cast<std::size_t>(it - L.begin());
}

BigInt bigint_pow_u64(std::uint64_t base, std::uint32_t e) {
    return boost::multiprecision::pow(BigInt(base), e);
}

}  // namespace

BadSetResult compute_bad_set(const ExplorationState& state, const ExplorationConstants& c,
                             std::uint64_t dmax) {
    const int k = state.stage();
    BadSetResult res;
    std::set<Vertex> remaining(state.layers[k].begin(), state.layers[k].end());
    std::set<Vertex> assigned;

    // outermost anchor layer first; earlier levels exclude later-assigned
    // vertices
    for (int a = k - 2; a >= 0; --a) {
        const BigInt& threshold = c.regularity[k - a - 1];
        std::set<Vertex> level_union;
        for (std::size_t pos = 0; pos < state.layers[a].size(); ++pos) {
            const Vertex anchor = state.layers[a][pos];
            BadSetLevel level;
            level.level = a;
            level.anchor = anchor;
            for (Vertex vk : remaining) {
                if (state.count(a, pos, vk) > threshold) level.members.push_back(vk);
            }
            if (level.members.empty()) continue;

            const std::vector<Vertex> A = state.children_of(anchor);
            level.anchor_path_mass = 0;
            for (Vertex child : A) {
                const std::size_t cpos = layer_pos(state, a + 1, child);
                for (Vertex vk : level.members) level.anchor_path_mass += state.count(a + 1, cpos, vk);
            }
            // embedding hypotheses for (anchor, A, members)
            const int i = a + 1;
            const BigInt lhsA = level.anchor_path_mass;
            const BigInt boundA = BigInt(A.size()) * 2 * c.ell * c.t * bigint_pow_u64(dmax, k - i - 1);
            const BigInt boundB = BigInt(level.members.size()) * c.regularity[k - i];
            level.hypotheses_hold = !A.empty() && lhsA > boundA && lhsA > boundB;

            level_union.insert(level.members.begin(), level.members.end());
            res.levels.push_back(std::move(level));
        }
        for (Vertex v : level_union) {
            remaining.erase(v);
            assigned.insert(v);
        }
    }

    res.all.assign(assigned.begin(), assigned.end());
    res.root_path_mass = state.count_from_root_to_set(res.all);
    res.certificate_bound = BigInt(2) * k * c.ell * c.t * bigint_pow_u64(dmax, k - 1);
    res.bound_holds = res.root_path_mass <= res.certificate_bound;
    return res;
}

namespace {

void check_properties(const ExplorationState& st, const ExplorationConstants& c, std::uint64_t dmin,
                      StageReport& report) {
    const int k = st.stage();
    auto add = [&](std::string name, bool holds, bool vacuous = false, std::string detail = "") {
        report.properties.push_back({std::move(name), holds, vacuous, std::move(detail)});
    };

    add("root-preserved", st.layers[0].size() == 1 && st.layers[0][0] == st.root);

    bool orphans_ok = true;
    std::string orphan_detail;
    for (int i = 1; i <= k && orphans_ok; ++i) {
        for (Vertex v : st.layers[i]) {
            if (st.parents_of(v).empty()) {
                orphans_ok = false;
                orphan_detail = "vertex " + std::to_string(v) + " in layer " + std::to_string(i);
                break;
            }
        }
    }
    add("no-orphans", orphans_ok, false, orphan_detail);

    // disjointness of layers, bad sets, unexplored: guaranteed by the
    // status array unless it was corrupted; verify membership agreement
    bool disjoint_ok = true;
    for (int i = 0; i <= k && disjoint_ok; ++i)
        for (Vertex v : st.layers[i])
            if (st.status[v] != i) disjoint_ok = false;
    for (const auto& bs : st.bad_sets)
        for (Vertex v : bs)
            if (st.status[v] != ExplorationState::kStatusBad) disjoint_ok = false;
    add("partition", disjoint_ok);

    // tree-likeness: every pair (L_i, L_j), j < k, is regular
    bool regular_ok = true;
    std::string regular_detail;
    for (int i = 0; i < k && regular_ok; ++i) {
        for (std::size_t pos = 0; pos < st.layers[i].size() && regular_ok; ++pos) {
            for (const auto& [target, cnt] : st.path_counts[i][pos]) {
                const int j = st.status[target];
                if (j >= k) continue;
                if (cnt > c.regularity[j - i - 1]) {
                    regular_ok = false;
                    regular_detail = "pair (" + std::to_string(st.layers[i][pos]) + "," +
                                     std::to_string(target) + ") count " + cnt.str();
                    break;
                }
            }
        }
    }
    add("explored-part-tree-like", regular_ok, false, regular_detail);

    bool bad_small_ok = true;
    for (std::size_t j = 1; j <= st.bad_sets.size(); ++j) {
        const BigInt cap = c.bad_set_cap[j] * bigint_pow_u64(dmin, static_cast<std::uint32_t>(j - 1));
        if (BigInt(st.bad_sets[j - 1].size()) > cap) bad_small_ok = false;
    }
    add("bad-sets-small", bad_small_ok);

    // branching: P(r, L_k) >= dmin^{k-1} (dmin - loss), meaningful only
    // when dmin exceeds the loss budget
    const BigInt& loss = c.branching_loss[std::min<std::size_t>(k, c.branching_loss.size() - 1)];
    BigInt root_paths = 0;
    for (Vertex v : st.layers[k]) root_paths += st.count_from_root(v);
    report.root_paths_to_top = root_paths;
    if (BigInt(dmin) > loss) {
        const BigInt lower = bigint_pow_u64(dmin, k - 1) * (BigInt(dmin) - loss);
        add("tree-growing", root_paths >= lower);
    } else {
        add("tree-growing", true, true, "min degree does not exceed the loss budget");
    }

    // children supply: explored/unexplored degree conditions
    bool supply_ok = true;
    std::set<Vertex> bad_top;
    if (!st.bad_sets.empty())
        bad_top.insert(st.bad_sets.back().begin(), st.bad_sets.back().end());
    for (Vertex v : st.layers[k]) {
        std::uint64_t cnt = 0;
        for (const Edge& e : st.host->adj[v]) {
            const int sstat = st.status[e.to];
            if (sstat == k - 1 || sstat == ExplorationState::kStatusUnexplored ||
                (sstat == ExplorationState::kStatusBad && bad_top.count(e.to)))
                ++cnt;
        }
        if (cnt < dmin) {
            supply_ok = false;
            break;
        }
    }
    if (supply_ok) {
        for (Vertex v = 0; v < st.host->vertex_count(); ++v) {
            if (st.status[v] != ExplorationState::kStatusUnexplored) continue;
            std::uint64_t cnt = 0;
            for (const Edge& e : st.host->adj[v]) {
                const int sstat = st.status[e.to];
                if (sstat == k || sstat == ExplorationState::kStatusUnexplored) ++cnt;
            }
            if (cnt < dmin) {
                supply_ok = false;
                break;
            }
        }
    }
    add("children-supply", supply_ok);
}

}  // namespace

StageReport explore_step(ExplorationState& state, const ExplorationConstants& c, std::uint64_t dmin,
                         std::uint64_t dmax) {
    const int k = state.stage();
    StageReport report;
    report.stage = k + 1;

    recompute_path_counts(state);
    BadSetResult bad = compute_bad_set(state, c, dmax);
    report.bad_set_bound_holds = bad.bound_holds;
    report.violators_removed = bad.all.size();

    std::set<Vertex> removal(bad.all.begin(), bad.all.end());

    // vertices with too many neighbors in the previous bad set
    if (k >= 2 && !state.bad_sets.empty()) {
        const auto& prev_bad = state.bad_sets.back();
        std::set<Vertex> prev(prev_bad.begin(), prev_bad.end());
        const BigInt heavy_threshold = c.degree_spread * c.regularity[k - 1];
        for (Vertex v : state.layers[k]) {
            if (removal.count(v)) continue;
            std::uint64_t cnt = 0;
            for (const Edge& e : state.host->adj[v])
                if (prev.count(e.to)) ++cnt;
            if (BigInt(cnt) >= heavy_threshold) {
                removal.insert(v);
                ++report.heavy_removed;
            }
        }
    }

    // shrink the top layer, record the new bad set
    std::vector<Vertex> survivors;
    for (Vertex v : state.layers[k]) {
        if (removal.count(v))
            state.status[v] = ExplorationState::kStatusBad;
        else
            survivors.push_back(v);
    }
    state.layers[k] = survivors;
    state.bad_sets.emplace_back(removal.begin(), removal.end());

    // open the next layer from unexplored neighbors
    std::set<Vertex> next_layer;
    for (Vertex v : survivors)
        for (const Edge& e : state.host->adj[v])
            if (state.status[e.to] == ExplorationState::kStatusUnexplored) next_layer.insert(e.to);
    std::vector<Vertex> next(next_layer.begin(), next_layer.end());
    for (Vertex v : next) state.status[v] = k + 1;
    state.layers.push_back(std::move(next));

    recompute_path_counts(state);

    for (const auto& L : state.layers) report.layer_sizes.push_back(L.size());
    for (const auto& B : state.bad_sets) report.bad_set_sizes.push_back(B.size());
    check_properties(state, c, dmin, report);
    return report;
}

namespace {

struct LinearPath {
    std::vector<Vertex> verts;  // from a vertex of A (layer i) to one of B (layer k)
};

void enumerate_linear(const ExplorationState& st, Vertex from, int k, std::vector<Vertex>& cur,
                      std::vector<LinearPath>& out, const std::set<Vertex>& targets) {
    const Vertex v = cur.back();
    const int lay = st.status[v];
    if (lay == k) {
        if (targets.count(v)) out.push_back({cur});
        return;
    }
    for (const Edge& e : st.host->adj[v]) {
        if (st.status[e.to] == lay + 1) {
            cur.push_back(e.to);
            enumerate_linear(st, from, k, cur, out, targets);
            cur.pop_back();
        }
    }
}

}  // namespace

EmbedResult embed_theta(const ExplorationState& state, const ExplorationConstants& c, Vertex anchor,
                        const std::vector<Vertex>& A, const std::vector<Vertex>& B,
                        std::uint64_t dmax) {
    EmbedResult res;
    const int k = state.stage();
    const int a_layer = state.status[anchor];
    if (a_layer < 0 || a_layer > k - 2) {
        res.failure = {"hypotheses", "anchor layer admits no nontrivial path families"};
        return res;
    }
    const int i = a_layer + 1;
    const std::uint64_t ell = c.ell, t = c.t;
    const BigInt& reg = c.regularity[k - i];
    const std::uint64_t lt = ell * t;

    // all linear paths from A into B
    std::set<Vertex> targets(B.begin(), B.end());
    std::vector<LinearPath> paths;
    for (Vertex a : A) {
        if (state.status[a] != i) {
            res.failure = {"hypotheses", "A is not a subset of the layer below the anchor"};
            return res;
        }
        std::vector<Vertex> cur = {a};
        enumerate_linear(state, a, k, cur, paths, targets);
    }

    const BigInt total = paths.size();
    res.hypotheses_held = !A.empty() && !B.empty() &&
                          total > BigInt(A.size()) * 2 * ell * t * bigint_pow_u64(dmax, k - i - 1) &&
                          total > BigInt(B.size()) * reg;

    // Part 1: trim members with few incoming families, then prefixes that
    // extend to too few full paths, to a fixpoint
    std::vector<char> alive(paths.size(), 1);
    std::set<Vertex> live_b(B.begin(), B.end());
    std::uint64_t removed = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<Vertex, std::uint64_t> per_b;
        for (std::size_t p = 0; p < paths.size(); ++p)
            if (alive[p]) ++per_b[paths[p].verts.back()];
        for (auto it = live_b.begin(); it != live_b.end();) {
            const std::uint64_t cnt = per_b.count(*it) ? per_b[*it] : 0;
            if (BigInt(cnt) * 2 <= reg) {
                for (std::size_t p = 0; p < paths.size(); ++p)
                    if (alive[p] && paths[p].verts.back() == *it) {
                        alive[p] = 0;
                        ++removed;
                    }
                it = live_b.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
        // group by prefix (path minus its endpoint)
        std::map<std::vector<Vertex>, std::vector<std::size_t>> by_prefix;
        for (std::size_t p = 0; p < paths.size(); ++p) {
            if (!alive[p]) continue;
            std::vector<Vertex> prefix(paths[p].verts.begin(), paths[p].verts.end() - 1);
            by_prefix[std::move(prefix)].push_back(p);
        }
        for (const auto& [prefix, members] : by_prefix) {
            if (members.size() < lt) {
                for (std::size_t p : members) {
                    alive[p] = 0;
                    ++removed;
                }
                changed = true;
            }
        }
    }

    if (res.hypotheses_held && BigInt(removed) >= total) {
        res.failure = {"trim", "total removals reached the family count despite the hypotheses"};
        return res;
    }
    if (live_b.empty()) {
        res.failure = {"trim", "every member was trimmed"};
        return res;
    }

    // Part 2: per surviving member, a bundle of paths pairwise disjoint
    // apart from the member itself
    std::map<Vertex, std::vector<std::size_t>> bundles;
    bool checked_overlap_bound = false;
    for (Vertex b : live_b) {
        std::vector<std::size_t> bundle;
        std::set<Vertex> used;
        for (std::size_t p = 0; p < paths.size(); ++p) {
            if (!alive[p] || paths[p].verts.back() != b) continue;
            bool disjoint = true;
            for (std::size_t idx = 0; idx + 1 < paths[p].verts.size() && disjoint; ++idx)
                if (used.count(paths[p].verts[idx])) disjoint = false;
            if (!disjoint) continue;
            if (res.hypotheses_held && !checked_overlap_bound) {
                // paths meeting this path's interior are few relative to
                // the regularity threshold
                std::set<Vertex> interior(paths[p].verts.begin(), paths[p].verts.end() - 1);
                std::uint64_t overlapping = 0;
                for (std::size_t q2 = 0; q2 < paths.size(); ++q2) {
                    if (!alive[q2] || q2 == p) continue;
                    for (Vertex v : interior)
                        if (std::find(paths[q2].verts.begin(), paths[q2].verts.end(), v) !=
                            paths[q2].verts.end()) {
                            ++overlapping;
                            break;
                        }
                }
                if (BigInt(overlapping) * 2 * ell * t > reg)
                    res.failure = {"disjoint-paths", "overlap count exceeded the Catalan budget"};
                checked_overlap_bound = true;
            }
            bundle.push_back(p);
            for (std::size_t idx = 0; idx + 1 < paths[p].verts.size(); ++idx)
                used.insert(paths[p].verts[idx]);
            if (bundle.size() == lt) break;
        }
        if (bundle.size() >= lt) bundles[b] = std::move(bundle);
    }
    if (bundles.empty()) {
        res.failure = {"disjoint-paths", "no member kept a full disjoint bundle"};
        return res;
    }

    // Part 3: contact layer, auxiliary bipartite graph, spider embedding
    std::set<Vertex> contact;  // second-to-last vertices of surviving paths
    for (std::size_t p = 0; p < paths.size(); ++p)
        if (alive[p] && bundles.count(paths[p].verts.back()))
            contact.insert(paths[p].verts[paths[p].verts.size() - 2]);
    std::vector<Vertex> members;
    for (auto& [b, _] : bundles) members.push_back(b);

    auto aux_neighbors = [&](Vertex v, bool v_is_member) {
        std::vector<Vertex> out;
        for (const Edge& e : state.host->adj[v]) {
            if (v_is_member ? contact.count(e.to) > 0 : bundles.count(e.to) > 0) out.push_back(e.to);
        }
        return out;
    };

    const int tree_len = static_cast<int>(ell) - (k - i) - 1;
    std::vector<std::vector<Vertex>> legs;  // each from the hub to a member
    Vertex hub = -1;

    if (tree_len == 0) {
        hub = members.front();
        legs.assign(t, {hub});
    } else {
        // min degree of the contact graph must support the tree
        for (Vertex s : contact)
            if (aux_neighbors(s, false).size() < lt) {
                res.failure = {"min-degree", "contact vertex " + std::to_string(s) + " is too sparse"};
                if (res.hypotheses_held) return res;
            }
        for (Vertex b : members)
            if (aux_neighbors(b, true).size() < lt) {
                res.failure = {"min-degree", "member " + std::to_string(b) + " is too sparse"};
                if (res.hypotheses_held) return res;
            }
        res.failure.reset();

        // hub side determined by leg parity: legs of odd length start in
        // the contact layer, even ones inside the member set
        const bool hub_in_contact = (tree_len % 2 == 1);
        std::vector<Vertex> hub_candidates =
            hub_in_contact ? std::vector<Vertex>(contact.begin(), contact.end()) : members;

        for (Vertex u : hub_candidates) {
            std::set<Vertex> used = {u};
            std::vector<std::vector<Vertex>> trial;
            // greedy leg growth with backtracking over neighbor choices
            std::function<bool(std::vector<Vertex>&, int)> grow = [&](std::vector<Vertex>& leg,
                                                                      int remaining) -> bool {
                if (remaining == 0) return bundles.count(leg.back()) > 0;
                const bool at_member = bundles.count(leg.back()) > 0 && leg.back() != u;
                const bool cur_in_contact = hub_in_contact ? (leg.size() % 2 == 1) : (leg.size() % 2 == 0);
                (void)at_member;
                for (Vertex nb : aux_neighbors(leg.back(), !cur_in_contact)) {
                    if (used.count(nb)) continue;
                    leg.push_back(nb);
                    used.insert(nb);
                    if (grow(leg, remaining - 1)) return true;
                    used.erase(nb);
                    leg.pop_back();
                }
                return false;
            };
            bool ok = true;
            for (std::uint64_t j = 0; j < t && ok; ++j) {
                std::vector<Vertex> leg = {u};
                if (!grow(leg, tree_len))
                    ok = false;
                else
                    trial.push_back(leg);
            }
            if (ok) {
                hub = u;
                legs = std::move(trial);
                break;
            }
        }
        if (hub < 0) {
            res.failure = {"tree", "no hub admitted " + std::to_string(t) + " disjoint legs"};
            return res;
        }
    }

    // extensions: for each leg endpoint, a bundle path avoiding everything
    // already placed
    std::set<Vertex> placed;
    for (const auto& leg : legs)
        for (Vertex v : leg) placed.insert(v);

    ThetaWitness w;
    w.x = anchor;
    for (std::size_t j = 0; j < legs.size(); ++j) {
        const Vertex b = legs[j].back();
        const LinearPath* extension = nullptr;
        for (std::size_t p : bundles[b]) {
            bool free = true;
            for (std::size_t idx = 0; idx + 1 < paths[p].verts.size() && free; ++idx)
                if (placed.count(paths[p].verts[idx]) || paths[p].verts[idx] == anchor) free = false;
            if (free) {
                extension = &paths[p];
                break;
            }
        }
        if (!extension) {
            res.failure = {"extend", "member " + std::to_string(b) + " had no free bundle path"};
            return res;
        }
        for (std::size_t idx = 0; idx + 1 < extension->verts.size(); ++idx)
            placed.insert(extension->verts[idx]);

        std::vector<Vertex> path = {anchor};
        path.insert(path.end(), extension->verts.begin(), extension->verts.end());
        // append the leg hub-ward, skipping the shared member endpoint
        for (auto it = legs[j].rbegin() + 1; it != legs[j].rend(); ++it) path.push_back(*it);
        w.paths.push_back(std::move(path));
    }
    w.y = hub;

    std::string why;
    if (!validate_witness(*state.host, w, static_cast<int>(ell), static_cast<int>(t), &why)) {
        res.failure = {"validate", why};
        return res;
    }
    res.witness = std::move(w);
    res.failure.reset();
    return res;
}

DegreeRegularization regularize_degrees(Vertex n, const std::vector<VertexPair>& edges,
                                        std::uint32_t ell, double c) {
    DegreeRegularization out;
    if (n <= 0 || edges.empty()) {
        out.precondition_met = false;
        out.note = "empty input";
        return out;
    }

    // greedy max-cut bipartization: place each vertex on the side with
    // fewer already-placed neighbors, keeping at least half the edges
    std::vector<std::vector<Vertex>> nbrs(n);
    for (auto [u, v] : edges) {
        if (u == v) continue;
        nbrs[u].push_back(v);
        nbrs[v].push_back(u);
    }
    std::vector<int> side(n, -1);
    for (Vertex v = 0; v < n; ++v) {
        int s0 = 0, s1 = 0;
        for (Vertex w : nbrs[v]) {
            if (side[w] == 0) ++s0;
            if (side[w] == 1) ++s1;
        }
        side[v] = s0 <= s1 ? 0 : 1;
    }

    std::set<VertexPair> cross;
    for (auto [u, v] : edges) {
        if (u == v || side[u] == side[v]) continue;
        cross.insert({std::min(u, v), std::max(u, v)});
    }

    const double precondition_edges = 6.0 * ell * c * std::pow(static_cast<double>(n), 1.0 + 1.0 / ell);
    out.precondition_met = static_cast<double>(edges.size()) >= precondition_edges;

    std::vector<std::set<Vertex>> adj(n);
    for (auto [u, v] : cross) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    std::vector<char> active(n, 1);
    for (Vertex v = 0; v < n; ++v)
        if (adj[v].empty()) active[v] = 0;

    auto active_count = [&] {
        return std::count(active.begin(), active.end(), char(1));
    };

    // peel to the target minimum degree, then trim vertices above the
    // spread cap, re-peeling until stable
    const double spread = std::pow(20.0 * ell, 2.0 * ell);
    bool stable = false;
    const std::uint64_t target =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(c * std::pow((double)n, 1.0 / ell))));
    while (!stable) {
        stable = true;
        bool peeled = true;
        while (peeled) {
            peeled = false;
            for (Vertex v = 0; v < n; ++v) {
                if (!active[v]) continue;
                if (adj[v].size() < target) {
                    for (Vertex w : adj[v]) adj[w].erase(v);
                    adj[v].clear();
                    active[v] = 0;
                    peeled = true;
                }
            }
        }
        const double vc = static_cast<double>(active_count());
        if (vc == 0) break;
        const double cap = spread * c * std::pow(vc, 1.0 / ell);
        for (Vertex v = 0; v < n; ++v) {
            if (!active[v]) continue;
            if (static_cast<double>(adj[v].size()) > cap) {
                for (Vertex w : adj[v]) adj[w].erase(v);
                adj[v].clear();
                active[v] = 0;
                stable = false;
            }
        }
    }

    if (active_count() == 0) {
        out.precondition_met = false;
        out.note = "peeling emptied the graph (degree target " + std::to_string(target) + ")";
        return out;
    }

    // compress: left block then right block
    std::vector<Vertex> left_ids, right_ids;
    for (Vertex v = 0; v < n; ++v) {
        if (!active[v]) continue;
        (side[v] == 0 ? left_ids : right_ids).push_back(v);
    }
    out.graph = BipartiteGraph(static_cast<Vertex>(left_ids.size()), static_cast<Vertex>(right_ids.size()));
    out.graph.provenance = "regularized";
    std::vector<Vertex> new_id(n, -1);
    Vertex next = 0;
    for (Vertex v : left_ids) new_id[v] = next++;
    for (Vertex v : right_ids) new_id[v] = next++;
    out.original_ids.insert(out.original_ids.end(), left_ids.begin(), left_ids.end());
    out.original_ids.insert(out.original_ids.end(), right_ids.begin(), right_ids.end());
    for (Vertex v = 0; v < n; ++v) {
        if (!active[v] || side[v] != 0) continue;
        for (Vertex w : adj[v]) out.graph.add_edge(new_id[v], new_id[w]);
    }

    out.min_degree = UINT64_MAX;
    out.max_degree = 0;
    for (Vertex v = 0; v < out.graph.vertex_count(); ++v) {
        out.min_degree = std::min<std::uint64_t>(out.min_degree, out.graph.adj[v].size());
        out.max_degree = std::max<std::uint64_t>(out.max_degree, out.graph.adj[v].size());
    }
    return out;
}

Certificate run_certifier(const BipartiteGraph& g, std::uint32_t ell, std::uint64_t t,
                          RootPolicy policy, Vertex explicit_root) {
    if (g.vertex_count() == 0) throw std::invalid_argument("run_certifier: empty host");
    Certificate cert;
    cert.ell = ell;
    cert.t = t;

    std::uint64_t dmin = UINT64_MAX, dmax = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        dmin = std::min<std::uint64_t>(dmin, g.adj[v].size());
        dmax = std::max<std::uint64_t>(dmax, g.adj[v].size());
    }
    cert.dmin = dmin;
    cert.dmax = dmax;

    Vertex root = explicit_root;
    if (policy == RootPolicy::MaxDegree) {
        root = 0;
        for (Vertex v = 1; v < g.vertex_count(); ++v)
            if (g.adj[v].size() > g.adj[root].size()) root = v;
    }
    if (root < 0 || root >= g.vertex_count())
        throw std::invalid_argument("run_certifier: root out of range");
    cert.root = root;

    const ExplorationConstants constants = compute_constants(ell, t);
    ExplorationState state = init_exploration(g, root);

    for (std::uint32_t k = 1; k < ell; ++k) {
        // candidate obstructions before the step mutates the layer
        recompute_path_counts(state);
        BadSetResult pre = compute_bad_set(state, constants, dmax);
        for (const auto& level : pre.levels) {
            if (!level.hypotheses_hold && pre.bound_holds) continue;
            EmbedResult er = embed_theta(state, constants, level.anchor,
                                         state.children_of(level.anchor), level.members, dmax);
            if (er.witness) {
                cert.witness = er.witness;
                cert.note = "embedded a witness at stage " + std::to_string(k);
                break;
            }
            if (er.failure) cert.embed_failures.push_back(*er.failure);
        }
        if (cert.witness) break;

        StageReport report = explore_step(state, constants, dmin, dmax);
        cert.stages.push_back(std::move(report));
        if (state.layers.back().empty()) {
            cert.note = "exploration frontier emptied at stage " + std::to_string(k + 1);
            break;
        }
    }

    if (!cert.witness && state.stage() == static_cast<int>(ell)) {
        recompute_path_counts(state);
        cert.final_root_paths = state.count_from_root_to_set(state.layers[ell]);
        cert.final_upper = BigInt(state.layers[ell].size()) * constants.regularity[ell - 1];
        if (BigInt(dmin) > constants.branching_loss[ell]) {
            cert.final_lower = bigint_pow_u64(dmin, ell - 1) * (BigInt(dmin) - constants.branching_loss[ell]);
            cert.final_lower_vacuous = false;
        }
        cert.completed = true;
    }
    return cert;
}

std::string Certificate::to_json() const {
    nlohmann::json j;
    j["ell"] = ell;
    j["t"] = t;
    j["root"] = root;
    j["dmin"] = dmin;
    j["dmax"] = dmax;
    j["completed"] = completed;
    j["note"] = note;
    nlohmann::json stages_json = nlohmann::json::array();
    for (const auto& s : stages) {
        nlohmann::json sj;
        sj["stage"] = s.stage;
        sj["layer_sizes"] = s.layer_sizes;
        sj["bad_set_sizes"] = s.bad_set_sizes;
        sj["root_paths_to_top"] = s.root_paths_to_top.str();
        sj["violators_removed"] = s.violators_removed;
        sj["heavy_removed"] = s.heavy_removed;
        sj["bad_set_bound_holds"] = s.bad_set_bound_holds;
        nlohmann::json props = nlohmann::json::array();
        for (const auto& p : s.properties) {
            props.push_back({{"name", p.name},
                             {"holds", p.holds},
                             {"vacuous", p.vacuous},
                             {"detail", p.detail}});
        }
        sj["properties"] = std::move(props);
        stages_json.push_back(std::move(sj));
    }
    j["stages"] = std::move(stages_json);
    j["final_root_paths"] = final_root_paths.str();
    j["final_upper"] = final_upper.str();
    j["final_lower"] = final_lower_vacuous ? "vacuous" : final_lower.str();
    if (witness) {
        nlohmann::json wj;
        wj["x"] = witness->x;
        wj["y"] = witness->y;
        wj["paths"] = witness->paths;
        j["witness"] = std::move(wj);
    }
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& f : embed_failures) fails.push_back({{"part", f.part}, {"detail", f.detail}});
    j["embed_failures"] = std::move(fails);
    return j.dump(2);
}

}  // namespace thetaforge
