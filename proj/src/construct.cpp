#include "thetaforge/construct.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace thetaforge {

namespace {

std::uint64_t ipow(std::uint64_t base, std::uint32_t e) {
    std::uint64_t r = 1;
    while (e--) r *= base;
    return r;
}

// coordinates of point index in F_q^ell, lowest coordinate first
void point_coords(std::uint64_t index, std::uint32_t q, std::uint32_t ell,
                  std::vector<FieldElement>& out) {
    out.resize(ell);
    for (std::uint32_t i = 0; i < ell; ++i) {
        out[i] = static_cast<FieldElement>(index % q);
        index /= q;
    }
}

BipartiteGraph make_vertex_shell(const PolynomialSystem& sys, const Field& field,
                                 const GenerationCaps& caps) {
    const std::uint64_t side = ipow(field.q(), sys.ell);
    if (2 * side > caps.vertex_cap)
        throw std::length_error("edge generation: vertex cap exceeded (2*q^ell = " +
                                std::to_string(2 * side) + ")");
    BipartiteGraph g(static_cast<Vertex>(side), static_cast<Vertex>(side));
    g.meta_ell = sys.ell;
    g.meta_q = field.q();
    g.meta_seed = sys.seed;
    g.provenance = "random-algebraic";
    g.labels.resize(g.vertex_count());
    std::vector<FieldElement> coords;
    for (std::uint64_t i = 0; i < side; ++i) {
        point_coords(i, field.q(), sys.ell, coords);
        g.labels[i] = coords;
        g.labels[side + i] = coords;
    }
    return g;
}

// Factorization of the 2*ell-variable basis through the U/V split: every
// monomial u^a v^b indexes into the ell-variable basis twice. This turns
// the per-pair vanishing test into a dot product between a per-u
// aggregated coefficient vector and a per-v monomial vector.
struct SplitBasis {
    std::shared_ptr<const MonomialBasis> half;  // ell variables, degree <= d
    std::vector<std::uint32_t> u_index;         // per full-basis monomial
    std::vector<std::uint32_t> v_index;
};

SplitBasis split_basis(const PolynomialSystem& sys) {
    SplitBasis sb;
    sb.half = enumerate_monomials(sys.ell, sys.d_poly);
    std::map<std::vector<std::uint8_t>, std::uint32_t> pos;
    for (std::uint32_t i = 0; i < sb.half->size(); ++i) pos[sb.half->exponents[i]] = i;

    const MonomialBasis& full = *sys.basis;
    sb.u_index.resize(full.size());
    sb.v_index.resize(full.size());
    for (std::size_t m = 0; m < full.size(); ++m) {
        std::vector<std::uint8_t> ue(full.exponents[m].begin(), full.exponents[m].begin() + sys.ell);
        std::vector<std::uint8_t> ve(full.exponents[m].begin() + sys.ell, full.exponents[m].end());
        sb.u_index[m] = pos.at(ue);
        sb.v_index[m] = pos.at(ve);
    }
    return sb;
}

// Monomial values of the half-basis at one point, via per-coordinate
// power tables.
void half_monomial_values(const MonomialBasis& half, const Field& field,
                          std::span<const FieldElement> point, FieldElement* out) {
    std::vector<FieldElement> powers((std::size_t)half.s * (half.d + 1));
    for (std::uint32_t i = 0; i < half.s; ++i) {
        FieldElement* row = &powers[(std::size_t)i * (half.d + 1)];
        row[0] = 1;
        for (std::uint32_t e = 1; e <= half.d; ++e) row[e] = field.mul(row[e - 1], point[i]);
    }
    for (std::size_t m = 0; m < half.size(); ++m) {
        FieldElement v = 1;
        const auto& exps = half.exponents[m];
        for (std::uint32_t i = 0; i < half.s; ++i)
            if (exps[i]) v = field.mul(v, powers[(std::size_t)i * (half.d + 1) + exps[i]]);
        out[m] = v;
    }
}

}  // namespace

BipartiteGraph edges_from_system_parallel(const PolynomialSystem& sys, const Field& field,
                                          const GenerationCaps& caps) {
    BipartiteGraph g = make_vertex_shell(sys, field, caps);
    const std::uint64_t side = static_cast<std::uint64_t>(g.left_count);
    const SplitBasis sb = split_basis(sys);
    const std::size_t hb = sb.half->size();
    const std::size_t npolys = sys.polys.size();
    const bool prime = field.prime();
    const std::uint64_t q = field.q();

    // all v-monomial vectors up front
    std::vector<FieldElement> vmono(side * hb);
#pragma omp parallel
    {
        std::vector<FieldElement> coords;
#pragma omp for schedule(static)
        for (std::int64_t iv = 0; iv < static_cast<std::int64_t>(side); ++iv) {
            point_coords(iv, field.q(), sys.ell, coords);
            half_monomial_values(*sb.half, field, coords, &vmono[iv * hb]);
        }
    }

    std::vector<std::vector<Vertex>> rows(side);
#pragma omp parallel
    {
        std::vector<FieldElement> coords;
        std::vector<FieldElement> umono(hb);
        std::vector<std::uint64_t> acc(hb);
        std::vector<FieldElement> gvec(npolys * hb);
#pragma omp for schedule(dynamic)
        for (std::int64_t iu = 0; iu < static_cast<std::int64_t>(side); ++iu) {
            point_coords(iu, field.q(), sys.ell, coords);
            half_monomial_values(*sb.half, field, coords, umono.data());

            // aggregate each polynomial over the u-part: gvec[p][b] =
            // sum_{monomials with v-part b} coeff * u^a
            for (std::size_t p = 0; p < npolys; ++p) {
                const auto& coeffs = sys.polys[p].coeffs;
                if (prime) {
                    std::fill(acc.begin(), acc.end(), 0);
                    for (std::size_t m = 0; m < coeffs.size(); ++m)
                        acc[sb.v_index[m]] += (std::uint64_t)coeffs[m] * umono[sb.u_index[m]];
                    for (std::size_t b = 0; b < hb; ++b)
                        gvec[p * hb + b] = static_cast<FieldElement>(acc[b] % q);
                } else {
                    std::fill(gvec.begin() + p * hb, gvec.begin() + (p + 1) * hb, 0);
                    for (std::size_t m = 0; m < coeffs.size(); ++m) {
                        FieldElement& slot = gvec[p * hb + sb.v_index[m]];
                        slot = field.add(slot, field.mul(coeffs[m], umono[sb.u_index[m]]));
                    }
                }
            }

            for (std::uint64_t iv = 0; iv < side; ++iv) {
                const FieldElement* vm = &vmono[iv * hb];
                bool edge = true;
                for (std::size_t p = 0; p < npolys && edge; ++p) {
                    const FieldElement* gv = &gvec[p * hb];
                    if (prime) {
                        std::uint64_t dot = 0;
                        for (std::size_t b = 0; b < hb; ++b) dot += (std::uint64_t)gv[b] * vm[b];
                        if (dot % q != 0) edge = false;
                    } else {
                        FieldElement dot = 0;
                        for (std::size_t b = 0; b < hb; ++b)
                            dot = field.add(dot, field.mul(gv[b], vm[b]));
                        if (dot != 0) edge = false;
                    }
                }
                if (edge) rows[iu].push_back(static_cast<Vertex>(side + iv));
            }
        }
    }

    for (std::uint64_t iu = 0; iu < side; ++iu)
        for (Vertex v : rows[iu]) g.add_edge(static_cast<Vertex>(iu), v);
    return g;
}

BipartiteGraph edges_from_system_serial(const PolynomialSystem& sys, const Field& field,
                                        const GenerationCaps& caps) {
    BipartiteGraph g = make_vertex_shell(sys, field, caps);
    const std::uint64_t side = static_cast<std::uint64_t>(g.left_count);
    std::vector<FieldElement> u, v;
    for (std::uint64_t iu = 0; iu < side; ++iu) {
        point_coords(iu, field.q(), sys.ell, u);
        for (std::uint64_t iv = 0; iv < side; ++iv) {
            point_coords(iv, field.q(), sys.ell, v);
            if (evaluate_system(sys, field, u, v))
                g.add_edge(static_cast<Vertex>(iu), static_cast<Vertex>(side + iv));
        }
    }
    return g;
}

BipartiteGraph random_algebraic_graph(std::uint32_t ell, const Field& field, std::uint32_t d_poly,
                                      std::uint64_t seed, const GenerationCaps& caps,
                                      PolynomialSystem* system_out, bool parallel) {
    PolynomialSystem sys = sample_system(ell, field, d_poly, seed, caps.coeff_cap);
    BipartiteGraph g = parallel ? edges_from_system_parallel(sys, field, caps)
                                : edges_from_system_serial(sys, field, caps);
    if (system_out) *system_out = std::move(sys);
    return g;
}

std::uint64_t path_count_quantile(const BipartiteGraph& g, int max_len, double quantile,
                                  std::uint64_t exclude_above) {
    const Vertex n = g.vertex_count();
    std::vector<std::vector<std::uint64_t>> per_source(n);
#pragma omp parallel for schedule(dynamic)
    for (Vertex x = 0; x < n; ++x) per_source[x] = path_counts_from(g, x, max_len);

    std::vector<std::uint64_t> counts;
    counts.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Vertex x = 0; x < n; ++x)
        for (Vertex y = x + 1; y < n; ++y)
            if (per_source[x][y] <= exclude_above) counts.push_back(per_source[x][y]);
    if (counts.empty()) return 0;
    std::sort(counts.begin(), counts.end());
    std::size_t idx = static_cast<std::size_t>(std::ceil(quantile * counts.size()));
    if (idx > 0) --idx;
    if (idx >= counts.size()) idx = counts.size() - 1;
    return counts[idx];
}

EstimateTResult estimate_T(std::uint32_t ell, std::uint32_t q, std::uint32_t d_poly,
                           std::uint32_t num_seeds, std::uint64_t base_seed,
                           double survival_fraction, const GenerationCaps& caps) {
    if (num_seeds < 1) throw std::invalid_argument("estimate_T: num_seeds must be >= 1");
    if (survival_fraction <= 0.0 || survival_fraction >= 1.0)
        throw std::invalid_argument("estimate_T: survival_fraction must lie in (0, 1)");
    Field field(q);
    EstimateTResult res;
    for (std::uint32_t s = 0; s < num_seeds; ++s) {
        BipartiteGraph g = random_algebraic_graph(ell, field, d_poly, base_seed + s, caps);
        const Vertex n = g.vertex_count();
        std::vector<std::vector<std::uint64_t>> per_source(n);
#pragma omp parallel for schedule(dynamic)
        for (Vertex x = 0; x < n; ++x)
            per_source[x] = path_counts_from(g, x, static_cast<int>(ell));
        std::vector<std::uint64_t> counts;
        counts.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (Vertex x = 0; x < n; ++x)
            for (Vertex y = x + 1; y < n; ++y) counts.push_back(per_source[x][y]);
        std::sort(counts.begin(), counts.end(), std::greater<>());
        // Each bad pair costs up to two vertices; allow at most the slack
        // the survival fraction leaves.
        const std::size_t budget =
            static_cast<std::size_t>((1.0 - survival_fraction) * n) / 2;
        std::uint64_t T_s = 1;
        if (!counts.empty() && budget < counts.size()) T_s = counts[budget] + 1;
        res.per_seed.push_back(T_s);
    }
    res.T = *std::max_element(res.per_seed.begin(), res.per_seed.end());
    res.min_seed_value = *std::min_element(res.per_seed.begin(), res.per_seed.end());
    res.max_seed_value = res.T;
    return res;
}

BaseGraphResult build_base_graph(std::uint32_t ell, std::uint64_t n, std::uint64_t T_eff,
                                 std::uint64_t seed, std::int64_t d_poly, bool cross_side_only,
                                 const GenerationCaps& caps) {
    BaseGraphResult res;
    res.field = largest_prime_power_with(n, ell);
    res.n_requested = n;
    res.T_eff = T_eff;
    Field field(res.field.q);
    const std::uint32_t d = d_poly < 0 ? default_d_poly(ell) : static_cast<std::uint32_t>(d_poly);

    BipartiteGraph g = random_algebraic_graph(ell, field, d, seed, caps, &res.system);
    res.edges_before = g.edge_count();

    BadPairOptions opts;
    opts.cross_side_only = cross_side_only;
    auto pairs = find_bad_pairs(g, T_eff, static_cast<int>(ell), opts);
    res.bad_pairs_removed = pairs.size();
    RemovalResult removal = remove_bad_pairs(g, pairs);
    res.edges_removed = removal.edges_removed;
    res.vertices_removed = removal.vertices_removed;
    res.graph = std::move(removal.graph);
    res.graph.provenance = "base-graph";

    // one round suffices: deleting vertices cannot create paths
    auto recheck = find_bad_pairs(res.graph, T_eff, static_cast<int>(ell), opts);
    if (!recheck.empty()) throw std::logic_error("build_base_graph: bad pairs survived removal");

    res.quarter_bound = 0.25 * std::pow(static_cast<double>(n), 1.0 + 1.0 / ell);
    return res;
}

std::string BaseGraphResult::report_json() const {
    nlohmann::json j;
    j["pipeline"] = "base-graph";
    j["ell"] = system.ell;
    j["q"] = field.q;
    j["n_requested"] = n_requested;
    j["T_eff"] = T_eff;
    j["seed"] = system.seed;
    j["d_poly"] = system.d_poly;
    j["edges_before_removal"] = edges_before;
    j["edges_removed"] = edges_removed;
    j["edges"] = graph.edge_count();
    j["bad_pairs_removed"] = bad_pairs_removed;
    j["vertices_removed"] = vertices_removed;
    j["vertices"] = graph.vertex_count();
    j["quarter_bound"] = quarter_bound;
    return j.dump(2);
}

namespace {

// T_eff = 0 asks for the empirical estimate, taken at the field the full
// vertex budget would select
std::uint64_t resolve_threshold(const ConstructionParams& params) {
    if (params.T_eff != 0) return params.T_eff;
    const FieldSpec fs = largest_prime_power_with(params.n, params.ell);
    const std::uint32_t d =
        params.d_poly < 0 ? default_d_poly(params.ell) : static_cast<std::uint32_t>(params.d_poly);
    return estimate_T(params.ell, fs.q, d, 5, params.seed).T;
}

}  // namespace

OddConstructionResult build_odd_construction(const ConstructionParams& params) {
    if (params.ell < 3 || params.ell % 2 == 0)
        throw std::invalid_argument("build_odd_construction: ell must be odd and >= 3");
    ConstructionParams eff = params;
    eff.T_eff = resolve_threshold(params);
    if (eff.T_eff == 0) eff.T_eff = 1;
    if (params.T_eff == 0 && eff.t > eff.T_eff) {
        // Removal runs on the base graph, whose field comes from the budget
        // n / m, not n.  Re-estimate there once m is known.
        ConstructionParams probe = params;
        probe.n = params.n / ((eff.t - 1) / eff.T_eff);
        eff.T_eff = std::max<std::uint64_t>(resolve_threshold(probe), 1);
    }
    if (eff.t <= eff.T_eff)
        throw std::invalid_argument("build_odd_construction: requires t > T_eff (m would be 0)");
    const ConstructionParams& p = eff;

    OddConstructionResult res;
    res.m = (p.t - 1) / p.T_eff;
    const std::uint64_t base_budget = p.n / res.m;
    res.base = build_base_graph(p.ell, base_budget, p.T_eff, p.seed, p.d_poly,
                                p.cross_side_only, p.caps);
    res.graph = blowup(res.base.graph, static_cast<int>(res.m), params.caps.vertex_cap);
    res.graph.provenance = "odd-construction";
    res.graph.meta_seed = params.seed;

    const double nn = res.graph.vertex_count();
    const double denom = std::pow(static_cast<double>(params.t), 1.0 - 1.0 / params.ell) *
                         std::pow(nn, 1.0 + 1.0 / params.ell);
    res.density_ratio = static_cast<double>(res.graph.edge_count()) / denom;
    return res;
}

std::string OddConstructionResult::report_json() const {
    nlohmann::json j = nlohmann::json::parse(base.report_json());
    j["pipeline"] = "odd-construction";
    j["m"] = m;
    j["blowup_vertices"] = graph.vertex_count();
    j["blowup_edges"] = graph.edge_count();
    j["density_ratio_vs_odd_bound"] = density_ratio;
    return j.dump(2);
}

EvenConstructionResult build_even_construction(const ConstructionParams& params) {
    if (params.ell < 2 || params.ell % 2 == 1)
        throw std::invalid_argument("build_even_construction: ell must be even and >= 2");
    ConstructionParams eff = params;
    eff.T_eff = resolve_threshold(params);
    if (eff.T_eff == 0) eff.T_eff = 1;
    const ConstructionParams& p = eff;

    EvenConstructionResult res;
    res.T_eff = p.T_eff;
    if (p.h > 0) {
        res.h = static_cast<std::uint64_t>(p.h);
    } else {
        double hf = std::pow(static_cast<double>(p.t) / p.T_eff, 1.0 / p.ell);
        res.h = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(hf)));
    }

    res.field = largest_prime_power_with(p.n, p.ell);
    Field field(res.field.q);
    const std::uint32_t d =
        p.d_poly < 0 ? default_d_poly(p.ell) : static_cast<std::uint32_t>(p.d_poly);

    Rng seeder(p.seed);
    std::vector<BipartiteGraph> samples;
    for (std::uint64_t i = 0; i < res.h; ++i) {
        PolynomialSystem sys;
        samples.push_back(random_algebraic_graph(p.ell, field, d, seeder.next(), p.caps, &sys));
        res.systems.push_back(std::move(sys));
    }

    BipartiteGraph unioned = res.h == 1 ? samples[0] : union_multigraph(samples);
    res.union_edge_mass = unioned.edge_count_with_multiplicity();

    SimplifyResult simp = simplify(unioned);
    res.multi_excess = simp.excess_removed;

    const std::uint64_t threshold = p.T_eff * ipow(res.h, p.ell);
    // path counts default to the multigraph with multiplicity; the
    // cross-check flag counts in the simplified graph instead
    const BipartiteGraph& count_host = p.count_simple ? simp.graph : unioned;
    BadPairOptions opts;
    opts.cross_side_only = p.cross_side_only;
    auto pairs = find_bad_pairs(count_host, threshold, static_cast<int>(p.ell), opts);
    res.bad_pairs_removed = pairs.size();

    RemovalResult removal = remove_bad_pairs(simp.graph, pairs);
    res.edges_removed = removal.edges_removed;
    res.graph = std::move(removal.graph);
    res.graph.provenance = "even-construction";
    res.graph.meta_seed = p.seed;

    const double nn = res.graph.vertex_count();
    const double denom = std::pow(static_cast<double>(p.t), 1.0 / p.ell) *
                         std::pow(nn, 1.0 + 1.0 / p.ell);
    res.density_ratio = static_cast<double>(res.graph.edge_count()) / denom;
    return res;
}

std::string EvenConstructionResult::report_json() const {
    nlohmann::json j;
    j["pipeline"] = "even-construction";
    j["ell"] = systems.empty() ? 0 : systems[0].ell;
    j["q"] = field.q;
    j["h"] = h;
    j["T_eff"] = T_eff;
    j["union_edge_mass"] = union_edge_mass;
    j["multi_excess_M"] = multi_excess;
    j["edges_removed"] = edges_removed;
    j["bad_pairs_removed"] = bad_pairs_removed;
    j["edges"] = graph.edge_count();
    j["vertices"] = graph.vertex_count();
    j["density_ratio_vs_even_bound"] = density_ratio;
    return j.dump(2);
}

}  // namespace thetaforge
