#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "thetaforge/construct.hpp"
#include "thetaforge/explore.hpp"
#include "thetaforge/stats.hpp"
#include "thetaforge/theta.hpp"

using namespace thetaforge;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}

void save_graph(const BipartiteGraph& g, const std::string& path) {
    if (path == "-") {
        write_edgelist(std::cout, g);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_edgelist(out, g);
}

BipartiteGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_edgelist(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"theta-free extremal graph construction and certification"};
    app.require_subcommand(1);

    // generate
    std::uint32_t ell = 2, q = 3;
    std::int64_t d_poly = -1;
    std::uint64_t seed = 1;
    std::string output = "-", sidecar, report_path;
    auto* gen = app.add_subcommand("generate", "sample one random algebraic bipartite graph");
    gen->add_option("--ell", ell, "path length parameter (>= 2)")->required();
    gen->add_option("--q", q, "prime power field order")->required();
    gen->add_option("--dpoly", d_poly, "polynomial degree cap (-1 = 2*ell^2)");
    gen->add_option("--seed", seed, "rng seed");
    gen->add_option("--output", output, "edge list path, - for stdout");
    gen->add_option("--sidecar", sidecar, "polynomial system JSON path");

    // build-odd / build-even
    ConstructionParams params;
    auto add_build_opts = [&](CLI::App* cmd) {
        cmd->add_option("--ell", params.ell, "path length parameter")->required();
        cmd->add_option("--t", params.t, "theta multiplicity target")->required();
        cmd->add_option("--n", params.n, "vertex budget")->required();
        cmd->add_option("--T", params.T_eff, "bad-pair threshold (0 = estimate)");
        cmd->add_option("--dpoly", params.d_poly, "polynomial degree cap (-1 = 2*ell^2)");
        cmd->add_option("--seed", params.seed, "rng seed");
        cmd->add_flag("--cross-side-only", params.cross_side_only,
                      "restrict bad pairs to opposite parts");
        cmd->add_option("--output", output, "edge list path, - for stdout");
        cmd->add_option("--report", report_path, "JSON report path");
    };
    auto* odd = app.add_subcommand("build-odd", "blowup construction for odd ell");
    add_build_opts(odd);
    auto* even = app.add_subcommand("build-even", "union construction for even ell");
    add_build_opts(even);
    even->add_option("--union-size", params.h, "number of union constituents (-1 = derived)");
    even->add_flag("--count-simple", params.count_simple,
                   "count bad-pair paths without multiplicity");

    // verify-theta
    std::string input;
    int theta_t = 2;
    auto* verify = app.add_subcommand("verify-theta", "exact theta detection on an edge list");
    verify->add_option("--ell", ell, "path length")->required();
    verify->add_option("--t", theta_t, "number of disjoint paths")->required();
    verify->add_option("--input", input, "edge list path")->required();
    verify->add_option("--output", output, "certificate JSON path, - for stdout");

    // explore
    std::string root_spec = "auto";
    auto* explore = app.add_subcommand("explore", "layered exploration certifier");
    explore->add_option("--ell", ell, "path length")->required();
    explore->add_option("--t", theta_t, "theta multiplicity")->required();
    explore->add_option("--input", input, "edge list path")->required();
    explore->add_option("--root", root_spec, "auto or an explicit vertex id");
    explore->add_option("--output", output, "certificate JSON path, - for stdout");

    // stats
    std::string experiment = "badpairs";
    std::vector<std::uint32_t> q_grid = {5, 7};
    std::uint32_t num_seeds = 5, h = 1;
    std::uint64_t t_eff = 4, probe = 3;
    auto* stats = app.add_subcommand("stats", "Monte-Carlo path statistics, CSV output");
    stats->add_option("--experiment", experiment, "badpairs | dichotomy | moments")->required();
    stats->add_option("--ell", ell, "path length");
    stats->add_option("--grid", q_grid, "field orders to scan");
    stats->add_option("--seeds", num_seeds, "seeds per grid point");
    stats->add_option("--union-size", h, "union constituents (badpairs)");
    stats->add_option("--T", t_eff, "bad-pair threshold (badpairs)");
    stats->add_option("--probe", probe, "small-branch probe (dichotomy)");
    stats->add_option("--output", output, "CSV path, - for stdout");

    // bench: density-ratio report
    std::uint32_t bench_seeds = 3;
    auto* bench = app.add_subcommand("bench", "density ratios of both constructions (report only)");
    bench->add_option("--seeds", bench_seeds, "seeds per configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            Field field(q);
            PolynomialSystem sys;
            const std::uint32_t d = d_poly < 0 ? default_d_poly(ell) : static_cast<std::uint32_t>(d_poly);
            auto g = random_algebraic_graph(ell, field, d, seed, {}, &sys);
            save_graph(g, output);
            if (!sidecar.empty()) write_text(sidecar, system_to_json(sys));
            std::cerr << graph_report_json(g) << "\n";
        } else if (odd->parsed()) {
            auto res = build_odd_construction(params);
            save_graph(res.graph, output);
            if (!report_path.empty()) write_text(report_path, res.report_json());
            std::cerr << res.report_json() << "\n";
        } else if (even->parsed()) {
            auto res = build_even_construction(params);
            save_graph(res.graph, output);
            if (!report_path.empty()) write_text(report_path, res.report_json());
            std::cerr << res.report_json() << "\n";
        } else if (verify->parsed()) {
            auto g = load_graph(input);
            auto res = contains_theta(g, static_cast<int>(ell), theta_t);
            nlohmann::json j;
            j["ell"] = ell;
            j["t"] = theta_t;
            j["exact"] = res.exact;
            j["theta_found"] = res.witness.has_value();
            if (res.witness) {
                j["witness"] = {{"x", res.witness->x}, {"y", res.witness->y},
                                {"paths", res.witness->paths}};
            } else {
                nlohmann::json pairs = nlohmann::json::array();
                for (const auto& pm : res.per_pair)
                    if (pm.packing >= 0)
                        pairs.push_back({{"x", pm.x}, {"y", pm.y}, {"packing", pm.packing},
                                         {"exact", pm.exact}});
                j["per_pair_maxima"] = std::move(pairs);
            }
            if (!res.note.empty()) j["note"] = res.note;
            const std::string text = j.dump(2);
            if (output == "-")
                std::cout << text << "\n";
            else
                write_text(output, text);
        } else if (explore->parsed()) {
            auto g = load_graph(input);
            Certificate cert =
                root_spec == "auto"
                    ? run_certifier(g, ell, static_cast<std::uint64_t>(theta_t))
                    : run_certifier(g, ell, static_cast<std::uint64_t>(theta_t),
                                    RootPolicy::Explicit, std::stoi(root_spec));
            const std::string text = cert.to_json();
            if (output == "-")
                std::cout << text << "\n";
            else
                write_text(output, text);
        } else if (stats->parsed()) {
            std::vector<std::vector<std::string>> rows;
            std::vector<std::string> header;
            if (experiment == "badpairs") {
                header = {"ell", "q", "h", "T", "seeds", "mean", "stderr"};
                for (auto qv : q_grid) {
                    auto r = estimate_bad_pair_expectation(ell, qv, h, t_eff, num_seeds);
                    rows.push_back({std::to_string(ell), std::to_string(qv), std::to_string(h),
                                    std::to_string(t_eff), std::to_string(num_seeds),
                                    std::to_string(r.mean), std::to_string(r.stderr_)});
                }
            } else if (experiment == "dichotomy") {
                header = {"ell", "q", "probe", "total_pairs", "middle_band", "middle_fraction",
                          "large_branch"};
                for (auto qv : q_grid) {
                    auto r = dichotomy_scan(ell, qv, num_seeds, probe);
                    rows.push_back({std::to_string(ell), std::to_string(qv), std::to_string(probe),
                                    std::to_string(r.total_pairs), std::to_string(r.middle_band),
                                    std::to_string(r.middle_fraction),
                                    std::to_string(r.large_branch)});
                }
            } else if (experiment == "moments") {
                header = {"ell", "q", "samples", "moment_mean", "moment_stderr"};
                for (auto qv : q_grid) {
                    auto r = estimate_moments(ell, qv, num_seeds);
                    rows.push_back({std::to_string(ell), std::to_string(qv),
                                    std::to_string(r.samples), std::to_string(r.mean),
                                    std::to_string(r.stderr_)});
                }
            } else {
                throw std::runtime_error("unknown experiment " + experiment);
            }
            const std::string text = stats_csv(header, rows);
            if (output == "-")
                std::cout << text;
            else
                write_text(output, text);
        } else if (bench->parsed()) {
            // report-only: density ratios against the two target shapes
            std::cout << "construction,ell,t,n,seed,edges,density_ratio\n";
            for (std::uint32_t s = 0; s < bench_seeds; ++s) {
                ConstructionParams p;
                p.ell = 3;
                p.n = 162;
                p.seed = s + 1;
                // target m = 2: estimate at the field the half budget selects
                const auto base_field = largest_prime_power_with(p.n / 2, p.ell);
                p.T_eff = estimate_T(p.ell, base_field.q, default_d_poly(p.ell), 3, p.seed).T;
                p.t = static_cast<std::uint32_t>(2 * p.T_eff + 1);
                auto res = build_odd_construction(p);
                std::cout << "odd," << p.ell << "," << p.t << "," << res.graph.vertex_count() << ","
                          << p.seed << "," << res.graph.edge_count() << "," << res.density_ratio
                          << "\n";
                ConstructionParams pe;
                pe.ell = 2;
                pe.t = 8;
                pe.T_eff = 0;
                pe.h = 2;
                pe.n = 2 * 49;
                pe.seed = s + 1;
                auto reven = build_even_construction(pe);
                std::cout << "even," << pe.ell << "," << pe.t << "," << reven.graph.vertex_count()
                          << "," << pe.seed << "," << reven.graph.edge_count() << ","
                          << reven.density_ratio << "\n";
            }
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
