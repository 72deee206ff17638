// Command-line front end: solve / verify / sweep / zeta / trees / ldp /
// series / scan over graphs given as generator expressions or edge-list
// files. Exit codes: 0 ok, 1 failed verification, 2 bad arguments, 3
// numerical failure (JSON error body on stdout).

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gmrftau/audit.hpp"
#include "gmrftau/coupling.hpp"
#include "gmrftau/graph.hpp"
#include "gmrftau/series.hpp"
#include "gmrftau/solver.hpp"
#include "gmrftau/spanning.hpp"
#include "gmrftau/sphere.hpp"
#include "gmrftau/zeta.hpp"

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// family:params with params = numbers or seed=N, e.g. "regular:20,3,seed=7",
// or "file:PATH" for an edge-list file.
gmrf::Graph parse_graph_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "file") {
        if (rest.empty()) throw std::invalid_argument("file: needs a path");
        return gmrf::load_edge_list(rest);
    }
    std::vector<double> params;
    std::optional<std::uint64_t> seed;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.rfind("seed=", 0) == 0) {
            seed = std::stoull(item.substr(5));
        } else if (!item.empty()) {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size())
                throw std::invalid_argument("bad graph parameter: " + item);
            params.push_back(v);
        }
    }
    static const std::map<std::string, gmrf::GraphFamily> families = {
        {"path", gmrf::GraphFamily::path},
        {"cycle", gmrf::GraphFamily::cycle},
        {"complete", gmrf::GraphFamily::complete},
        {"bipartite", gmrf::GraphFamily::complete_bipartite},
        {"book", gmrf::GraphFamily::book},
        {"mobius", gmrf::GraphFamily::mobius_ladder},
        {"tree", gmrf::GraphFamily::random_tree},
        {"regular", gmrf::GraphFamily::random_regular},
        {"gnp", gmrf::GraphFamily::erdos_renyi},
    };
    const auto it = families.find(name);
    if (it == families.end())
        throw std::invalid_argument("unknown graph family: " + name);
    return gmrf::generate(it->second, params, seed);
}

struct Output {
    std::string path;  // empty = stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open output file: " + path);
        f << text;
    }
};

// Evaluates `row` at every grid index in parallel, then joins rows in order.
std::string grid_csv(const std::string& header, int steps, int jobs,
                     const std::function<std::string(int)>& row) {
    std::vector<std::string> rows(std::size_t(steps) + 1);
    const int workers = std::max(1, jobs);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i <= steps; i = next++) rows[std::size_t(i)] = row(i);
        });
    for (auto& t : pool) t.join();
    std::string out = header + "\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
}

gmrf::GmrfSolution solve_with_method(const gmrf::CorrelationSpec& spec,
                                     const std::string& method) {
    if (method == "dual") return gmrf::solve_dual_ascent(spec);
    if (method == "recoupling") return gmrf::solve_recoupling(spec);
    if (method == "chordal") return gmrf::solve_chordal(spec);
    return gmrf::solve_auto(spec);
}

int cmd_solve(const std::string& graph_spec, double x, const std::string& method,
              const Output& out) {
    const gmrf::Graph g = parse_graph_spec(graph_spec);
    const auto spec = gmrf::CorrelationSpec::uniform(g, x);
    const gmrf::GmrfSolution sol = solve_with_method(spec, method);
    out.write(gmrf::solution_to_json(sol, spec).dump(2) + "\n");
    return 0;
}

int cmd_verify(const std::string& graph_spec, double x, double tol, bool transitive,
               const Output& out) {
    const gmrf::Graph g = parse_graph_spec(graph_spec);
    std::vector<gmrf::AuditReport> reports = gmrf::full_audit(g, x, tol);
    if (transitive)
        for (auto& r : gmrf::vertex_transitive_check(g, x, tol)) reports.push_back(r);
    std::ostringstream table;
    int failed = 0, passed = 0, skipped = 0;
    for (const auto& r : reports) {
        const char* status = !r.applicable ? "n/a " : r.pass ? "pass" : "FAIL";
        if (!r.applicable)
            ++skipped;
        else if (r.pass)
            ++passed;
        else
            ++failed;
        table << status << "  " << r.claim;
        for (std::size_t i = r.claim.size(); i < 34; ++i) table << ' ';
        if (r.applicable) table << " margin=" << num(r.margin);
        if (!r.notes.empty()) table << "  (" << r.notes << ")";
        table << "\n";
    }
    table << reports.size() << " claims: " << passed << " passed, " << failed
          << " failed, " << skipped << " not applicable\n";
    out.write(table.str());
    return failed == 0 ? 0 : 1;
}

int cmd_sweep(const std::string& graph_spec, double x_min, double x_max, int steps,
              int jobs, const Output& out) {
    const gmrf::Graph g = parse_graph_spec(graph_spec);
    if (steps < 1) throw std::invalid_argument("sweep: steps >= 1");
    const std::string csv = grid_csv(
        "x,log_tau,tau,y_doubled,sidorenko_margin,sum_bound_margin", steps, jobs,
        [&](int i) {
            const double x = x_min + (x_max - x_min) * i / steps;
            const auto sol = gmrf::solve_auto(gmrf::CorrelationSpec::uniform(g, x));
            const double floor_log = g.edge_count() * std::log1p(-x * x);
            const double sum_bound =
                (g.vertex_count() - 1) / (1.0 - x) - sol.y_total_doubled();
            return num(x) + "," + num(sol.log_tau) + "," + num(sol.tau) + "," +
                   num(sol.y_total_doubled()) + "," + num(sol.log_tau - floor_log) + "," +
                   num(sum_bound);
        });
    out.write(csv);
    return 0;
}

int cmd_zeta(const std::string& graph_spec, double x_min, double x_max, int steps,
             int jobs, const Output& out) {
    const gmrf::Graph g = parse_graph_spec(graph_spec);
    if (steps < 1) throw std::invalid_argument("zeta: steps >= 1");
    const std::string csv = grid_csv(
        "x,zeta,zeta_scaled,tau,tau_margin,log_zeta_bound_margin", steps, jobs, [&](int i) {
            const double x = x_min + (x_max - x_min) * i / steps;
            const double z = gmrf::zeta_bass(g, x);
            const double scaled = z * std::pow(1.0 - x * x, double(g.edge_count()));
            const auto sol = gmrf::solve_auto(gmrf::CorrelationSpec::uniform(g, x));
            const int max_deg = g.max_degree();
            const double r = (max_deg - 1) * std::abs(x);
            const auto girth = g.girth();
            const double bound =
                girth && r < 1.0
                    ? 2.0 * g.edge_count() * std::pow(r, double(*girth)) / (1.0 - r)
                    : 0.0;
            return num(x) + "," + num(z) + "," + num(scaled) + "," + num(sol.tau) + "," +
                   num(scaled - sol.tau) + "," + num(bound - std::log(z));
        });
    out.write(csv);
    return 0;
}

int cmd_trees(const std::string& graph_spec, const Output& out) {
    const gmrf::Graph g = parse_graph_spec(graph_spec);
    const auto reg = g.regular_degree();
    const gmrf::SpanningTreeReport rep = gmrf::mckay_audit(g, reg.value_or(0));
    json j = gmrf::spanning_report_to_json(rep);
    if (!rep.applicable && g.vertex_count() <= 64) {
        // Still provide the exact count for irregular graphs.
        j["count"] = gmrf::count_spanning_trees(g).str();
    }
    out.write(j.dump(2) + "\n");
    return 0;
}

int cmd_ldp(const std::string& graph_spec, double lo, double hi,
            const std::string& n_list_text, long long samples, std::uint64_t seed, int jobs,
            const Output& out) {
    const gmrf::Graph g = parse_graph_spec(graph_spec);
    std::vector<int> n_list;
    std::stringstream ss(n_list_text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) n_list.push_back(std::stoi(item));
    if (n_list.empty()) throw std::invalid_argument("ldp: empty n list");
    const gmrf::EdgeIntervalRegion region(g, lo, hi);
    const auto estimates = gmrf::ldp_estimate(region, n_list, samples, seed, jobs);
    std::string csv = "k,n,samples,hits,p_hat,se,emp_rate,theo_rate,gap\n";
    for (const auto& e : estimates) {
        csv += std::to_string(e.k) + "," + std::to_string(e.n) + "," +
               std::to_string(e.samples) + "," + std::to_string(e.hits) + "," +
               num(e.p_hat) + "," + num(e.se) + "," + num(e.emp_rate) + "," +
               num(e.theo_rate) + "," + num(e.gap) + "\n";
        if (e.low_hits)
            std::cerr << "warning: fewer than 50 hits at n=" << e.n
                      << "; estimate unreliable\n";
        if (e.lower_bound_rate)
            std::cerr << "note: graph is not edge-transitive; theoretical rate is a "
                         "lower bound\n";
    }
    out.write(csv);
    return 0;
}

int cmd_series(const std::string& graph_spec, int order, const Output& out) {
    const gmrf::Graph g = parse_graph_spec(graph_spec);
    const gmrf::TruncatedSeries s = gmrf::tau_series(g, order);
    json j = gmrf::series_to_json(s);
    j["n"] = g.vertex_count();
    j["m"] = g.edge_count();
    out.write(j.dump(2) + "\n");
    return 0;
}

int cmd_scan(int count, int n, double p, double x, std::uint64_t seed, const Output& out) {
    if (count < 1 || n < 2) throw std::invalid_argument("scan: need count >= 1, n >= 2");
    double min_z = 1.0, max_y_excess = -1e300, min_y = 1e300;
    json min_z_at, max_y_at, min_y_at;
    int type_ii = 0, type_iii = 0;
    const double thr = x / (1.0 - x * x);
    for (int i = 0; i < count; ++i) {
        const gmrf::Graph g = gmrf::erdos_renyi(n, p, seed + std::uint64_t(i));
        const auto sol = gmrf::solve_auto(gmrf::CorrelationSpec::uniform(g, x));
        for (auto [u, v] : g.non_edges()) {
            const double z = sol.z_at(u, v);
            if (z < min_z) {
                min_z = z;
                min_z_at = {{"graph_index", i}, {"pair", {u, v}}};
            }
        }
        const auto& es = g.edges();
        for (std::size_t e = 0; e < es.size(); ++e) {
            const double ye = sol.y[e];
            const double excess = ye - thr;
            if (excess > max_y_excess) {
                max_y_excess = excess;
                max_y_at = {{"graph_index", i}, {"pair", {es[e].first, es[e].second}}};
            }
            if (ye < min_y) {
                min_y = ye;
                min_y_at = {{"graph_index", i}, {"pair", {es[e].first, es[e].second}}};
            }
            if (ye < 0.0) ++type_ii;
            if (excess > 0.0) ++type_iii;
        }
    }
    const json j = {{"graphs", count},
                    {"n", n},
                    {"p", p},
                    {"x", x},
                    {"seed", seed},
                    {"min_nonedge_z", {{"value", min_z}, {"where", min_z_at}}},
                    {"max_y_minus_tree_value", {{"value", max_y_excess}, {"where", max_y_at}}},
                    {"min_edge_y", {{"value", min_y}, {"where", min_y_at}}},
                    {"edges_with_negative_y", type_ii},
                    {"edges_above_tree_value", type_iii}};
    out.write(j.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"determinant-maximizing completions of graph-constrained "
                 "correlation matrices"};
    app.require_subcommand(1);

    std::string graph_spec, method = "auto", n_list = "20,40,80", out_path;
    double x = 0.5, x_min = 0.05, x_max = 0.95, tol = 1e-8, lo = 0.0, hi = 1.0, p = 0.5;
    int steps = 18, order = 10, jobs = 1, count = 50, n = 10;
    long long samples = 100000;
    std::uint64_t seed = 1;
    bool transitive = false;

    auto add_graph = [&](CLI::App* c) {
        c->add_option("--graph", graph_spec,
                      "family:params (path/cycle/complete/bipartite/book/mobius/tree/"
                      "regular/gnp, e.g. regular:20,3,seed=7) or file:PATH")
            ->required();
    };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", out_path, "output file"); };

    CLI::App* solve = app.add_subcommand("solve", "solve one instance, print JSON");
    add_graph(solve);
    solve->add_option("--x", x, "uniform edge correlation")->required();
    solve->add_option("--method", method, "auto|dual|recoupling|chordal");
    add_out(solve);

    CLI::App* verify = app.add_subcommand("verify", "run the audit battery");
    add_graph(verify);
    verify->add_option("--x", x, "uniform edge correlation")->required();
    verify->add_option("--tol", tol, "audit tolerance");
    verify->add_flag("--transitive", transitive,
                     "also run the vertex-transitive checks (caller vouches)");
    add_out(verify);

    CLI::App* sweep = app.add_subcommand("sweep", "CSV of tau and margins over an x grid");
    add_graph(sweep);
    sweep->add_option("--x-min", x_min);
    sweep->add_option("--x-max", x_max);
    sweep->add_option("--steps", steps, "grid intervals");
    sweep->add_option("--jobs", jobs);
    add_out(sweep);

    CLI::App* zeta = app.add_subcommand("zeta", "CSV of zeta vs tau over an x grid");
    add_graph(zeta);
    zeta->add_option("--x-min", x_min);
    zeta->add_option("--x-max", x_max);
    zeta->add_option("--steps", steps);
    zeta->add_option("--jobs", jobs);
    add_out(zeta);

    CLI::App* trees = app.add_subcommand("trees", "spanning-tree count and bound, JSON");
    add_graph(trees);
    add_out(trees);

    CLI::App* ldp = app.add_subcommand("ldp", "Monte-Carlo rate estimates, CSV");
    add_graph(ldp);
    ldp->add_option("--lo", lo, "interval lower end");
    ldp->add_option("--hi", hi, "interval upper end");
    ldp->add_option("--n-list", n_list, "comma-separated sphere dimensions");
    ldp->add_option("--samples", samples);
    ldp->add_option("--seed", seed);
    ldp->add_option("--jobs", jobs);
    add_out(ldp);

    CLI::App* series = app.add_subcommand("series", "Taylor coefficients of tau, JSON");
    add_graph(series);
    series->add_option("--order", order, "truncation order (<= 40)");
    add_out(series);

    CLI::App* scan = app.add_subcommand("scan", "extremes of A entries and y over random graphs");
    scan->add_option("--count", count, "number of random graphs");
    scan->add_option("--n", n, "vertices per graph");
    scan->add_option("--p", p, "edge probability");
    scan->add_option("--x", x, "uniform edge correlation")->required();
    scan->add_option("--seed", seed);
    add_out(scan);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    const Output out{out_path};
    try {
        if (solve->parsed()) return cmd_solve(graph_spec, x, method, out);
        if (verify->parsed()) return cmd_verify(graph_spec, x, tol, transitive, out);
        if (sweep->parsed()) return cmd_sweep(graph_spec, x_min, x_max, steps, jobs, out);
        if (zeta->parsed()) return cmd_zeta(graph_spec, x_min, x_max, steps, jobs, out);
        if (trees->parsed()) return cmd_trees(graph_spec, out);
        if (ldp->parsed()) return cmd_ldp(graph_spec, lo, hi, n_list, samples, seed, jobs, out);
        if (series->parsed()) return cmd_series(graph_spec, order, out);
        if (scan->parsed()) return cmd_scan(count, n, p, x, seed, out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        const json body = {{"error", e.what()}};
        std::cout << body.dump(2) << "\n";
        return 3;
    }
    return 2;
}
