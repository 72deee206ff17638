#include "gmrftau/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gmrftau/coupling.hpp"

namespace gmrf {

// ---- CorrelationSpec ----

namespace {

void check_weight(double w) {
    if (!(std::fabs(w) < 1.0) || 1.0 - std::fabs(w) < 1e-6)
        throw std::invalid_argument("correlation weight must satisfy 1 - |w| >= 1e-6, got " +
                                    std::to_string(w));
}

double safe_exp(double log_value) {
    if (log_value >= 700.0) return std::numeric_limits<double>::infinity();
    if (log_value <= -700.0) return 0.0;
    return std::exp(log_value);
}

}  // namespace

CorrelationSpec CorrelationSpec::uniform(Graph g, double x) {
    check_weight(x);
    CorrelationSpec spec;
    spec.weights_.assign(g.edge_count(), x);
    spec.graph_ = std::move(g);
    spec.uniform_ = x;
    return spec;
}

CorrelationSpec CorrelationSpec::per_edge(Graph g, std::vector<double> weights) {
    if (int(weights.size()) != g.edge_count())
        throw std::invalid_argument("per_edge: need one weight per edge");
    for (double w : weights) check_weight(w);
    CorrelationSpec spec;
    spec.graph_ = std::move(g);
    spec.weights_ = std::move(weights);
    return spec;
}

double CorrelationSpec::uniform_value() const {
    if (!uniform_) throw std::logic_error("spec is not uniform");
    return *uniform_;
}

double CorrelationSpec::weight(int edge_index) const {
    if (edge_index < 0 || edge_index >= int(weights_.size()))
        throw std::invalid_argument("weight: bad edge index");
    return weights_[edge_index];
}

SymMatrix CorrelationSpec::ambient_matrix(double fill) const {
    const int n = graph_.vertex_count();
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) {
        m.set(i, i, 1.0);
        for (int j = 0; j < i; ++j) m.set(i, j, fill);
    }
    for (int e = 0; e < graph_.edge_count(); ++e) {
        auto [u, v] = graph_.edges()[e];
        m.set(u, v, weights_[e]);
    }
    return m;
}

const char* method_name(SolveMethod m) {
    switch (m) {
        case SolveMethod::recoupling: return "recoupling";
        case SolveMethod::dual_ascent: return "dual_ascent";
        case SolveMethod::chordal_exact: return "chordal_exact";
        case SolveMethod::clique_sum: return "clique_sum";
    }
    return "unknown";
}

// ---- GmrfSolution ----

double GmrfSolution::y_at(int u, int v) const {
    int e = graph.edge_index(u, v);
    if (e < 0) throw std::invalid_argument("y_at: not an edge");
    return y[e];
}

double GmrfSolution::z_at(int u, int v) const { return a(u, v); }

std::vector<double> GmrfSolution::vertex_y_sums() const {
    std::vector<double> s(graph.vertex_count(), 0.0);
    for (int e = 0; e < graph.edge_count(); ++e) {
        auto [u, v] = graph.edges()[e];
        s[u] += y[e];
        s[v] += y[e];
    }
    return s;
}

double GmrfSolution::y_total_doubled() const {
    double s = 0.0;
    for (double v : y) s += v;
    return 2.0 * s;
}

namespace {

void finish_from_completion(GmrfSolution& sol, const SymMatrix& m, int iterations,
                            SolveMethod method) {
    CholeskyFactor f = cholesky_or_throw(m);
    sol.a = m;
    sol.log_tau = f.logdet();
    sol.tau = safe_exp(sol.log_tau);
    SymMatrix b = f.inverse();
    double res = 0.0;
    for (auto [u, v] : sol.graph.non_edges()) {
        res = std::max(res, std::fabs(b(u, v)));
        b.set(u, v, 0.0);
    }
    sol.b = b;
    sol.residual = res;
    sol.y.resize(sol.graph.edge_count());
    for (int e = 0; e < sol.graph.edge_count(); ++e) {
        auto [u, v] = sol.graph.edges()[e];
        sol.y[e] = -b(u, v);
    }
    sol.iterations = iterations;
    sol.method = method;
}

}  // namespace

// ---- recoupling solver ----

GmrfSolution solve_recoupling(const CorrelationSpec& spec, const SolveOptions& opts) {
    const Graph& g = spec.graph();
    const int n = g.vertex_count();
    const double fill = spec.is_uniform() ? spec.uniform_value() : 0.0;
    SymMatrix m = spec.ambient_matrix(fill);
    {
        CholeskyResult start = cholesky(m);
        if (!start.ok && fill != 0.0) {
            // A uniform negative fill can be indefinite even when the instance
            // is feasible; the zero fill is a valid alternative start.
            m = spec.ambient_matrix(0.0);
            start = cholesky(m);
        }
        if (!start.ok) {
            if (g.non_edges().empty())
                throw InfeasibleSpec(
                    "no positive definite completion exists: the fully specified "
                    "matrix is not positive definite");
            throw NotPositiveDefinite(start.failed_pivot);
        }
    }
    GmrfSolution sol;
    sol.graph = g;
    const auto nonedges = g.non_edges();
    if (nonedges.empty()) {
        finish_from_completion(sol, m, 0, SolveMethod::recoupling);
        return sol;
    }

    int sweeps = 0;
    double residual = std::numeric_limits<double>::infinity();
    std::vector<int> rest(n - 2);
    std::vector<double> rhs(n - 2), row(n - 2);
    while (sweeps < opts.max_sweeps) {
        ++sweeps;
        for (auto [v, w] : nonedges) {
            // The coupling of M restricted to V \ {v} with M restricted to
            // V \ {w} changes only the (v,w) entry, which becomes the
            // conditional-independence value M_{vZ} M_{ZZ}^{-1} M_{Zw}.
            rest.clear();
            for (int u = 0; u < n; ++u)
                if (u != v && u != w) rest.push_back(u);
            CholeskyFactor f = cholesky_or_throw(m.submatrix(rest));
            rhs.resize(rest.size());
            row.resize(rest.size());
            for (std::size_t i = 0; i < rest.size(); ++i) {
                rhs[i] = m(rest[i], w);
                row[i] = m(v, rest[i]);
            }
            f.solve_in_place(rhs);
            double val = 0.0;
            for (std::size_t i = 0; i < rest.size(); ++i) val += row[i] * rhs[i];
            m.set(v, w, val);
        }
        SymMatrix binv = inverse(m);
        residual = 0.0;
        for (auto [u, v] : nonedges) residual = std::max(residual, std::fabs(binv(u, v)));
        if (residual <= opts.tol) break;
    }
    if (residual > opts.tol)
        throw NoConvergence("recoupling did not reach tolerance in " +
                                std::to_string(opts.max_sweeps) + " sweeps",
                            residual, sweeps);
    finish_from_completion(sol, m, sweeps, SolveMethod::recoupling);
    return sol;
}

// ---- dual ascent ----

GmrfSolution solve_dual_ascent(const CorrelationSpec& spec, const SolveOptions& opts) {
    const Graph& g = spec.graph();
    const int n = g.vertex_count();
    const int m = g.edge_count();
    const int nvars = n + m;  // diagonal entries then edge entries of B

    // With no free entries the specified matrix is the only candidate, so
    // feasibility is decidable upfront.
    if (g.non_edges().empty() && !cholesky(spec.ambient_matrix(0.0)).ok)
        throw InfeasibleSpec(
            "no positive definite completion exists: the fully specified matrix "
            "is not positive definite");

    std::vector<double> t(nvars, 0.0);
    for (int i = 0; i < n; ++i) t[i] = 1.0;

    auto build = [&](const std::vector<double>& tv) {
        SymMatrix b(n);
        for (int i = 0; i < n; ++i) b.set(i, i, tv[i]);
        for (int e = 0; e < m; ++e) {
            auto [u, v] = g.edges()[e];
            b.set(u, v, tv[n + e]);
        }
        return b;
    };
    // Dual objective: log det B - sum_i B_ii - 2 sum_e x_e B_e (+ const).
    auto objective_tail = [&](const std::vector<double>& tv) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s -= tv[i];
        for (int e = 0; e < m; ++e) s -= 2.0 * spec.weight(e) * tv[n + e];
        return s;
    };

    SymMatrix b = build(t);
    CholeskyFactor f = cholesky_or_throw(b);
    double phi = f.logdet() + objective_tail(t);

    int iter = 0;
    double gnorm = std::numeric_limits<double>::infinity();
    std::vector<double> grad(nvars), delta(nvars), tnew(nvars);
    while (iter < opts.max_iters) {
        SymMatrix z = f.inverse();
        gnorm = 0.0;
        for (int i = 0; i < n; ++i) grad[i] = z(i, i) - 1.0;
        for (int e = 0; e < m; ++e) {
            auto [u, v] = g.edges()[e];
            grad[n + e] = 2.0 * (z(u, v) - spec.weight(e));
        }
        for (double v : grad) gnorm = std::max(gnorm, std::fabs(v));
        if (gnorm <= opts.tol) break;

        if (f.logdet() > 1400.0 || *std::max_element(t.begin(), t.begin() + n) > 1e12)
            throw InfeasibleSpec(
                "no positive definite completion exists: dual objective is unbounded");

        ++iter;
        // K_ab = tr(Z E_a Z E_b) over the pattern basis; Newton direction
        // solves K d = grad.
        SymMatrix k(nvars);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) k.set(i, j, z(i, j) * z(i, j));
        for (int e = 0; e < m; ++e) {
            auto [u, v] = g.edges()[e];
            for (int i = 0; i < n; ++i) k.set(n + e, i, 2.0 * z(i, u) * z(i, v));
            for (int e2 = 0; e2 <= e; ++e2) {
                auto [p, q] = g.edges()[e2];
                k.set(n + e, n + e2, 2.0 * (z(u, p) * z(v, q) + z(u, q) * z(v, p)));
            }
        }
        CholeskyResult kf = cholesky(k);
        if (!kf.ok) {
            double ridge = 1e-10 * std::max(1.0, k.max_abs());
            for (int i = 0; i < nvars; ++i) k.add(i, i, ridge);
            kf = cholesky(k);
            if (!kf.ok)
                throw NoConvergence("dual ascent: Newton system not positive definite", gnorm,
                                    iter);
        }
        delta = grad;
        kf.factor.solve_in_place(delta);

        double slope = 0.0;  // directional derivative of phi along delta
        for (int a = 0; a < nvars; ++a) slope += grad[a] * delta[a];

        auto gnorm_at = [&](const CholeskyFactor& fac) {
            SymMatrix zt = fac.inverse();
            double gn = 0.0;
            for (int i = 0; i < n; ++i) gn = std::max(gn, std::fabs(zt(i, i) - 1.0));
            for (int e = 0; e < m; ++e) {
                auto [u, v] = g.edges()[e];
                gn = std::max(gn, 2.0 * std::fabs(zt(u, v) - spec.weight(e)));
            }
            return gn;
        };

        double sigma = 1.0;
        bool accepted = false;
        while (sigma > 1e-14) {
            for (int a = 0; a < nvars; ++a) tnew[a] = t[a] + sigma * delta[a];
            SymMatrix bn = build(tnew);
            CholeskyResult cr = cholesky(bn);
            if (cr.ok) {
                double phin = cr.factor.logdet() + objective_tail(tnew);
                bool take = phin >= phi + 1e-4 * sigma * slope;
                // Near the maximizer the objective is flat to machine
                // precision while the gradient still carries information;
                // accept any step that strictly shrinks the gradient.
                if (!take && phin >= phi - 1e-12 * (1.0 + std::fabs(phi)))
                    take = gnorm_at(cr.factor) < 0.9 * gnorm;
                if (take) {
                    t = tnew;
                    b = bn;
                    f = cr.factor;
                    phi = phin;
                    accepted = true;
                    break;
                }
            }
            sigma *= 0.5;
        }
        if (!accepted)
            throw NoConvergence("dual ascent: line search stalled", gnorm, iter);
    }
    if (gnorm > opts.tol)
        throw NoConvergence("dual ascent did not reach tolerance in " +
                                std::to_string(opts.max_iters) + " iterations",
                            gnorm, iter);

    GmrfSolution sol;
    sol.graph = g;
    sol.b = b;
    sol.a = f.inverse();
    sol.log_tau = -f.logdet();
    sol.tau = safe_exp(sol.log_tau);
    sol.y.resize(m);
    for (int e = 0; e < m; ++e) {
        auto [u, v] = g.edges()[e];
        sol.y[e] = -b(u, v);
    }
    sol.residual = 0.0;  // B is supported on the pattern by construction
    sol.iterations = iter;
    sol.method = SolveMethod::dual_ascent;
    return sol;
}

GmrfSolution solve_auto(const CorrelationSpec& spec, const SolveOptions& opts) {
    try {
        return solve_dual_ascent(spec, opts);
    } catch (const NoConvergence&) {
        return solve_recoupling(spec, opts);
    }
}

// ---- optimality check ----

double KktReport::max_residual() const {
    return std::max({inverse_residual, offpattern_residual, constraint_residual,
                     edge_equation_residual, nonedge_equation_residual});
}

KktReport verify_kkt(const GmrfSolution& sol, const CorrelationSpec& spec) {
    const Graph& g = spec.graph();
    const int n = g.vertex_count();
    KktReport rep;

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += sol.a(i, k) * sol.b(k, j);
            rep.inverse_residual =
                std::max(rep.inverse_residual, std::fabs(s - (i == j ? 1.0 : 0.0)));
        }

    SymMatrix ainv = inverse(sol.a);
    for (auto [u, v] : g.non_edges())
        rep.offpattern_residual = std::max(rep.offpattern_residual, std::fabs(ainv(u, v)));

    for (int i = 0; i < n; ++i)
        rep.constraint_residual = std::max(rep.constraint_residual, std::fabs(sol.a(i, i) - 1.0));
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edges()[e];
        rep.constraint_residual =
            std::max(rep.constraint_residual, std::fabs(sol.a(u, v) - spec.weight(e)));
    }

    if (spec.is_uniform()) {
        const double x = spec.uniform_value();
        // Both equations come from (A B)_{u,w} = 0 and are asymmetric in
        // (u, w); check the two orientations of every pair.
        auto edge_eq = [&](int u, int w) {
            double rhs = (1.0 - x * x) * sol.y_at(u, w);
            for (int v : g.neighbors(w))
                if (v != u) rhs += (sol.z_at(u, v) - x * x) * sol.y_at(v, w);
            return std::fabs(x - rhs);
        };
        auto nonedge_eq = [&](int u, int w) {
            double rhs = 0.0;
            for (int v : g.neighbors(w))
                rhs += (sol.z_at(u, v) - x * sol.z_at(u, w)) * sol.y_at(v, w);
            return std::fabs(sol.z_at(u, w) - rhs);
        };
        for (auto [u, w] : g.edges()) {
            rep.edge_equation_residual = std::max(rep.edge_equation_residual, edge_eq(u, w));
            rep.edge_equation_residual = std::max(rep.edge_equation_residual, edge_eq(w, u));
        }
        for (auto [u, w] : g.non_edges()) {
            rep.nonedge_equation_residual =
                std::max(rep.nonedge_equation_residual, nonedge_eq(u, w));
            rep.nonedge_equation_residual =
                std::max(rep.nonedge_equation_residual, nonedge_eq(w, u));
        }
    }
    return rep;
}

// ---- edge classification ----

EdgeClassification classify_edges(const GmrfSolution& sol, double x, double boundary_tol) {
    const double tree_value = x / (1.0 - x * x);
    EdgeClassification out;
    out.labels.reserve(sol.y.size());
    out.margins.reserve(sol.y.size());
    for (double y : sol.y) {
        const double margin = std::min(std::fabs(y), std::fabs(y - tree_value));
        out.margins.push_back(margin);
        EdgeType label;
        if (margin < boundary_tol)
            label = EdgeType::Boundary;
        else if (y < 0.0)
            label = EdgeType::II;
        else if (y > tree_value)
            label = EdgeType::III;
        else
            label = EdgeType::I;
        out.labels.push_back(label);
        switch (label) {
            case EdgeType::I: ++out.count_i; break;
            case EdgeType::II: ++out.count_ii; break;
            case EdgeType::III: ++out.count_iii; break;
            case EdgeType::Boundary: ++out.count_boundary; break;
        }
    }
    return out;
}

double m_threshold(const Graph& g, double tol) {
    if (g.edge_count() == 0) return 1.0;
    auto min_y = [&](double x) {
        GmrfSolution sol = solve_dual_ascent(CorrelationSpec::uniform(g, x));
        return *std::min_element(sol.y.begin(), sol.y.end());
    };
    double lo = 0.0, hi = -1.0;
    for (double x = 0.02; x < 0.985; x += 0.02) {
        if (min_y(x) < 0.0) {
            hi = x;
            break;
        }
        lo = x;
    }
    if (hi < 0.0) return 1.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (min_y(mid) < 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return std::max(0.5 * (lo + hi) - tol, 0.0);
}

// ---- JSON ----

nlohmann::json solution_to_json(const GmrfSolution& sol, const CorrelationSpec& spec) {
    nlohmann::json j;
    j["n"] = sol.graph.vertex_count();
    if (spec.is_uniform())
        j["x"] = spec.uniform_value();
    else
        j["weights"] = spec.weights();
    j["tau"] = sol.tau;
    j["log_tau"] = sol.log_tau;
    nlohmann::json ylist = nlohmann::json::array();
    for (int e = 0; e < sol.graph.edge_count(); ++e) {
        auto [u, v] = sol.graph.edges()[e];
        ylist.push_back({u, v, sol.y[e]});
    }
    j["y"] = ylist;
    nlohmann::json zlist = nlohmann::json::array();
    for (auto [u, v] : sol.graph.non_edges()) zlist.push_back({u, v, sol.z_at(u, v)});
    j["z_nonedges"] = zlist;
    j["residual"] = sol.residual;
    j["iterations"] = sol.iterations;
    j["method"] = method_name(sol.method);
    return j;
}

}  // namespace gmrf
