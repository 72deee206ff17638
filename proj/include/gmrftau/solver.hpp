#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmrftau/graph.hpp"
#include "gmrftau/symmat.hpp"

#include "json.hpp"

namespace gmrf {

/// A graph together with edge correlations, each strictly inside (-1, 1).
/// Values with 1 - |w| < 1e-6 are refused up front.
class CorrelationSpec {
public:
    static CorrelationSpec uniform(Graph g, double x);
    /// `weights` aligned with g.edges().
    static CorrelationSpec per_edge(Graph g, std::vector<double> weights);

    const Graph& graph() const { return graph_; }
    bool is_uniform() const { return uniform_.has_value(); }
    double uniform_value() const;
    double weight(int edge_index) const;
    const std::vector<double>& weights() const { return weights_; }

    /// Unit diagonal, edge weights on edges, `fill` elsewhere.
    SymMatrix ambient_matrix(double fill) const;

private:
    CorrelationSpec() = default;
    Graph graph_;
    std::optional<double> uniform_;
    std::vector<double> weights_;  // always populated, one per edge
};

struct SolveOptions {
    double tol = 1e-10;     // max off-pattern |B_uv| at convergence
    int max_sweeps = 10000; // recoupling sweeps over the non-edge list
    int max_iters = 200;    // Newton iterations for the dual method
};

enum class SolveMethod { recoupling, dual_ascent, chordal_exact, clique_sum };

const char* method_name(SolveMethod m);

/// The determinant-maximizing completion A, its inverse B (supported on the
/// graph pattern), and derived quantities.
struct GmrfSolution {
    Graph graph;
    SymMatrix a;  // completion, unit diagonal, spec weights on edges
    SymMatrix b;  // a^{-1}, zero on non-edges
    double log_tau = 0.0;
    double tau = 1.0;           // exp(log_tau), 0 / inf outside |log| < 700
    std::vector<double> y;      // y_e = -B_uv, aligned with graph.edges()
    double residual = 0.0;      // max non-edge |B_uv|
    int iterations = 0;
    SolveMethod method = SolveMethod::recoupling;

    double y_at(int u, int v) const;  // requires {u,v} an edge
    double z_at(int u, int v) const;  // A_uv for any pair
    /// Y_u = sum of y over edges at u.
    std::vector<double> vertex_y_sums() const;
    /// 2 * sum_e y_e = -d/dx log tau for uniform specs.
    double y_total_doubled() const;
};

/// Thrown when an iteration hits its cap without meeting the tolerance.
struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& what, double res, int iters)
        : std::runtime_error(what), residual(res), iterations(iters) {}
    double residual;
    int iterations;
};

/// Thrown when no positive definite matrix matches the spec (empty
/// feasible set): the dual objective is unbounded and tau tends to 0.
struct InfeasibleSpec : std::runtime_error {
    explicit InfeasibleSpec(const std::string& what) : std::runtime_error(what) {}
};

/// Iterated conditional coupling over the non-edges (fixed lexicographic
/// order) starting from the filled ambient matrix. Requires the start
/// matrix to be positive definite.
GmrfSolution solve_recoupling(const CorrelationSpec& spec, const SolveOptions& opts = {});

/// Damped Newton iteration on the dual problem: maximize log det B over
/// B = I_restricted(t) with free off-pattern entries fixed to zero.
GmrfSolution solve_dual_ascent(const CorrelationSpec& spec, const SolveOptions& opts = {});

/// Dual ascent, falling back to recoupling if Newton fails to converge.
GmrfSolution solve_auto(const CorrelationSpec& spec, const SolveOptions& opts = {});

/// Residuals of the optimality conditions.
struct KktReport {
    double inverse_residual = 0.0;       // max |(A B - I)_{uv}|
    double offpattern_residual = 0.0;    // max non-edge |B_uv|
    double constraint_residual = 0.0;    // max |A_uv - x_uv| on edges + diagonal
    double edge_equation_residual = 0.0;     // uniform only
    double nonedge_equation_residual = 0.0;  // uniform only
    double max_residual() const;
    bool pass(double tol) const { return max_residual() <= tol; }
};

KktReport verify_kkt(const GmrfSolution& sol, const CorrelationSpec& spec);

/// Edge types by the sign pattern of y against the tree value x/(1-x^2):
/// type I in [0, x/(1-x^2)], type II below 0, type III above. Values within
/// `boundary_tol` of a cut line are reported as Boundary.
enum class EdgeType { I, II, III, Boundary };

struct EdgeClassification {
    std::vector<EdgeType> labels;   // aligned with graph.edges()
    std::vector<double> margins;    // distance to the nearest cut line
    int count_i = 0, count_ii = 0, count_iii = 0, count_boundary = 0;
};

EdgeClassification classify_edges(const GmrfSolution& sol, double x,
                                  double boundary_tol = 1e-5);

/// Largest x below which all edges of g keep y >= 0 (grid scan plus
/// bisection to width tol, reported minus tol). Returns 1 when y stays
/// nonnegative on the whole scanned range.
double m_threshold(const Graph& g, double tol = 1e-4);

nlohmann::json solution_to_json(const GmrfSolution& sol, const CorrelationSpec& spec);

}  // namespace gmrf
