#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gmrftau/solver.hpp"

#include "json.hpp"

namespace gmrf {

/// Outcome of checking one claim on one instance. Orientation: the claim
/// holds when margin = lhs - rhs >= -tol. Two-sided identities are encoded
/// with lhs = allowance - |deviation| and rhs = 0.
struct AuditReport {
    std::string claim;
    std::string input;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double tol = 1e-8;
    bool applicable = true;
    bool pass = true;
    std::string notes;
};

AuditReport make_report(const std::string& claim, const std::string& input, double lhs,
                        double rhs, double tol, const std::string& notes = "");
AuditReport not_applicable(const std::string& claim, const std::string& input,
                           const std::string& notes);
nlohmann::json report_to_json(const AuditReport& r);

/// Short human-readable instance tag like "n=5 m=6 x=0.3".
std::string describe_instance(const Graph& g, double x);

/// log tau >= e(G) log(1-x^2); bipartite graphs audited at -x as well.
std::vector<AuditReport> sidorenko_check(const Graph& g, double x, double tol = 1e-8);

/// (i) -d/dx log tau matches 2*sum y by central difference;
/// (ii) 2*sum y <= 2 e(G) x/(1-x^2) on [0,1/(max_deg-1)] and [1/(avg_deg-1),1).
std::vector<AuditReport> log_derivative_check(const Graph& g, double x, double h = 1e-4,
                                              double deriv_tol = 1e-5, double tol = 1e-8);

/// Deviation dev = log tau / e - log(1-x^2):
/// (a) |dev| <= 2((max_deg-1)x)^girth / (1-(max_deg-1)x) below 1/(max_deg-1);
/// (b) dev >= alpha(avg_deg, x) above 1/(avg_deg-1).
std::vector<AuditReport> tightness_bounds(const Graph& g, double x, double tol = 1e-8);

/// alpha(dbar, x) = integral of 2(t(dbar-1)-1)/(dbar(1-t^2)) dt from
/// 1/(dbar-1) to x, by adaptive quadrature to 1e-10.
double alpha_integral(double dbar, double x);

/// Edge deletion / contraction comparisons for the edge (u,v), plus the
/// unconditional counterpart bound
/// tau(G-e) >= (1-zx)^2/((1-z^2)(1-x^2)) tau(G) with z from G-e.
std::vector<AuditReport> deletion_contraction_audit(const Graph& g, int u, int v, double x,
                                                    double tol = 1e-8);

/// Vertex sums and pair bounds: (a) Y_u >= x/(1-x^2) at non-isolated u;
/// (b) 2/(1-x) <= (1+xY_u)+(1+xY_v)+2y_uv on edges;
/// (c) 2/(1-z_uv) <= (1+xY_u)+(1+xY_v) on non-edges;
/// (d) Y_u >= 0; (e) 2*sum y <= (n-1)/(1-x).
std::vector<AuditReport> structural_bounds(const GmrfSolution& sol, double x, double tol = 1e-8);

/// Monotonicity, log-concavity, the two-variable sum inequality
/// tau(x)+tau(y) <= tau(xy)+tau(x)tau(y), and tau(x1 x2) >= tau(x1).
std::vector<AuditReport> convexity_suite(const Graph& g, double x1, double x2, double alpha,
                                         double tol = 1e-8);

/// d-regular: tau^{1/n} <= tau(K_{d+1})^{1/(d+1)}; bipartite d-regular:
/// tau^{1/n} <= tau(K_{d,d})^{1/(2d)}.
std::vector<AuditReport> regular_comparison(const Graph& g, double x, double tol = 1e-8);

/// Entropy combination D(all) - sum_edges D(pair) + sum_v (deg-1) D(point),
/// which collapses to (log tau - e log(1-x^2))/2, checked nonnegative.
AuditReport entropy_report(const GmrfSolution& sol, double x, double tol = 1e-8);

/// sum_i alpha_i log tau(G_i, x) >= 0, with the homomorphism-density
/// hypothesis cross-checked against every graph H with v(H) <= hypothesis_vmax.
AuditReport multiplicative_inequality_check(const std::vector<std::pair<Graph, double>>& pairs,
                                            double x, double tol = 1e-8,
                                            int hypothesis_vmax = 4);

/// det B with a row/column deleted equals det B; deleting an edge's pair of
/// rows/columns multiplies by (1-x^2); det(B - tE_uv(x)) =
/// det B (1 - t^2 (1-x^2)^2).
std::vector<AuditReport> bminors_check(const GmrfSolution& sol, double x, double tol = 1e-8);

/// For vertex-transitive inputs: every y > 0 and every non-edge z < x.
/// Transitivity is not detected; the caller vouches for it.
std::vector<AuditReport> vertex_transitive_check(const Graph& g, double x, double tol = 1e-8);

/// Everything applicable to a single (graph, x) instance; used by the CLI.
std::vector<AuditReport> full_audit(const Graph& g, double x, double tol = 1e-8);

}  // namespace gmrf
