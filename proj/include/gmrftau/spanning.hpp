#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gmrftau/audit.hpp"
#include "gmrftau/graph.hpp"

#include "json.hpp"

namespace gmrf {

using BigInt = boost::multiprecision::cpp_int;

/// Exact spanning-tree count by fraction-free elimination on the reduced
/// integer Laplacian; 0 for disconnected graphs. Guarded to n <= 64.
BigInt count_spanning_trees(const Graph& g);

/// log of the spanning-tree count via float Cholesky on the reduced
/// Laplacian; works for any size. -inf for disconnected graphs.
double log_spanning_tree_count(const Graph& g);

/// Certificate audit for the regular-graph spanning-tree bound. The proof
/// objects are x = 1/(d-1), t = (n-1)/(n d (1-x)) and B = (1/n)I + tL;
/// the four checks are (i) B is a feasible dual point, (ii) det B >=
/// t^{n-1} count, (iii) det B <= 1/tau(G,x), (iv) count <= the closed-form
/// bound exp(1) (d-1)/(d(d-2)) ((d-1)^{d-1}/(d^2-2d)^{d/2-1})^n.
struct SpanningTreeReport {
    bool applicable = false;
    BigInt count = 0;       // exact when n <= 64, else 0
    double log_count = 0.0; // always populated for connected graphs
    double log_bound = 0.0;
    double bound = 0.0;     // exp(log_bound), may overflow to inf
    double ratio = 0.0;     // count / bound
    std::vector<AuditReport> checks;
};

SpanningTreeReport mckay_audit(const Graph& g, int d, double tol = 1e-8);

nlohmann::json spanning_report_to_json(const SpanningTreeReport& r);

}  // namespace gmrf
