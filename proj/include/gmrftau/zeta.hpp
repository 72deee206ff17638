#pragma once

#include <stdexcept>
#include <vector>

#include "gmrftau/audit.hpp"
#include "gmrftau/graph.hpp"

namespace gmrf {

/// Non-backtracking (directed edge) adjacency matrix: rows/columns are the
/// 2e directed edges, entry (e,f) = 1 iff head(e) = tail(f) and f is not the
/// reverse of e. Undirected edge i yields directed indices 2i (u->v) and
/// 2i+1 (v->u).
class DirectedEdgeMatrix {
public:
    explicit DirectedEdgeMatrix(const Graph& g);

    int dim() const { return int(tail_.size()); }
    int tail(int e) const { return tail_[e]; }
    int head(int e) const { return head_[e]; }
    static int reverse(int e) { return e ^ 1; }
    int entry(int e, int f) const;
    const std::vector<int>& successors(int e) const { return succ_[e]; }

    /// Exact integer trace of the k-th power (counts closed non-backtracking
    /// walks). Guarded to dim <= 600 and k <= 32.
    long long trace_power(int k) const;

private:
    std::vector<int> tail_, head_;
    std::vector<std::vector<int>> succ_;
};

/// Evaluation point where the three-term determinant vanishes.
struct ZetaPole : std::runtime_error {
    double x;
    explicit ZetaPole(double x_);
};

/// Zeta via det(I - xA + (D-I)x^2) and the (1-x^2)^{e-v} prefactor.
double zeta_bass(const Graph& g, double x);

/// Zeta via det(I - xM) over the directed edge matrix; guarded to 2e <= 2000.
double zeta_edge(const Graph& g, double x);

/// For |x| < 1/(max_deg - 1): (i) the scaled three-term matrix is a strictly
/// diagonally dominant feasible dual point; (ii) zeta (1-x^2)^e >= tau;
/// (iii) log zeta <= 2e((max_deg-1)|x|)^girth / (1-(max_deg-1)|x|);
/// (iv) the resulting deviation bound on log tau / e - log(1-x^2)
/// (two-sided for x >= 0, upper-sided for x < 0).
std::vector<AuditReport> zeta_tau_audit(const Graph& g, double x, double tol = 1e-8);

}  // namespace gmrf
