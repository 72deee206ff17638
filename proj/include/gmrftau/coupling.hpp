#pragma once

#include <stdexcept>
#include <vector>

#include "gmrftau/solver.hpp"

namespace gmrf {

/// Index sets (into a common ground set, strictly increasing) describing
/// which global rows the two operands cover. The overlap is the
/// intersection; entries there must agree.
struct CouplingLayout {
    std::vector<int> left_ids;
    std::vector<int> right_ids;

    std::vector<int> overlap_ids() const;
    std::vector<int> union_ids() const;
};

/// Conditionally independent coupling of two positive definite matrices
/// that agree on their overlap: the inverse of the result is
/// lift(A^{-1}) + lift(B^{-1}) - lift(C^{-1}) with C the overlap block.
/// The result restricts to A and B on their index sets and satisfies
/// det = det A * det B / det C.
SymMatrix couple(const SymMatrix& a, const SymMatrix& b, const CouplingLayout& layout,
                 double overlap_tol = 1e-9);

// ---- complete graphs in closed form ----

/// det of the maximizing completion of K_r at uniform x; the all-x matrix
/// itself: (1-x)^{r-1} (1+(r-1)x).
double clique_tau(int r, double x);
double clique_log_tau(int r, double x);
/// y on every edge of K_r: x / ((1-x)(1+(r-1)x)).
double clique_y(int r, double x);
/// Full solution for K_r at uniform x (closed form, no iteration).
GmrfSolution complete_solution(int r, double x);

// ---- clique sums ----

/// A k-clique sum split: parts[0], parts[1] are vertex sets whose union is
/// V, whose intersection is a clique, with no edges between the parts
/// outside the shared clique.
struct CliqueSumSplit {
    std::vector<int> left;
    std::vector<int> right;
    std::vector<int> shared;  // = intersection, must induce a clique
};

/// Find a clique cut: a shared clique whose removal disconnects the rest.
/// Returns std::nullopt when g has no such split (or is complete/small).
std::optional<CliqueSumSplit> find_clique_split(const Graph& g);

/// Solve by recursing on a clique split and coupling the parts.
/// Uses `base` (default dual ascent) on parts with no split.
GmrfSolution clique_sum_solve(const CorrelationSpec& spec, const SolveOptions& opts = {});

// ---- chordal graphs ----

struct NotChordal : std::runtime_error {
    explicit NotChordal(const std::string& what) : std::runtime_error(what) {}
};

/// Perfect elimination order via Lex-BFS, if one exists.
std::optional<std::vector<int>> perfect_elimination_order(const Graph& g);
bool is_chordal(const Graph& g);

/// Maximal cliques of a chordal graph (from a perfect elimination order).
std::vector<std::vector<int>> chordal_maximal_cliques(const Graph& g);

/// Exact solution for chordal graphs: assemble the completion clique by
/// clique along a clique tree. Throws NotChordal otherwise.
GmrfSolution solve_chordal(const CorrelationSpec& spec, const SolveOptions& opts = {});

}  // namespace gmrf
