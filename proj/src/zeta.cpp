#include "gmrftau/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gmrftau/solver.hpp"
#include "gmrftau/symmat.hpp"

namespace gmrf {

DirectedEdgeMatrix::DirectedEdgeMatrix(const Graph& g) {
    const auto& es = g.edges();
    tail_.resize(2 * es.size());
    head_.resize(2 * es.size());
    for (std::size_t i = 0; i < es.size(); ++i) {
        tail_[2 * i] = es[i].first;
        head_[2 * i] = es[i].second;
        tail_[2 * i + 1] = es[i].second;
        head_[2 * i + 1] = es[i].first;
    }
    succ_.resize(tail_.size());
    for (int e = 0; e < dim(); ++e)
        for (int f = 0; f < dim(); ++f)
            if (head_[e] == tail_[f] && f != reverse(e)) succ_[e].push_back(f);
}

int DirectedEdgeMatrix::entry(int e, int f) const {
    return std::binary_search(succ_[e].begin(), succ_[e].end(), f) ? 1 : 0;
}

long long DirectedEdgeMatrix::trace_power(int k) const {
    const int d = dim();
    if (k < 1 || k > 32) throw std::invalid_argument("trace_power: k out of range");
    if (d > 600) throw std::invalid_argument("trace_power: matrix too large for exact powers");
    std::vector<long long> cur(std::size_t(d) * d, 0);
    for (int e = 0; e < d; ++e)
        for (int f : succ_[e]) cur[std::size_t(e) * d + f] = 1;
    std::vector<long long> pow = cur;
    for (int step = 1; step < k; ++step) {
        std::vector<long long> next(std::size_t(d) * d, 0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const long long v = pow[std::size_t(i) * d + j];
                if (v == 0) continue;
                for (int f : succ_[j]) next[std::size_t(i) * d + f] += v;
            }
        pow.swap(next);
    }
    long long tr = 0;
    for (int i = 0; i < d; ++i) tr += pow[std::size_t(i) * d + i];
    return tr;
}

ZetaPole::ZetaPole(double x_)
    : std::runtime_error("zeta pole at x = " + std::to_string(x_)), x(x_) {}

namespace {

// det(I - xA + (D-I)x^2) as a sign/log pair.
LuDet three_term_det(const Graph& g, double x) {
    const int n = g.vertex_count();
    DenseMatrix t(n, n);
    for (int u = 0; u < n; ++u) t.at(u, u) = 1.0 + (g.degree(u) - 1) * x * x;
    for (auto [u, v] : g.edges()) {
        t.at(u, v) = -x;
        t.at(v, u) = -x;
    }
    return det_lu(t);
}

}  // namespace

double zeta_bass(const Graph& g, double x) {
    const LuDet d = three_term_det(g, x);
    const double det3 = d.value();
    if (std::abs(det3) < 1e-12) throw ZetaPole(x);
    const int ev = g.edge_count() - g.vertex_count();
    return std::pow(1.0 - x * x, double(-ev)) / det3;
}

double zeta_edge(const Graph& g, double x) {
    const DirectedEdgeMatrix m(g);
    const int d = m.dim();
    if (d > 2000) throw std::invalid_argument("zeta_edge: directed edge matrix too large");
    if (d == 0) return 1.0;
    DenseMatrix t(d, d);
    for (int e = 0; e < d; ++e) {
        t.at(e, e) = 1.0;
        for (int f : m.successors(e)) t.at(e, f) -= x;
    }
    const LuDet det = det_lu(t);
    const double v = det.value();
    if (std::abs(v) < 1e-12) throw ZetaPole(x);
    return 1.0 / v;
}

std::vector<AuditReport> zeta_tau_audit(const Graph& g, double x, double tol) {
    const std::string input = describe_instance(g, x);
    const int max_deg = g.max_degree();
    const double r = (max_deg - 1) * std::abs(x);
    const char* claims[] = {"zeta_matrix_feasible", "zeta_tau_upper_bound",
                            "zeta_log_upper_bound", "zeta_tightness_consequence"};
    if (!(r < 1.0) || std::abs(x) >= 1.0) {
        std::vector<AuditReport> out;
        for (const char* c : claims)
            out.push_back(not_applicable(c, input, "|x| not below 1/(max_deg-1)"));
        return out;
    }
    std::vector<AuditReport> out;
    const int n = g.vertex_count(), e = g.edge_count();
    const double denom = 1.0 - x * x;

    // (i) Z = (1/(1-x^2))(I - xA + (D-I)x^2): strict diagonal dominance and
    // the row normalization Z_uu + x * sum_{w~u} Z_uw = 1 of the dual set.
    SymMatrix z(n);
    for (int u = 0; u < n; ++u) z.set(u, u, (1.0 + (g.degree(u) - 1) * x * x) / denom);
    for (auto [u, v] : g.edges()) z.set(u, v, -x / denom);
    double min_dominance = std::numeric_limits<double>::infinity();
    double norm_dev = 0.0;
    for (int u = 0; u < n; ++u) {
        double offsum = 0.0, signed_sum = 0.0;
        for (int w : g.neighbors(u)) {
            offsum += std::abs(z(u, w));
            signed_sum += z(u, w);
        }
        min_dominance = std::min(min_dominance, z(u, u) - offsum);
        norm_dev = std::max(norm_dev, std::abs(z(u, u) + x * signed_sum - 1.0));
    }
    const bool pd = is_positive_definite(z);
    AuditReport feas = make_report(claims[0], input,
                                   n > 0 ? min_dominance : 1.0, 0.0, tol,
                                   "row normalization deviation " +
                                       std::to_string(norm_dev) +
                                       (pd ? "" : "; Cholesky failed"));
    if (!pd || norm_dev > tol) feas.pass = false;
    out.push_back(feas);

    const double log_zeta = std::log(zeta_bass(g, x));
    const double log_tau = solve_auto(CorrelationSpec::uniform(g, x)).log_tau;

    // (ii) zeta (1-x^2)^e >= tau.
    out.push_back(make_report(claims[1], input, log_zeta + e * std::log1p(-x * x), log_tau,
                              tol, "log zeta + e log(1-x^2) vs log tau"));

    // (iii) girth bound on log zeta.
    const auto girth = g.girth();
    const double bound = girth ? 2.0 * e * std::pow(r, double(*girth)) / (1.0 - r) : 0.0;
    out.push_back(make_report(claims[2], input, bound, log_zeta, tol,
                              girth ? "girth " + std::to_string(*girth) : "forest"));

    // (iv) deviation of log tau per edge from log(1-x^2).
    if (e == 0) {
        out.push_back(not_applicable(claims[3], input, "no edges"));
    } else {
        const double dev = log_tau / e - std::log1p(-x * x);
        const double dev_bound = bound / e;
        if (x >= 0.0) {
            out.push_back(make_report(claims[3], input, dev_bound, std::abs(dev), tol,
                                      "two-sided deviation bound"));
        } else {
            out.push_back(make_report(claims[3], input, dev_bound, dev, tol,
                                      "upper side only for negative x"));
        }
    }
    return out;
}

}  // namespace gmrf
