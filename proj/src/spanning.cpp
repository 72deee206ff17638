#include "gmrftau/spanning.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gmrftau/solver.hpp"
#include "gmrftau/symmat.hpp"

namespace gmrf {

namespace {

double log_of(const BigInt& v) {
    if (v <= 0) return -std::numeric_limits<double>::infinity();
    const unsigned bits = boost::multiprecision::msb(v);
    if (bits < 900) return std::log(v.convert_to<double>());
    const BigInt shifted = v >> (bits - 64);
    return std::log(shifted.convert_to<double>()) + double(bits - 64) * std::log(2.0);
}

SymMatrix laplacian_combination(const Graph& g, double diag_shift, double t) {
    const int n = g.vertex_count();
    SymMatrix b(n);
    for (int u = 0; u < n; ++u) b.set(u, u, diag_shift + t * g.degree(u));
    for (auto [u, v] : g.edges()) b.set(u, v, -t);
    return b;
}

}  // namespace

BigInt count_spanning_trees(const Graph& g) {
    const int n = g.vertex_count();
    if (n > 64) throw std::invalid_argument("count_spanning_trees: exact path limited to n <= 64");
    if (n == 1) return 1;
    // Reduced Laplacian with the last row/column removed.
    const int m = n - 1;
    std::vector<std::vector<BigInt>> a(m, std::vector<BigInt>(m, 0));
    for (int u = 0; u < m; ++u) a[u][u] = g.degree(u);
    for (auto [u, v] : g.edges())
        if (u < m && v < m) a[u][v] = a[v][u] = -1;
    // Bareiss fraction-free elimination; every division below is exact.
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < m; ++k) {
        if (a[k][k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < m; ++i)
                if (a[i][k] != 0) { swap_row = i; break; }
            if (swap_row < 0) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < m; ++i)
            for (int j = k + 1; j < m; ++j)
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    BigInt det = a[m - 1][m - 1] * sign;
    return det < 0 ? BigInt(0) : det;
}

double log_spanning_tree_count(const Graph& g) {
    const int n = g.vertex_count();
    if (n == 1) return 0.0;
    if (!g.is_connected()) return -std::numeric_limits<double>::infinity();
    std::vector<int> keep;
    for (int u = 0; u + 1 < n; ++u) keep.push_back(u);
    return logdet(laplacian_combination(g, 0.0, 1.0).submatrix(keep));
}

SpanningTreeReport mckay_audit(const Graph& g, int d, double tol) {
    SpanningTreeReport rep;
    const int n = g.vertex_count();
    std::ostringstream tag;
    tag << "n=" << n << " d=" << d;
    const std::string input = tag.str();
    const char* claims[] = {"tree_certificate_feasible", "tree_certificate_det_lower",
                            "tree_certificate_det_upper", "tree_count_upper_bound"};

    const auto reg = g.regular_degree();
    if (!reg || *reg != d || d < 3 || !g.is_connected()) {
        const char* why = !g.is_connected() ? "graph is not connected"
                          : (!reg || *reg != d) ? "graph is not d-regular"
                                                : "bound stated for d >= 3";
        for (const char* c : claims) rep.checks.push_back(not_applicable(c, input, why));
        return rep;
    }
    rep.applicable = true;

    if (n <= 64) {
        rep.count = count_spanning_trees(g);
        rep.log_count = log_of(rep.count);
    } else {
        rep.log_count = log_spanning_tree_count(g);
    }

    const long double dl = d, nl = n;
    const long double log_bound_l =
        1.0L + std::log(dl - 1.0L) - std::log(dl * (dl - 2.0L)) +
        nl * ((dl - 1.0L) * std::log(dl - 1.0L) -
              (dl / 2.0L - 1.0L) * std::log(dl * dl - 2.0L * dl));
    rep.log_bound = double(log_bound_l);
    rep.bound = std::exp(rep.log_bound);
    rep.ratio = std::exp(rep.log_count - rep.log_bound);

    const double x = 1.0 / (d - 1);
    const double t = double(n - 1) / (double(n) * d * (1.0 - x));
    const SymMatrix b = laplacian_combination(g, 1.0 / n, t);

    double norm_dev = 0.0;
    for (int u = 0; u < n; ++u) {
        double signed_sum = 0.0;
        for (int w : g.neighbors(u)) signed_sum += b(u, w);
        norm_dev = std::max(norm_dev, std::abs(b(u, u) + x * signed_sum - 1.0));
    }
    const bool pd = is_positive_definite(b);
    AuditReport feas = make_report(claims[0], input, 1.0 / n, 0.0, tol,
                                   "diagonal dominance margin 1/n; row normalization "
                                   "deviation " + std::to_string(norm_dev) +
                                       (pd ? "" : "; Cholesky failed"));
    if (!pd || norm_dev > tol) feas.pass = false;
    rep.checks.push_back(feas);

    const double log_det_b = logdet(b);
    rep.checks.push_back(make_report(claims[1], input, log_det_b,
                                     (n - 1) * std::log(t) + rep.log_count, tol,
                                     "log det B vs (n-1) log t + log count"));

    const double log_tau = solve_auto(CorrelationSpec::uniform(g, x)).log_tau;
    rep.checks.push_back(make_report(claims[2], input, -log_tau, log_det_b, tol,
                                     "-log tau at x = 1/(d-1) vs log det B"));

    rep.checks.push_back(make_report(claims[3], input, rep.log_bound, rep.log_count, tol,
                                     "closed-form bound vs exact count, log scale"));
    return rep;
}

nlohmann::json spanning_report_to_json(const SpanningTreeReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) checks.push_back(report_to_json(c));
    return nlohmann::json{{"applicable", r.applicable},
                          {"count", r.count.str()},
                          {"log_count", r.log_count},
                          {"log_bound", r.log_bound},
                          {"bound", r.bound},
                          {"ratio", r.ratio},
                          {"checks", checks}};
}

}  // namespace gmrf
