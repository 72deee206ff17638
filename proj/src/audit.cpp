#include "gmrftau/audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gmrftau/coupling.hpp"

namespace gmrf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

GmrfSolution solve_uniform(const Graph& g, double x) {
    return solve_auto(CorrelationSpec::uniform(g, x));
}

double log_tau_of(const Graph& g, double x) { return solve_uniform(g, x).log_tau; }

// Signed-interval adaptive Simpson quadrature.
double adaptive_simpson_step(const std::function<double(double)>& f, double a, double b,
                             double fa, double fm, double fb, double whole, double eps,
                             int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double eps) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_step(f, a, b, fa, fm, fb, whole, eps, 40);
}

}  // namespace

AuditReport make_report(const std::string& claim, const std::string& input, double lhs,
                        double rhs, double tol, const std::string& notes) {
    AuditReport r;
    r.claim = claim;
    r.input = input;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = lhs - rhs;
    r.tol = tol;
    r.applicable = true;
    r.pass = r.margin >= -tol;
    r.notes = notes;
    return r;
}

AuditReport not_applicable(const std::string& claim, const std::string& input,
                           const std::string& notes) {
    AuditReport r;
    r.claim = claim;
    r.input = input;
    r.applicable = false;
    r.pass = true;
    r.notes = notes;
    return r;
}

nlohmann::json report_to_json(const AuditReport& r) {
    return nlohmann::json{{"claim", r.claim},     {"input", r.input},
                          {"lhs", r.lhs},         {"rhs", r.rhs},
                          {"margin", r.margin},   {"tol", r.tol},
                          {"applicable", r.applicable}, {"pass", r.pass},
                          {"notes", r.notes}};
}

std::string describe_instance(const Graph& g, double x) {
    std::ostringstream os;
    os.precision(10);
    os << "n=" << g.vertex_count() << " m=" << g.edge_count() << " x=" << x;
    return os.str();
}

std::vector<AuditReport> sidorenko_check(const Graph& g, double x, double tol) {
    if (!(x >= 0.0 && x < 1.0))
        throw std::invalid_argument("sidorenko_check: x must lie in [0,1)");
    std::vector<AuditReport> out;
    const double e = double(g.edge_count());
    const double floor_log = e * std::log1p(-x * x);
    out.push_back(make_report("sidorenko", describe_instance(g, x),
                              log_tau_of(g, x), floor_log, tol,
                              "log tau vs e*log(1-x^2)"));
    if (g.is_bipartite() && x > 0.0) {
        out.push_back(make_report("sidorenko_negated", describe_instance(g, -x),
                                  log_tau_of(g, -x), floor_log, tol,
                                  "bipartite: bound also at -x"));
    }
    return out;
}

std::vector<AuditReport> log_derivative_check(const Graph& g, double x, double h,
                                              double deriv_tol, double tol) {
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("log_derivative_check: x in (0,1)");
    if (!(h > 0.0 && x - h > 0.0 && x + h < 1.0))
        throw std::invalid_argument("log_derivative_check: step leaves (0,1)");
    std::vector<AuditReport> out;
    const std::string input = describe_instance(g, x);

    const GmrfSolution sol = solve_uniform(g, x);
    const double lo = log_tau_of(g, x - h), hi = log_tau_of(g, x + h);
    const double diff = (hi - lo) / (2.0 * h);
    const double ysum2 = sol.y_total_doubled();
    out.push_back(make_report("log_derivative_matches_y_sum", input,
                              deriv_tol, std::abs(diff + ysum2), tol,
                              "central difference of log tau vs -2*sum y, step h=" + fmt(h)));

    const int max_deg = g.max_degree();
    const double avg_deg = g.average_degree();
    const double thr_lo = max_deg > 1 ? 1.0 / (max_deg - 1) : kInf;
    const double thr_hi = avg_deg > 1.0 ? 1.0 / (avg_deg - 1.0) : kInf;
    if (x <= thr_lo + 1e-12 || x >= thr_hi - 1e-12) {
        const double bound = 2.0 * double(g.edge_count()) * x / (1.0 - x * x);
        out.push_back(make_report("y_sum_upper_bound", input, bound, ysum2, tol,
                                  "2*sum y vs 2*e*x/(1-x^2) on the stated intervals"));
    } else {
        out.push_back(not_applicable("y_sum_upper_bound", input,
                                     "x between 1/(max_deg-1) and 1/(avg_deg-1)"));
    }
    return out;
}

std::vector<AuditReport> tightness_bounds(const Graph& g, double x, double tol) {
    if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("tightness_bounds: x in [0,1)");
    if (g.edge_count() == 0) throw std::invalid_argument("tightness_bounds: empty graph");
    std::vector<AuditReport> out;
    const std::string input = describe_instance(g, x);
    const double e = double(g.edge_count());
    const double dev = log_tau_of(g, x) / e - std::log1p(-x * x);

    const int max_deg = g.max_degree();
    const double r = (max_deg - 1) * x;
    if (r < 1.0 - 1e-12) {
        const auto girth = g.girth();
        const double bound = girth ? 2.0 * std::pow(r, double(*girth)) / (1.0 - r) : 0.0;
        out.push_back(make_report("tightness_deviation_upper", input, bound, std::abs(dev),
                                  tol,
                                  girth ? "girth " + std::to_string(*girth) : "forest"));
    } else {
        out.push_back(not_applicable("tightness_deviation_upper", input,
                                     "x not below 1/(max_deg-1)"));
    }

    const double avg_deg = g.average_degree();
    const bool deg2 = std::abs(avg_deg - 2.0) < 1e-12;
    if (avg_deg > 2.0 + 1e-12 && x > 1.0 / (avg_deg - 1.0)) {
        out.push_back(make_report("tightness_deviation_lower", input, dev,
                                  alpha_integral(avg_deg, x), tol, ""));
    } else if (deg2 && x < 1.0) {
        out.push_back(make_report("tightness_deviation_lower", input, dev,
                                  alpha_integral(2.0, x), tol,
                                  "average degree 2: threshold 1/(avg_deg-1) = 1 leaves an "
                                  "empty stated range; numeric extension, valid near 1 only"));
    } else {
        out.push_back(not_applicable("tightness_deviation_lower", input,
                                     "x not above 1/(avg_deg-1)"));
    }
    return out;
}

double alpha_integral(double dbar, double x) {
    const bool deg2 = std::abs(dbar - 2.0) < 1e-12;
    if (!(dbar >= 2.0 - 1e-12)) throw std::domain_error("alpha_integral: average degree < 2");
    if (deg2 && !(x < 1.0)) throw std::domain_error("alpha_integral: x must be below 1");
    const double u = 1.0 / (dbar - 1.0);
    if (!deg2 && !(x >= u - 1e-12))
        throw std::domain_error("alpha_integral: x below 1/(dbar-1)");
    std::function<double(double)> f;
    if (deg2) {
        // 2(t-1)/(2(1-t^2)) simplifies; the raw form is 0/0 at t = 1.
        f = [](double t) { return -1.0 / (1.0 + t); };
    } else {
        f = [dbar](double t) {
            return 2.0 * (t * (dbar - 1.0) - 1.0) / (dbar * (1.0 - t * t));
        };
    }
    return adaptive_simpson(f, u, x, 1e-10);
}

std::vector<AuditReport> deletion_contraction_audit(const Graph& g, int u, int v, double x,
                                                    double tol) {
    if (!g.has_edge(u, v))
        throw std::invalid_argument("deletion_contraction_audit: (u,v) is not an edge");
    if (!(x >= 0.0 && x < 1.0))
        throw std::invalid_argument("deletion_contraction_audit: x in [0,1)");
    std::vector<AuditReport> out;
    std::ostringstream tag;
    tag << describe_instance(g, x) << " edge=(" << u << "," << v << ")";
    const std::string input = tag.str();

    const GmrfSolution sol = solve_uniform(g, x);
    const double ye = sol.y_at(u, v);
    const double thr = x / (1.0 - x * x);
    const double log_shift = std::log1p(-x * x);

    const Graph gm = delete_edge(g, u, v);
    const double log_tau_minus = log_tau_of(gm, x);
    if (std::abs(ye) <= thr + tol) {
        out.push_back(make_report("edge_deletion_bound", input, sol.log_tau,
                                  log_shift + log_tau_minus, tol,
                                  "|y_e| = " + fmt(std::abs(ye)) + " <= x/(1-x^2) = " + fmt(thr)));
    } else {
        out.push_back(not_applicable("edge_deletion_bound", input,
                                     "|y_e| above x/(1-x^2)"));
    }
    if (ye >= thr - tol) {
        const Graph gc = contract_edge(g, u, v);
        out.push_back(make_report("edge_contraction_bound", input, sol.log_tau,
                                  log_shift + log_tau_of(gc, x), tol,
                                  "y_e = " + fmt(ye) + " >= x/(1-x^2) = " + fmt(thr)));
    } else {
        out.push_back(not_applicable("edge_contraction_bound", input,
                                     "y_e below x/(1-x^2)"));
    }
    {
        const GmrfSolution solm = solve_uniform(gm, x);
        const double z = solm.z_at(u, v);
        const double rhs = 2.0 * std::log(1.0 - z * x) - std::log1p(-z * z) - log_shift +
                           sol.log_tau;
        out.push_back(make_report("edge_deletion_counterpart", input, log_tau_minus, rhs, tol,
                                  "z from the deleted graph = " + fmt(z)));
    }
    return out;
}

std::vector<AuditReport> structural_bounds(const GmrfSolution& sol, double x, double tol) {
    std::vector<AuditReport> out;
    const Graph& g = sol.graph;
    const std::string input = describe_instance(g, x);
    if (!(x >= 0.0 && x < 1.0)) {
        for (const char* c : {"vertex_y_lower_bound", "edge_pair_schur_bound",
                              "nonedge_pair_schur_bound", "vertex_y_nonnegative",
                              "total_y_sum_bound"})
            out.push_back(not_applicable(c, input, "stated for x in [0,1)"));
        return out;
    }
    const std::vector<double> ys = sol.vertex_y_sums();
    const double thr = x / (1.0 - x * x);

    double min_y = kInf;
    int argmin = -1;
    for (int u = 0; u < g.vertex_count(); ++u) {
        if (g.degree(u) == 0) continue;
        if (ys[u] < min_y) { min_y = ys[u]; argmin = u; }
    }
    if (argmin >= 0) {
        out.push_back(make_report("vertex_y_lower_bound", input, min_y, thr, tol,
                                  "worst vertex " + std::to_string(argmin)));
        out.push_back(make_report("vertex_y_nonnegative", input, min_y, 0.0, tol,
                                  "worst vertex " + std::to_string(argmin)));
    } else {
        out.push_back(not_applicable("vertex_y_lower_bound", input, "no non-isolated vertex"));
        out.push_back(not_applicable("vertex_y_nonnegative", input, "no non-isolated vertex"));
    }

    double worst_edge = kInf;
    std::string edge_tag;
    for (auto [a, b] : g.edges()) {
        const double m = (1.0 + x * ys[a]) + (1.0 + x * ys[b]) + 2.0 * sol.y_at(a, b) -
                         2.0 / (1.0 - x);
        if (m < worst_edge) {
            worst_edge = m;
            edge_tag = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
        }
    }
    if (edge_tag.empty())
        out.push_back(not_applicable("edge_pair_schur_bound", input, "no edges"));
    else
        out.push_back(make_report("edge_pair_schur_bound", input, worst_edge, 0.0, tol,
                                  "worst edge " + edge_tag));

    double worst_non = kInf;
    std::string non_tag;
    for (auto [a, b] : g.non_edges()) {
        const double z = sol.z_at(a, b);
        const double m = (1.0 + x * ys[a]) + (1.0 + x * ys[b]) - 2.0 / (1.0 - z);
        if (m < worst_non) {
            worst_non = m;
            non_tag = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
        }
    }
    if (non_tag.empty())
        out.push_back(not_applicable("nonedge_pair_schur_bound", input, "graph is complete"));
    else
        out.push_back(make_report("nonedge_pair_schur_bound", input, worst_non, 0.0, tol,
                                  "worst non-edge " + non_tag));

    out.push_back(make_report("total_y_sum_bound", input,
                              double(g.vertex_count() - 1) / (1.0 - x),
                              sol.y_total_doubled(), tol, "2*sum y vs (n-1)/(1-x)"));
    return out;
}

std::vector<AuditReport> convexity_suite(const Graph& g, double x1, double x2, double alpha,
                                         double tol) {
    if (!(0.0 <= x1 && x1 < x2 && x2 < 1.0))
        throw std::invalid_argument("convexity_suite: need 0 <= x1 < x2 < 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("convexity_suite: alpha in (0,1)");
    std::ostringstream tag;
    tag.precision(10);
    tag << "n=" << g.vertex_count() << " m=" << g.edge_count() << " x1=" << x1
        << " x2=" << x2 << " alpha=" << alpha;
    const std::string input = tag.str();

    const double l1 = log_tau_of(g, x1), l2 = log_tau_of(g, x2);
    const double lmid = log_tau_of(g, alpha * x1 + (1.0 - alpha) * x2);
    const double lprod = log_tau_of(g, x1 * x2);

    std::vector<AuditReport> out;
    out.push_back(make_report("tau_monotone_decreasing", input, l1, l2, tol,
                              "log tau(x1) >= log tau(x2)"));
    out.push_back(make_report("tau_log_concave", input, lmid,
                              alpha * l1 + (1.0 - alpha) * l2, tol,
                              "log tau at the convex combination"));
    out.push_back(make_report("tau_sum_product_bound", input,
                              std::exp(lprod) + std::exp(l1) * std::exp(l2),
                              std::exp(l1) + std::exp(l2), tol,
                              "tau(x1 x2) + tau(x1) tau(x2) >= tau(x1) + tau(x2)"));
    out.push_back(make_report("tau_product_monotone", input, lprod, l1, tol,
                              "log tau(x1 x2) >= log tau(x1)"));
    return out;
}

std::vector<AuditReport> regular_comparison(const Graph& g, double x, double tol) {
    const std::string input = describe_instance(g, x);
    const auto d = g.regular_degree();
    if (!d || *d == 0)
        return {not_applicable("regular_vs_complete", input, "graph is not regular"),
                not_applicable("regular_vs_bipartite_complete", input, "graph is not regular")};
    std::vector<AuditReport> out;
    const double per_vertex = log_tau_of(g, x) / double(g.vertex_count());
    if (x > 0.0 && x < 1.0) {
        out.push_back(make_report("regular_vs_complete", input,
                                  clique_log_tau(*d + 1, x) / double(*d + 1), per_vertex, tol,
                                  "normalized log tau vs complete graph K_" +
                                      std::to_string(*d + 1)));
    } else {
        out.push_back(not_applicable("regular_vs_complete", input, "stated for x in (0,1)"));
    }
    if (g.is_bipartite() && *d <= 12 && std::abs(x) < 1.0) {
        const Graph kdd = complete_bipartite_graph(*d, *d);
        out.push_back(make_report("regular_vs_bipartite_complete", input,
                                  log_tau_of(kdd, x) / double(2 * *d), per_vertex, tol,
                                  "normalized log tau vs K_{d,d}, d=" + std::to_string(*d)));
    } else if (!g.is_bipartite()) {
        out.push_back(not_applicable("regular_vs_bipartite_complete", input,
                                     "graph is not bipartite"));
    } else {
        out.push_back(not_applicable("regular_vs_bipartite_complete", input,
                                     "degree above 12 or |x| >= 1"));
    }
    return out;
}

AuditReport entropy_report(const GmrfSolution& sol, double x, double tol) {
    const Graph& g = sol.graph;
    const double ln2pie = 1.0 + std::log(2.0 * std::acos(-1.0));
    const int n = g.vertex_count(), e = g.edge_count();
    const double d_all = 0.5 * n * ln2pie + 0.5 * sol.log_tau;
    double total = d_all;
    for (int i = 0; i < e; ++i) total -= ln2pie + 0.5 * std::log1p(-x * x);
    for (int u = 0; u < n; ++u) total += (g.degree(u) - 1) * 0.5 * ln2pie;
    const double collapsed = 0.5 * (sol.log_tau - e * std::log1p(-x * x));
    AuditReport r = make_report("entropy_combination_nonnegative", describe_instance(g, x),
                                total, 0.0, tol,
                                "collapsed form deviation " + fmt(std::abs(total - collapsed)));
    return r;
}

AuditReport multiplicative_inequality_check(const std::vector<std::pair<Graph, double>>& pairs,
                                            double x, double tol, int hypothesis_vmax) {
    if (pairs.empty())
        throw std::invalid_argument("multiplicative_inequality_check: no graphs given");
    if (!(std::abs(x) < 1.0))
        throw std::invalid_argument("multiplicative_inequality_check: |x| < 1 required");
    std::ostringstream tag;
    tag.precision(10);
    tag << "k=" << pairs.size() << " x=" << x;
    const std::string input = tag.str();

    int skipped = 0;
    for (int k = 1; k <= hypothesis_vmax; ++k) {
        std::vector<std::pair<int, int>> all_pairs;
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) all_pairs.emplace_back(a, b);
        const std::size_t subsets = std::size_t(1) << all_pairs.size();
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            std::vector<std::pair<int, int>> es;
            for (std::size_t i = 0; i < all_pairs.size(); ++i)
                if (mask >> i & 1) es.push_back(all_pairs[i]);
            const Graph h(k, es);
            double log_prod = 0.0;
            bool has_zero_pos = false, has_zero_neg = false;
            for (const auto& [gi, ai] : pairs) {
                if (ai == 0.0) continue;
                const double t = hom_density(h, gi);
                if (t == 0.0) {
                    (ai > 0.0 ? has_zero_pos : has_zero_neg) = true;
                } else {
                    log_prod += ai * std::log(t);
                }
            }
            if (has_zero_pos && has_zero_neg) {
                ++skipped;  // 0 and infinity factors together: indeterminate
                continue;
            }
            if (has_zero_neg) continue;  // product diverges, hypothesis holds at h
            if (has_zero_pos || log_prod < -1e-12) {
                std::ostringstream why;
                why << "hypothesis fails at test graph on " << k << " vertices, edges {";
                for (std::size_t i = 0; i < es.size(); ++i)
                    why << (i ? " " : "") << es[i].first << es[i].second;
                why << "}: product " << (has_zero_pos ? 0.0 : std::exp(log_prod));
                return not_applicable("multiplicative_tau_bound", input, why.str());
            }
        }
    }
    double log_sum = 0.0;
    for (const auto& [gi, ai] : pairs) log_sum += ai * log_tau_of(gi, x);
    std::string notes = "weighted log tau sum; hypothesis verified for all test graphs up to " +
                        std::to_string(hypothesis_vmax) + " vertices";
    if (skipped > 0) notes += "; " + std::to_string(skipped) + " indeterminate graphs skipped";
    return make_report("multiplicative_tau_bound", input, log_sum, 0.0, tol, notes);
}

std::vector<AuditReport> bminors_check(const GmrfSolution& sol, double x, double tol) {
    const Graph& g = sol.graph;
    const std::string input = describe_instance(g, x);
    const int n = g.vertex_count();
    const double base = logdet(sol.b);

    double dev_vertex = 0.0;
    for (int u = 0; u < n; ++u) {
        std::vector<int> keep;
        for (int w = 0; w < n; ++w)
            if (w != u) keep.push_back(w);
        dev_vertex = std::max(dev_vertex, std::abs(logdet(sol.b.submatrix(keep)) - base));
    }
    std::vector<AuditReport> out;
    out.push_back(make_report("inverse_minor_vertex", input, 0.0, dev_vertex, tol,
                              "max log deviation over single-vertex minors"));

    if (g.edge_count() == 0 || n < 3) {
        out.push_back(not_applicable("inverse_minor_edge", input, "needs an edge and n >= 3"));
    } else {
        double dev_edge = 0.0;
        for (auto [u, v] : g.edges()) {
            std::vector<int> keep;
            for (int w = 0; w < n; ++w)
                if (w != u && w != v) keep.push_back(w);
            dev_edge = std::max(dev_edge, std::abs(logdet(sol.b.submatrix(keep)) -
                                                   std::log1p(-x * x) - base));
        }
        out.push_back(make_report("inverse_minor_edge", input, 0.0, dev_edge, tol,
                                  "max log deviation over edge pair minors"));
    }

    if (g.edge_count() == 0) {
        out.push_back(not_applicable("inverse_rank_two_perturbation", input, "needs an edge"));
    } else {
        double dev_pert = 0.0;
        const double w2 = (1.0 - x * x) * (1.0 - x * x);
        for (auto [u, v] : g.edges()) {
            for (double s : {-0.9, -0.3, 0.3, 0.9}) {
                const double t = 0.8 * s / (1.0 - x * x);
                DenseMatrix m(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) m.at(i, j) = sol.b(i, j);
                m.at(u, u) -= t * x;
                m.at(v, v) -= t * x;
                m.at(u, v) += t;
                m.at(v, u) += t;
                const LuDet d = det_lu(m);
                const double target = base + std::log1p(-t * t * w2);
                dev_pert = d.sign > 0 ? std::max(dev_pert, std::abs(d.log_abs - target)) : kInf;
            }
        }
        out.push_back(make_report("inverse_rank_two_perturbation", input, 0.0, dev_pert, tol,
                                  "max log deviation over edges, t = 0.8s/(1-x^2), "
                                  "s in {±0.3, ±0.9}"));
    }
    return out;
}

std::vector<AuditReport> vertex_transitive_check(const Graph& g, double x, double tol) {
    if (!(std::abs(x) < 1.0))
        throw std::invalid_argument("vertex_transitive_check: |x| < 1 required");
    const std::string input = describe_instance(g, x);
    std::vector<AuditReport> out;
    if (!(x > 0.0)) {
        out.push_back(not_applicable("transitive_y_positive", input, "stated for x in (0,1)"));
        out.push_back(not_applicable("transitive_z_below_x", input, "stated for x in (0,1)"));
        return out;
    }
    const GmrfSolution sol = solve_uniform(g, x);
    if (g.edge_count() == 0) {
        out.push_back(not_applicable("transitive_y_positive", input, "no edges"));
    } else {
        const double min_y = *std::min_element(sol.y.begin(), sol.y.end());
        out.push_back(make_report("transitive_y_positive", input, min_y, 0.0, tol,
                                  "minimum edge y; caller vouches for vertex-transitivity"));
    }
    const auto nes = g.non_edges();
    if (nes.empty()) {
        out.push_back(not_applicable("transitive_z_below_x", input, "graph is complete"));
    } else {
        double max_z = -kInf;
        for (auto [u, v] : nes) max_z = std::max(max_z, sol.z_at(u, v));
        out.push_back(make_report("transitive_z_below_x", input, x, max_z, tol,
                                  "maximum non-edge z; caller vouches for vertex-transitivity"));
    }
    return out;
}

std::vector<AuditReport> full_audit(const Graph& g, double x, double tol) {
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("full_audit: x in (0,1)");
    std::vector<AuditReport> out;
    auto absorb = [&out](std::vector<AuditReport> v) {
        for (auto& r : v) out.push_back(std::move(r));
    };
    absorb(sidorenko_check(g, x, tol));
    if (x - 1e-4 > 0.0 && x + 1e-4 < 1.0) absorb(log_derivative_check(g, x, 1e-4, 1e-5, tol));
    if (g.edge_count() > 0) {
        for (auto& r : tightness_bounds(g, x, tol)) {
            // The lower deviation bound only holds above the average-degree
            // threshold; skip the numeric extension at average degree exactly 2.
            if (r.claim == "tightness_deviation_lower" &&
                std::abs(g.average_degree() - 2.0) < 1e-12)
                continue;
            out.push_back(std::move(r));
        }
    }
    const GmrfSolution sol = solve_uniform(g, x);
    absorb(structural_bounds(sol, x, tol));
    out.push_back(entropy_report(sol, x, tol));
    absorb(bminors_check(sol, x, tol));
    const double x2 = 0.5 * (1.0 + x);
    absorb(convexity_suite(g, x, x2, 0.5, tol));
    absorb(regular_comparison(g, x, tol));
    // One aggregate report per deletion/contraction claim: the worst margin
    // over all edges, so every claim shows up exactly once.
    std::vector<AuditReport> worst;
    for (auto [u, v] : g.edges()) {
        for (auto& r : deletion_contraction_audit(g, u, v, x, tol)) {
            auto it = std::find_if(worst.begin(), worst.end(),
                                   [&r](const AuditReport& w) { return w.claim == r.claim; });
            if (it == worst.end()) {
                out.push_back(r);  // placeholder position: patched below
                worst.push_back(std::move(r));
            } else if (r.applicable && (!it->applicable || r.margin < it->margin)) {
                *it = std::move(r);
            }
        }
    }
    for (auto& w : worst) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&w](const AuditReport& r) { return r.claim == w.claim; });
        w.notes += "; worst case over " + std::to_string(g.edge_count()) + " edges";
        *it = std::move(w);
    }
    return out;
}

}  // namespace gmrf
