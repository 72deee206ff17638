#include "gmrftau/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace gmrf {

namespace {

void check_increasing(const std::vector<int>& ids, const char* what) {
    for (std::size_t i = 0; i + 1 < ids.size(); ++i)
        if (ids[i] >= ids[i + 1])
            throw std::invalid_argument(std::string(what) + ": ids must be strictly increasing");
}

std::vector<int> positions_of(const std::vector<int>& subset, const std::vector<int>& ids) {
    std::vector<int> pos;
    pos.reserve(subset.size());
    for (int v : subset) {
        auto it = std::lower_bound(ids.begin(), ids.end(), v);
        pos.push_back(int(it - ids.begin()));
    }
    return pos;
}

}  // namespace

std::vector<int> CouplingLayout::overlap_ids() const {
    std::vector<int> out;
    std::set_intersection(left_ids.begin(), left_ids.end(), right_ids.begin(), right_ids.end(),
                          std::back_inserter(out));
    return out;
}

std::vector<int> CouplingLayout::union_ids() const {
    std::vector<int> out;
    std::set_union(left_ids.begin(), left_ids.end(), right_ids.begin(), right_ids.end(),
                   std::back_inserter(out));
    return out;
}

SymMatrix couple(const SymMatrix& a, const SymMatrix& b, const CouplingLayout& layout,
                 double overlap_tol) {
    check_increasing(layout.left_ids, "couple left");
    check_increasing(layout.right_ids, "couple right");
    if (a.dim() != int(layout.left_ids.size()) || b.dim() != int(layout.right_ids.size()))
        throw std::invalid_argument("couple: operand dimension does not match layout");

    const std::vector<int> overlap = layout.overlap_ids();
    const std::vector<int> all = layout.union_ids();
    const std::vector<int> pa = positions_of(overlap, layout.left_ids);
    const std::vector<int> pb = positions_of(overlap, layout.right_ids);

    for (std::size_t i = 0; i < overlap.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (std::fabs(a(pa[i], pa[j]) - b(pb[i], pb[j])) > overlap_tol)
                throw std::invalid_argument("couple: operands disagree on the overlap block");

    // Sum of the lifted inverses, minus the inverse of the overlap block.
    SymMatrix s(int(all.size()));
    const std::vector<int> qa = positions_of(layout.left_ids, all);
    const std::vector<int> qb = positions_of(layout.right_ids, all);
    const std::vector<int> qc = positions_of(overlap, all);

    SymMatrix ia = inverse(a);
    for (int i = 0; i < ia.dim(); ++i)
        for (int j = 0; j <= i; ++j) s.add(qa[i], qa[j], ia(i, j));
    SymMatrix ib = inverse(b);
    for (int i = 0; i < ib.dim(); ++i)
        for (int j = 0; j <= i; ++j) s.add(qb[i], qb[j], ib(i, j));
    if (!overlap.empty()) {
        SymMatrix ic = inverse(a.submatrix(pa));
        for (int i = 0; i < ic.dim(); ++i)
            for (int j = 0; j <= i; ++j) s.add(qc[i], qc[j], -ic(i, j));
    }
    return inverse(s);
}

// ---- complete graphs ----

double clique_log_tau(int r, double x) {
    if (r < 1) throw std::invalid_argument("clique_log_tau: r >= 1");
    if (r == 1) return 0.0;
    const double head = 1.0 + (r - 1) * x;
    if (x >= 1.0 || head <= 0.0)
        throw InfeasibleSpec("complete graph has no positive definite completion at x=" +
                             std::to_string(x));
    return (r - 1) * std::log1p(-x) + std::log(head);
}

double clique_tau(int r, double x) { return std::exp(clique_log_tau(r, x)); }

double clique_y(int r, double x) {
    if (r < 2) throw std::invalid_argument("clique_y: r >= 2");
    const double head = 1.0 + (r - 1) * x;
    if (x >= 1.0 || head <= 0.0)
        throw InfeasibleSpec("complete graph has no positive definite completion at x=" +
                             std::to_string(x));
    return x / ((1.0 - x) * head);
}

GmrfSolution complete_solution(int r, double x) {
    GmrfSolution sol;
    sol.graph = complete_graph(r);
    sol.log_tau = clique_log_tau(r, x);
    sol.tau = std::fabs(sol.log_tau) < 700.0 ? std::exp(sol.log_tau)
                                             : (sol.log_tau > 0 ? HUGE_VAL : 0.0);
    sol.a = SymMatrix::constant(r, 1.0, x);
    const double head = 1.0 + (r - 1) * x;
    const double off = -x / ((1.0 - x) * head);
    const double diag = (1.0 + (r - 2) * x) / ((1.0 - x) * head);
    sol.b = SymMatrix::constant(r, diag, off);
    sol.y.assign(sol.graph.edge_count(), -off);
    sol.residual = 0.0;
    sol.iterations = 0;
    sol.method = SolveMethod::clique_sum;
    return sol;
}

// ---- clique sums ----

namespace {

CorrelationSpec induced_spec(const CorrelationSpec& spec, const std::vector<int>& vertices,
                             const Graph& part) {
    if (spec.is_uniform()) return CorrelationSpec::uniform(part, spec.uniform_value());
    std::vector<double> w(part.edge_count());
    for (int e = 0; e < part.edge_count(); ++e) {
        auto [i, j] = part.edges()[e];
        int idx = spec.graph().edge_index(vertices[i], vertices[j]);
        w[e] = spec.weight(idx);
    }
    return CorrelationSpec::per_edge(part, std::move(w));
}

bool is_clique(const Graph& g, const std::vector<int>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (!g.has_edge(vs[i], vs[j])) return false;
    return true;
}

// Components of g with the vertices of `removed` deleted.
std::vector<std::vector<int>> components_without(const Graph& g, const std::vector<char>& removed) {
    const int n = g.vertex_count();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (removed[s] || comp[s] != -1) continue;
        out.emplace_back();
        std::queue<int> q;
        comp[s] = int(out.size()) - 1;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            out.back().push_back(u);
            for (int v : g.neighbors(u))
                if (!removed[v] && comp[v] == -1) {
                    comp[v] = comp[u];
                    q.push(v);
                }
        }
    }
    for (auto& c : out) std::sort(c.begin(), c.end());
    return out;
}

}  // namespace

std::optional<CliqueSumSplit> find_clique_split(const Graph& g) {
    const int n = g.vertex_count();
    if (n < 2) return std::nullopt;

    // Try separators in order of size, smallest first; subsets enumerated
    // lexicographically for determinism.
    const int max_sep = std::min(n - 2, 8);
    std::vector<char> removed(n, 0);
    std::vector<int> sep;
    // size 0 first: disconnected graph splits over the empty clique
    for (int size = 0; size <= max_sep; ++size) {
        sep.assign(size, 0);
        std::function<std::optional<CliqueSumSplit>(int, int)> rec =
            [&](int depth, int start) -> std::optional<CliqueSumSplit> {
            if (depth == size) {
                if (!is_clique(g, sep)) return std::nullopt;
                std::fill(removed.begin(), removed.end(), 0);
                for (int v : sep) removed[v] = 1;
                auto comps = components_without(g, removed);
                if (comps.size() < 2) return std::nullopt;
                CliqueSumSplit split;
                split.shared = sep;
                split.left = comps[0];
                for (std::size_t c = 1; c < comps.size(); ++c)
                    split.right.insert(split.right.end(), comps[c].begin(), comps[c].end());
                for (int v : sep) {
                    split.left.push_back(v);
                    split.right.push_back(v);
                }
                std::sort(split.left.begin(), split.left.end());
                std::sort(split.right.begin(), split.right.end());
                return split;
            }
            for (int v = start; v < n; ++v) {
                sep[depth] = v;
                if (auto r = rec(depth + 1, v + 1)) return r;
            }
            return std::nullopt;
        };
        if (auto r = rec(0, 0)) return r;
    }
    return std::nullopt;
}

GmrfSolution clique_sum_solve(const CorrelationSpec& spec, const SolveOptions& opts) {
    const Graph& g = spec.graph();
    auto split = find_clique_split(g);
    if (!split) {
        GmrfSolution sol = solve_dual_ascent(spec, opts);
        sol.method = SolveMethod::clique_sum;
        return sol;
    }

    Graph gl = induced_subgraph(g, split->left);
    Graph gr = induced_subgraph(g, split->right);
    GmrfSolution sl = clique_sum_solve(induced_spec(spec, split->left, gl), opts);
    GmrfSolution sr = clique_sum_solve(induced_spec(spec, split->right, gr), opts);

    const int n = g.vertex_count();
    CouplingLayout lay{split->left, split->right};
    GmrfSolution sol;
    sol.graph = g;
    sol.a = couple(sl.a, sr.a, lay, 1e-6);

    // B of the whole is the lifted sum of the part B's minus the inverse of
    // the shared clique block.
    SymMatrix b(n);
    for (int i = 0; i < sl.b.dim(); ++i)
        for (int j = 0; j <= i; ++j) b.add(split->left[i], split->left[j], sl.b(i, j));
    for (int i = 0; i < sr.b.dim(); ++i)
        for (int j = 0; j <= i; ++j) b.add(split->right[i], split->right[j], sr.b(i, j));
    double shared_logdet = 0.0;
    if (!split->shared.empty()) {
        std::vector<int> pos = positions_of(split->shared, split->left);
        SymMatrix block = sl.a.submatrix(pos);
        CholeskyFactor f = cholesky_or_throw(block);
        shared_logdet = f.logdet();
        SymMatrix inv = f.inverse();
        for (int i = 0; i < inv.dim(); ++i)
            for (int j = 0; j <= i; ++j) b.add(split->shared[i], split->shared[j], -inv(i, j));
    }
    sol.b = b;
    sol.log_tau = sl.log_tau + sr.log_tau - shared_logdet;
    sol.tau = std::fabs(sol.log_tau) < 700.0 ? std::exp(sol.log_tau)
                                             : (sol.log_tau > 0 ? HUGE_VAL : 0.0);
    sol.y.resize(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edges()[e];
        sol.y[e] = -b(u, v);
    }
    double res = 0.0;
    for (auto [u, v] : g.non_edges()) res = std::max(res, std::fabs(b(u, v)));
    sol.residual = res;
    sol.iterations = sl.iterations + sr.iterations;
    sol.method = SolveMethod::clique_sum;
    return sol;
}

// ---- chordal graphs ----

std::optional<std::vector<int>> perfect_elimination_order(const Graph& g) {
    const int n = g.vertex_count();
    // Lex-BFS, O(n^2) label comparison variant.
    std::vector<std::vector<int>> label(n);
    std::vector<char> visited(n, 0);
    std::vector<int> order;  // visit order
    order.reserve(n);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (visited[v]) continue;
            if (best == -1 || label[v] > label[best]) best = v;
        }
        visited[best] = 1;
        order.push_back(best);
        for (int w : g.neighbors(best))
            if (!visited[w]) label[w].push_back(n - step);
    }

    // Reversed Lex-BFS order is a perfect elimination order iff chordal.
    std::vector<int> elim(order.rbegin(), order.rend());
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[elim[i]] = i;
    for (int i = 0; i < n; ++i) {
        const int v = elim[i];
        int parent = -1;
        for (int w : g.neighbors(v))
            if (pos[w] > i && (parent == -1 || pos[w] < pos[parent])) parent = w;
        if (parent == -1) continue;
        for (int w : g.neighbors(v))
            if (pos[w] > i && w != parent && !g.has_edge(parent, w))
                return std::nullopt;
    }
    return elim;
}

bool is_chordal(const Graph& g) { return perfect_elimination_order(g).has_value(); }

std::vector<std::vector<int>> chordal_maximal_cliques(const Graph& g) {
    auto peo = perfect_elimination_order(g);
    if (!peo) throw NotChordal("graph is not chordal");
    const int n = g.vertex_count();
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[(*peo)[i]] = i;

    std::vector<std::vector<int>> cand;
    for (int i = 0; i < n; ++i) {
        const int v = (*peo)[i];
        std::vector<int> c{v};
        for (int w : g.neighbors(v))
            if (pos[w] > i) c.push_back(w);
        std::sort(c.begin(), c.end());
        cand.push_back(std::move(c));
    }
    // Drop candidates strictly contained in another candidate.
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<std::vector<int>> out;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        bool maximal = true;
        for (std::size_t j = 0; j < cand.size() && maximal; ++j)
            if (j != i && cand[j].size() > cand[i].size() &&
                std::includes(cand[j].begin(), cand[j].end(), cand[i].begin(), cand[i].end()))
                maximal = false;
        if (maximal) out.push_back(cand[i]);
    }
    return out;
}

GmrfSolution solve_chordal(const CorrelationSpec& spec, const SolveOptions&) {
    const Graph& g = spec.graph();
    if (!is_chordal(g)) throw NotChordal("solve_chordal: graph is not chordal");
    const int n = g.vertex_count();
    auto cliques = chordal_maximal_cliques(g);

    // Clique block: unit diagonal with the spec weights, must be PD.
    auto clique_block = [&](const std::vector<int>& c) {
        SymMatrix m(int(c.size()));
        for (std::size_t i = 0; i < c.size(); ++i) {
            m.set(int(i), int(i), 1.0);
            for (std::size_t j = 0; j < i; ++j)
                m.set(int(i), int(j), spec.weight(g.edge_index(c[i], c[j])));
        }
        return m;
    };

    // Clique tree: maximum weight spanning forest on intersection sizes,
    // built greedily (Prim with restarts).
    const int k = int(cliques.size());
    std::vector<int> isect(std::size_t(k) * k, 0);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            std::vector<int> tmp;
            std::set_intersection(cliques[i].begin(), cliques[i].end(), cliques[j].begin(),
                                  cliques[j].end(), std::back_inserter(tmp));
            isect[std::size_t(i) * k + j] = isect[std::size_t(j) * k + i] = int(tmp.size());
        }
    std::vector<char> in_tree(k, 0);
    struct Attach {
        int clique;
        int parent;  // -1 for roots
    };
    std::vector<Attach> order;
    for (int root = 0; root < k; ++root) {
        if (in_tree[root]) continue;
        in_tree[root] = 1;
        order.push_back({root, -1});
        while (true) {
            int best = -1, best_parent = -1, best_w = -1;
            for (int c = 0; c < k; ++c) {
                if (in_tree[c]) continue;
                for (int p = 0; p < k; ++p) {
                    if (!in_tree[p]) continue;
                    int w = isect[std::size_t(c) * k + p];
                    if (w > best_w) {
                        best_w = w;
                        best = c;
                        best_parent = p;
                    }
                }
            }
            if (best == -1 || best_w <= 0) break;
            in_tree[best] = 1;
            order.push_back({best, best_parent});
        }
    }

    GmrfSolution sol;
    sol.graph = g;
    SymMatrix b(n);
    double log_tau = 0.0;
    std::vector<int> have;  // vertices covered so far
    SymMatrix running(1);
    bool first = true;
    for (const Attach& at : order) {
        const auto& c = cliques[at.clique];
        SymMatrix block = clique_block(c);
        CholeskyResult cr = cholesky(block);
        if (!cr.ok)
            throw InfeasibleSpec("chordal spec infeasible: clique block not positive definite");
        log_tau += cr.factor.logdet();
        SymMatrix binv = cr.factor.inverse();
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j <= i; ++j) b.add(c[i], c[j], binv(int(i), int(j)));

        if (first) {
            running = block;
            have = c;
            first = false;
            continue;
        }
        std::vector<int> sep;
        std::set_intersection(have.begin(), have.end(), c.begin(), c.end(),
                              std::back_inserter(sep));
        if (!sep.empty()) {
            std::vector<int> pos = positions_of(sep, c);
            CholeskyFactor sf = cholesky_or_throw(block.submatrix(pos));
            log_tau -= sf.logdet();
            SymMatrix sinv = sf.inverse();
            for (std::size_t i = 0; i < sep.size(); ++i)
                for (std::size_t j = 0; j <= i; ++j) b.add(sep[i], sep[j], -sinv(int(i), int(j)));
        }
        CouplingLayout lay{have, c};
        running = couple(running, block, lay, 1e-9);
        have = lay.union_ids();
    }

    sol.a = running;
    sol.b = b;
    sol.log_tau = log_tau;
    sol.tau = std::fabs(log_tau) < 700.0 ? std::exp(log_tau) : (log_tau > 0 ? HUGE_VAL : 0.0);
    sol.y.resize(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edges()[e];
        sol.y[e] = -b(u, v);
    }
    double res = 0.0;
    for (auto [u, v] : g.non_edges()) res = std::max(res, std::fabs(b(u, v)));
    sol.residual = res;
    sol.iterations = int(order.size());
    sol.method = SolveMethod::chordal_exact;
    return sol;
}

}  // namespace gmrf
