#include "gmrftau/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

namespace gmrf {

Graph::Graph(int n) : Graph(n, {}) {}

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 1) throw std::invalid_argument("Graph: need at least one vertex");
    for (auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("Graph: loop edge");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("Graph: endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    adj_.resize(n);
    for (auto [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(int u, int v) const {
    if (u == v) return false;
    const auto& nb = adj_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

int Graph::edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(u, v));
    if (it == edges_.end() || *it != std::make_pair(u, v)) return -1;
    return int(it - edges_.begin());
}

int Graph::max_degree() const {
    int d = 0;
    for (int u = 0; u < n_; ++u) d = std::max(d, degree(u));
    return d;
}

int Graph::min_degree() const {
    int d = n_;
    for (int u = 0; u < n_; ++u) d = std::min(d, degree(u));
    return d;
}

double Graph::average_degree() const { return 2.0 * edge_count() / vertex_count(); }

std::vector<std::pair<int, int>> Graph::non_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (!has_edge(u, v)) out.emplace_back(u, v);
    return out;
}

bool Graph::is_connected() const {
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj_[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                q.push(v);
            }
    }
    return count == n_;
}

bool Graph::is_bipartite(std::vector<int>* side) const {
    std::vector<int> color(n_, -1);
    for (int s = 0; s < n_; ++s) {
        if (color[s] != -1) continue;
        color[s] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj_[u]) {
                if (color[v] == -1) {
                    color[v] = 1 - color[u];
                    q.push(v);
                } else if (color[v] == color[u]) {
                    return false;
                }
            }
        }
    }
    if (side) *side = color;
    return true;
}

std::optional<int> Graph::regular_degree() const {
    int d = degree(0);
    for (int u = 1; u < n_; ++u)
        if (degree(u) != d) return std::nullopt;
    return d;
}

std::optional<int> Graph::girth() const {
    // BFS from every vertex; a non-tree edge closing at depths d(u), d(v)
    // witnesses a cycle of length d(u) + d(v) + 1 through the root.
    int best = n_ + 1;
    std::vector<int> dist(n_), parent(n_);
    for (int s = 0; s < n_; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(parent.begin(), parent.end(), -1);
        std::queue<int> q;
        dist[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            if (2 * dist[u] >= best) break;
            for (int v : adj_[u]) {
                if (dist[v] == -1) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    q.push(v);
                } else if (v != parent[u]) {
                    best = std::min(best, dist[u] + dist[v] + 1);
                }
            }
        }
        if (best == 3) return 3;
    }
    if (best > n_) return std::nullopt;
    return best;
}

// ---- generators ----

Graph path_graph(int n) {
    if (n < 1) throw std::invalid_argument("path_graph: n >= 1");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph(n, std::move(e));
}

Graph cycle_graph(int n) {
    if (n < 3) throw std::invalid_argument("cycle_graph: n >= 3");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    e.emplace_back(0, n - 1);
    return Graph(n, std::move(e));
}

Graph complete_graph(int n) {
    if (n < 1) throw std::invalid_argument("complete_graph: n >= 1");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph(n, std::move(e));
}

Graph complete_bipartite_graph(int a, int b) {
    if (a < 1 || b < 1) throw std::invalid_argument("complete_bipartite_graph: sides >= 1");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) e.emplace_back(i, a + j);
    return Graph(a + b, std::move(e));
}

Graph book_graph(int pages) {
    if (pages < 1) throw std::invalid_argument("book_graph: pages >= 1");
    std::vector<std::pair<int, int>> e{{0, 1}};
    for (int p = 0; p < pages; ++p) {
        e.emplace_back(0, 2 + p);
        e.emplace_back(1, 2 + p);
    }
    return Graph(2 + pages, std::move(e));
}

Graph mobius_ladder_graph() {
    // Sides {0..4} and {5..9}; remove the Hamilton cycle 0-5-1-6-2-7-3-8-4-9-0.
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            int u = i, v = 5 + j;
            bool on_cycle = (j == i) || (j == (i + 4) % 5);
            if (!on_cycle) e.emplace_back(u, v);
        }
    return Graph(10, std::move(e));
}

Graph random_tree(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_tree: n >= 1");
    if (n == 1) return Graph(1);
    if (n == 2) return Graph(2, {{0, 1}});
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<int> prufer(n - 2);
    for (int& p : prufer) p = pick(rng);
    std::vector<int> deg(n, 1);
    for (int p : prufer) ++deg[p];
    std::vector<std::pair<int, int>> e;
    std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
    for (int v = 0; v < n; ++v)
        if (deg[v] == 1) leaves.push(v);
    for (int p : prufer) {
        int leaf = leaves.top();
        leaves.pop();
        e.emplace_back(leaf, p);
        if (--deg[p] == 1) leaves.push(p);
    }
    int a = leaves.top();
    leaves.pop();
    int b = leaves.top();
    e.emplace_back(a, b);
    return Graph(n, std::move(e));
}

Graph random_regular(int n, int d, std::uint64_t seed) {
    if (n < 1 || d < 0 || d >= n) throw std::invalid_argument("random_regular: need 0 <= d < n");
    if ((std::int64_t(n) * d) % 2 != 0)
        throw std::invalid_argument("random_regular: n*d must be even");
    if (d == 0) return Graph(n);
    std::mt19937_64 rng(seed);
    std::vector<int> points(std::size_t(n) * d);
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = int(i / d);
    for (int attempt = 0; attempt < 5000; ++attempt) {
        std::shuffle(points.begin(), points.end(), rng);
        std::vector<std::pair<int, int>> e;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
            int u = points[i], v = points[i + 1];
            if (u == v) {
                ok = false;
                break;
            }
            if (u > v) std::swap(u, v);
            e.emplace_back(u, v);
        }
        if (!ok) continue;
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end()) continue;
        return Graph(n, std::move(e));
    }
    throw std::runtime_error("random_regular: pairing model failed to produce a simple graph");
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("erdos_renyi: n >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("erdos_renyi: p in [0,1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unit(rng) < p) e.emplace_back(u, v);
    return Graph(n, std::move(e));
}

namespace {

int int_param(const std::vector<double>& params, std::size_t i, const char* what) {
    if (i >= params.size()) throw std::invalid_argument(std::string("missing parameter: ") + what);
    double v = params[i];
    if (v != std::floor(v) || std::fabs(v) > 1e9)
        throw std::invalid_argument(std::string("parameter must be an integer: ") + what);
    return int(v);
}

void expect_params(const std::vector<double>& params, std::size_t count, const char* family) {
    if (params.size() != count)
        throw std::invalid_argument(std::string(family) + ": wrong number of parameters");
}

}  // namespace

Graph generate(GraphFamily family, const std::vector<double>& params,
               std::optional<std::uint64_t> seed) {
    auto need_seed = [&]() -> std::uint64_t {
        if (!seed) throw std::invalid_argument("random family requires a seed");
        return *seed;
    };
    switch (family) {
        case GraphFamily::path:
            expect_params(params, 1, "path");
            return path_graph(int_param(params, 0, "n"));
        case GraphFamily::cycle:
            expect_params(params, 1, "cycle");
            return cycle_graph(int_param(params, 0, "n"));
        case GraphFamily::complete:
            expect_params(params, 1, "complete");
            return complete_graph(int_param(params, 0, "n"));
        case GraphFamily::complete_bipartite:
            expect_params(params, 2, "complete_bipartite");
            return complete_bipartite_graph(int_param(params, 0, "a"), int_param(params, 1, "b"));
        case GraphFamily::book:
            expect_params(params, 1, "book");
            return book_graph(int_param(params, 0, "pages"));
        case GraphFamily::mobius_ladder:
            expect_params(params, 0, "mobius_ladder");
            return mobius_ladder_graph();
        case GraphFamily::random_tree:
            expect_params(params, 1, "random_tree");
            return random_tree(int_param(params, 0, "n"), need_seed());
        case GraphFamily::random_regular:
            expect_params(params, 2, "random_regular");
            return random_regular(int_param(params, 0, "n"), int_param(params, 1, "d"), need_seed());
        case GraphFamily::erdos_renyi: {
            expect_params(params, 2, "erdos_renyi");
            int n = int_param(params, 0, "n");
            return erdos_renyi(n, params[1], need_seed());
        }
    }
    throw std::invalid_argument("unknown graph family");
}

// ---- edit operations ----

Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
    const int k = int(vertices.size());
    std::vector<int> pos(g.vertex_count(), -1);
    for (int i = 0; i < k; ++i) {
        int v = vertices[i];
        if (v < 0 || v >= g.vertex_count())
            throw std::invalid_argument("induced_subgraph: vertex out of range");
        if (i > 0 && vertices[i - 1] >= v)
            throw std::invalid_argument("induced_subgraph: vertices must be strictly increasing");
        pos[v] = i;
    }
    std::vector<std::pair<int, int>> e;
    for (auto [a, b] : g.edges())
        if (pos[a] >= 0 && pos[b] >= 0) e.emplace_back(pos[a], pos[b]);
    return Graph(k, std::move(e));
}

Graph delete_edge(const Graph& g, int u, int v) {
    if (!g.has_edge(u, v)) throw std::invalid_argument("delete_edge: not an edge");
    if (u > v) std::swap(u, v);
    std::vector<std::pair<int, int>> e;
    for (auto edge : g.edges())
        if (edge != std::make_pair(u, v)) e.push_back(edge);
    return Graph(g.vertex_count(), std::move(e));
}

Graph contract_edge(const Graph& g, int u, int v) {
    if (!g.has_edge(u, v)) throw std::invalid_argument("contract_edge: not an edge");
    if (u > v) std::swap(u, v);
    auto relabel = [&](int w) {
        if (w == v) return u;
        return w > v ? w - 1 : w;
    };
    std::vector<std::pair<int, int>> e;
    for (auto [a, b] : g.edges()) {
        int x = relabel(a), y = relabel(b);
        if (x == y) continue;
        e.emplace_back(x, y);
    }
    return Graph(g.vertex_count() - 1, std::move(e));
}

// ---- homomorphism counting ----

long long hom_count(const Graph& g, const Graph& h) {
    const int ng = g.vertex_count(), nh = h.vertex_count();
    if (std::pow(double(nh), double(ng)) > 1e8)
        throw std::invalid_argument("hom_count: state space exceeds 1e8");
    std::vector<char> adj(std::size_t(nh) * nh, 0);
    for (auto [a, b] : h.edges()) adj[std::size_t(a) * nh + b] = adj[std::size_t(b) * nh + a] = 1;
    std::vector<int> map(ng, 0);
    long long count = 0;
    while (true) {
        bool ok = true;
        for (auto [a, b] : g.edges())
            if (!adj[std::size_t(map[a]) * nh + map[b]]) {
                ok = false;
                break;
            }
        if (ok) ++count;
        int i = ng - 1;
        while (i >= 0 && map[i] == nh - 1) map[i--] = 0;
        if (i < 0) break;
        ++map[i];
    }
    return count;
}

double hom_density(const Graph& g, const Graph& h) {
    return double(hom_count(g, h)) /
           std::pow(double(h.vertex_count()), double(g.vertex_count()));
}

// ---- edge-list text format ----

Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag[0] == '#') continue;
        if (tag == "n") {
            if (n != -1) throw std::invalid_argument("edge list: duplicate n line");
            if (!(ls >> n) || n < 1)
                throw std::invalid_argument("edge list: bad vertex count at line " +
                                            std::to_string(lineno));
        } else if (tag == "e") {
            int u, v;
            if (n == -1) throw std::invalid_argument("edge list: edge before n line");
            if (!(ls >> u >> v))
                throw std::invalid_argument("edge list: bad edge at line " + std::to_string(lineno));
            edges.emplace_back(u, v);
        } else {
            throw std::invalid_argument("edge list: unknown tag '" + tag + "' at line " +
                                        std::to_string(lineno));
        }
        std::string extra;
        if (ls >> extra)
            throw std::invalid_argument("edge list: trailing content at line " +
                                        std::to_string(lineno));
    }
    if (n == -1) throw std::invalid_argument("edge list: missing n line");
    return Graph(n, std::move(edges));
}

std::string write_edge_list(const Graph& g) {
    std::string out = "n " + std::to_string(g.vertex_count()) + "\n";
    for (auto [u, v] : g.edges())
        out += "e " + std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open graph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_edge_list(buf.str());
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    out << write_edge_list(g);
}

}  // namespace gmrf
