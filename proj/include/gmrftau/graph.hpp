#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gmrf {

/// Simple undirected graph on vertices 0..n-1, immutable after construction.
/// Edges are kept sorted lexicographically with u < v.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);
    Graph(int n, std::vector<std::pair<int, int>> edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return int(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int u) const { return adj_[u]; }

    bool has_edge(int u, int v) const;
    /// Position of {u,v} in edges(), or -1.
    int edge_index(int u, int v) const;

    int degree(int u) const { return int(adj_[u].size()); }
    int max_degree() const;
    int min_degree() const;
    double average_degree() const;

    /// Non-adjacent unordered pairs in lexicographic order.
    std::vector<std::pair<int, int>> non_edges() const;

    bool is_connected() const;
    /// If bipartite, optionally reports a 0/1 side assignment.
    bool is_bipartite(std::vector<int>* side = nullptr) const;
    /// Degree if regular.
    std::optional<int> regular_degree() const;
    /// Length of a shortest cycle; nullopt for forests.
    std::optional<int> girth() const;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

// ---- generators ----

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph complete_bipartite_graph(int a, int b);
/// Book graph K_{1,1,k}: spine edge {0,1} plus k page vertices joined to both.
Graph book_graph(int pages);
/// K_{5,5} minus a Hamilton cycle: 3-regular bipartite on 10 vertices.
Graph mobius_ladder_graph();
Graph random_tree(int n, std::uint64_t seed);
/// Pairing model with rejection; requires n*d even, d < n.
Graph random_regular(int n, int d, std::uint64_t seed);
Graph erdos_renyi(int n, double p, std::uint64_t seed);

enum class GraphFamily {
    path,
    cycle,
    complete,
    complete_bipartite,
    book,
    mobius_ladder,
    random_tree,
    random_regular,
    erdos_renyi,
};

/// Dispatcher used by the CLI; validates parameter counts and ranges.
Graph generate(GraphFamily family, const std::vector<double>& params,
               std::optional<std::uint64_t> seed);

// ---- edit operations ----

/// Subgraph induced on `vertices` (strictly increasing); vertex i of the
/// result is vertices[i].
Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices);

Graph delete_edge(const Graph& g, int u, int v);
/// Contract {u,v}: the merged vertex takes the smaller index and the
/// remaining vertices are relabelled compactly.
Graph contract_edge(const Graph& g, int u, int v);

// ---- homomorphism counting ----

/// Number of maps V(g) -> V(h) sending edges to edges (brute force).
/// Refuses when v(h)^v(g) > 1e8.
long long hom_count(const Graph& g, const Graph& h);
/// hom_count / v(h)^v(g).
double hom_density(const Graph& g, const Graph& h);

// ---- edge-list text format ----

/// Format: optional '#' comment lines, then "n <N>", then "e <u> <v>" lines.
Graph parse_edge_list(const std::string& text);
/// Canonical form: "n <N>\n" then sorted "e <u> <v>\n" lines, LF only.
std::string write_edge_list(const Graph& g);

Graph load_edge_list(const std::string& path);
void save_edge_list(const Graph& g, const std::string& path);

}  // namespace gmrf
