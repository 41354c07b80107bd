#include "ggme/graph.hpp"

namespace ggme {

Graph Graph::complete(int p) {
    Graph g(p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) g.set_edge(i, j);
    return g;
}

Graph Graph::cycle(int p) {
    Graph g(p);
    if (p < 3) throw DomainError("Graph::cycle: need p >= 3");
    for (int i = 0; i < p; ++i) g.set_edge(i, (i + 1) % p);
    return g;
}

Graph Graph::banded(int p, int bandwidth) {
    if (bandwidth < 0) throw DomainError("Graph::banded: bandwidth must be >= 0");
    Graph g(p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p && j <= i + bandwidth; ++j) g.set_edge(i, j);
    return g;
}

Graph Graph::random(int p, double edge_prob, RngStream& rng) {
    if (edge_prob < 0.0 || edge_prob > 1.0) throw DomainError("Graph::random: bad edge_prob");
    Graph g(p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (rng.uniform() < edge_prob) g.set_edge(i, j);
    return g;
}

Graph Graph::from_adjacency(const std::vector<std::vector<int>>& a) {
    int p = (int)a.size();
    Graph g(p);
    for (int i = 0; i < p; ++i) {
        if ((int)a[i].size() != p) throw DimensionError("graph adjacency is not square");
        for (int j = 0; j < p; ++j) {
            int v = a[i][j];
            if (v != 0 && v != 1) throw DomainError("graph adjacency entries must be 0/1");
            if (i == j && v != 0) throw DomainError("graph adjacency diagonal must be zero");
            if (v != a[j][i]) throw DomainError("graph adjacency must be symmetric");
            if (i < j && v) g.set_edge(i, j);
        }
    }
    return g;
}

void Graph::set_edge(int i, int j, bool on) {
    if (i == j) throw DomainError("Graph::set_edge: no self loops");
    adj_[(std::size_t)i * p_ + j] = on ? 1 : 0;
    adj_[(std::size_t)j * p_ + i] = on ? 1 : 0;
}

std::vector<int> Graph::neighbors(int j, int limit) const {
    std::vector<int> out;
    for (int i = 0; i < limit; ++i)
        if (i != j && has_edge(i, j)) out.push_back(i);
    return out;
}

std::vector<int> Graph::non_neighbors(int j, int limit) const {
    std::vector<int> out;
    for (int i = 0; i < limit; ++i)
        if (i != j && !has_edge(i, j)) out.push_back(i);
    return out;
}

int Graph::n_edges() const {
    int n = 0;
    for (int i = 0; i < p_; ++i)
        for (int j = i + 1; j < p_; ++j) n += has_edge(i, j);
    return n;
}

} // namespace ggme
