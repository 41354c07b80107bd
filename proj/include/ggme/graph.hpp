#pragma once

#include <string>
#include <vector>

#include "ggme/errors.hpp"
#include "ggme/rng.hpp"

namespace ggme {

// Undirected graph on {0,...,p-1}, dense adjacency.
class Graph {
  public:
    Graph() = default;
    explicit Graph(int p) : p_(p), adj_((std::size_t)p * p, 0) {}

    static Graph complete(int p);
    static Graph cycle(int p);
    // Edges within |i-j| <= bandwidth (bandwidth 1 = tridiagonal pattern).
    static Graph banded(int p, int bandwidth);
    static Graph random(int p, double edge_prob, RngStream& rng);
    // From a 0/1 matrix; validates symmetry and zero diagonal.
    static Graph from_adjacency(const std::vector<std::vector<int>>& a);

    int size() const { return p_; }
    bool has_edge(int i, int j) const { return adj_[(std::size_t)i * p_ + j] != 0; }
    void set_edge(int i, int j, bool on = true);

    // Neighbors of j among {0,...,limit-1}, j excluded.
    std::vector<int> neighbors(int j, int limit) const;
    // Non-neighbors of j among {0,...,limit-1}, j excluded.
    std::vector<int> non_neighbors(int j, int limit) const;

    int n_edges() const;

  private:
    int p_ = 0;
    std::vector<int> adj_;
};

} // namespace ggme
