#pragma once

#include "tridecomp/graph.hpp"
#include "tridecomp/rational.hpp"

#include <cstdint>

namespace tridecomp {

Graph complete_graph(int n);

// Order 6h+2: two dominating vertices u, v (the last two ids) over six
// independent parts of size h; between any two parts the aligned 1-factor
// (equal in-part index) is removed from the complete bipartite graph.
// m = 15h^2 - 3h + 1, triangle count = 2h(10h^2 - 15h + 8), and the graph is
// reduced at delta = (h+5)/(6h+2). The uv edge cannot shed enough initial
// weight through its rooted pairs, so the switching method fails here.
Graph barrier_graph(int h);

// delta for which barrier_graph(h) is exactly at the degree threshold.
Rat barrier_delta(int h);

// Four parts of size h arranged in a cycle: complete inside each part,
// complete bipartite between cyclically adjacent parts, nothing between
// opposite parts. (3h-1)-regular; K3-divisible iff h ≡ 3 (mod 6).
// Vertex order is part-major, index-minor.
Graph c4_blowup(int h);

// Complement sampled with every vertex capped at floor(delta*n) - 1
// complement edges (one rejection pass per vertex), so min degree is at
// least n - delta*n. Deterministic under seed.
Graph random_dense(int n, const Rat& delta, std::uint64_t seed);

}  // namespace tridecomp
