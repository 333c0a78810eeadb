#include "tridecomp/generators.hpp"

#include <random>
#include <stdexcept>
#include <vector>

namespace tridecomp {

Graph complete_graph(int n) {
  if (n < 1) throw std::invalid_argument("complete_graph: n must be positive");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(n, std::move(edges));
}

Graph barrier_graph(int h) {
  if (h < 2) throw std::invalid_argument("barrier_graph: h must be at least 2");
  const int n = 6 * h + 2;
  const int u = 6 * h, v = 6 * h + 1;
  std::vector<std::pair<int, int>> edges;
  // part i occupies ids [i*h, (i+1)*h); u and v are adjacent to everything
  for (int x = 0; x < n - 1; ++x) {
    if (x != u) edges.emplace_back(x, u);
    edges.emplace_back(x, v);
  }
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      for (int k = 0; k < h; ++k)
        for (int l = 0; l < h; ++l)
          if (k != l) edges.emplace_back(i * h + k, j * h + l);
  return Graph::from_edges(n, std::move(edges));
}

Rat barrier_delta(int h) { return Rat(h + 5, 6 * h + 2); }

Graph c4_blowup(int h) {
  if (h < 1) throw std::invalid_argument("c4_blowup: h must be positive");
  const int n = 4 * h;
  std::vector<std::pair<int, int>> edges;
  auto id = [h](int part, int k) { return part * h + k; };
  for (int p = 0; p < 4; ++p)
    for (int k = 0; k < h; ++k)
      for (int l = k + 1; l < h; ++l) edges.emplace_back(id(p, k), id(p, l));
  for (int p = 0; p < 4; ++p) {
    int q = (p + 1) % 4;
    for (int k = 0; k < h; ++k)
      for (int l = 0; l < h; ++l) edges.emplace_back(id(p, k), id(q, l));
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph random_dense(int n, const Rat& delta, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_dense: n must be positive");
  const BigInt cap_big = floor_rat(delta * n) - 1;
  if (cap_big < 0) throw std::invalid_argument("random_dense: infeasible degree constraint");
  const int cap = static_cast<int>(checked_int64(cap_big));

  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> comp(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> comp_deg(n, 0);
  for (int u = 0; u < n; ++u) {
    int attempts = cap - comp_deg[u];
    for (int t = 0; t < attempts; ++t) {
      int v = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      if (v == u || comp_deg[u] >= cap || comp_deg[v] >= cap) continue;
      auto& c = comp[static_cast<std::size_t>(std::min(u, v)) * n + std::max(u, v)];
      if (c) continue;
      c = 1;
      ++comp_deg[u];
      ++comp_deg[v];
    }
  }

  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!comp[static_cast<std::size_t>(u) * n + v]) edges.emplace_back(u, v);
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace tridecomp
