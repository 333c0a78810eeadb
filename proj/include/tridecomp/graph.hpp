#pragma once

#include "tridecomp/rational.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tridecomp {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Vertex triple a < b < c whose three pairs are edges of the host graph.
struct Triangle {
  int a = 0, b = 0, c = 0;
  friend bool operator==(const Triangle&, const Triangle&) = default;
  friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

// Two vertex-disjoint edges whose four endpoints induce a K4. Canonical
// listings have e1 < e2; the switching direction is from e1 to e2.
struct RootedPair {
  int e1 = 0, e2 = 0;
  friend bool operator==(const RootedPair&, const RootedPair&) = default;
  friend auto operator<=>(const RootedPair&, const RootedPair&) = default;
};

// Immutable dense simple graph. Adjacency is kept as packed 64-bit rows so
// that common-neighbourhood and K4 queries are word-parallel; edges carry a
// stable index in lexicographic (u,v), u < v order, which every mask, report
// and certificate in this library refers to.
class Graph {
 public:
  Graph() = default;

  // Validates: vertex range, no self-loops, no duplicates.
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);

  // Edge-list text: header "n m", then m lines "u v" (0-indexed, u < v).
  // '#' starts a comment line. Errors name the offending line.
  static Graph parse_edge_list(std::istream& in);
  static Graph load_file(const std::string& path);
  void write_edge_list(std::ostream& out) const;
  void save_file(const std::string& path) const;

  int order() const { return n_; }
  int edge_count() const { return m_; }
  int degree(int v) const { return degrees_[v]; }
  int min_degree() const;

  bool adjacent(int u, int v) const {
    return (adj_[static_cast<std::size_t>(u) * words_ + static_cast<std::size_t>(v >> 6)] >>
            (v & 63)) & 1u;
  }
  // -1 when uv is not an edge.
  int edge_id(int u, int v) const { return eid_[static_cast<std::size_t>(u) * n_ + v]; }
  std::pair<int, int> edge(int e) const { return edges_[e]; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  std::size_t row_words() const { return words_; }
  std::span<const std::uint64_t> row(int v) const {
    return {adj_.data() + static_cast<std::size_t>(v) * words_, words_};
  }

  // |N(u) ∩ N(v)| for edge e = uv.
  int common_degree(int e) const;
  std::vector<int> common_neighbourhood(int e) const;

  bool is_k3_divisible() const;  // all degrees even and m ≡ 0 (mod 3)

 private:
  int n_ = 0;
  int m_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> adj_;
  std::vector<std::int32_t> eid_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> degrees_;
};

// Subset of edge ids as a packed bitmask.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(int m) : m_(m), bits_((m + 63) / 64, 0) {}
  static EdgeSet full(int m);

  int universe() const { return m_; }
  bool test(int e) const { return (bits_[e >> 6] >> (e & 63)) & 1u; }
  void set(int e) { bits_[e >> 6] |= std::uint64_t(1) << (e & 63); }
  void reset(int e) { bits_[e >> 6] &= ~(std::uint64_t(1) << (e & 63)); }
  std::int64_t count() const;
  EdgeSet complement() const;
  std::vector<int> to_ids() const;

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  int m_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct GraphStats {
  std::int64_t m = 0;
  std::int64_t triangle_count = 0;
  Rat t_av;                 // 3 * triangle_count / m; zero on empty graphs
  std::vector<int> t_e;     // common-neighbour count per edge
  int min_degree = 0;
};

// Statistics of a cut (A, E\A). For empty A the mean t_A is undefined; the
// empty_cut marker is set and kappa = lambda = 0.
struct CutStats {
  EdgeSet member;
  std::int64_t size = 0;  // |A|
  bool empty_cut = true;
  Rat alpha;
  Rat t_A;
  std::int64_t kappa = 0;
  Rat lambda;
};

struct ReducednessWitness {
  std::optional<int> low_degree_vertex;      // degree < (1-delta)n
  std::optional<Triangle> heavy_triangle;    // all three degrees > ceil((1-delta)n + 1)
};

struct ReducednessCheck {
  bool reduced = false;
  ReducednessWitness witness;
};

struct ReduceResult {
  Graph graph;
  std::vector<Triangle> peeled;  // in removal order
};

GraphStats graph_stats(const Graph& g);

// Every triangle exactly once, lexicographically sorted.
std::vector<Triangle> enumerate_triangles(const Graph& g);
std::int64_t triangle_count(const Graph& g);

// Calls fn(a,b,c,d) for every K4, a < b < c < d, in lexicographic order.
template <typename F>
void for_each_k4(const Graph& g, F&& fn);

// Three rooted pairs per K4, sorted by (e1, e2).
std::vector<RootedPair> enumerate_rooted_pairs(const Graph& g);
std::int64_t rooted_pair_count(const Graph& g);

// For every edge e: the number of A-edges inside G[T_e], i.e. rooted pairs
// through e whose partner edge lies in A.
std::vector<std::int64_t> cut_partner_counts(const Graph& g, const EdgeSet& A);

// Number of rooted pairs separated by A (exactly one of the two edges in A).
std::int64_t kappa_of_cut(const Graph& g, const EdgeSet& A);

// Exact alpha, t_A, kappa_A and lambda_A = (3/2)|A| ceil((1-delta)n - 1) (t_A - t_av).
CutStats cut_statistics(const Graph& g, const EdgeSet& A, const Rat& delta,
                        const GraphStats* pre = nullptr,
                        const std::int64_t* kappa_pre = nullptr);

// e_A(u): number of A-edges spanned by N(u). Sums to |A| * t_A.
std::vector<std::int64_t> edge_neighbourhood_weights(const Graph& g, const EdgeSet& A);

// Reduced: min degree >= (1-delta)n and every triangle has a vertex of
// degree <= ceil((1-delta)n + 1). On failure the witness names a violator.
ReducednessCheck is_reduced(const Graph& g, const Rat& delta);

// Repeatedly removes the lexicographically smallest triangle whose three
// vertices all exceed the degree ceiling, until none exists. Requires
// min degree >= (1-delta)n; the result then satisfies is_reduced.
ReduceResult reduce(const Graph& g, const Rat& delta);

namespace detail {

// AND of rows u and v restricted to vertices > lo, streamed to fn(word_index, word).
template <typename F>
inline void masked_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                       int lo, F&& fn) {
  std::size_t w0 = static_cast<std::size_t>(lo + 1) >> 6;
  if (w0 >= a.size()) return;
  std::uint64_t first = a[w0] & b[w0] & (~std::uint64_t(0) << ((lo + 1) & 63));
  fn(w0, first);
  for (std::size_t w = w0 + 1; w < a.size(); ++w) fn(w, a[w] & b[w]);
}

template <typename F>
inline void for_each_bit(std::uint64_t word, std::size_t word_index, F&& fn) {
  while (word) {
    int bit = std::countr_zero(word);
    fn(static_cast<int>((word_index << 6) + bit));
    word &= word - 1;
  }
}

}  // namespace detail

template <typename F>
void for_each_k4(const Graph& g, F&& fn) {
  const std::size_t words = g.row_words();
  std::vector<std::uint64_t> w_ab(words), w_abc(words);
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edge(e);
    std::fill(w_ab.begin(), w_ab.end(), 0);
    detail::masked_and(g.row(a), g.row(b), b, [&](std::size_t w, std::uint64_t x) { w_ab[w] = x; });
    for (std::size_t w = 0; w < words; ++w) {
      detail::for_each_bit(w_ab[w], w, [&](int c) {
        auto rc = g.row(c);
        std::size_t wc = static_cast<std::size_t>(c + 1) >> 6;
        if (wc >= words) return;
        std::uint64_t head = w_ab[wc] & rc[wc] & (~std::uint64_t(0) << ((c + 1) & 63));
        detail::for_each_bit(head, wc, [&](int d) { fn(a, b, c, d); });
        for (std::size_t w2 = wc + 1; w2 < words; ++w2)
          detail::for_each_bit(w_ab[w2] & rc[w2], w2, [&](int d) { fn(a, b, c, d); });
      });
    }
  }
}

}  // namespace tridecomp
