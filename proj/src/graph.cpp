#include "tridecomp/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tridecomp {

namespace {

std::int64_t popcount_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::int64_t c = 0;
  for (std::size_t w = 0; w < a.size(); ++w) c += std::popcount(a[w] & b[w]);
  return c;
}

}  // namespace

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  Graph g;
  g.n_ = n;
  g.words_ = static_cast<std::size_t>((n + 63) / 64);
  g.adj_.assign(static_cast<std::size_t>(n) * g.words_, 0);
  g.eid_.assign(static_cast<std::size_t>(n) * n, -1);
  g.degrees_.assign(n, 0);

  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edge");

  g.edges_ = std::move(edges);
  g.m_ = static_cast<int>(g.edges_.size());
  for (int e = 0; e < g.m_; ++e) {
    auto [u, v] = g.edges_[e];
    g.adj_[static_cast<std::size_t>(u) * g.words_ + (v >> 6)] |= std::uint64_t(1) << (v & 63);
    g.adj_[static_cast<std::size_t>(v) * g.words_ + (u >> 6)] |= std::uint64_t(1) << (u & 63);
    g.eid_[static_cast<std::size_t>(u) * n + v] = e;
    g.eid_[static_cast<std::size_t>(v) * n + u] = e;
    ++g.degrees_[u];
    ++g.degrees_[v];
  }
  return g;
}

Graph Graph::parse_edge_list(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t i = line.find_first_not_of(" \t\r");
      if (i == std::string::npos || line[i] == '#') continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_content_line(header)) throw ParseError("missing 'n m' header");
  long long n = -1, m = -1;
  {
    std::istringstream hs(header);
    if (!(hs >> n >> m) || n < 0 || m < 0)
      throw ParseError("line " + std::to_string(lineno) + ": bad header '" + header + "'");
  }

  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::vector<std::uint8_t> seen;  // duplicate detection without sorting
  seen.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (long long k = 0; k < m; ++k) {
    std::string body;
    if (!next_content_line(body))
      throw ParseError("expected " + std::to_string(m) + " edges, got " + std::to_string(k));
    std::istringstream es(body);
    long long u = -1, v = -1;
    if (!(es >> u >> v))
      throw ParseError("line " + std::to_string(lineno) + ": bad edge '" + body + "'");
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw ParseError("line " + std::to_string(lineno) + ": vertex out of range in '" + body + "'");
    if (u == v)
      throw ParseError("line " + std::to_string(lineno) + ": self-loop '" + body + "'");
    auto a = std::min(u, v), b = std::max(u, v);
    auto& flag = seen[static_cast<std::size_t>(a) * n + b];
    if (flag)
      throw ParseError("line " + std::to_string(lineno) + ": duplicate edge '" + body + "'");
    flag = 1;
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  return from_edges(static_cast<int>(n), std::move(edges));
}

Graph Graph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_edge_list(in);
}

void Graph::write_edge_list(std::ostream& out) const {
  out << n_ << ' ' << m_ << '\n';
  for (auto [u, v] : edges_) out << u << ' ' << v << '\n';
}

void Graph::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_edge_list(out);
}

int Graph::min_degree() const {
  if (n_ == 0) return 0;
  return *std::min_element(degrees_.begin(), degrees_.end());
}

int Graph::common_degree(int e) const {
  auto [u, v] = edges_[e];
  return static_cast<int>(popcount_and(row(u), row(v)));
}

std::vector<int> Graph::common_neighbourhood(int e) const {
  auto [u, v] = edges_[e];
  std::vector<int> res;
  auto ru = row(u), rv = row(v);
  for (std::size_t w = 0; w < words_; ++w)
    detail::for_each_bit(ru[w] & rv[w], w, [&](int x) { res.push_back(x); });
  return res;
}

bool Graph::is_k3_divisible() const {
  if (m_ % 3 != 0) return false;
  for (int v = 0; v < n_; ++v)
    if (degrees_[v] % 2 != 0) return false;
  return true;
}

EdgeSet EdgeSet::full(int m) {
  EdgeSet s(m);
  for (std::size_t w = 0; w < s.bits_.size(); ++w) s.bits_[w] = ~std::uint64_t(0);
  if (m & 63) s.bits_.back() = (std::uint64_t(1) << (m & 63)) - 1;
  if (m == 0 && !s.bits_.empty()) s.bits_.back() = 0;
  return s;
}

std::int64_t EdgeSet::count() const {
  std::int64_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

EdgeSet EdgeSet::complement() const {
  EdgeSet s = EdgeSet::full(m_);
  for (std::size_t w = 0; w < bits_.size(); ++w) s.bits_[w] &= ~bits_[w];
  return s;
}

std::vector<int> EdgeSet::to_ids() const {
  std::vector<int> ids;
  for (std::size_t w = 0; w < bits_.size(); ++w)
    detail::for_each_bit(bits_[w], w, [&](int e) { ids.push_back(e); });
  return ids;
}

GraphStats graph_stats(const Graph& g) {
  GraphStats s;
  s.m = g.edge_count();
  s.min_degree = g.min_degree();
  s.t_e.resize(g.edge_count());
  std::int64_t total = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    s.t_e[e] = g.common_degree(e);
    total += s.t_e[e];
  }
  // each triangle contributes one common neighbour to each of its 3 edges
  s.triangle_count = total / 3;
  if (s.m > 0) s.t_av = Rat(total, s.m);
  return s;
}

std::vector<Triangle> enumerate_triangles(const Graph& g) {
  std::vector<Triangle> tris;
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edge(e);
    detail::masked_and(g.row(u), g.row(v), v, [&](std::size_t w, std::uint64_t x) {
      detail::for_each_bit(x, w, [&](int c) { tris.push_back({u, v, c}); });
    });
  }
  return tris;  // already lexicographic: edges in (u,v) order, c ascending
}

std::int64_t triangle_count(const Graph& g) {
  std::int64_t total = 0;
  for (int e = 0; e < g.edge_count(); ++e) total += g.common_degree(e);
  return total / 3;
}

std::vector<RootedPair> enumerate_rooted_pairs(const Graph& g) {
  std::vector<RootedPair> pairs;
  for_each_k4(g, [&](int a, int b, int c, int d) {
    // {ab,cd}, {ac,bd}, {ad,bc}; the first id is smaller in each pair
    pairs.push_back({g.edge_id(a, b), g.edge_id(c, d)});
    pairs.push_back({g.edge_id(a, c), g.edge_id(b, d)});
    pairs.push_back({g.edge_id(a, d), g.edge_id(b, c)});
  });
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::int64_t rooted_pair_count(const Graph& g) {
  std::int64_t k4 = 0;
  for_each_k4(g, [&](int, int, int, int) { ++k4; });
  return 3 * k4;
}

namespace {

// Adjacency rows restricted to the edges of A.
std::vector<std::uint64_t> cut_rows(const Graph& g, const EdgeSet& A) {
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(g.order()) * g.row_words(), 0);
  for (int e : A.to_ids()) {
    auto [u, v] = g.edge(e);
    rows[static_cast<std::size_t>(u) * g.row_words() + (v >> 6)] |= std::uint64_t(1) << (v & 63);
    rows[static_cast<std::size_t>(v) * g.row_words() + (u >> 6)] |= std::uint64_t(1) << (u & 63);
  }
  return rows;
}

}  // namespace

std::vector<std::int64_t> cut_partner_counts(const Graph& g, const EdgeSet& A) {
  const std::size_t words = g.row_words();
  auto rows_a = cut_rows(g, A);
  std::vector<std::uint64_t> common(words);
  std::vector<std::int64_t> counts(g.edge_count(), 0);
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edge(e);
    auto ru = g.row(u), rv = g.row(v);
    for (std::size_t w = 0; w < words; ++w) common[w] = ru[w] & rv[w];
    std::int64_t twice = 0;
    for (std::size_t w = 0; w < words; ++w) {
      detail::for_each_bit(common[w], w, [&](int x) {
        const std::uint64_t* rax = rows_a.data() + static_cast<std::size_t>(x) * words;
        for (std::size_t w2 = 0; w2 < words; ++w2) twice += std::popcount(rax[w2] & common[w2]);
      });
    }
    counts[e] = twice / 2;
  }
  return counts;
}

std::int64_t kappa_of_cut(const Graph& g, const EdgeSet& A) {
  // each separated pair is counted once, at its non-A edge
  auto counts = cut_partner_counts(g, A);
  std::int64_t kappa = 0;
  for (int e = 0; e < g.edge_count(); ++e)
    if (!A.test(e)) kappa += counts[e];
  return kappa;
}

CutStats cut_statistics(const Graph& g, const EdgeSet& A, const Rat& delta,
                        const GraphStats* pre, const std::int64_t* kappa_pre) {
  if (A.universe() != g.edge_count()) throw std::invalid_argument("edge mask size mismatch");
  GraphStats local;
  const GraphStats* st = pre;
  if (!st) {
    local = graph_stats(g);
    st = &local;
  }
  CutStats cs;
  cs.member = A;
  cs.size = A.count();
  if (st->m > 0) cs.alpha = Rat(cs.size, st->m);
  if (cs.size == 0) {
    cs.empty_cut = true;
    cs.kappa = 0;
    cs.lambda = 0;
    return cs;
  }
  cs.empty_cut = false;
  std::int64_t t_sum = 0;
  for (int e : A.to_ids()) t_sum += st->t_e[e];
  cs.t_A = Rat(t_sum, cs.size);
  cs.kappa = kappa_pre ? *kappa_pre : kappa_of_cut(g, A);
  Rat ceil_term(ceil_rat((1 - delta) * g.order() - 1));
  cs.lambda = Rat(3, 2) * cs.size * ceil_term * (cs.t_A - st->t_av);
  return cs;
}

std::vector<std::int64_t> edge_neighbourhood_weights(const Graph& g, const EdgeSet& A) {
  std::vector<std::int64_t> ea(g.order(), 0);
  for (int e : A.to_ids()) {
    auto [u, v] = g.edge(e);
    auto ru = g.row(u), rv = g.row(v);
    for (std::size_t w = 0; w < g.row_words(); ++w)
      detail::for_each_bit(ru[w] & rv[w], w, [&](int x) { ++ea[x]; });
  }
  return ea;
}

ReducednessCheck is_reduced(const Graph& g, const Rat& delta) {
  ReducednessCheck rc;
  const Rat min_deg_bound = (1 - delta) * g.order();
  for (int v = 0; v < g.order(); ++v) {
    if (Rat(g.degree(v)) < min_deg_bound) {
      rc.reduced = false;
      rc.witness.low_degree_vertex = v;
      return rc;
    }
  }
  const BigInt ceiling = ceil_rat((1 - delta) * g.order() + 1);
  std::vector<char> heavy(g.order(), 0);
  for (int v = 0; v < g.order(); ++v) heavy[v] = BigInt(g.degree(v)) > ceiling;
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edge(e);
    if (!heavy[u] || !heavy[v]) continue;
    bool bad = false;
    Triangle t;
    detail::masked_and(g.row(u), g.row(v), v, [&](std::size_t w, std::uint64_t x) {
      if (bad) return;
      detail::for_each_bit(x, w, [&](int c) {
        if (!bad && heavy[c]) {
          bad = true;
          t = {u, v, c};
        }
      });
    });
    if (bad) {
      rc.reduced = false;
      rc.witness.heavy_triangle = t;
      return rc;
    }
  }
  rc.reduced = true;
  return rc;
}

ReduceResult reduce(const Graph& g, const Rat& delta) {
  const int n = g.order();
  if (Rat(g.min_degree()) < (1 - delta) * n)
    throw PreconditionError("minimum degree below (1-delta)n");
  const std::int64_t ceiling = checked_int64(ceil_rat((1 - delta) * n + 1));

  // mutable adjacency copy
  const std::size_t words = g.row_words();
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n) * words, 0);
  std::vector<int> deg(n);
  for (int v = 0; v < n; ++v) {
    auto rv = g.row(v);
    std::copy(rv.begin(), rv.end(), adj.begin() + static_cast<std::size_t>(v) * words);
    deg[v] = g.degree(v);
  }
  auto drop_edge = [&](int u, int v) {
    adj[static_cast<std::size_t>(u) * words + (v >> 6)] &= ~(std::uint64_t(1) << (v & 63));
    adj[static_cast<std::size_t>(v) * words + (u >> 6)] &= ~(std::uint64_t(1) << (u & 63));
    --deg[u];
    --deg[v];
  };

  std::vector<Triangle> peeled;
  for (;;) {
    // lexicographically smallest triangle with all three degrees above the
    // ceiling; scan only heavy vertices
    bool found = false;
    Triangle t;
    for (int a = 0; a < n && !found; ++a) {
      if (deg[a] <= ceiling) continue;
      const std::uint64_t* ra = adj.data() + static_cast<std::size_t>(a) * words;
      for (int b = a + 1; b < n && !found; ++b) {
        if (deg[b] <= ceiling) continue;
        if (!((ra[b >> 6] >> (b & 63)) & 1u)) continue;
        const std::uint64_t* rb = adj.data() + static_cast<std::size_t>(b) * words;
        std::size_t w0 = static_cast<std::size_t>(b + 1) >> 6;
        for (std::size_t w = w0; w < words && !found; ++w) {
          std::uint64_t x = ra[w] & rb[w];
          if (w == w0) x &= ~std::uint64_t(0) << ((b + 1) & 63);
          detail::for_each_bit(x, w, [&](int c) {
            if (!found && deg[c] > ceiling) {
              found = true;
              t = {a, b, c};
            }
          });
        }
      }
    }
    if (!found) break;
    drop_edge(t.a, t.b);
    drop_edge(t.a, t.c);
    drop_edge(t.b, t.c);
    peeled.push_back(t);
  }

  std::vector<std::pair<int, int>> remaining;
  for (int u = 0; u < n; ++u) {
    const std::uint64_t* ru = adj.data() + static_cast<std::size_t>(u) * words;
    std::size_t w0 = static_cast<std::size_t>(u + 1) >> 6;
    for (std::size_t w = w0; w < words; ++w) {
      std::uint64_t x = ru[w];
      if (w == w0) x &= ~std::uint64_t(0) << ((u + 1) & 63);
      detail::for_each_bit(x, w, [&](int v) { remaining.emplace_back(u, v); });
    }
  }
  ReduceResult res{Graph::from_edges(n, std::move(remaining)), std::move(peeled)};
  return res;
}

}  // namespace tridecomp
