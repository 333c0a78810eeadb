#include "tridecomp/flow.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <stdexcept>

namespace tridecomp {

namespace {

Triangle make_triangle(int x, int y, int z) {
  if (x > y) std::swap(x, y);
  if (y > z) std::swap(y, z);
  if (x > y) std::swap(x, y);
  return {x, y, z};
}

// q * scale, which must be an exact integer.
std::int64_t scaled_int(const Rat& q, const BigInt& scale) {
  Rat s = q * scale;
  if (denominator(s) != 1) throw std::logic_error("capacity scaling is not integral");
  return checked_int64(numerator(s));
}

struct Dinic {
  int n;
  std::vector<std::int32_t> to;
  std::vector<std::int64_t> res;
  std::vector<std::vector<std::int32_t>> adj;
  std::vector<std::int32_t> level, it;

  explicit Dinic(int nodes) : n(nodes), adj(nodes), level(nodes), it(nodes) {}

  int add(int u, int v, std::int64_t c_uv, std::int64_t c_vu) {
    int id = static_cast<int>(to.size());
    to.push_back(v);
    res.push_back(c_uv);
    adj[u].push_back(id);
    to.push_back(u);
    res.push_back(c_vu);
    adj[v].push_back(id + 1);
    return id;
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int id : adj[u]) {
        int v = to[id];
        if (level[v] < 0 && res[id] > 0) {
          level[v] = level[u] + 1;
          if (v == t) return true;
          q.push(v);
        }
      }
    }
    return level[t] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t f) {
    if (u == t) return f;
    for (std::int32_t& i = it[u]; i < static_cast<std::int32_t>(adj[u].size()); ++i) {
      int id = adj[u][i];
      int v = to[id];
      if (res[id] <= 0 || level[v] != level[u] + 1) continue;
      std::int64_t d = dfs(v, t, std::min(f, res[id]));
      if (d > 0) {
        res[id] -= d;
        res[id ^ 1] += d;
        return d;
      }
    }
    return 0;
  }

  std::int64_t run(int s, int t, std::int64_t limit) {
    std::int64_t flow = 0;
    while (flow < limit && bfs(s, t)) {
      std::fill(it.begin(), it.end(), 0);
      while (std::int64_t f = dfs(s, t, limit - flow)) {
        flow += f;
        if (flow >= limit) break;
      }
    }
    return flow;
  }
};

}  // namespace

int TriangleWeighting::index_of(const Triangle& t) const {
  auto it = std::lower_bound(triangles.begin(), triangles.end(), t);
  if (it == triangles.end() || !(*it == t)) return -1;
  return static_cast<int>(it - triangles.begin());
}

TriangleWeighting uniform_weighting(const Graph& g, const Rat& w) {
  TriangleWeighting tw;
  tw.triangles = enumerate_triangles(g);
  tw.weight.assign(tw.triangles.size(), w);
  return tw;
}

std::vector<Rat> edge_weight_sums(const Graph& g, const TriangleWeighting& w) {
  std::vector<Rat> sums(g.edge_count(), Rat(0));
  for (std::size_t i = 0; i < w.triangles.size(); ++i) {
    const Triangle& t = w.triangles[i];
    sums[g.edge_id(t.a, t.b)] += w.weight[i];
    sums[g.edge_id(t.a, t.c)] += w.weight[i];
    sums[g.edge_id(t.b, t.c)] += w.weight[i];
  }
  return sums;
}

void apply_switch(const Graph& g, TriangleWeighting& w, int e_from, int e_to, const Rat& eps) {
  auto [a, b] = g.edge(e_from);
  auto [c, d] = g.edge(e_to);
  if (a == c || a == d || b == c || b == d)
    throw std::invalid_argument("apply_switch: edges share a vertex");
  if (!g.adjacent(a, c) || !g.adjacent(a, d) || !g.adjacent(b, c) || !g.adjacent(b, d))
    throw std::invalid_argument("apply_switch: endpoints do not induce a K4");
  const Rat half = eps / 2;
  int abc = w.index_of(make_triangle(a, b, c));
  int abd = w.index_of(make_triangle(a, b, d));
  int acd = w.index_of(make_triangle(a, c, d));
  int bcd = w.index_of(make_triangle(b, c, d));
  if (abc < 0 || abd < 0 || acd < 0 || bcd < 0)
    throw std::invalid_argument("apply_switch: weighting does not cover the K4 triangles");
  w.weight[abc] -= half;
  w.weight[abd] -= half;
  w.weight[acd] += half;
  w.weight[bcd] += half;
}

void apply_switch(const Graph& g, TriangleWeighting& w, const RootedPair& pair, const Rat& eps) {
  apply_switch(g, w, pair.e1, pair.e2, eps);
}

DecompositionCheck verify_decomposition(const Graph& g, const TriangleWeighting& w) {
  if (w.triangles != enumerate_triangles(g))
    throw std::invalid_argument("weighting is not defined on exactly the triangles of the graph");
  DecompositionCheck res;
  for (std::size_t i = 0; i < w.weight.size(); ++i)
    if (w.weight[i] < 0) res.negative_triangles.push_back(static_cast<int>(i));
  auto sums = edge_weight_sums(g, w);
  for (int e = 0; e < g.edge_count(); ++e)
    if (sums[e] != 1) res.unbalanced_edges.push_back(e);
  res.valid = res.negative_triangles.empty() && res.unbalanced_edges.empty();
  return res;
}

FarkasCheck verify_farkas(const Graph& g, const FarkasCertificate& cert) {
  if (static_cast<int>(cert.y.size()) != g.edge_count())
    throw std::invalid_argument("certificate must assign a value to every edge");
  FarkasCheck res;
  res.total = 0;
  for (const Rat& y : cert.y) res.total += y;
  for (const Triangle& t : enumerate_triangles(g)) {
    Rat s = cert.y[g.edge_id(t.a, t.b)] + cert.y[g.edge_id(t.a, t.c)] + cert.y[g.edge_id(t.b, t.c)];
    if (s < 0) {
      res.negative_triangle = t;
      res.valid = false;
      return res;
    }
  }
  res.valid = res.total < 0;
  return res;
}

FarkasCertificate c4_blowup_certificate(const Graph& g) {
  if (g.order() % 4 != 0) throw std::invalid_argument("order is not a multiple of 4");
  const int h = g.order() / 4;
  FarkasCertificate cert;
  cert.y.reserve(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edge(e);
    cert.y.push_back(u / h == v / h ? Rat(1) : Rat(-1, 2));
  }
  return cert;
}

FlowNetwork build_network(const Graph& g, const Rat& delta, const GraphStats* pre) {
  auto rc = is_reduced(g, delta);
  if (!rc.reduced) throw NotReducedError(rc.witness);

  GraphStats local;
  const GraphStats* st = pre;
  if (!st) {
    local = graph_stats(g);
    st = &local;
  }

  FlowNetwork net;
  net.m = g.edge_count();
  net.t_av = st->t_av;
  if (st->triangle_count == 0) throw PreconditionError("graph has no triangles");
  net.w_av = 1 / st->t_av;
  const Rat ceil_term(ceil_rat((1 - delta) * g.order() - 1));
  net.c_max = Rat(2) / (3 * st->t_av * ceil_term);

  BigInt scale = denominator(net.c_max);
  Rat zp = 0, zm = 0;
  for (int e = 0; e < net.m; ++e) {
    Rat w = Rat(st->t_e[e]) * net.w_av;
    if (w > 1) {
      net.eplus.push_back(e);
      zp += w - 1;
      scale = lcm(scale, denominator(Rat(w - 1)));
    } else if (w < 1) {
      net.eminus.push_back(e);
      zm += 1 - w;
      scale = lcm(scale, denominator(Rat(1 - w)));
    }
  }
  if (zp != zm) throw std::logic_error("excess and deficit totals disagree");
  net.z = zp;
  net.scale = scale;
  net.cmax_scaled = scaled_int(net.c_max, scale);
  net.z_scaled = scaled_int(net.z, scale);
  for (int e : net.eplus) net.excess_scaled.push_back(scaled_int(Rat(st->t_e[e]) * net.w_av - 1, scale));
  for (int e : net.eminus) net.deficit_scaled.push_back(scaled_int(1 - Rat(st->t_e[e]) * net.w_av, scale));

  net.pairs = enumerate_rooted_pairs(g);
  return net;
}

FlowResult max_flow(const FlowNetwork& net) {
  Dinic din(net.m + 2);
  const int s = net.m, t = net.m + 1;
  std::vector<int> pair_arc(net.pairs.size());
  for (std::size_t i = 0; i < net.pairs.size(); ++i)
    pair_arc[i] = din.add(net.pairs[i].e1, net.pairs[i].e2, net.cmax_scaled, net.cmax_scaled);
  for (std::size_t i = 0; i < net.eplus.size(); ++i)
    din.add(s, net.eplus[i], net.excess_scaled[i], 0);
  for (std::size_t i = 0; i < net.eminus.size(); ++i)
    din.add(net.eminus[i], t, net.deficit_scaled[i], 0);

  FlowResult res;
  res.value_scaled = din.run(s, t, net.z_scaled);
  res.value = Rat(BigInt(res.value_scaled), net.scale);
  res.success = res.value_scaled == net.z_scaled;

  res.pair_net.resize(net.pairs.size());
  for (std::size_t i = 0; i < net.pairs.size(); ++i)
    res.pair_net[i] = net.cmax_scaled - din.res[pair_arc[i]];  // antiparallel flow cancels here

  if (!res.success) {
    // residual reachability from s gives the violated cut
    EdgeSet cut(net.m);
    std::vector<char> seen(net.m + 2, 0);
    std::queue<int> q;
    seen[s] = 1;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int id : din.adj[u]) {
        int v = din.to[id];
        if (!seen[v] && din.res[id] > 0) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
    for (int e = 0; e < net.m; ++e)
      if (seen[e]) cut.set(e);
    res.min_cut = std::move(cut);
  }
  return res;
}

DecomposeResult decompose(const Graph& g, const Rat& delta) {
  if (Rat(g.min_degree()) < (1 - delta) * g.order())
    throw PreconditionError("minimum degree below (1-delta)n");

  DecomposeResult out;
  ReduceResult rr = reduce(g, delta);
  out.reduced = std::move(rr.graph);
  out.peeled = std::move(rr.peeled);
  const Graph& red = out.reduced;

  GraphStats st = graph_stats(red);

  auto assemble = [&](const std::vector<Rat>& reduced_weights,
                      const std::vector<Triangle>& reduced_tris) {
    TriangleWeighting w;
    w.triangles = enumerate_triangles(g);
    w.weight.assign(w.triangles.size(), Rat(0));
    for (std::size_t i = 0; i < reduced_tris.size(); ++i) {
      int idx = w.index_of(reduced_tris[i]);
      if (idx < 0) throw std::logic_error("reduced triangle missing from host graph");
      w.weight[idx] = reduced_weights[i];
    }
    for (const Triangle& t : out.peeled) {
      int idx = w.index_of(t);
      if (idx < 0) throw std::logic_error("peeled triangle missing from host graph");
      w.weight[idx] = 1;
    }
    return w;
  };

  if (st.m == 0) {
    out.ok = true;
    out.weighting = assemble({}, {});
    return out;
  }

  for (int e = 0; e < red.edge_count(); ++e) {
    if (st.t_e[e] == 0) {
      DecomposeFailure f;
      f.stage = DecomposeStage::UncoveredEdge;
      f.uncovered_edge = e;
      out.failure = std::move(f);
      return out;
    }
  }

  FlowNetwork net = build_network(red, delta, &st);
  out.z = net.z;
  out.scale = net.scale;
  FlowResult fr = max_flow(net);

  if (!fr.success) {
    DecomposeFailure f;
    f.stage = DecomposeStage::FlowShortfall;
    f.shortfall = net.z - fr.value;
    f.min_cut_edges = fr.min_cut->to_ids();
    f.min_cut = cut_statistics(red, *fr.min_cut, delta, &st);
    out.failure = std::move(f);
    return out;
  }

  // Exact weight bookkeeping over a common denominator Q: the uniform start
  // w_av and every flow increment net/(2*scale) are integers over Q.
  const BigInt Q = lcm(denominator(net.w_av), BigInt(2 * net.scale));
  const BigInt k2 = Q / (2 * net.scale);
  const Rat w0 = net.w_av * Q;
  if (denominator(w0) != 1) throw std::logic_error("common denominator does not clear w_av");
  std::vector<Triangle> tris = enumerate_triangles(red);
  std::vector<BigInt> num(tris.size(), numerator(w0));
  auto tri_index = [&](int x, int y, int z) {
    Triangle t = make_triangle(x, y, z);
    auto it = std::lower_bound(tris.begin(), tris.end(), t);
    if (it == tris.end() || !(*it == t)) throw std::logic_error("missing K4 triangle");
    return static_cast<std::size_t>(it - tris.begin());
  };
  for (std::size_t i = 0; i < net.pairs.size(); ++i) {
    if (fr.pair_net[i] == 0) continue;
    auto [a, b] = red.edge(net.pairs[i].e1);
    auto [c, d] = red.edge(net.pairs[i].e2);
    BigInt dw = k2 * fr.pair_net[i];  // signed; positive sends e1 -> e2
    num[tri_index(a, b, c)] -= dw;
    num[tri_index(a, b, d)] -= dw;
    num[tri_index(a, c, d)] += dw;
    num[tri_index(b, c, d)] += dw;
  }

  // edge sums must all equal Q exactly; a negative weight is a failure
  {
    std::vector<BigInt> esum(red.edge_count(), BigInt(0));
    for (std::size_t i = 0; i < tris.size(); ++i) {
      const Triangle& t = tris[i];
      esum[red.edge_id(t.a, t.b)] += num[i];
      esum[red.edge_id(t.a, t.c)] += num[i];
      esum[red.edge_id(t.b, t.c)] += num[i];
    }
    for (int e = 0; e < red.edge_count(); ++e)
      if (esum[e] != Q) throw std::logic_error("edge sum mismatch after full flow");
  }
  for (std::size_t i = 0; i < tris.size(); ++i) {
    if (num[i] < 0) {
      DecomposeFailure f;
      f.stage = DecomposeStage::NegativeWeight;
      f.negative_triangle = tris[i];
      out.failure = std::move(f);
      return out;
    }
  }

  std::vector<Rat> rw(tris.size());
  for (std::size_t i = 0; i < tris.size(); ++i) rw[i] = Rat(num[i], Q);
  out.weighting = assemble(rw, tris);
  out.ok = true;

  auto check = verify_decomposition(g, out.weighting);
  if (!check.valid) throw std::logic_error("assembled weighting failed exact verification");
  return out;
}

Rat barrier_weight_lower_bound(int h) {
  if (h < 2) throw std::invalid_argument("h must be at least 2");
  const BigInt hh = h;
  Rat bound = 1 + Rat(210 * hh * hh - 269 * hh + 89,
                      3 * (5 * hh - 4) * (10 * hh * hh - 15 * hh + 8));
  assert(bound > 1);
  return bound;
}

}  // namespace tridecomp
