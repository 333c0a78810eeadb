#include "tridecomp/graph.hpp"

#include "tridecomp/generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace tridecomp;

namespace {

EdgeSet ids_to_set(const Graph& g, std::initializer_list<std::pair<int, int>> edges) {
  EdgeSet s(g.edge_count());
  for (auto [u, v] : edges) s.set(g.edge_id(u, v));
  return s;
}

}  // namespace

TEST_CASE("edge-list parsing") {
  SUBCASE("complete K4") {
    std::istringstream in("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    Graph g = Graph::parse_edge_list(in);
    CHECK(g.order() == 4);
    CHECK(g.edge_count() == 6);
    CHECK(enumerate_triangles(g).size() == 4);
  }
  SUBCASE("single edge, no triangles") {
    std::istringstream in("3 1\n0 1\n");
    Graph g = Graph::parse_edge_list(in);
    CHECK(g.edge_count() == 1);
    CHECK(enumerate_triangles(g).empty());
  }
  SUBCASE("comments and blank lines are ignored") {
    std::istringstream in("# header comment\n3 2\n0 1\n# mid comment\n\n1 2\n");
    Graph g = Graph::parse_edge_list(in);
    CHECK(g.edge_count() == 2);
  }
  SUBCASE("duplicate edge names the line") {
    std::istringstream in("3 2\n0 1\n1 0\n");
    CHECK_THROWS_WITH_AS(Graph::parse_edge_list(in), doctest::Contains("line 3"), ParseError);
  }
  SUBCASE("out-of-range vertex") {
    std::istringstream in("3 1\n0 3\n");
    CHECK_THROWS_WITH_AS(Graph::parse_edge_list(in), doctest::Contains("out of range"), ParseError);
  }
  SUBCASE("self-loop") {
    std::istringstream in("3 1\n1 1\n");
    CHECK_THROWS_WITH_AS(Graph::parse_edge_list(in), doctest::Contains("self-loop"), ParseError);
  }
  SUBCASE("missing edges") {
    std::istringstream in("3 2\n0 1\n");
    CHECK_THROWS_AS(Graph::parse_edge_list(in), ParseError);
  }
}

TEST_CASE("serialization round-trip") {
  Graph g = barrier_graph(2);
  std::ostringstream out;
  g.write_edge_list(out);
  std::istringstream in(out.str());
  Graph h = Graph::parse_edge_list(in);
  CHECK(h.order() == g.order());
  CHECK(h.edges() == g.edges());
}

TEST_CASE("triangles and rooted pairs on small completes") {
  Graph k4 = complete_graph(4);
  CHECK(enumerate_triangles(k4).size() == 4);
  CHECK(enumerate_rooted_pairs(k4).size() == 3);

  Graph k5 = complete_graph(5);
  auto pairs = enumerate_rooted_pairs(k5);
  CHECK(pairs.size() == 15);  // 5 cliques of size 4, three pairs each
  CHECK(pairs == oracles::naive_rooted_pairs(k5));
  CHECK(triangle_count(k5) == 10);
}

TEST_CASE("common neighbourhood") {
  Graph k5 = complete_graph(5);
  auto t = k5.common_neighbourhood(k5.edge_id(0, 1));
  CHECK(t == std::vector<int>{2, 3, 4});
  CHECK(k5.common_degree(k5.edge_id(0, 1)) == 3);

  // both dominating vertices see every part vertex
  Graph b = barrier_graph(2);
  auto tuv = b.common_neighbourhood(b.edge_id(12, 13));
  CHECK(tuv.size() == 12);
  for (int i = 0; i < 12; ++i) CHECK(tuv[i] == i);
}

TEST_CASE("cut statistics on K5") {
  Graph k5 = complete_graph(5);
  GraphStats st = graph_stats(k5);
  CHECK(st.t_av == Rat(3));

  SUBCASE("triangle cut") {
    EdgeSet A = ids_to_set(k5, {{0, 1}, {0, 2}, {1, 2}});
    CutStats cs = cut_statistics(k5, A, Rat(3, 10));
    CHECK(cs.size == 3);
    CHECK(cs.alpha == Rat(3, 10));
    CHECK(cs.t_A == Rat(3));
    CHECK(cs.lambda == 0);
    CHECK(cs.kappa == 9);
  }
  SUBCASE("full cut separates nothing") {
    CutStats cs = cut_statistics(k5, EdgeSet::full(k5.edge_count()), Rat(3, 10));
    CHECK(cs.kappa == 0);
    CHECK(cs.t_A == st.t_av);
    CHECK(cs.lambda == 0);
  }
  SUBCASE("empty cut marker") {
    CutStats cs = cut_statistics(k5, EdgeSet(k5.edge_count()), Rat(3, 10));
    CHECK(cs.empty_cut);
    CHECK(cs.kappa == 0);
    CHECK(cs.lambda == 0);
  }
}

TEST_CASE("edge neighbourhood weights") {
  Graph k5 = complete_graph(5);
  EdgeSet A = ids_to_set(k5, {{0, 1}, {0, 2}, {1, 2}});
  auto ea = edge_neighbourhood_weights(k5, A);
  CHECK(ea == std::vector<std::int64_t>{1, 1, 1, 3, 3});

  auto zero = edge_neighbourhood_weights(k5, EdgeSet(k5.edge_count()));
  CHECK(zero == std::vector<std::int64_t>(5, 0));

  // for the full edge set, e(u) counts the triangles through u
  Graph g = barrier_graph(2);
  auto full = edge_neighbourhood_weights(g, EdgeSet::full(g.edge_count()));
  auto tris = enumerate_triangles(g);
  std::vector<std::int64_t> per_vertex(g.order(), 0);
  for (const Triangle& t : tris) {
    ++per_vertex[t.a];
    ++per_vertex[t.b];
    ++per_vertex[t.c];
  }
  CHECK(full == per_vertex);
}

TEST_CASE("reducedness checks") {
  CHECK(is_reduced(complete_graph(7), Rat(37, 250)).reduced);

  for (int h : {2, 3, 4, 5, 6})
    CHECK(is_reduced(barrier_graph(h), barrier_delta(h)).reduced);

  SUBCASE("low degree witness") {
    auto rc = is_reduced(complete_graph(10), Rat(1, 100));
    CHECK_FALSE(rc.reduced);
    CHECK(rc.witness.low_degree_vertex.has_value());
  }
  SUBCASE("heavy triangle witness") {
    auto rc = is_reduced(complete_graph(10), Rat(3, 10));
    CHECK_FALSE(rc.reduced);
    REQUIRE(rc.witness.heavy_triangle.has_value());
    Triangle t = *rc.witness.heavy_triangle;
    CHECK(t == Triangle{0, 1, 2});  // lexicographically first offender
  }
}

TEST_CASE("reduce peels to a reduced graph") {
  SUBCASE("already reduced is a fixed point") {
    Graph k7 = complete_graph(7);
    auto rr = reduce(k7, Rat(37, 250));
    CHECK(rr.peeled.empty());
    CHECK(rr.graph.edges() == k7.edges());
  }
  SUBCASE("K10 at delta 0.3") {
    auto rr = reduce(complete_graph(10), Rat(3, 10));
    CHECK_FALSE(rr.peeled.empty());
    CHECK(is_reduced(rr.graph, Rat(3, 10)).reduced);
    // peeled triangles are edge-disjoint and their edges left the graph
    EdgeSet seen(complete_graph(10).edge_count());
    Graph k10 = complete_graph(10);
    for (const Triangle& t : rr.peeled) {
      for (auto [u, v] : {std::pair{t.a, t.b}, {t.a, t.c}, {t.b, t.c}}) {
        int e = k10.edge_id(u, v);
        CHECK_FALSE(seen.test(e));
        seen.set(e);
        CHECK_FALSE(rr.graph.adjacent(u, v));
      }
    }
    CHECK(rr.graph.edge_count() + 3 * static_cast<int>(rr.peeled.size()) == k10.edge_count());
  }
  SUBCASE("precondition") {
    CHECK_THROWS_AS(reduce(barrier_graph(2), Rat(37, 250)), PreconditionError);
  }
}

TEST_CASE("brute-force oracle equivalence on all graphs with n <= 8") {
  std::mt19937_64 rng(20240811);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 4 + static_cast<int>(rng() % 5);
    double p = 0.3 + 0.6 * static_cast<double>(rng() % 1000) / 1000.0;
    Graph g = oracles::random_graph(n, p, rng);

    CHECK(enumerate_triangles(g) == oracles::naive_triangles(g));
    CHECK(enumerate_rooted_pairs(g) == oracles::naive_rooted_pairs(g));

    EdgeSet A = oracles::random_cut(g, rng);
    CHECK(kappa_of_cut(g, A) == oracles::naive_kappa(g, A));
    CHECK(kappa_of_cut(g, A.complement()) == kappa_of_cut(g, A));  // separation is symmetric

    // sum identity: sum_u e_A(u) = |A| t_A = sum of t_e over A
    auto ea = edge_neighbourhood_weights(g, A);
    std::int64_t lhs = 0;
    for (auto v : ea) lhs += v;
    GraphStats st = graph_stats(g);
    std::int64_t rhs = 0;
    for (int e : A.to_ids()) rhs += st.t_e[e];
    CHECK(lhs == rhs);

    std::int64_t te_total = 0;
    for (int e = 0; e < g.edge_count(); ++e) te_total += st.t_e[e];
    CHECK(te_total == 3 * st.triangle_count);
  }
}

TEST_CASE("t_e range under the degree floor") {
  Rat delta(37, 250);
  Graph g = random_dense(40, delta, 7);
  REQUIRE(Rat(g.min_degree()) >= (1 - delta) * g.order());
  GraphStats st = graph_stats(g);
  for (int e = 0; e < g.edge_count(); ++e) {
    CHECK(Rat(st.t_e[e]) >= (1 - 2 * delta) * g.order());
    CHECK(st.t_e[e] <= g.order() - 2);
  }
}
