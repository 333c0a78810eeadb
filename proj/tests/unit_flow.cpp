#include "tridecomp/flow.hpp"

#include "tridecomp/generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace tridecomp;

TEST_CASE("network construction") {
  SUBCASE("edge-transitive graphs carry no demand") {
    FlowNetwork net = build_network(complete_graph(7), Rat(37, 250));
    CHECK(net.eplus.empty());
    CHECK(net.eminus.empty());
    CHECK(net.z == 0);
    CHECK(net.c_max == Rat(2, 75));  // t_av = 5, ceil((1-d)n - 1) = 5
  }
  SUBCASE("K5 capacity") {
    FlowNetwork net = build_network(complete_graph(5), Rat(3, 10));
    CHECK(net.z == 0);
    CHECK(net.c_max == Rat(2, 27));
  }
  SUBCASE("barrier h=2 demand") {
    Graph g = barrier_graph(2);
    FlowNetwork net = build_network(g, Rat(1, 2));
    CHECK(net.t_av == Rat(216, 55));
    // heavy side: the dominating edge plus every dominating-to-part edge
    CHECK(net.eplus.size() == 25);
    CHECK(net.eminus.size() == 30);
    CHECK(net.z == Rat(265, 18));
    CHECK(net.z > 0);
    int uv = g.edge_id(12, 13);
    CHECK(std::find(net.eplus.begin(), net.eplus.end(), uv) != net.eplus.end());
  }
  SUBCASE("refuses non-reduced input with a witness") {
    try {
      build_network(complete_graph(30), Rat(37, 250));
      FAIL("expected NotReducedError");
    } catch (const NotReducedError& e) {
      CHECK(e.witness.heavy_triangle.has_value());
    }
  }
}

TEST_CASE("max flow") {
  SUBCASE("zero demand is an immediate success") {
    FlowNetwork net = build_network(complete_graph(7), Rat(37, 250));
    FlowResult fr = max_flow(net);
    CHECK(fr.success);
    CHECK(fr.value_scaled == 0);
  }
  SUBCASE("the barrier defeats the demand and yields a violated cut") {
    Graph g = barrier_graph(2);
    Rat delta = barrier_delta(2);
    FlowNetwork net = build_network(g, delta);
    FlowResult fr = max_flow(net);
    CHECK_FALSE(fr.success);
    CHECK(fr.value < net.z);
    REQUIRE(fr.min_cut.has_value());
    CutStats cs = cut_statistics(g, *fr.min_cut, delta);
    CHECK(cs.t_A > net.t_av);       // the cut is on the heavy side
    CHECK(Rat(cs.kappa) < cs.lambda);  // and it violates the cut condition
  }
  SUBCASE("flow conservation and capacities on a dense instance") {
    Rat delta(37, 250);
    Graph g = reduce(random_dense(40, delta, 11), delta).graph;
    GraphStats st = graph_stats(g);
    FlowNetwork net = build_network(g, delta, &st);
    FlowResult fr = max_flow(net);
    CHECK(fr.success);
    for (std::size_t i = 0; i < net.pairs.size(); ++i) {
      CHECK(fr.pair_net[i] <= net.cmax_scaled);
      CHECK(fr.pair_net[i] >= -net.cmax_scaled);
    }
    // per-node: net outflow through pairs equals the saturated source/sink arc
    std::vector<std::int64_t> out(net.m, 0);
    for (std::size_t i = 0; i < net.pairs.size(); ++i) {
      out[net.pairs[i].e1] += fr.pair_net[i];
      out[net.pairs[i].e2] -= fr.pair_net[i];
    }
    std::vector<std::int64_t> expected(net.m, 0);
    for (std::size_t i = 0; i < net.eplus.size(); ++i) expected[net.eplus[i]] = net.excess_scaled[i];
    for (std::size_t i = 0; i < net.eminus.size(); ++i) expected[net.eminus[i]] = -net.deficit_scaled[i];
    CHECK(out == expected);
  }
}

TEST_CASE("switching") {
  Graph k4 = complete_graph(4);
  SUBCASE("the worked K4 example") {
    TriangleWeighting w = uniform_weighting(k4, Rat(1, 2));
    apply_switch(k4, w, k4.edge_id(0, 1), k4.edge_id(2, 3), Rat(1, 2));
    auto sums = edge_weight_sums(k4, w);
    CHECK(sums[k4.edge_id(0, 1)] == Rat(1, 2));
    CHECK(sums[k4.edge_id(2, 3)] == Rat(3, 2));
    for (auto [u, v] : {std::pair{0, 2}, {0, 3}, {1, 2}, {1, 3}})
      CHECK(sums[k4.edge_id(u, v)] == 1);
    CHECK(w.weight[w.index_of({0, 1, 2})] == Rat(1, 4));
    CHECK(w.weight[w.index_of({0, 2, 3})] == Rat(3, 4));
  }
  SUBCASE("zero shift is the identity, and a shift reverses") {
    TriangleWeighting w = uniform_weighting(k4, Rat(1, 2));
    TriangleWeighting orig = w;
    apply_switch(k4, w, RootedPair{k4.edge_id(0, 1), k4.edge_id(2, 3)}, Rat(0));
    CHECK(w.weight == orig.weight);
    apply_switch(k4, w, k4.edge_id(0, 1), k4.edge_id(2, 3), Rat(2, 7));
    apply_switch(k4, w, k4.edge_id(0, 1), k4.edge_id(2, 3), Rat(-2, 7));
    CHECK(w.weight == orig.weight);
  }
  SUBCASE("rejects non-rooted pairs") {
    TriangleWeighting w = uniform_weighting(k4, Rat(1, 2));
    CHECK_THROWS_AS(apply_switch(k4, w, k4.edge_id(0, 1), k4.edge_id(0, 2), Rat(1)),
                    std::invalid_argument);
  }
  SUBCASE("exactly two edge sums move, by -eps/+eps") {
    Rat delta(1, 4);
    Graph g = reduce(random_dense(20, delta, 5), delta).graph;
    auto pairs = enumerate_rooted_pairs(g);
    REQUIRE_FALSE(pairs.empty());
    GraphStats st = graph_stats(g);
    TriangleWeighting w = uniform_weighting(g, 1 / st.t_av);
    auto before = edge_weight_sums(g, w);
    RootedPair p = pairs[pairs.size() / 2];
    Rat eps(1, 3);
    apply_switch(g, w, p, eps);
    auto after = edge_weight_sums(g, w);
    for (int e = 0; e < g.edge_count(); ++e) {
      if (e == p.e1)
        CHECK(after[e] == before[e] - eps);
      else if (e == p.e2)
        CHECK(after[e] == before[e] + eps);
      else
        CHECK(after[e] == before[e]);
    }
  }
  SUBCASE("switches commute: shuffled orders agree") {
    Graph k7 = complete_graph(7);
    auto pairs = enumerate_rooted_pairs(k7);
    std::vector<std::pair<RootedPair, Rat>> moves;
    for (std::size_t i = 0; i < pairs.size(); i += 2)
      moves.emplace_back(pairs[i], Rat(1, static_cast<int>(i) + 2));
    TriangleWeighting a = uniform_weighting(k7, Rat(1, 5));
    for (auto& [p, eps] : moves) apply_switch(k7, a, p, eps);
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 5; ++rep) {
      auto shuffled = moves;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      TriangleWeighting b = uniform_weighting(k7, Rat(1, 5));
      for (auto& [p, eps] : shuffled) apply_switch(k7, b, p, eps);
      CHECK(a.weight == b.weight);
    }
  }
}

TEST_CASE("decomposition verification") {
  SUBCASE("uniform weights on complete graphs") {
    Graph k7 = complete_graph(7);
    CHECK(verify_decomposition(k7, uniform_weighting(k7, Rat(1, 5))).valid);
  }
  SUBCASE("uniform start fails off edge-transitivity, naming every edge") {
    Graph g = barrier_graph(2);
    GraphStats st = graph_stats(g);
    auto check = verify_decomposition(g, uniform_weighting(g, 1 / st.t_av));
    CHECK_FALSE(check.valid);
    // every edge here has t_e != t_av (t_e is 12, 6 or 2; t_av = 216/55)
    CHECK(static_cast<int>(check.unbalanced_edges.size()) == g.edge_count());
  }
  SUBCASE("negative weights are flagged") {
    Graph k4 = complete_graph(4);
    TriangleWeighting w = uniform_weighting(k4, Rat(1, 2));
    apply_switch(k4, w, k4.edge_id(0, 1), k4.edge_id(2, 3), Rat(2));
    auto check = verify_decomposition(k4, w);
    CHECK_FALSE(check.valid);
    CHECK_FALSE(check.negative_triangles.empty());
  }
}

TEST_CASE("decompose pipeline") {
  SUBCASE("complete graphs get the uniform decomposition") {
    for (int n : {7, 9, 13}) {
      Graph g = complete_graph(n);
      DecomposeResult res = decompose(g, Rat(37, 250));
      REQUIRE(res.ok);
      for (const Rat& w : res.weighting.weight) CHECK(w == Rat(1, n - 2));
      CHECK(verify_decomposition(g, res.weighting).valid);
    }
  }
  SUBCASE("the barrier fails with a flow shortfall") {
    for (int h : {2, 3}) {
      Graph g = barrier_graph(h);
      DecomposeResult res = decompose(g, barrier_delta(h));
      REQUIRE_FALSE(res.ok);
      REQUIRE(res.failure.has_value());
      CHECK(res.failure->stage == DecomposeStage::FlowShortfall);
      CHECK(res.failure->shortfall > 0);
      CHECK_FALSE(res.failure->min_cut_edges.empty());
      REQUIRE(res.failure->min_cut.has_value());
      CHECK(Rat(res.failure->min_cut->kappa) < res.failure->min_cut->lambda);
    }
  }
  SUBCASE("dense random instance verifies end to end") {
    Rat delta(37, 250);
    Graph g = random_dense(60, delta, 1);
    DecomposeResult res = decompose(g, delta);
    REQUIRE(res.ok);
    auto check = verify_decomposition(g, res.weighting);
    CHECK(check.valid);
    // total conservation: 3 * sum of weights = m
    Rat total = 0;
    for (const Rat& w : res.weighting.weight) total += w;
    CHECK(3 * total == g.edge_count());
  }
  SUBCASE("peeling extends: reduced-graph result plus weight-1 triangles") {
    Rat delta(37, 250);
    Graph g = random_dense(60, delta, 0);
    DecomposeResult direct = decompose(g, delta);
    REQUIRE(direct.ok);
    CHECK(verify_decomposition(g, direct.weighting).valid);
    CHECK_FALSE(direct.peeled.empty());

    ReduceResult rr = reduce(g, delta);
    DecomposeResult inner = decompose(rr.graph, delta);
    REQUIRE(inner.ok);
    CHECK(inner.peeled.empty());
    TriangleWeighting extended = uniform_weighting(g, Rat(0));
    for (std::size_t i = 0; i < inner.weighting.triangles.size(); ++i) {
      int idx = extended.index_of(inner.weighting.triangles[i]);
      REQUIRE(idx >= 0);
      extended.weight[idx] = inner.weighting.weight[i];
    }
    for (const Triangle& t : rr.peeled) extended.weight[extended.index_of(t)] = 1;
    CHECK(verify_decomposition(g, extended).valid);
    CHECK(extended.weight == direct.weighting.weight);
  }
  SUBCASE("too sparse inputs are a precondition error") {
    CHECK_THROWS_AS(decompose(barrier_graph(2), Rat(37, 250)), PreconditionError);
  }
  SUBCASE("an edge in no triangle is reported") {
    // path 0-1-2 plus an isolated-ish structure; delta = 1 admits anything
    Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
    DecomposeResult res = decompose(g, Rat(1));
    REQUIRE_FALSE(res.ok);
    CHECK(res.failure->stage == DecomposeStage::UncoveredEdge);
  }
}

TEST_CASE("Farkas certificates") {
  SUBCASE("blow-up pattern verifies at h=3 and h=9") {
    for (int h : {3, 9}) {
      Graph g = c4_blowup(h);
      FarkasCertificate cert = c4_blowup_certificate(g);
      FarkasCheck check = verify_farkas(g, cert);
      CHECK(check.valid);
      CHECK(check.total == Rat(-2 * h));
    }
  }
  SUBCASE("all-negative weights fail on decomposable graphs") {
    Graph k7 = complete_graph(7);
    FarkasCertificate cert;
    cert.y.assign(k7.edge_count(), Rat(-1));
    FarkasCheck check = verify_farkas(k7, cert);
    CHECK_FALSE(check.valid);
    REQUIRE(check.negative_triangle.has_value());
  }
  SUBCASE("certificates and successful decompositions exclude each other") {
    // on the blow-up: certificate valid, decompose must fail
    Graph g = c4_blowup(3);
    REQUIRE(verify_farkas(g, c4_blowup_certificate(g)).valid);
    Rat delta(1, 2);  // 8-regular on 12 vertices: min degree 8 >= 6
    DecomposeResult res = decompose(g, delta);
    CHECK_FALSE(res.ok);
  }
}

TEST_CASE("barrier weight lower bound") {
  CHECK(barrier_weight_lower_bound(2) == 1 + Rat(391, 324));
  CHECK(barrier_weight_lower_bound(10) == 1 + Rat(18399, 118404));

  SUBCASE("closed form equals the direct flow expression") {
    for (int h = 2; h <= 6; ++h) {
      Graph g = barrier_graph(h);
      GraphStats st = graph_stats(g);
      Rat ceil_term(ceil_rat((1 - barrier_delta(h)) * g.order() - 1));
      Rat c_max = Rat(2) / (3 * st.t_av * ceil_term);
      Rat direct = Rat(6 * h) / st.t_av - 15 * h * (h - 1) * c_max;
      CHECK(direct == barrier_weight_lower_bound(h));
    }
  }
  SUBCASE("monotone decay toward 1") {
    Rat prev = barrier_weight_lower_bound(2);
    for (int h : {3, 10, 100, 1000, 10000}) {
      Rat cur = barrier_weight_lower_bound(h);
      CHECK(cur > 1);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}
