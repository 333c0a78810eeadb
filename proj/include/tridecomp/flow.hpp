#pragma once

#include "tridecomp/graph.hpp"
#include "tridecomp/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tridecomp {

struct NotReducedError : PreconditionError {
  ReducednessWitness witness;
  explicit NotReducedError(ReducednessWitness w)
      : PreconditionError("graph is not reduced"), witness(std::move(w)) {}
};

// Nonnegative-rational weights on the (sorted) triangle list of a host graph.
struct TriangleWeighting {
  std::vector<Triangle> triangles;
  std::vector<Rat> weight;

  int index_of(const Triangle& t) const;
};

TriangleWeighting uniform_weighting(const Graph& g, const Rat& w);

// Weight of each edge: sum of the weights of the triangles containing it.
std::vector<Rat> edge_weight_sums(const Graph& g, const TriangleWeighting& w);

// Sends eps from the edge e_from to the edge e_to across their K4: the two
// triangles through e_from lose eps/2 each, the two through e_to gain eps/2.
// Exactly the two edge sums omega(e_from), omega(e_to) change, by -eps/+eps.
// Negative intermediate triangle weights are permitted.
void apply_switch(const Graph& g, TriangleWeighting& w, int e_from, int e_to, const Rat& eps);
void apply_switch(const Graph& g, TriangleWeighting& w, const RootedPair& pair, const Rat& eps);

struct DecompositionCheck {
  bool valid = false;
  std::vector<int> negative_triangles;  // indices into the weighting
  std::vector<int> unbalanced_edges;    // edge ids whose sum is not exactly 1
};

// Exact check: every triangle weight >= 0 and every edge sum = 1.
DecompositionCheck verify_decomposition(const Graph& g, const TriangleWeighting& w);

// LP-duality witness of fractional indecomposability: y per edge with
// nonnegative sum on every triangle but negative total.
struct FarkasCertificate {
  std::vector<Rat> y;  // indexed by edge id
};

struct FarkasCheck {
  bool valid = false;
  Rat total;
  std::optional<Triangle> negative_triangle;
};

FarkasCheck verify_farkas(const Graph& g, const FarkasCertificate& cert);

// The +1 / -1/2 pattern (intra-part / crossing edges) for c4_blowup graphs.
// Built, never trusted: callers re-verify.
FarkasCertificate c4_blowup_certificate(const Graph& g);

// Auxiliary network over edge-nodes: per rooted pair, arcs of capacity c_max
// both ways; s -> e with capacity t_e*w_av - 1 for edges above the mean;
// e -> t with capacity 1 - t_e*w_av for edges below. All capacities carry a
// single exact integer scale (lcm of the denominators).
struct FlowNetwork {
  int m = 0;  // edge-node count; node ids: edges 0..m-1, source m, sink m+1
  Rat t_av, w_av, c_max, z;
  BigInt scale;
  std::int64_t cmax_scaled = 0;
  std::int64_t z_scaled = 0;
  std::vector<RootedPair> pairs;             // sorted by (e1, e2)
  std::vector<int> eplus, eminus;            // edge ids with t_e above/below t_av
  std::vector<std::int64_t> excess_scaled;   // per eplus entry
  std::vector<std::int64_t> deficit_scaled;  // per eminus entry
};

// Refuses non-reduced inputs (NotReducedError carries the witness).
FlowNetwork build_network(const Graph& g, const Rat& delta, const GraphStats* pre = nullptr);

struct FlowResult {
  bool success = false;  // max flow meets the demand z
  std::int64_t value_scaled = 0;
  Rat value;
  std::vector<std::int64_t> pair_net;  // net flow e1 -> e2 per pairs[i], at network scale
  std::optional<EdgeSet> min_cut;      // s-side edge-nodes, present on shortfall
};

// Exact integer max flow (Dinic). Deterministic for a fixed network.
FlowResult max_flow(const FlowNetwork& net);

enum class DecomposeStage { FlowShortfall, NegativeWeight, UncoveredEdge };

struct DecomposeFailure {
  DecomposeStage stage = DecomposeStage::FlowShortfall;
  Rat shortfall;                    // z - max flow, when the flow fell short
  std::vector<int> min_cut_edges;   // edge ids in the reduced graph
  std::optional<CutStats> min_cut;  // statistics of that cut
  std::optional<Triangle> negative_triangle;
  std::optional<int> uncovered_edge;  // reduced edge id lying in no triangle
};

struct DecomposeResult {
  bool ok = false;
  TriangleWeighting weighting;  // over the triangles of the input graph, when ok
  std::vector<Triangle> peeled;
  Graph reduced;
  Rat z;
  BigInt scale;
  std::optional<DecomposeFailure> failure;
};

// Full pipeline: peel to a reduced graph, start from the uniform weighting
// 1/t_av, route the imbalance through the rooted-pair network, replay the
// flow as switches, re-attach peeled triangles at weight 1. Either returns
// an exactly verified decomposition or a failure report naming the stage.
// Throws PreconditionError when min degree < (1-delta)n.
DecomposeResult decompose(const Graph& g, const Rat& delta);

// 6h/t_av - 15h(h-1)c_max for the barrier graph, in closed form:
// 1 + (210h^2 - 269h + 89) / (3(5h-4)(10h^2 - 15h + 8)). Strictly above 1,
// which is what defeats the switching method there.
Rat barrier_weight_lower_bound(int h);

}  // namespace tridecomp
