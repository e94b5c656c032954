#pragma once
// Serving side: segment-state queries with stream -> batch -> predicted
// precedence, Laplace-smoothed prediction from the insight history, and
// congestion-aware shortest-path routing over a static road graph.

#include <string>
#include <vector>

#include "ma4bdi/batch.hpp"
#include "ma4bdi/road_db.hpp"
#include "ma4bdi/speed.hpp"
#include "ma4bdi/types.hpp"

namespace ma4bdi {

enum class Provenance { stream, batch, predicted };
const char* to_string(Provenance p);

struct InsightAnswer {
  std::string road_id;
  Knowledge state = Knowledge::not_congested;
  double reliability = 0.0;  // stream: ledger weight; batch: vote share; predicted: class probability
  Provenance provenance = Provenance::predicted;
  UtcTime as_of;
};

struct Prediction {
  Knowledge state = Knowledge::not_congested;
  double probability = 0.5;
};

// Laplace-smoothed congestion frequency over history entries for the same
// road, weekday and hour: p = (congested + 1) / (n + 2). Congested only
// when p exceeds one half; the returned probability is that of the
// returned class, always inside (0, 1).
Prediction predict_state(const std::string& road_id, UtcTime at,
                         const std::vector<HistoryEntry>& history);

// Precedence: (1) freshest qualifying stream entry (max reliability, ties
// to the most recent); (2) else the batch insight whose event covers `at`
// and whose resolution, if any, has not passed; (3) else predict_state.
// When a road db is supplied, unknown roads are rejected.
InsightAnswer query_segment(const std::string& road_id, UtcTime at,
                            const StreamViews& streams, const BatchViews& batch,
                            const RoadDb* roads = nullptr);

struct GraphNode {
  std::string node_id;
  double lat = 0.0;
  double lon = 0.0;
};

struct GraphEdge {
  std::string from;
  std::string to;
  std::string road_id;
  double length_m = 0.0;
};

// Directed graph; add both directions for two-way roads.
class RoadGraph {
 public:
  RoadGraph() = default;
  RoadGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges);

  bool has_node(const std::string& node_id) const;
  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<std::size_t>& edges_from(const std::string& node_id) const;

 private:
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::map<std::string, std::vector<std::size_t>> adjacency_;
};

RoadGraph load_road_graph(const std::string& path);  // JSON {"nodes":[...],"edges":[...]}

struct RouteStep {
  GraphEdge edge;
  InsightAnswer state;
  double effective_length_m = 0.0;
};

struct RouteResult {
  std::vector<RouteStep> steps;
  double total_length_m = 0.0;
  double effective_length_m = 0.0;

  bool any_congested() const;
};

struct QueryConfig {
  double penalty_factor = 5.0;  // multiplies a congested edge's length
};

// Shortest path by effective length, where a congested edge (per
// query_segment at `at`) counts penalty_factor times its length.
RouteResult query_route(const std::string& origin, const std::string& dest, UtcTime at,
                        const RoadGraph& graph, const StreamViews& streams,
                        const BatchViews& batch, const QueryConfig& cfg);

}  // namespace ma4bdi
