#include "ma4bdi/query.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "ma4bdi/error.hpp"
#include "ma4bdi/textio.hpp"

namespace ma4bdi {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::stream:    return "stream";
    case Provenance::batch:     return "batch";
    case Provenance::predicted: return "predicted";
  }
  return "?";
}

Prediction predict_state(const std::string& road_id, UtcTime at,
                         const std::vector<HistoryEntry>& history) {
  const int weekday = weekday_of(at);
  const int hour = time_of(at).hour;
  std::int64_t n = 0;
  std::int64_t congested = 0;
  for (const HistoryEntry& entry : history) {
    if (entry.key.road_id != road_id) continue;
    if (weekday_of(entry.timestamp) != weekday) continue;
    if (time_of(entry.timestamp).hour != hour) continue;
    n += 1;
    if (entry.knowledge == Knowledge::congested) congested += 1;
  }
  const double p = static_cast<double>(congested + 1) / static_cast<double>(n + 2);
  // p of exactly one half stays on the quiet side
  if (p > 0.5) return Prediction{Knowledge::congested, p};
  return Prediction{Knowledge::not_congested, 1.0 - p};
}

InsightAnswer query_segment(const std::string& road_id, UtcTime at,
                            const StreamViews& streams, const BatchViews& batch,
                            const RoadDb* roads) {
  if (roads != nullptr && roads->find(road_id) == nullptr) {
    throw Error(ErrorKind::unknown_road, "road '" + road_id + "' is not in the road db");
  }

  // 1. stream views: best fresh entry in the bucket covering `at`
  const std::vector<StreamViewEntry> fresh = streams.fresh(road_id, at);
  if (!fresh.empty()) {
    const StreamViewEntry* best = &fresh.front();
    for (const StreamViewEntry& entry : fresh) {
      const auto rank = std::tie(entry.reliability, entry.produced_at);
      const auto best_rank = std::tie(best->reliability, best->produced_at);
      if (rank > best_rank) best = &entry;
    }
    return InsightAnswer{road_id, best->knowledge, best->reliability, Provenance::stream,
                         best->produced_at};
  }

  // 2. batch views: the latest-onset insight for this road and date whose
  //    window has started and whose resolution has not passed
  const Date day = date_of(at);
  const TimeOfDay tod = time_of(at);
  const GlobalInsight* chosen = nullptr;
  for (const auto& [key, insight] : batch.insights) {
    if (key.road_id != road_id || key.event_date != day) continue;
    if (key.window_start > tod) continue;
    if (insight.metadata.resolution_date && insight.metadata.resolution_time) {
      const UtcTime resolved = make_utc(*insight.metadata.resolution_date,
                                        *insight.metadata.resolution_time);
      if (resolved < at) continue;  // resolved events stop answering
    }
    if (chosen == nullptr || key.window_start > chosen->event_key.window_start) {
      chosen = &insight;
    }
  }
  if (chosen != nullptr) {
    const double total = chosen->score_congested + chosen->score_not_congested;
    const double share = total > 0.0 ? chosen->score(chosen->knowledge) / total : 0.5;
    return InsightAnswer{road_id, chosen->knowledge, share, Provenance::batch,
                         make_utc(chosen->event_key.event_date,
                                  chosen->event_key.window_start)};
  }

  // 3. prediction from the insight history
  const Prediction predicted = predict_state(road_id, at, batch.history);
  return InsightAnswer{road_id, predicted.state, predicted.probability,
                       Provenance::predicted, at};
}

RoadGraph::RoadGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::set<std::string> node_ids;
  for (const GraphNode& node : nodes_) {
    if (node.node_id.empty()) {
      throw Error(ErrorKind::bad_config, "graph node with empty node_id");
    }
    if (!node_ids.insert(node.node_id).second) {
      throw Error(ErrorKind::bad_config, "duplicate graph node '" + node.node_id + "'");
    }
    adjacency_.emplace(node.node_id, std::vector<std::size_t>{});
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const GraphEdge& edge = edges_[i];
    if (node_ids.count(edge.from) == 0 || node_ids.count(edge.to) == 0) {
      throw Error(ErrorKind::bad_config,
                  "edge " + edge.from + "->" + edge.to + " references a missing node");
    }
    if (!(edge.length_m > 0.0)) {
      throw Error(ErrorKind::bad_config,
                  "edge " + edge.from + "->" + edge.to + " must have length_m > 0");
    }
    adjacency_[edge.from].push_back(i);
  }
}

bool RoadGraph::has_node(const std::string& node_id) const {
  return adjacency_.count(node_id) > 0;
}

const std::vector<std::size_t>& RoadGraph::edges_from(const std::string& node_id) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = adjacency_.find(node_id);
  return it == adjacency_.end() ? kEmpty : it->second;
}

RoadGraph load_road_graph(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(textio::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::bad_config, "road graph '" + path + "': " + e.what());
  }
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  try {
    for (const auto& row : doc.at("nodes")) {
      nodes.push_back(GraphNode{row.at("node_id").get<std::string>(),
                                row.value("lat", 0.0), row.value("lon", 0.0)});
    }
    for (const auto& row : doc.at("edges")) {
      edges.push_back(GraphEdge{row.at("from").get<std::string>(),
                                row.at("to").get<std::string>(),
                                row.at("road_id").get<std::string>(),
                                row.at("length_m").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::bad_config, "road graph '" + path + "': " + e.what());
  }
  return RoadGraph(std::move(nodes), std::move(edges));
}

bool RouteResult::any_congested() const {
  return std::any_of(steps.begin(), steps.end(), [](const RouteStep& step) {
    return step.state.state == Knowledge::congested;
  });
}

RouteResult query_route(const std::string& origin, const std::string& dest, UtcTime at,
                        const RoadGraph& graph, const StreamViews& streams,
                        const BatchViews& batch, const QueryConfig& cfg) {
  if (!graph.has_node(origin)) {
    throw Error(ErrorKind::unknown_node, "origin node '" + origin + "' not in graph");
  }
  if (!graph.has_node(dest)) {
    throw Error(ErrorKind::unknown_node, "destination node '" + dest + "' not in graph");
  }
  RouteResult result;
  if (origin == dest) return result;

  // one segment query per distinct road
  std::map<std::string, InsightAnswer> road_state;
  auto state_of = [&](const std::string& road_id) -> const InsightAnswer& {
    auto it = road_state.find(road_id);
    if (it == road_state.end()) {
      it = road_state.emplace(road_id, query_segment(road_id, at, streams, batch)).first;
    }
    return it->second;
  };
  auto effective_length = [&](const GraphEdge& edge) {
    const bool congested = state_of(edge.road_id).state == Knowledge::congested;
    return edge.length_m * (congested ? cfg.penalty_factor : 1.0);
  };

  // Dijkstra over effective lengths; (distance, node) keys keep expansion
  // order deterministic.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::map<std::string, double> distance;
  std::map<std::string, std::size_t> via_edge;
  using QueueItem = std::pair<double, std::string>;
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> frontier;
  distance[origin] = 0.0;
  frontier.push({0.0, origin});

  while (!frontier.empty()) {
    const auto [dist, node] = frontier.top();
    frontier.pop();
    if (dist > distance[node]) continue;
    if (node == dest) break;
    for (std::size_t edge_index : graph.edges_from(node)) {
      const GraphEdge& edge = graph.edges()[edge_index];
      const double candidate = dist + effective_length(edge);
      auto it = distance.find(edge.to);
      const double known = it == distance.end() ? kInf : it->second;
      if (candidate < known ||
          (candidate == known && (via_edge.count(edge.to) == 0 ||
                                  edge_index < via_edge[edge.to]))) {
        if (candidate < known) frontier.push({candidate, edge.to});
        distance[edge.to] = candidate;
        via_edge[edge.to] = edge_index;
      }
    }
  }

  if (distance.find(dest) == distance.end()) {
    throw Error(ErrorKind::unreachable,
                "no route from '" + origin + "' to '" + dest + "'");
  }

  std::vector<std::size_t> path;
  for (std::string node = dest; node != origin;) {
    const std::size_t edge_index = via_edge.at(node);
    path.push_back(edge_index);
    node = graph.edges()[edge_index].from;
  }
  std::reverse(path.begin(), path.end());

  for (std::size_t edge_index : path) {
    const GraphEdge& edge = graph.edges()[edge_index];
    RouteStep step{edge, state_of(edge.road_id), effective_length(edge)};
    result.total_length_m += edge.length_m;
    result.effective_length_m += step.effective_length_m;
    result.steps.push_back(std::move(step));
  }
  return result;
}

}  // namespace ma4bdi
