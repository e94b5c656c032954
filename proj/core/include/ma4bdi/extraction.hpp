#pragma once
// Multimodal processing layer: one knowledge engine per payload kind plus
// metadata extraction. Everything here is a pure function over immutable
// models, so callers may fan observations out to parallel workers.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ma4bdi/road_db.hpp"
#include "ma4bdi/text_model.hpp"
#include "ma4bdi/types.hpp"

namespace ma4bdi {

struct EngineConfig {
  double speed_threshold_kmh = 20.0;
  double gps_match_radius_m = 100.0;
  int gps_window_min = 5;

  void validate() const;  // all fields strictly positive
};

// Fills road/date/time and whatever else the payload carries:
//  - loop/count: road_id from the payload, road_name resolved when known
//  - gps: nearest road centroid within gps_match_radius_m, else unmatched-location
//  - text: road by name match against the db (else no-road-reference), the
//    congestion reason from a keyword table, and an explicit resolution time
//    when the text announces one ("reopens at 18:00", "until 17:30", ...)
Metadata extract_metadata(const Observation& obs, const RoadDb& roads,
                          const EngineConfig& cfg);

// congested iff avg_speed < threshold (strict); negative-speed otherwise.
Knowledge classify_speed(double avg_speed_kmh, const EngineConfig& cfg);

// congested iff vehicle_count > capacity (strict).
Knowledge classify_count(std::int64_t vehicle_count, const Road& road);

struct GpsAggregate {
  std::vector<std::pair<std::string, double>> road_avg_speed;  // sorted by road_id
  std::size_t dropped = 0;  // observations with no road within radius
};

// Groups one gps_window_min bucket of GPS observations by matched road and
// averages speeds per road.
GpsAggregate aggregate_gps(const std::vector<Observation>& window, const RoadDb& roads,
                           const EngineConfig& cfg);

// Dispatches an observation to the engine for its payload kind. Returns
// nothing for weather payloads (they update the ambient condition, not
// knowledge) and for text classified irrelevant.
std::optional<ExtractedRecord> process(const Observation& obs, const TextModel& model,
                                       const RoadDb& roads, const EngineConfig& cfg);

}  // namespace ma4bdi
