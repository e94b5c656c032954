#include "ma4bdi/extraction.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "ma4bdi/error.hpp"
#include "ma4bdi/textio.hpp"

namespace ma4bdi {

namespace {

std::optional<std::string> reason_from_tokens(const std::vector<std::string>& tokens) {
  // keyword table: accident / works / event
  bool works = false, event = false;
  for (const std::string& t : tokens) {
    if (t == "accident" || t == "crash" || t == "collision") return "accident";
    if (t == "works" || t == "roadworks" || t == "maintenance" || t == "construction") {
      works = true;
    }
    if (t == "event" || t == "parade" || t == "concert") event = true;
  }
  if (works) return "works";
  if (event) return "event";
  return std::nullopt;
}

// An explicit end-of-event announcement: a resolution cue word followed
// shortly by a clock time.
std::optional<TimeOfDay> resolution_from_text(const std::string& text) {
  static const std::regex pattern(
      R"((until|reopen\w*|clear\w*|resolv\w*)[^0-9]{0,24}\b([0-2]?\d):([0-5]\d)\b)",
      std::regex::icase);
  std::smatch match;
  if (!std::regex_search(text, match, pattern)) return std::nullopt;
  const int hour = static_cast<int>(textio::parse_int(match[2].str()));
  const int minute = static_cast<int>(textio::parse_int(match[3].str()));
  if (hour > 23) return std::nullopt;
  return TimeOfDay{hour, minute, 0};
}

struct MetadataExtractor {
  const Observation& obs;
  const RoadDb& roads;
  const EngineConfig& cfg;
  Metadata md;

  void fill_road_by_id(const std::string& road_id) {
    md.road_id = road_id;
    if (const Road* road = roads.find(road_id)) md.road_name = road->road_name;
  }

  void operator()(const TextPayload& p) {
    const Road* road = roads.match_name(p.text);
    if (road == nullptr) {
      throw Error(ErrorKind::no_road_reference,
                  "text mentions no known road name: '" + p.text + "'");
    }
    md.road_id = road->road_id;
    md.road_name = road->road_name;
    md.reason = reason_from_tokens(tokenize(p.text));
    if (auto resolution = resolution_from_text(p.text)) {
      md.resolution_date = md.event_date;
      md.resolution_time = resolution;
    }
  }

  void operator()(const GpsPayload& p) {
    const Road* road = roads.nearest_within(p.lat, p.lon, cfg.gps_match_radius_m);
    if (road == nullptr) {
      throw Error(ErrorKind::unmatched_location,
                  "no road within " + textio::fmt_double(cfg.gps_match_radius_m) +
                      " m of (" + textio::fmt_double(p.lat) + ", " +
                      textio::fmt_double(p.lon) + ")");
    }
    md.road_id = road->road_id;
    md.road_name = road->road_name;
    if (!p.vehicle_id.empty()) md.extras["vehicle_id"] = p.vehicle_id;
  }

  void operator()(const LoopPayload& p) { fill_road_by_id(p.road_id); }
  void operator()(const VehicleCountPayload& p) { fill_road_by_id(p.road_id); }
  void operator()(const WeatherPayload&) {}
};

}  // namespace

void EngineConfig::validate() const {
  if (!(speed_threshold_kmh > 0.0)) {
    throw Error(ErrorKind::bad_config, "speed_threshold_kmh must be > 0");
  }
  if (!(gps_match_radius_m > 0.0)) {
    throw Error(ErrorKind::bad_config, "gps_match_radius_m must be > 0");
  }
  if (gps_window_min <= 0) {
    throw Error(ErrorKind::bad_config, "gps_window_min must be > 0");
  }
}

Metadata extract_metadata(const Observation& obs, const RoadDb& roads,
                          const EngineConfig& cfg) {
  MetadataExtractor extractor{obs, roads, cfg, {}};
  extractor.md.event_date = date_of(obs.timestamp);
  extractor.md.event_time = time_of(obs.timestamp);
  std::visit(extractor, obs.payload);
  return std::move(extractor.md);
}

Knowledge classify_speed(double avg_speed_kmh, const EngineConfig& cfg) {
  if (avg_speed_kmh < 0.0) {
    throw Error(ErrorKind::negative_speed,
                "avg_speed=" + textio::fmt_double(avg_speed_kmh));
  }
  return avg_speed_kmh < cfg.speed_threshold_kmh ? Knowledge::congested
                                                 : Knowledge::not_congested;
}

Knowledge classify_count(std::int64_t vehicle_count, const Road& road) {
  return vehicle_count > road.capacity ? Knowledge::congested : Knowledge::not_congested;
}

GpsAggregate aggregate_gps(const std::vector<Observation>& window, const RoadDb& roads,
                           const EngineConfig& cfg) {
  std::map<std::string, std::pair<double, std::int64_t>> sums;
  GpsAggregate result;
  for (const Observation& obs : window) {
    const auto* payload = std::get_if<GpsPayload>(&obs.payload);
    if (payload == nullptr) {
      result.dropped += 1;
      continue;
    }
    const Road* road = roads.nearest_within(payload->lat, payload->lon,
                                            cfg.gps_match_radius_m);
    if (road == nullptr) {
      result.dropped += 1;
      continue;
    }
    auto& [total, count] = sums[road->road_id];
    total += payload->speed_kmh;
    count += 1;
  }
  result.road_avg_speed.reserve(sums.size());
  for (const auto& [road_id, acc] : sums) {
    result.road_avg_speed.emplace_back(road_id, acc.first / static_cast<double>(acc.second));
  }
  return result;
}

std::optional<ExtractedRecord> process(const Observation& obs, const TextModel& model,
                                       const RoadDb& roads, const EngineConfig& cfg) {
  Knowledge knowledge = Knowledge::not_congested;
  switch (payload_kind(obs.payload)) {
    case PayloadKind::weather:
      return std::nullopt;
    case PayloadKind::text: {
      // classify before extracting so off-topic text never demands a road
      const auto& payload = std::get<TextPayload>(obs.payload);
      const TextPrediction prediction = classify_text(model, payload.text);
      if (prediction.label == TextClass::irrelevant) return std::nullopt;
      knowledge = prediction.label == TextClass::congested ? Knowledge::congested
                                                           : Knowledge::not_congested;
      break;
    }
    case PayloadKind::gps:
      knowledge = classify_speed(std::get<GpsPayload>(obs.payload).speed_kmh, cfg);
      break;
    case PayloadKind::loop:
      knowledge = classify_speed(std::get<LoopPayload>(obs.payload).avg_speed_kmh, cfg);
      break;
    case PayloadKind::count: {
      const auto& payload = std::get<VehicleCountPayload>(obs.payload);
      const Road* road = roads.find(payload.road_id);
      if (road == nullptr) {
        throw Error(ErrorKind::unknown_road,
                    "road '" + payload.road_id + "' is not in the road db");
      }
      knowledge = classify_count(payload.vehicle_count, *road);
      break;
    }
  }
  return ExtractedRecord{knowledge, obs.source, extract_metadata(obs, roads, cfg),
                         obs.condition, obs.timestamp};
}

}  // namespace ma4bdi
