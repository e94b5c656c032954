#include "ma4bdi/scenario.hpp"

#include <nlohmann/json.hpp>

#include "ma4bdi/error.hpp"
#include "ma4bdi/textio.hpp"

namespace ma4bdi {

namespace {

using nlohmann::json;

json parse_json_line(const std::string& line, const char* what) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::bad_config,
                std::string(what) + " line is not valid JSON: " + e.what());
  }
}

std::string require_string(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw Error(ErrorKind::out_of_range_field,
                std::string("envelope field '") + key + "' missing or not a string");
  }
  return obj[key].get<std::string>();
}

double require_number(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw Error(ErrorKind::out_of_range_field,
                std::string("payload field '") + key + "' missing or not a number");
  }
  return obj[key].get<double>();
}

std::int64_t require_integer(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw Error(ErrorKind::out_of_range_field,
                std::string("payload field '") + key + "' missing or not an integer");
  }
  return obj[key].get<std::int64_t>();
}

DataPayload parse_payload(const json& obj) {
  switch (parse_payload_kind(require_string(obj, "kind"))) {
    case PayloadKind::text:
      return TextPayload{require_string(obj, "text")};
    case PayloadKind::gps:
      return GpsPayload{require_string(obj, "vehicle_id"), require_number(obj, "lat"),
                        require_number(obj, "lon"), require_number(obj, "speed")};
    case PayloadKind::loop:
      return LoopPayload{require_string(obj, "road_id"),
                         require_integer(obj, "vehicle_count"),
                         require_number(obj, "avg_speed")};
    case PayloadKind::count:
      return VehicleCountPayload{require_string(obj, "road_id"),
                                 require_integer(obj, "vehicle_count")};
    case PayloadKind::weather:
      return WeatherPayload{parse_condition(require_string(obj, "condition"))};
  }
  throw Error(ErrorKind::unroutable_kind, "unreachable payload kind");
}

json payload_to_json(const DataPayload& payload) {
  json obj;
  obj["kind"] = to_string(payload_kind(payload));
  if (const auto* p = std::get_if<TextPayload>(&payload)) {
    obj["text"] = p->text;
  } else if (const auto* p = std::get_if<GpsPayload>(&payload)) {
    obj["vehicle_id"] = p->vehicle_id;
    obj["lat"] = p->lat;
    obj["lon"] = p->lon;
    obj["speed"] = p->speed_kmh;
  } else if (const auto* p = std::get_if<LoopPayload>(&payload)) {
    obj["road_id"] = p->road_id;
    obj["vehicle_count"] = p->vehicle_count;
    obj["avg_speed"] = p->avg_speed_kmh;
  } else if (const auto* p = std::get_if<VehicleCountPayload>(&payload)) {
    obj["road_id"] = p->road_id;
    obj["vehicle_count"] = p->vehicle_count;
  } else if (const auto* p = std::get_if<WeatherPayload>(&payload)) {
    obj["condition"] = to_string(p->condition);
  }
  return obj;
}

}  // namespace

Observation parse_envelope(const std::string& json_line) {
  const json obj = parse_json_line(json_line, "scenario");
  Observation obs;
  obs.timestamp = parse_timestamp(require_string(obj, "ts"));
  obs.source.source_id = require_string(obj, "source_id");
  obs.source.source_kind = parse_source_kind(require_string(obj, "source_kind"));
  if (obj.contains("display_name")) {
    obs.source.display_name = require_string(obj, "display_name");
  }
  if (obj.contains("condition")) {
    obs.condition = parse_condition(require_string(obj, "condition"));
  }
  if (!obj.contains("payload") || !obj["payload"].is_object()) {
    throw Error(ErrorKind::out_of_range_field, "envelope lacks a payload object");
  }
  obs.payload = parse_payload(obj["payload"]);
  return obs;
}

std::string format_envelope(const Observation& obs) {
  json obj;
  obj["ts"] = to_string(obs.timestamp);
  obj["source_id"] = obs.source.source_id;
  obj["source_kind"] = to_string(obs.source.source_kind);
  if (!obs.source.display_name.empty()) obj["display_name"] = obs.source.display_name;
  if (obs.condition != Condition::unknown) obj["condition"] = to_string(obs.condition);
  obj["payload"] = payload_to_json(obs.payload);
  return obj.dump();
}

std::vector<Observation> parse_scenario_text(std::string_view text) {
  std::vector<Observation> out;
  for (const std::string& line : textio::split_lines(text)) {
    if (line.empty()) continue;
    out.push_back(parse_envelope(line));
  }
  return out;
}

std::vector<Observation> load_scenario(const std::string& path) {
  return parse_scenario_text(textio::read_file(path));
}

std::vector<TextExample> parse_corpus_text(std::string_view text) {
  std::vector<TextExample> out;
  for (const std::string& line : textio::split_lines(text)) {
    if (line.empty()) continue;
    const json obj = parse_json_line(line, "corpus");
    out.push_back(TextExample{require_string(obj, "text"),
                              parse_text_class(require_string(obj, "class"))});
  }
  return out;
}

std::vector<TextExample> load_corpus(const std::string& path) {
  return parse_corpus_text(textio::read_file(path));
}

}  // namespace ma4bdi
