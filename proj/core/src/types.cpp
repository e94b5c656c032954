#include "ma4bdi/types.hpp"

#include "ma4bdi/error.hpp"
#include "ma4bdi/textio.hpp"

namespace ma4bdi {

const char* to_string(SourceKind k) {
  switch (k) {
    case SourceKind::official_social: return "official_social";
    case SourceKind::standard_social: return "standard_social";
    case SourceKind::crowdsourcing:   return "crowdsourcing";
    case SourceKind::newspaper:       return "newspaper";
    case SourceKind::loop_sensor:     return "loop_sensor";
    case SourceKind::gps:             return "gps";
    case SourceKind::cctv:            return "cctv";
    case SourceKind::uav:             return "uav";
    case SourceKind::weather_service: return "weather_service";
  }
  return "?";
}

const char* to_string(Condition c) {
  switch (c) {
    case Condition::clear:   return "clear";
    case Condition::rain:    return "rain";
    case Condition::snow:    return "snow";
    case Condition::fog:     return "fog";
    case Condition::unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Knowledge k) {
  return k == Knowledge::congested ? "congested" : "not_congested";
}

SourceKind parse_source_kind(std::string_view s) {
  if (s == "official_social") return SourceKind::official_social;
  if (s == "standard_social") return SourceKind::standard_social;
  if (s == "crowdsourcing")   return SourceKind::crowdsourcing;
  if (s == "newspaper")       return SourceKind::newspaper;
  if (s == "loop_sensor")     return SourceKind::loop_sensor;
  if (s == "gps")             return SourceKind::gps;
  if (s == "cctv")            return SourceKind::cctv;
  if (s == "uav")             return SourceKind::uav;
  if (s == "weather_service") return SourceKind::weather_service;
  throw Error(ErrorKind::out_of_range_field,
              "source_kind '" + std::string(s) + "' is not a known kind");
}

Condition parse_condition(std::string_view s) {
  if (s == "clear")   return Condition::clear;
  if (s == "rain")    return Condition::rain;
  if (s == "snow")    return Condition::snow;
  if (s == "fog")     return Condition::fog;
  if (s == "unknown") return Condition::unknown;
  throw Error(ErrorKind::out_of_range_field,
              "condition '" + std::string(s) + "' is not a known condition");
}

Knowledge parse_knowledge(std::string_view s) {
  if (s == "congested")     return Knowledge::congested;
  if (s == "not_congested") return Knowledge::not_congested;
  throw Error(ErrorKind::out_of_range_field,
              "knowledge '" + std::string(s) + "' is not a known label");
}

PayloadKind payload_kind(const DataPayload& payload) {
  switch (payload.index()) {
    case 0: return PayloadKind::text;
    case 1: return PayloadKind::gps;
    case 2: return PayloadKind::loop;
    case 3: return PayloadKind::count;
    default: return PayloadKind::weather;
  }
}

const char* to_string(PayloadKind k) {
  switch (k) {
    case PayloadKind::text:    return "text";
    case PayloadKind::gps:     return "gps";
    case PayloadKind::loop:    return "loop";
    case PayloadKind::count:   return "count";
    case PayloadKind::weather: return "weather";
  }
  return "?";
}

PayloadKind parse_payload_kind(std::string_view s) {
  if (s == "text")    return PayloadKind::text;
  if (s == "gps")     return PayloadKind::gps;
  if (s == "loop")    return PayloadKind::loop;
  if (s == "count")   return PayloadKind::count;
  if (s == "weather") return PayloadKind::weather;
  throw Error(ErrorKind::unroutable_kind,
              "payload kind '" + std::string(s) + "' has no engine");
}

PayloadKind expected_payload_kind(SourceKind k) {
  switch (k) {
    case SourceKind::official_social:
    case SourceKind::standard_social:
    case SourceKind::crowdsourcing:
    case SourceKind::newspaper:       return PayloadKind::text;
    case SourceKind::gps:             return PayloadKind::gps;
    case SourceKind::loop_sensor:     return PayloadKind::loop;
    case SourceKind::cctv:
    case SourceKind::uav:             return PayloadKind::count;
    case SourceKind::weather_service: return PayloadKind::weather;
  }
  return PayloadKind::text;
}

std::vector<std::string> metadata_to_fields(const Metadata& md) {
  std::vector<std::string> fields;
  auto put = [&fields](const char* key, const std::string& value) {
    fields.push_back(std::string(key) + "=" + textio::escape_field(value));
  };
  if (md.road_id) put("road_id", *md.road_id);
  if (md.road_name) put("road_name", *md.road_name);
  if (md.event_date) put("event_date", to_string(*md.event_date));
  if (md.event_time) put("event_time", to_string(*md.event_time));
  if (md.reason) put("reason", *md.reason);
  if (md.resolution_date) put("resolution_date", to_string(*md.resolution_date));
  if (md.resolution_time) put("resolution_time", to_string(*md.resolution_time));
  for (const auto& [key, value] : md.extras) {
    put(("extra." + key).c_str(), value);
  }
  return fields;
}

Metadata metadata_from_fields(const std::vector<std::string>& fields, std::size_t first) {
  Metadata md;
  for (std::size_t i = first; i < fields.size(); ++i) {
    const std::string& field = fields[i];
    const std::size_t eq = field.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::corrupt_views, "metadata field without '='");
    }
    const std::string key = field.substr(0, eq);
    const std::string value = textio::unescape_field(field.substr(eq + 1));
    if (key == "road_id") {
      md.road_id = value;
    } else if (key == "road_name") {
      md.road_name = value;
    } else if (key == "event_date") {
      md.event_date = parse_date(value);
    } else if (key == "event_time") {
      md.event_time = parse_time(value);
    } else if (key == "reason") {
      md.reason = value;
    } else if (key == "resolution_date") {
      md.resolution_date = parse_date(value);
    } else if (key == "resolution_time") {
      md.resolution_time = parse_time(value);
    } else if (key.rfind("extra.", 0) == 0) {
      md.extras[key.substr(6)] = value;
    } else {
      throw Error(ErrorKind::corrupt_views, "unknown metadata field '" + key + "'");
    }
  }
  if (md.resolution_date.has_value() != md.resolution_time.has_value()) {
    throw Error(ErrorKind::corrupt_views, "resolution date/time must travel together");
  }
  return md;
}

}  // namespace ma4bdi
