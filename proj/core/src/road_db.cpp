#include "ma4bdi/road_db.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "ma4bdi/error.hpp"
#include "ma4bdi/text_model.hpp"
#include "ma4bdi/textio.hpp"

namespace ma4bdi {

namespace {

// " token token " form so word-sequence containment is a substring search.
std::string normalized_words(std::string_view text) {
  std::string out = " ";
  for (const std::string& token : tokenize(text)) {
    out += token;
    out += ' ';
  }
  return out;
}

}  // namespace

RoadDb::RoadDb(std::vector<Road> roads) : roads_(std::move(roads)) {
  for (std::size_t i = 0; i < roads_.size(); ++i) {
    const Road& r = roads_[i];
    if (r.road_id.empty()) {
      throw Error(ErrorKind::bad_config, "road with empty road_id");
    }
    if (r.capacity <= 0) {
      throw Error(ErrorKind::bad_config,
                  "road '" + r.road_id + "' capacity must be > 0");
    }
    if (!by_id_.emplace(r.road_id, i).second) {
      throw Error(ErrorKind::bad_config, "duplicate road_id '" + r.road_id + "'");
    }
  }
}

const Road* RoadDb::find(std::string_view road_id) const {
  auto it = by_id_.find(road_id);
  return it == by_id_.end() ? nullptr : &roads_[it->second];
}

const Road* RoadDb::nearest_within(double lat, double lon, double radius_m) const {
  const Road* best = nullptr;
  double best_distance = 0.0;
  for (const Road& road : roads_) {
    const double d = haversine_m(lat, lon, road.lat, road.lon);
    if (d > radius_m) continue;
    if (best == nullptr || d < best_distance ||
        (d == best_distance && road.road_id < best->road_id)) {
      best = &road;
      best_distance = d;
    }
  }
  return best;
}

const Road* RoadDb::match_name(std::string_view text) const {
  const std::string haystack = normalized_words(text);
  const Road* best = nullptr;
  std::size_t best_pos = 0;
  std::size_t best_len = 0;
  for (const Road& road : roads_) {
    const std::string needle = normalized_words(road.road_name);
    if (needle.size() <= 2) continue;  // empty name
    const std::size_t pos = haystack.find(needle);
    if (pos == std::string::npos) continue;
    const bool better =
        best == nullptr || pos < best_pos ||
        (pos == best_pos && needle.size() > best_len) ||
        (pos == best_pos && needle.size() == best_len && road.road_id < best->road_id);
    if (better) {
      best = &road;
      best_pos = pos;
      best_len = needle.size();
    }
  }
  return best;
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusM = 6371000.0;
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlambda = (lon2 - lon1) * kDegToRad;
  const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlambda / 2) * std::sin(dlambda / 2);
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

RoadDb load_road_db(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(textio::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::bad_config, "road db '" + path + "': " + e.what());
  }
  std::vector<Road> roads;
  try {
    for (const auto& row : doc.at("roads")) {
      Road r;
      r.road_id = row.at("road_id").get<std::string>();
      r.road_name = row.value("road_name", std::string{});
      r.lat = row.value("lat", 0.0);
      r.lon = row.value("lon", 0.0);
      r.capacity = row.value("capacity", std::int64_t{1});
      roads.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::bad_config, "road db '" + path + "': " + e.what());
  }
  return RoadDb(std::move(roads));
}

}  // namespace ma4bdi
