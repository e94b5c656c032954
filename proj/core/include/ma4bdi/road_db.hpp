#pragma once
// Static road reference data: one row per road with a centroid and a
// vehicle capacity. Immutable after construction.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ma4bdi {

struct Road {
  std::string road_id;
  std::string road_name;
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t capacity = 1;

  auto operator<=>(const Road&) const = default;
};

class RoadDb {
 public:
  RoadDb() = default;
  explicit RoadDb(std::vector<Road> roads);  // unique ids, capacity > 0

  bool empty() const { return roads_.empty(); }
  std::size_t size() const { return roads_.size(); }
  const std::vector<Road>& roads() const { return roads_; }

  const Road* find(std::string_view road_id) const;

  // Nearest road centroid within radius_m (haversine); null when none.
  // Distance ties break toward the lower road_id.
  const Road* nearest_within(double lat, double lon, double radius_m) const;

  // First road whose normalized name occurs as a word sequence in the
  // normalized text; ties prefer the earliest occurrence, then the longer
  // name, then the lower road_id.
  const Road* match_name(std::string_view text) const;

 private:
  std::vector<Road> roads_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
};

double haversine_m(double lat1, double lon1, double lat2, double lon2);

RoadDb load_road_db(const std::string& path);  // JSON {"roads":[...]}

}  // namespace ma4bdi
