#include <doctest.h>

#include "ma4bdi/error.hpp"
#include "ma4bdi/extraction.hpp"
#include "ma4bdi/validate.hpp"
#include "testutil.hpp"

using namespace ma4bdi;
using namespace ma4bdi::testutil;

namespace {

const EngineConfig kEngine{};

Observation gps_obs(double lat, double lon, double speed, const std::string& vehicle = "v1") {
  return Observation{GpsPayload{vehicle, lat, lon, speed}, source("G1", SourceKind::gps),
                     make_utc(kEventDate, {8, 15, 0}), Condition::unknown};
}

}  // namespace

TEST_CASE("extract_metadata fills road and event fields for sensor payloads") {
  Observation obs{LoopPayload{"100", 12, 45.0}, source("L1", SourceKind::loop_sensor),
                  make_utc(kEventDate, {8, 15, 0}), Condition::unknown};
  const Metadata md = extract_metadata(obs, demo_roads(), kEngine);
  CHECK(*md.road_id == "100");
  CHECK(*md.road_name == "Alpha");
  CHECK(*md.event_date == kEventDate);
  CHECK(*md.event_time == TimeOfDay{8, 15, 0});
  CHECK_FALSE(md.reason);
  CHECK(md.has_match_key());
}

TEST_CASE("gps at exactly a stored road centroid matches that road") {
  const RoadDb roads = demo_roads();
  const Road* alpha = roads.find("100");
  const Metadata md =
      extract_metadata(gps_obs(alpha->lat, alpha->lon, 30.0), roads, kEngine);
  CHECK(*md.road_id == "100");
  CHECK(md.extras.at("vehicle_id") == "v1");
}

TEST_CASE("gps far from every road is unmatched") {
  // ~0.01 deg latitude is about 1.1 km, far outside the 100 m radius
  try {
    extract_metadata(gps_obs(33.5831, -7.5898, 30.0), demo_roads(), kEngine);
    FAIL("expected unmatched-location");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unmatched_location);
  }
}

TEST_CASE("text metadata carries road, reason and announced resolution") {
  Observation obs{TextPayload{"Accident, Alpha road blocked until 18:00"},
                  source("UserA", SourceKind::official_social),
                  make_utc(kEventDate, {8, 10, 0}), Condition::unknown};
  const Metadata md = extract_metadata(obs, demo_roads(), kEngine);
  CHECK(*md.road_id == "100");
  CHECK(*md.road_name == "Alpha");
  CHECK(*md.reason == "accident");
  CHECK(*md.resolution_date == kEventDate);
  CHECK(*md.resolution_time == TimeOfDay{18, 0, 0});
}

TEST_CASE("text mentioning no known road is rejected") {
  Observation obs{TextPayload{"jam on omega street"},
                  source("UserB", SourceKind::standard_social),
                  make_utc(kEventDate, {8, 10, 0}), Condition::unknown};
  try {
    extract_metadata(obs, demo_roads(), kEngine);
    FAIL("expected no-road-reference");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_road_reference);
  }
}

TEST_CASE("classify_speed uses a strict threshold") {
  CHECK(classify_speed(10.0, kEngine) == Knowledge::congested);
  CHECK(classify_speed(20.0, kEngine) == Knowledge::not_congested);  // boundary
  CHECK(classify_speed(55.0, kEngine) == Knowledge::not_congested);
  CHECK_THROWS_AS(classify_speed(-1.0, kEngine), Error);
}

TEST_CASE("classify_count compares against road capacity strictly") {
  const Road road{"100", "Alpha", 0.0, 0.0, 40};
  CHECK(classify_count(50, road) == Knowledge::congested);
  CHECK(classify_count(40, road) == Knowledge::not_congested);  // boundary
  CHECK(classify_count(0, road) == Knowledge::not_congested);
}

TEST_CASE("speed and count classifiers are monotone") {
  std::mt19937 rng(11);
  const Road road{"100", "Alpha", 0.0, 0.0, 40};
  for (int i = 0; i < 200; ++i) {
    const double speed = static_cast<double>(rng() % 8000) / 100.0;
    if (classify_speed(speed, kEngine) == Knowledge::congested) {
      CHECK(classify_speed(speed / 2.0, kEngine) == Knowledge::congested);
    }
    const std::int64_t count = static_cast<std::int64_t>(rng() % 100);
    if (classify_count(count, road) == Knowledge::congested) {
      CHECK(classify_count(count + 7, road) == Knowledge::congested);
    }
  }
}

TEST_CASE("aggregate_gps means per road and counts unmatched readings") {
  const RoadDb roads = demo_roads();
  const Road* alpha = roads.find("100");
  std::vector<Observation> window = {
      gps_obs(alpha->lat, alpha->lon, 10.0, "v1"),
      gps_obs(alpha->lat, alpha->lon, 30.0, "v2"),
  };
  GpsAggregate agg = aggregate_gps(window, roads, kEngine);
  REQUIRE(agg.road_avg_speed.size() == 1);
  CHECK(agg.road_avg_speed[0].first == "100");
  CHECK(agg.road_avg_speed[0].second == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(agg.dropped == 0);

  window.push_back(gps_obs(33.9, -7.0, 50.0, "v3"));  // nowhere near a road
  agg = aggregate_gps(window, roads, kEngine);
  REQUIRE(agg.road_avg_speed.size() == 1);
  CHECK(agg.dropped == 1);

  CHECK(aggregate_gps({}, roads, kEngine).road_avg_speed.empty());
}

TEST_CASE("process extracts the worked-example official tweet") {
  const TextModel model = train_text_model(demo_corpus(), 1.0);
  Observation obs{TextPayload{"accident, alpha road blocked"},
                  source("UserA", SourceKind::official_social),
                  make_utc(kEventDate, {8, 10, 0}), Condition::unknown};
  const auto record = process(obs, model, demo_roads(), kEngine);
  REQUIRE(record.has_value());
  CHECK(record->knowledge == Knowledge::congested);
  CHECK(record->source.source_id == "UserA");
  CHECK(*record->metadata.road_id == "100");
  CHECK(*record->metadata.road_name == "Alpha");
  CHECK(*record->metadata.reason == "accident");
  CHECK(*record->metadata.event_time == TimeOfDay{8, 10, 0});
}

TEST_CASE("process returns nothing for weather and off-topic text") {
  const TextModel model = train_text_model(demo_corpus(), 1.0);
  const RoadDb roads = demo_roads();

  Observation weather{WeatherPayload{Condition::rain},
                      source("WX1", SourceKind::weather_service),
                      make_utc(kEventDate, {8, 0, 0}), Condition::unknown};
  CHECK_FALSE(process(weather, model, roads, kEngine).has_value());

  Observation chatter{TextPayload{"great coffee at the new downtown cafe"},
                      source("UserB", SourceKind::standard_social),
                      make_utc(kEventDate, {8, 0, 0}), Condition::unknown};
  CHECK_FALSE(process(chatter, model, roads, kEngine).has_value());
}

TEST_CASE("process keeps the observation's condition on the record") {
  const TextModel model = train_text_model(demo_corpus(), 1.0);
  Observation obs{VehicleCountPayload{"100", 25}, source("ID1", SourceKind::cctv),
                  make_utc(kEventDate, {8, 15, 0}), Condition::rain};
  const auto record = process(obs, model, demo_roads(), kEngine);
  REQUIRE(record.has_value());
  CHECK(record->condition == Condition::rain);
  CHECK(record->knowledge == Knowledge::not_congested);  // 25 <= capacity 40
}

TEST_CASE("process rejects counts for unknown roads") {
  const TextModel model = train_text_model(demo_corpus(), 1.0);
  Observation obs{VehicleCountPayload{"999", 25}, source("ID1", SourceKind::cctv),
                  make_utc(kEventDate, {8, 15, 0}), Condition::unknown};
  try {
    process(obs, model, demo_roads(), kEngine);
    FAIL("expected unknown-road");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unknown_road);
  }
}

TEST_CASE("every emitted record carries the match key") {
  const TextModel model = train_text_model(demo_corpus(), 1.0);
  const RoadDb roads = demo_roads();
  for (const Observation& obs : example_scenario()) {
    try {
      if (auto record = process(obs, model, roads, kEngine)) {
        CHECK(record->metadata.has_match_key());
      }
    } catch (const Error&) {
      // an error is fine here; a record without a key would not be
    }
  }
}
