#include "ma4bdi/validate.hpp"

#include <cmath>

#include "ma4bdi/error.hpp"
#include "ma4bdi/textio.hpp"

namespace ma4bdi {

namespace {

void check_range(const char* field, double value, double lo, double hi) {
  if (!std::isfinite(value) || value < lo || value > hi) {
    throw Error(ErrorKind::out_of_range_field,
                std::string(field) + "=" + textio::fmt_double(value) + " outside [" +
                    textio::fmt_double(lo) + ", " + textio::fmt_double(hi) + "]");
  }
}

void check_nonnegative(const char* field, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorKind::out_of_range_field,
                std::string(field) + "=" + textio::fmt_double(value) + " must be >= 0");
  }
}

void check_count(const char* field, std::int64_t value) {
  if (value < 0) {
    throw Error(ErrorKind::out_of_range_field,
                std::string(field) + "=" + std::to_string(value) + " must be >= 0");
  }
}

struct PayloadChecker {
  void operator()(const TextPayload&) const {}
  void operator()(const GpsPayload& p) const {
    check_range("lat", p.lat, -90.0, 90.0);
    check_range("lon", p.lon, -180.0, 180.0);
    check_nonnegative("speed", p.speed_kmh);
  }
  void operator()(const LoopPayload& p) const {
    check_count("vehicle_count", p.vehicle_count);
    check_nonnegative("avg_speed", p.avg_speed_kmh);
  }
  void operator()(const VehicleCountPayload& p) const {
    check_count("vehicle_count", p.vehicle_count);
  }
  void operator()(const WeatherPayload&) const {}
};

}  // namespace

Observation validate_observation(Observation obs) {
  if (obs.source.source_id.empty()) {
    throw Error(ErrorKind::out_of_range_field, "source_id must be non-empty");
  }
  const PayloadKind have = payload_kind(obs.payload);
  const PayloadKind want = expected_payload_kind(obs.source.source_kind);
  if (have != want) {
    throw Error(ErrorKind::payload_kind_mismatch,
                std::string("source kind ") + to_string(obs.source.source_kind) +
                    " carries " + to_string(want) + " payloads, got " + to_string(have));
  }
  std::visit(PayloadChecker{}, obs.payload);
  return obs;
}

}  // namespace ma4bdi
