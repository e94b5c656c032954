#pragma once
// Shared vocabulary of the pipeline: immutable value types exchanged between
// the staging, processing, fusion, stream and query layers.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ma4bdi/time.hpp"

namespace ma4bdi {

enum class SourceKind {
  official_social,
  standard_social,
  crowdsourcing,
  newspaper,
  loop_sensor,
  gps,
  cctv,
  uav,
  weather_service,
};

// Ambient context that modulates a hardware source's reliability.
enum class Condition { clear, rain, snow, fog, unknown };

// The label extracted from a datum. Binary by design; off-topic inputs are
// dropped upstream rather than forced into a traffic label.
enum class Knowledge { congested, not_congested };

const char* to_string(SourceKind k);
const char* to_string(Condition c);
const char* to_string(Knowledge k);
SourceKind parse_source_kind(std::string_view s);
Condition parse_condition(std::string_view s);
Knowledge parse_knowledge(std::string_view s);

struct SourceDescriptor {
  std::string source_id;
  SourceKind source_kind = SourceKind::standard_social;
  std::string display_name;

  auto operator<=>(const SourceDescriptor&) const = default;
};

struct TextPayload {
  std::string text;
  auto operator<=>(const TextPayload&) const = default;
};

struct GpsPayload {
  std::string vehicle_id;
  double lat = 0.0;
  double lon = 0.0;
  double speed_kmh = 0.0;
  auto operator<=>(const GpsPayload&) const = default;
};

struct LoopPayload {
  std::string road_id;
  std::int64_t vehicle_count = 0;
  double avg_speed_kmh = 0.0;
  auto operator<=>(const LoopPayload&) const = default;
};

// Pre-extracted vehicle count standing in for the image/video engines; the
// dispatch is type-keyed so real detectors can slot in behind the same path.
struct VehicleCountPayload {
  std::string road_id;
  std::int64_t vehicle_count = 0;
  auto operator<=>(const VehicleCountPayload&) const = default;
};

struct WeatherPayload {
  Condition condition = Condition::unknown;
  auto operator<=>(const WeatherPayload&) const = default;
};

using DataPayload =
    std::variant<TextPayload, GpsPayload, LoopPayload, VehicleCountPayload, WeatherPayload>;

enum class PayloadKind { text, gps, loop, count, weather };

PayloadKind payload_kind(const DataPayload& payload);
const char* to_string(PayloadKind k);
PayloadKind parse_payload_kind(std::string_view s);
// The payload kind a given source kind is expected to emit.
PayloadKind expected_payload_kind(SourceKind k);

// A raw incoming datum with its source descriptor and ambient condition:
// the broker envelope.
struct Observation {
  DataPayload payload;
  SourceDescriptor source;
  UtcTime timestamp;
  Condition condition = Condition::unknown;

  auto operator<=>(const Observation&) const = default;
};

// Descriptive fields of an event. A record that participates in matching
// must carry road_id, event_date and event_time; resolution fields are
// either both null or both set.
struct Metadata {
  std::optional<std::string> road_id;
  std::optional<std::string> road_name;
  std::optional<Date> event_date;
  std::optional<TimeOfDay> event_time;
  std::optional<std::string> reason;
  std::optional<Date> resolution_date;
  std::optional<TimeOfDay> resolution_time;
  std::map<std::string, std::string> extras;

  bool has_match_key() const { return road_id && event_date && event_time; }
  auto operator<=>(const Metadata&) const = default;
};

// The processing layer's output triple (knowledge, source, metadata) plus
// the ambient condition copied from the originating observation.
struct ExtractedRecord {
  Knowledge knowledge = Knowledge::not_congested;
  SourceDescriptor source;
  Metadata metadata;
  Condition condition = Condition::unknown;
  UtcTime observed_at;

  auto operator<=>(const ExtractedRecord&) const = default;
};

// Uniquely identifies one fused event per road, date and time window.
struct EventKey {
  std::string road_id;
  Date event_date;
  TimeOfDay window_start;

  auto operator<=>(const EventKey&) const = default;
};

// The fused pair stored in the historical insight store. Scores are the raw
// weighted vote sums, not normalized.
struct GlobalInsight {
  EventKey event_key;
  Knowledge knowledge = Knowledge::not_congested;
  Metadata metadata;
  double score_congested = 0.0;
  double score_not_congested = 0.0;
  std::vector<std::string> contributing_sources;  // sorted, unique

  double score(Knowledge k) const {
    return k == Knowledge::congested ? score_congested : score_not_congested;
  }
  auto operator<=>(const GlobalInsight&) const = default;
};

// The speed layer's quadruplet: knowledge, source, metadata plus the
// reliability the ledger held for (source, condition) at ingest time.
struct StreamViewEntry {
  Knowledge knowledge = Knowledge::not_congested;
  SourceDescriptor source;
  Metadata metadata;
  double reliability = 0.0;
  UtcTime produced_at;

  auto operator<=>(const StreamViewEntry&) const = default;
};

// Canonical "key=value" serialization of the non-null metadata fields,
// tab-separated, fixed field order, extras sorted. Used by every persisted
// store so the on-disk form is byte-deterministic.
std::vector<std::string> metadata_to_fields(const Metadata& md);
Metadata metadata_from_fields(const std::vector<std::string>& fields, std::size_t first);

}  // namespace ma4bdi
