#pragma once
// Error taxonomy shared by every layer. Each failure carries a stable
// kebab-case kind plus a message naming the offending field or entity.

#include <stdexcept>
#include <string>

namespace ma4bdi {

enum class ErrorKind {
  malformed_timestamp,
  payload_kind_mismatch,
  out_of_range_field,
  unknown_source,
  unmatched_location,
  no_road_reference,
  empty_corpus,
  unknown_class_label,
  negative_speed,
  unknown_road,
  missing_match_key,
  io_failure,
  corrupt_views,
  unroutable_kind,
  unknown_node,
  unreachable,
  bad_config,
};

constexpr const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::malformed_timestamp:   return "malformed-timestamp";
    case ErrorKind::payload_kind_mismatch: return "payload-kind-mismatch";
    case ErrorKind::out_of_range_field:    return "out-of-range-field";
    case ErrorKind::unknown_source:        return "unknown-source";
    case ErrorKind::unmatched_location:    return "unmatched-location";
    case ErrorKind::no_road_reference:     return "no-road-reference";
    case ErrorKind::empty_corpus:          return "empty-corpus";
    case ErrorKind::unknown_class_label:   return "unknown-class-label";
    case ErrorKind::negative_speed:        return "negative-speed";
    case ErrorKind::unknown_road:          return "unknown-road";
    case ErrorKind::missing_match_key:     return "missing-match-key";
    case ErrorKind::io_failure:            return "io-failure";
    case ErrorKind::corrupt_views:         return "corrupt-views";
    case ErrorKind::unroutable_kind:       return "unroutable-kind";
    case ErrorKind::unknown_node:          return "unknown-node";
    case ErrorKind::unreachable:           return "unreachable";
    case ErrorKind::bad_config:            return "bad-config";
  }
  return "unknown-error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + detail),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ma4bdi
