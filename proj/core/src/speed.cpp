#include "ma4bdi/speed.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <thread>

#include "ma4bdi/error.hpp"
#include "ma4bdi/textio.hpp"
#include "ma4bdi/validate.hpp"

namespace ma4bdi {

namespace {
constexpr const char* kStreamViewsMagic = "ma4bdi.streamviews v1";
}

StreamViews::StreamViews(int bucket_min, int freshness_horizon_min)
    : bucket_min_(bucket_min), freshness_horizon_min_(freshness_horizon_min) {
  if (bucket_min <= 0 || freshness_horizon_min <= 0) {
    throw Error(ErrorKind::bad_config, "stream view bucket and horizon must be > 0");
  }
}

StreamViews::StreamViews(StreamViews&& other) noexcept
    : bucket_min_(other.bucket_min_), freshness_horizon_min_(other.freshness_horizon_min_) {
  std::unique_lock lock(other.mutex_);
  entries_ = std::move(other.entries_);
}

StreamViews& StreamViews::operator=(StreamViews&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mutex_, other.mutex_);
    bucket_min_ = other.bucket_min_;
    freshness_horizon_min_ = other.freshness_horizon_min_;
    entries_ = std::move(other.entries_);
  }
  return *this;
}

TimeOfDay StreamViews::bucket_start_of(TimeOfDay t, int bucket_min) {
  const int minutes = (t.total_minutes() / bucket_min) * bucket_min;
  return TimeOfDay{minutes / 60, minutes % 60, 0};
}

void StreamViews::append(const StreamViewEntry& entry) {
  if (!entry.metadata.has_match_key()) {
    throw Error(ErrorKind::missing_match_key, "stream view entry lacks road/date/time");
  }
  StreamBucketKey key{*entry.metadata.road_id, *entry.metadata.event_date,
                      bucket_start_of(*entry.metadata.event_time, bucket_min_)};
  std::unique_lock lock(mutex_);
  entries_[std::move(key)].push_back(entry);
}

std::size_t StreamViews::total_entries() const {
  std::shared_lock lock(mutex_);
  std::size_t n = 0;
  for (const auto& [key, bucket] : entries_) n += bucket.size();
  return n;
}

std::vector<StreamViewEntry> StreamViews::fresh(const std::string& road_id,
                                                UtcTime at) const {
  const StreamBucketKey key{road_id, date_of(at), bucket_start_of(time_of(at), bucket_min_)};
  const std::int64_t horizon_s = static_cast<std::int64_t>(freshness_horizon_min_) * 60;
  std::shared_lock lock(mutex_);
  std::vector<StreamViewEntry> out;
  if (auto it = entries_.find(key); it != entries_.end()) {
    for (const StreamViewEntry& entry : it->second) {
      const std::int64_t age = at.seconds() - entry.produced_at.seconds();
      if (age >= 0 && age <= horizon_s) out.push_back(entry);
    }
  }
  return out;
}

std::map<StreamBucketKey, std::vector<StreamViewEntry>> StreamViews::snapshot() const {
  std::shared_lock lock(mutex_);
  return entries_;
}

void persist_stream_views(const StreamViews& views, const std::string& dir) {
  textio::ensure_directory(dir);
  std::string body = std::string(kStreamViewsMagic) + "\n";
  const auto entries = views.snapshot();
  std::size_t total = 0;
  for (const auto& [key, bucket] : entries) total += bucket.size();
  body += "count " + std::to_string(total) + "\n";
  for (const auto& [key, bucket] : entries) {
    for (const StreamViewEntry& e : bucket) {
      body += std::string("entry\t") + to_string(e.knowledge) + "\t" +
              textio::escape_field(e.source.source_id) + "\t" +
              to_string(e.source.source_kind) + "\t" +
              textio::escape_field(e.source.display_name) + "\t" +
              textio::fmt_double(e.reliability) + "\t" + to_string(e.produced_at);
      for (const std::string& field : metadata_to_fields(e.metadata)) {
        body += "\t" + field;
      }
      body += "\n";
    }
  }
  textio::write_file(dir + "/stream_views", textio::seal_document(std::move(body)));
}

StreamViews load_stream_views(const std::string& dir, int bucket_min,
                              int freshness_horizon_min) {
  StreamViews views(bucket_min, freshness_horizon_min);
  const std::string path = dir + "/stream_views";
  if (!textio::file_exists(path)) return views;
  auto lines = textio::open_document(textio::read_file(path), kStreamViewsMagic);
  if (lines.empty() || lines[0].rfind("count ", 0) != 0) {
    throw Error(ErrorKind::corrupt_views, "stream views file: missing count");
  }
  const std::size_t count =
      static_cast<std::size_t>(textio::parse_int(lines[0].substr(6)));
  if (lines.size() != 1 + count) {
    throw Error(ErrorKind::corrupt_views, "stream views file: row count mismatch");
  }
  for (std::size_t i = 0; i < count; ++i) {
    auto fields = textio::split_tabs(lines[1 + i]);
    if (fields.size() < 7 || fields[0] != "entry") {
      throw Error(ErrorKind::corrupt_views, "stream views file: malformed entry row");
    }
    StreamViewEntry entry;
    entry.knowledge = parse_knowledge(fields[1]);
    entry.source.source_id = textio::unescape_field(fields[2]);
    entry.source.source_kind = parse_source_kind(fields[3]);
    entry.source.display_name = textio::unescape_field(fields[4]);
    entry.reliability = textio::parse_double(fields[5]);
    entry.produced_at = parse_timestamp(fields[6]);
    entry.metadata = metadata_from_fields(fields, 7);
    views.append(entry);
  }
  return views;
}

std::optional<StreamViewEntry> process_stream(const Observation& obs, const TextModel& model,
                                              const ReliabilityLedger& ledger_snapshot,
                                              const RoadDb& roads, const EngineConfig& cfg) {
  auto record = process(obs, model, roads, cfg);
  if (!record) return std::nullopt;
  const double reliability =
      ledger_snapshot.lookup(record->source.source_id, record->condition);
  return StreamViewEntry{record->knowledge, std::move(record->source),
                         std::move(record->metadata), reliability, obs.timestamp};
}

SpeedLayer::SpeedLayer(RoadDb roads, EngineConfig engine, int bucket_min,
                       int freshness_horizon_min)
    : roads_(std::move(roads)),
      engine_(engine),
      routing_{PayloadKind::text, PayloadKind::gps, PayloadKind::loop, PayloadKind::count,
               PayloadKind::weather},
      views_(bucket_min, freshness_horizon_min) {
  engine_.validate();
}

void SpeedLayer::refresh_models(const BatchViews& views) {
  auto snapshot = std::make_shared<const Snapshot>(Snapshot{views.model, views.ledger});
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(snapshot);
}

bool SpeedLayer::has_models() const {
  std::lock_guard lock(mutex_);
  return snapshot_ != nullptr && snapshot_->model.trained();
}

std::shared_ptr<const SpeedLayer::Snapshot> SpeedLayer::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

StreamCounters SpeedLayer::counters() const {
  std::lock_guard lock(mutex_);
  return counters_;
}

Condition SpeedLayer::ambient_condition() const {
  std::lock_guard lock(mutex_);
  return ambient_;
}

void SpeedLayer::set_routing(std::set<PayloadKind> kinds) {
  routing_ = std::move(kinds);
}

std::optional<StreamViewEntry> SpeedLayer::ingest(const Observation& raw) {
  const auto started = std::chrono::steady_clock::now();
  const auto snap = snapshot();
  if (snap == nullptr) {
    throw Error(ErrorKind::bad_config,
                "speed layer has no batch-built models; run a batch iteration first");
  }
  if (routing_.count(payload_kind(raw.payload)) == 0) {
    throw Error(ErrorKind::unroutable_kind,
                std::string("no engine routed for payload kind ") +
                    to_string(payload_kind(raw.payload)));
  }

  std::optional<StreamViewEntry> entry;
  bool ok = true;
  try {
    Observation obs = validate_observation(raw);
    if (staging_ != nullptr) {
      std::lock_guard lock(mutex_);  // staging appends serialize on the layer
      stage(*staging_, obs);
    }

    if (const auto* weather = std::get_if<WeatherPayload>(&obs.payload)) {
      std::lock_guard lock(mutex_);
      ambient_ = weather->condition;
    } else {
      if (obs.condition == Condition::unknown) {
        std::lock_guard lock(mutex_);
        obs.condition = ambient_;
      }
      entry = process_stream(obs, snap->model, snap->ledger, roads_, engine_);
      if (entry) {
        views_.append(*entry);
      } else if (payload_kind(obs.payload) == PayloadKind::text) {
        std::lock_guard lock(mutex_);
        counters_.irrelevant += 1;
      }
    }
  } catch (const Error& e) {
    ok = false;
    std::cerr << "warning: dropped observation from '" << raw.source.source_id
              << "': " << e.what() << "\n";
  }

  const double latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  std::lock_guard lock(mutex_);
  if (ok) {
    counters_.processed += 1;
    if (entry) counters_.entries += 1;
  } else {
    counters_.dropped += 1;
  }
  counters_.total_latency_ms += latency_ms;
  counters_.max_latency_ms = std::max(counters_.max_latency_ms, latency_ms);
  return entry;
}

void Broker::enqueue(Observation obs) {
  queue_.emplace_back(std::move(obs), next_seq_++);
}

std::optional<StreamViewEntry> Broker::deliver(const Observation& obs) {
  return layer_->ingest(obs);
}

std::vector<StreamViewEntry> Broker::run(double speed_factor, const DeliveryHook& hook) {
  std::stable_sort(queue_.begin(), queue_.end(), [](const auto& a, const auto& b) {
    if (a.first.timestamp != b.first.timestamp) return a.first.timestamp < b.first.timestamp;
    return a.second < b.second;
  });

  std::vector<StreamViewEntry> produced;
  std::optional<UtcTime> previous;
  for (const auto& [obs, seq] : queue_) {
    (void)seq;
    if (speed_factor > 0.0 && previous) {
      const double gap_s =
          static_cast<double>(obs.timestamp.seconds() - previous->seconds());
      if (gap_s > 0.0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(gap_s / speed_factor));
      }
    }
    previous = obs.timestamp;

    std::optional<StreamViewEntry> entry;
    try {
      entry = layer_->ingest(obs);
    } catch (const Error& e) {
      std::cerr << "warning: broker could not route '" << obs.source.source_id
                << "': " << e.what() << "\n";
    }
    if (entry) produced.push_back(*entry);
    if (hook) hook(obs, entry);
  }
  queue_.clear();
  return produced;
}

}  // namespace ma4bdi
