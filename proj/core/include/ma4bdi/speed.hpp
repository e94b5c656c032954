#pragma once
// Stream mode: an in-process broker that routes observations by payload
// kind at arrival, processes them with the batch-built model and ledger
// snapshot, and maintains queryable stream views. The ingest path performs
// no file I/O; batch views only enter through refresh_models().

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ma4bdi/batch.hpp"
#include "ma4bdi/extraction.hpp"
#include "ma4bdi/types.hpp"

namespace ma4bdi {

struct StreamCounters {
  std::uint64_t processed = 0;   // envelopes accepted (including weather / irrelevant)
  std::uint64_t dropped = 0;     // envelopes rejected by validation or extraction
  std::uint64_t irrelevant = 0;  // text classified off-topic
  std::uint64_t entries = 0;     // stream view entries appended
  double max_latency_ms = 0.0;
  double total_latency_ms = 0.0;

  double mean_latency_ms() const {
    return processed + dropped == 0 ? 0.0
                                    : total_latency_ms / static_cast<double>(processed + dropped);
  }
};

struct StreamBucketKey {
  std::string road_id;
  Date date;
  TimeOfDay bucket_start;

  auto operator<=>(const StreamBucketKey&) const = default;
};

// Entries keyed by (road, date, time bucket); buckets share the fusion
// match window so query keys line up across layers. Entries beyond the
// freshness horizon stop answering queries but are retained for audit.
class StreamViews {
 public:
  explicit StreamViews(int bucket_min = 15, int freshness_horizon_min = 60);
  StreamViews(StreamViews&& other) noexcept;
  StreamViews& operator=(StreamViews&& other) noexcept;
  StreamViews(const StreamViews&) = delete;
  StreamViews& operator=(const StreamViews&) = delete;

  int bucket_min() const { return bucket_min_; }
  int freshness_horizon_min() const { return freshness_horizon_min_; }

  void append(const StreamViewEntry& entry);  // entry metadata must carry the match key
  std::size_t total_entries() const;

  // Entries in the bucket covering `at`, produced at or before `at` and
  // within the freshness horizon.
  std::vector<StreamViewEntry> fresh(const std::string& road_id, UtcTime at) const;

  std::map<StreamBucketKey, std::vector<StreamViewEntry>> snapshot() const;

  static TimeOfDay bucket_start_of(TimeOfDay t, int bucket_min);

 private:
  int bucket_min_;
  int freshness_horizon_min_;
  mutable std::shared_mutex mutex_;
  std::map<StreamBucketKey, std::vector<StreamViewEntry>> entries_;
};

void persist_stream_views(const StreamViews& views, const std::string& dir);
StreamViews load_stream_views(const std::string& dir, int bucket_min,
                              int freshness_horizon_min);  // empty when absent

// One observation through the batch-built model: extraction plus the ledger
// weight for (source, condition), producing the stream-view quadruplet.
// Pure; the caller decides whether to append the entry anywhere.
std::optional<StreamViewEntry> process_stream(const Observation& obs, const TextModel& model,
                                              const ReliabilityLedger& ledger_snapshot,
                                              const RoadDb& roads, const EngineConfig& cfg);

class SpeedLayer {
 public:
  SpeedLayer(RoadDb roads, EngineConfig engine, int bucket_min = 15,
             int freshness_horizon_min = 60);

  // Atomically swaps in the model and ledger of a batch iteration;
  // observations already in flight finish on the old snapshot.
  void refresh_models(const BatchViews& views);
  bool has_models() const;

  // Dual routing: every accepted observation is also appended to this store.
  void attach_staging(StagingStore* staging) { staging_ = staging; }

  // Validates, routes by payload kind and processes synchronously with the
  // current snapshot. Weather updates the ambient condition; text classified
  // irrelevant yields nothing. Per-record failures increment `dropped` and
  // never stall the stream. Throws unroutable-kind for kinds outside the
  // routing table and bad-config when no snapshot is loaded.
  std::optional<StreamViewEntry> ingest(const Observation& raw);

  const StreamViews& views() const { return views_; }
  StreamViews& views() { return views_; }
  StreamCounters counters() const;
  Condition ambient_condition() const;

  // Routing table: payload kinds the broker will accept.
  void set_routing(std::set<PayloadKind> kinds);

 private:
  struct Snapshot {
    TextModel model;
    ReliabilityLedger ledger;
  };

  std::shared_ptr<const Snapshot> snapshot() const;

  RoadDb roads_;
  EngineConfig engine_;
  std::set<PayloadKind> routing_;
  StagingStore* staging_ = nullptr;

  mutable std::mutex mutex_;  // guards snapshot_, ambient_, counters_
  std::shared_ptr<const Snapshot> snapshot_;
  Condition ambient_ = Condition::unknown;
  StreamCounters counters_;

  StreamViews views_;
};

// FIFO queue of envelopes replayed to a speed layer in virtual (scenario)
// time. speed_factor > 0 paces delivery against the scenario clock
// (1.0 = real time); 0 delivers as fast as possible.
class Broker {
 public:
  explicit Broker(SpeedLayer& layer) : layer_(&layer) {}

  void enqueue(Observation obs);
  std::size_t pending() const { return queue_.size(); }

  // Deliver one envelope synchronously.
  std::optional<StreamViewEntry> deliver(const Observation& obs);

  using DeliveryHook =
      std::function<void(const Observation&, const std::optional<StreamViewEntry>&)>;

  // Drains the queue in timestamp order (stable for equal stamps, so
  // per-source order is preserved). Returns the produced entries.
  std::vector<StreamViewEntry> run(double speed_factor = 0.0,
                                   const DeliveryHook& hook = nullptr);

 private:
  SpeedLayer* layer_;
  std::vector<std::pair<Observation, std::size_t>> queue_;
  std::size_t next_seq_ = 0;
};

}  // namespace ma4bdi
