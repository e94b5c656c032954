#pragma once
// Batch mode: type-partitioned staging store, full-recompute iterations that
// retrain the text model, extract, match and fuse all staged data, and the
// persisted batch views (insights, ledger, model, prediction history).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ma4bdi/extraction.hpp"
#include "ma4bdi/fusion.hpp"
#include "ma4bdi/ledger.hpp"
#include "ma4bdi/road_db.hpp"
#include "ma4bdi/text_model.hpp"
#include "ma4bdi/types.hpp"

namespace ma4bdi {

// Append-only between iterations; observations are routed by payload kind.
struct StagingStore {
  std::vector<Observation> text;
  std::vector<Observation> gps;
  std::vector<Observation> loop;
  std::vector<Observation> count;
  std::vector<Observation> weather;

  std::size_t size() const {
    return text.size() + gps.size() + loop.size() + count.size() + weather.size();
  }
  bool operator==(const StagingStore&) const = default;
};

// Validates the observation then appends it to its kind partition.
void stage(StagingStore& store, const Observation& obs);

struct HistoryEntry {
  EventKey key;
  Knowledge knowledge = Knowledge::not_congested;
  UtcTime timestamp;  // event onset: date + window start

  auto operator<=>(const HistoryEntry&) const = default;
};

struct BatchViews {
  std::map<EventKey, GlobalInsight> insights;
  ReliabilityLedger ledger;
  TextModel model;
  std::vector<HistoryEntry> history;
  std::int64_t iteration = 0;

  bool operator==(const BatchViews&) const = default;
};

struct BatchConfig {
  EngineConfig engine;
  FusionConfig fusion;
  double smoothing_alpha = 1.0;
  ReliabilityLedger initial_ledger;
};

BatchViews initial_views(const BatchConfig& cfg);

struct BatchIterationStats {
  std::size_t observations = 0;
  std::size_t skipped = 0;    // per-record extraction failures, logged to stderr
  std::size_t records = 0;
  std::size_t clusters = 0;
  std::size_t reused = 0;     // clusters with no unsettled source, carried verbatim
};

// One full recompute over everything staged: retrain the model from the
// corpus, replay the weather partition into a condition timeline, extract
// every observation, match against the previous insights and fuse.
// Reliability deltas are applied only for (event, source) votes not settled
// in an earlier iteration, so re-running over unchanged data moves nothing.
BatchViews run_batch_iteration(const StagingStore& store, const BatchViews& prev,
                               const std::vector<TextExample>& corpus, const RoadDb& roads,
                               const BatchConfig& cfg,
                               BatchIterationStats* stats = nullptr);

// Views directory: ledger / insights / history / model / iteration files,
// each version-headed, checksum-sealed, byte-deterministic.
void persist_views(const BatchViews& views, const std::string& dir);
BatchViews load_views(const std::string& dir);   // io-failure / corrupt-views
bool views_present(const std::string& dir);

// Staging partitions persist as line-delimited observation envelopes.
void persist_staging(const StagingStore& store, const std::string& dir);
StagingStore load_staging(const std::string& dir);  // empty store when absent

// Latest weather record at or before a given instant.
class ConditionTimeline {
 public:
  ConditionTimeline() = default;
  explicit ConditionTimeline(std::vector<std::pair<UtcTime, Condition>> points);

  Condition at(UtcTime t) const;  // unknown when no record applies

 private:
  std::vector<std::pair<UtcTime, Condition>> points_;  // sorted by time
};

ConditionTimeline build_condition_timeline(const std::vector<Observation>& weather);

// Envelope condition when explicit, else the ambient condition at the
// observation's timestamp.
Observation resolve_condition(Observation obs, const ConditionTimeline& timeline);

}  // namespace ma4bdi
