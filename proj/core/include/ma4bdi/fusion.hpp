#pragma once
// Matching and merging layer: cluster records describing the same event,
// run the reliability-weighted vote, union metadata from the agreeing
// records, and update the source reliability ledger.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ma4bdi/ledger.hpp"
#include "ma4bdi/types.hpp"

namespace ma4bdi {

struct FusionConfig {
  int match_window_min = 15;

  void validate() const;
};

// Records describing one event: same road and date, ordered by event time,
// chained so consecutive gaps never exceeded the match window at formation.
// absorbed_keys lists the existing insights whose keys this cluster adopted.
struct EventCluster {
  EventKey key;
  std::vector<ExtractedRecord> records;
  std::vector<EventKey> absorbed_keys;
};

struct VoteResult {
  Knowledge winner = Knowledge::not_congested;
  double score_congested = 0.0;
  double score_not_congested = 0.0;

  double score(Knowledge k) const {
    return k == Knowledge::congested ? score_congested : score_not_congested;
  }
};

// Partition by (road, date), sort by time, chain-merge while consecutive
// gaps stay within the window. Existing insights participate as phantom
// time points so an overlapping cluster adopts the stored key instead of
// producing a duplicate event. Exact duplicates (same source, knowledge and
// key) keep only the earliest record.
std::vector<EventCluster> match_records(const std::vector<ExtractedRecord>& records,
                                        const std::vector<GlobalInsight>& existing,
                                        const FusionConfig& cfg);

// Score per label = sum of ledger weights of the records voting for it;
// ties break toward not_congested.
VoteResult weighted_vote(const EventCluster& cluster, const ReliabilityLedger& ledger);

// Union of metadata over the records that agree with the winner, each field
// taken from the highest-reliability contributor (ties: lower source id).
// Event time is the earliest among the agreeing records.
Metadata merge_metadata(const EventCluster& cluster, Knowledge winner,
                        const ReliabilityLedger& ledger);

// Each participating source moves +-delta (agreed / disagreed with the
// winner) at its (source, condition) entry, clamped to [floor, cap]. A
// source is updated at most once per cluster (first record wins); sources
// listed in skip_sources are left untouched.
ReliabilityLedger update_reliability(ReliabilityLedger ledger, const EventCluster& cluster,
                                     Knowledge winner,
                                     const std::set<std::string>* skip_sources = nullptr);

struct FuseOutput {
  std::vector<GlobalInsight> insights;
  ReliabilityLedger ledger;
};

// Per cluster in key order: vote, merge metadata, update the ledger (the
// ledger threads through clusters sequentially). settled_sources, when
// given, maps an event key to sources whose vote on that event was already
// applied in an earlier iteration and must not be re-applied.
FuseOutput fuse(std::vector<EventCluster> clusters, ReliabilityLedger ledger,
                const std::map<EventKey, std::set<std::string>>* settled_sources = nullptr);

}  // namespace ma4bdi
