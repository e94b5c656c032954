#include "ma4bdi/fusion.hpp"

#include <algorithm>
#include <tuple>

#include "ma4bdi/error.hpp"

namespace ma4bdi {

namespace {

// Total order used for chaining and for "first record wins" rules.
bool record_before(const ExtractedRecord& a, const ExtractedRecord& b) {
  return std::tie(*a.metadata.event_time, a.source.source_id, a.knowledge, a.observed_at) <
         std::tie(*b.metadata.event_time, b.source.source_id, b.knowledge, b.observed_at);
}

struct TimePoint {
  TimeOfDay time;
  bool is_phantom = false;
  std::size_t index = 0;  // record index or insight index
};

}  // namespace

void FusionConfig::validate() const {
  if (match_window_min <= 0) {
    throw Error(ErrorKind::bad_config, "match_window_min must be > 0");
  }
}

std::vector<EventCluster> match_records(const std::vector<ExtractedRecord>& records,
                                        const std::vector<GlobalInsight>& existing,
                                        const FusionConfig& cfg) {
  cfg.validate();
  for (const ExtractedRecord& r : records) {
    if (!r.metadata.has_match_key()) {
      throw Error(ErrorKind::missing_match_key,
                  "record from '" + r.source.source_id +
                      "' lacks road_id/event_date/event_time");
    }
  }

  using GroupKey = std::pair<std::string, Date>;
  std::map<GroupKey, std::vector<std::size_t>> record_groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    record_groups[{*records[i].metadata.road_id, *records[i].metadata.event_date}].push_back(i);
  }
  std::map<GroupKey, std::vector<std::size_t>> phantom_groups;
  for (std::size_t i = 0; i < existing.size(); ++i) {
    phantom_groups[{existing[i].event_key.road_id, existing[i].event_key.event_date}]
        .push_back(i);
  }

  const int window_s = cfg.match_window_min * 60;
  std::vector<EventCluster> clusters;

  for (auto& [group_key, record_indices] : record_groups) {
    std::sort(record_indices.begin(), record_indices.end(),
              [&](std::size_t a, std::size_t b) {
                return record_before(records[a], records[b]);
              });

    std::vector<TimePoint> points;
    points.reserve(record_indices.size());
    for (std::size_t idx : record_indices) {
      points.push_back({*records[idx].metadata.event_time, false, idx});
    }
    if (auto it = phantom_groups.find(group_key); it != phantom_groups.end()) {
      for (std::size_t idx : it->second) {
        points.push_back({existing[idx].event_key.window_start, true, idx});
      }
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const TimePoint& a, const TimePoint& b) { return a.time < b.time; });

    std::size_t begin = 0;
    while (begin < points.size()) {
      std::size_t end = begin + 1;
      while (end < points.size() &&
             points[end].time.total_seconds() - points[end - 1].time.total_seconds() <=
                 window_s) {
        ++end;
      }

      EventCluster cluster;
      for (std::size_t i = begin; i < end; ++i) {
        if (points[i].is_phantom) {
          cluster.absorbed_keys.push_back(existing[points[i].index].event_key);
        } else {
          cluster.records.push_back(records[points[i].index]);
        }
      }
      begin = end;
      if (cluster.records.empty()) continue;  // phantom-only span: no new data

      std::sort(cluster.records.begin(), cluster.records.end(), record_before);
      // exact duplicates: same source and knowledge within the same event
      std::set<std::pair<std::string, Knowledge>> seen;
      std::erase_if(cluster.records, [&](const ExtractedRecord& r) {
        return !seen.insert({r.source.source_id, r.knowledge}).second;
      });

      std::sort(cluster.absorbed_keys.begin(), cluster.absorbed_keys.end());
      cluster.key = cluster.absorbed_keys.empty()
                        ? EventKey{group_key.first, group_key.second,
                                   *cluster.records.front().metadata.event_time}
                        : cluster.absorbed_keys.front();
      clusters.push_back(std::move(cluster));
    }
  }

  std::sort(clusters.begin(), clusters.end(),
            [](const EventCluster& a, const EventCluster& b) { return a.key < b.key; });
  return clusters;
}

VoteResult weighted_vote(const EventCluster& cluster, const ReliabilityLedger& ledger) {
  VoteResult result;
  for (const ExtractedRecord& r : cluster.records) {
    const double weight = ledger.lookup(r.source.source_id, r.condition);
    if (r.knowledge == Knowledge::congested) {
      result.score_congested += weight;
    } else {
      result.score_not_congested += weight;
    }
  }
  // tie -> not_congested: do not alarm without majority weight
  result.winner = result.score_congested > result.score_not_congested
                      ? Knowledge::congested
                      : Knowledge::not_congested;
  return result;
}

Metadata merge_metadata(const EventCluster& cluster, Knowledge winner,
                        const ReliabilityLedger& ledger) {
  std::vector<const ExtractedRecord*> pool;
  for (const ExtractedRecord& r : cluster.records) {
    if (r.knowledge == winner) pool.push_back(&r);
  }
  if (pool.empty()) {
    // Only reachable when every weight is zero and nobody voted for the tie
    // default; fall back to the full record set rather than emit nothing.
    for (const ExtractedRecord& r : cluster.records) pool.push_back(&r);
  }

  // rank contributors by reliability, ties toward the lower source id
  std::stable_sort(pool.begin(), pool.end(),
                   [&](const ExtractedRecord* a, const ExtractedRecord* b) {
                     const double wa = ledger.lookup(a->source.source_id, a->condition);
                     const double wb = ledger.lookup(b->source.source_id, b->condition);
                     if (wa != wb) return wa > wb;
                     return a->source.source_id < b->source.source_id;
                   });

  Metadata merged;
  merged.event_date = cluster.key.event_date;
  merged.event_time = (*std::min_element(pool.begin(), pool.end(),
                                         [](const ExtractedRecord* a, const ExtractedRecord* b) {
                                           return *a->metadata.event_time <
                                                  *b->metadata.event_time;
                                         }))
                          ->metadata.event_time;
  for (const ExtractedRecord* r : pool) {
    const Metadata& md = r->metadata;
    if (!merged.road_id && md.road_id) merged.road_id = md.road_id;
    if (!merged.road_name && md.road_name) merged.road_name = md.road_name;
    if (!merged.reason && md.reason) merged.reason = md.reason;
    // resolution date/time travel as a pair
    if (!merged.resolution_time && md.resolution_date && md.resolution_time) {
      merged.resolution_date = md.resolution_date;
      merged.resolution_time = md.resolution_time;
    }
    for (const auto& [key, value] : md.extras) {
      merged.extras.emplace(key, value);  // first (highest-ranked) writer wins
    }
  }
  return merged;
}

ReliabilityLedger update_reliability(ReliabilityLedger ledger, const EventCluster& cluster,
                                     Knowledge winner,
                                     const std::set<std::string>* skip_sources) {
  std::set<std::string> updated;
  for (const ExtractedRecord& r : cluster.records) {
    if (!updated.insert(r.source.source_id).second) continue;  // first record wins
    if (skip_sources != nullptr && skip_sources->count(r.source.source_id) > 0) continue;
    ledger.apply_outcome(r.source.source_id, r.condition, r.knowledge == winner);
  }
  return ledger;
}

FuseOutput fuse(std::vector<EventCluster> clusters, ReliabilityLedger ledger,
                const std::map<EventKey, std::set<std::string>>* settled_sources) {
  std::sort(clusters.begin(), clusters.end(),
            [](const EventCluster& a, const EventCluster& b) { return a.key < b.key; });

  FuseOutput out;
  out.insights.reserve(clusters.size());
  for (const EventCluster& cluster : clusters) {
    const VoteResult vote = weighted_vote(cluster, ledger);
    GlobalInsight insight;
    insight.event_key = cluster.key;
    insight.knowledge = vote.winner;
    insight.score_congested = vote.score_congested;
    insight.score_not_congested = vote.score_not_congested;
    insight.metadata = merge_metadata(cluster, vote.winner, ledger);

    std::set<std::string> sources;
    for (const ExtractedRecord& r : cluster.records) sources.insert(r.source.source_id);
    insight.contributing_sources.assign(sources.begin(), sources.end());

    const std::set<std::string>* skip = nullptr;
    if (settled_sources != nullptr) {
      if (auto it = settled_sources->find(cluster.key); it != settled_sources->end()) {
        skip = &it->second;
      }
    }
    ledger = update_reliability(std::move(ledger), cluster, vote.winner, skip);
    out.insights.push_back(std::move(insight));
  }
  out.ledger = std::move(ledger);
  return out;
}

}  // namespace ma4bdi
