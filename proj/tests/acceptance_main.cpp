// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "ma4bdi/batch.hpp"
#include "ma4bdi/fusion.hpp"
#include "ma4bdi/query.hpp"
#include "ma4bdi/speed.hpp"
#include "ma4bdi/textio.hpp"
#include "testutil.hpp"

using namespace ma4bdi;
using namespace ma4bdi::testutil;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

BatchConfig default_batch_config() {
  return BatchConfig{EngineConfig{}, FusionConfig{}, 1.0, seeded_ledger()};
}

StagingStore staged_example() {
  StagingStore store;
  for (const Observation& obs : example_scenario()) stage(store, obs);
  return store;
}

// ---- criterion 1: published vote scores through match + vote ---------------

Check criterion_1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const auto clusters = match_records(example_records(), {}, FusionConfig{});
  c.require(clusters.size() == 1, "expected one cluster");
  if (!c.ok) return c;
  const VoteResult vote = weighted_vote(clusters[0], seeded_ledger());
  c.require(std::abs(vote.score_congested - 0.60) < 1e-9,
            "congested score " + textio::fmt_double(vote.score_congested));
  c.require(std::abs(vote.score_not_congested - 0.25) < 1e-9,
            "not_congested score " + textio::fmt_double(vote.score_not_congested));
  c.require(vote.winner == Knowledge::congested, "winner not congested");
  c.require(ms_since(start) < 1000.0, "match + vote exceeded 1 s");
  return c;
}

// ---- criterion 2: refreshed ledger after fusion -----------------------------

Check criterion_2() {
  Check c;
  auto clusters = match_records(example_records(), {}, FusionConfig{});
  const FuseOutput out = fuse(std::move(clusters), seeded_ledger());
  const auto expect = [&c, &out](const char* source, Condition cond, double want) {
    const double got = out.ledger.lookup(source, cond);
    c.require(std::abs(got - want) < 1e-12, std::string(source) + "/" + to_string(cond) +
                                                " = " + textio::fmt_double(got) +
                                                ", want " + textio::fmt_double(want));
  };
  expect("UserA", Condition::unknown, 0.30);  // capped at the default 0.30
  expect("UserB", Condition::unknown, 0.20);
  expect("UserC", Condition::unknown, 0.10);
  expect("UserD", Condition::unknown, 0.20);
  expect("ID1", Condition::rain, 0.05);
  expect("ID1", Condition::clear, 0.15);
  return c;
}

// ---- criterion 3: merged metadata fields ------------------------------------

Check criterion_3() {
  Check c;
  auto clusters = match_records(example_records(), {}, FusionConfig{});
  const FuseOutput out = fuse(std::move(clusters), seeded_ledger());
  c.require(out.insights.size() == 1, "expected one insight");
  if (!c.ok) return c;
  const Metadata& md = out.insights[0].metadata;
  c.require(md.reason && *md.reason == "accident", "reason not 'accident'");
  c.require(md.resolution_date && *md.resolution_date == Date{2017, 7, 11},
            "resolution date not 2017-07-11");
  c.require(md.resolution_time && *md.resolution_time == TimeOfDay{18, 0, 0},
            "resolution time not 18:00");
  return c;
}

// ---- criterion 4: vote property suite ---------------------------------------

Check criterion_4() {
  Check c;
  std::mt19937 rng(40);
  auto random_ledger = [&rng] {
    ReliabilityLedger ledger(0.0, 1.0, 0.05);
    for (int s = 0; s < 8; ++s) {
      ledger.set("S" + std::to_string(s), Condition::unknown,
                 static_cast<double>(rng() % 101) / 100.0);
    }
    return ledger;
  };
  auto random_cluster = [&rng](std::size_t max_records) {
    EventCluster cluster;
    cluster.key = EventKey{"100", kEventDate, TimeOfDay{8, 0, 0}};
    const std::size_t n = 1 + rng() % max_records;
    for (std::size_t i = 0; i < n; ++i) {
      cluster.records.push_back(make_record(
          "S" + std::to_string(rng() % 8), SourceKind::standard_social,
          rng() % 2 == 0 ? Knowledge::congested : Knowledge::not_congested, "100",
          kEventDate, TimeOfDay{8, static_cast<int>(i % 60), 0}));
    }
    return cluster;
  };

  int clusters_checked = 0;
  while (clusters_checked < 1000 && c.ok) {
    const EventCluster cluster = random_cluster(8);
    const ReliabilityLedger ledger = random_ledger();
    const VoteResult vote = weighted_vote(cluster, ledger);
    const auto [oc, onc] = oracle_vote_scores(cluster, ledger);
    c.require(std::abs(vote.score_congested - oc) < 1e-12, "score mismatch vs oracle");
    c.require(std::abs(vote.score_not_congested - onc) < 1e-12, "score mismatch vs oracle");

    // uniform scaling never flips the winner; c <= 1 keeps entries in [0, 1]
    const double factor = static_cast<double>(1 + rng() % 100) / 100.0;
    ReliabilityLedger scaled(0.0, 1.0, 0.05);
    for (const auto& [key, value] : ledger.entries()) {
      scaled.set(key.first, key.second, value * factor);
    }
    c.require(weighted_vote(cluster, scaled).winner == vote.winner,
              "scaling changed the winner");

    // a zero-weight source must be invisible
    ReliabilityLedger with_zero = ledger;
    with_zero.set("Zero", Condition::unknown, 0.0);
    EventCluster extended = cluster;
    extended.records.push_back(make_record(
        "Zero", SourceKind::standard_social,
        rng() % 2 == 0 ? Knowledge::congested : Knowledge::not_congested, "100", kEventDate,
        TimeOfDay{8, 30, 0}));
    const VoteResult padded = weighted_vote(extended, with_zero);
    c.require(padded.winner == vote.winner, "zero-weight source changed the winner");
    c.require(std::abs(padded.score_congested - vote.score_congested) < 1e-12 &&
                  std::abs(padded.score_not_congested - vote.score_not_congested) < 1e-12,
              "zero-weight source changed scores");
    ++clusters_checked;
  }
  return c;
}

// ---- criterion 5: matching vs transitive-closure oracle ---------------------

Check criterion_5() {
  Check c;
  std::mt19937 rng(50);
  for (int trial = 0; trial < 500 && c.ok; ++trial) {
    // unique sources so deduplication cannot fire; the partition is the test
    std::vector<ExtractedRecord> records;
    const std::size_t n = rng() % 13;
    for (std::size_t i = 0; i < n; ++i) {
      const int minute = static_cast<int>(rng() % 360);
      records.push_back(make_record("S" + std::to_string(i), SourceKind::standard_social,
                                    rng() % 2 == 0 ? Knowledge::congested
                                                   : Knowledge::not_congested,
                                    rng() % 2 == 0 ? "100" : "200", kEventDate,
                                    TimeOfDay{minute / 60, minute % 60, 0}));
    }
    const auto clusters = match_records(records, {}, FusionConfig{});

    std::set<std::set<std::size_t>> got;
    for (const EventCluster& cluster : clusters) {
      std::set<std::size_t> members;
      for (const ExtractedRecord& r : cluster.records) {
        for (std::size_t i = 0; i < records.size(); ++i) {
          if (records[i] == r) {
            members.insert(i);
            break;
          }
        }
      }
      got.insert(members);
    }
    c.require(got == oracle_partition(records, FusionConfig{}.match_window_min),
              "partition differs from oracle at trial " + std::to_string(trial));
  }
  return c;
}

// ---- criterion 6: Bayes decisions vs hand-computed posteriors ---------------

Check criterion_6() {
  Check c;
  const std::vector<TextExample> corpus = {
      {"jam jam slow", TextClass::congested},
      {"slow road", TextClass::congested},
      {"clear road fast", TextClass::not_congested},
      {"fast clear", TextClass::not_congested},
      {"pizza tonight", TextClass::irrelevant},
  };
  const TextModel model = train_text_model(corpus, 1.0);
  const BayesOracle oracle(corpus, 1.0);
  c.require(model.vocabulary_size() <= 10, "vocabulary larger than intended");

  const std::vector<std::string> alphabet = {"jam",   "slow",    "road",  "clear",
                                             "fast",  "pizza",   "tonight", "unseen"};
  std::vector<std::string> inputs = {""};
  for (int length = 1; length <= 3; ++length) {
    std::vector<std::size_t> index(static_cast<std::size_t>(length), 0);
    while (true) {
      std::string text;
      for (std::size_t i : index) {
        if (!text.empty()) text += " ";
        text += alphabet[i];
      }
      inputs.push_back(text);
      std::size_t pos = 0;
      while (pos < index.size() && ++index[pos] == alphabet.size()) index[pos++] = 0;
      if (pos == index.size()) break;
    }
  }
  for (const std::string& text : inputs) {
    const TextPrediction got = classify_text(model, text);
    const auto expected = oracle.classify(text);
    c.require(got.label == expected.first, "decision differs on '" + text + "'");
    c.require(std::abs(got.posterior - expected.second) < 1e-12,
              "posterior differs on '" + text + "'");
    if (!c.ok) break;
  }

  c.require(serialize_text_model(train_text_model(demo_corpus(), 1.0)) ==
                serialize_text_model(train_text_model(demo_corpus(), 1.0)),
            "training is not byte-deterministic");
  return c;
}

// ---- criterion 7: ledger safety under random update sequences ---------------

Check criterion_7() {
  Check c;
  std::mt19937 rng(70);
  for (int sequence = 0; sequence < 20 && c.ok; ++sequence) {
    ReliabilityLedger ledger = seeded_ledger();
    for (int step = 0; step < 100; ++step) {
      EventCluster cluster;
      cluster.key = EventKey{"100", kEventDate, TimeOfDay{8, 0, 0}};
      const std::vector<std::pair<std::string, Condition>> pool = {
          {"UserA", Condition::unknown}, {"UserB", Condition::rain},
          {"UserC", Condition::clear},   {"UserD", Condition::unknown},
          {"ID1", Condition::rain},      {"ID1", Condition::clear},
      };
      const std::size_t picks = 1 + rng() % pool.size();
      for (std::size_t i = 0; i < picks; ++i) {
        const auto& [source_id, cond] = pool[rng() % pool.size()];
        cluster.records.push_back(make_record(
            source_id, SourceKind::standard_social,
            rng() % 2 == 0 ? Knowledge::congested : Knowledge::not_congested, "100",
            kEventDate, TimeOfDay{8, static_cast<int>(i), 0}, cond));
      }
      const Knowledge winner =
          rng() % 2 == 0 ? Knowledge::congested : Knowledge::not_congested;
      const ReliabilityLedger updated = update_reliability(ledger, cluster, winner);

      // a source is judged once per cluster: its first record names the
      // (source, condition) entry that may move
      std::set<ReliabilityLedger::Key> participating;
      std::set<std::string> seen_sources;
      for (const ExtractedRecord& r : cluster.records) {
        if (seen_sources.insert(r.source.source_id).second) {
          participating.insert(ledger.resolve_key(r.source.source_id, r.condition));
        }
      }
      for (const auto& [key, before] : ledger.entries()) {
        const double after = updated.entries().at(key);
        c.require(after >= ledger.floor() && after <= ledger.cap(),
                  "entry left [floor, cap]");
        if (participating.count(key) == 0) {
          c.require(after == before, "non-participating entry changed");
        } else {
          const double up = std::clamp(before + ledger.delta(), ledger.floor(), ledger.cap());
          const double down =
              std::clamp(before - ledger.delta(), ledger.floor(), ledger.cap());
          c.require(after == up || after == down,
                    "participating entry moved by something else than one delta");
        }
      }
      ledger = updated;
    }
  }
  return c;
}

// ---- criterion 8: lambda contracts ------------------------------------------

Check criterion_8() {
  Check c;
  const BatchConfig cfg = default_batch_config();

  // (a) recompute purity: rebuilding from the raw scenario is byte-identical
  const TempDir dir_a("acc8a");
  const TempDir dir_b("acc8b");
  for (const std::string& dir : {dir_a.path(), dir_b.path()}) {
    StagingStore store = staged_example();
    const BatchViews views =
        run_batch_iteration(store, initial_views(cfg), demo_corpus(), demo_roads(), cfg);
    persist_views(views, dir);
    persist_staging(store, dir);
  }
  for (const char* name : {"ledger", "insights", "history", "model", "iteration", "staging"}) {
    c.require(textio::read_file(dir_a.path() + "/" + name) ==
                  textio::read_file(dir_b.path() + "/" + name),
              std::string("recompute differs in file ") + name);
  }

  // (b) replay stability: a second iteration over unchanged data moves nothing
  const StagingStore store = staged_example();
  const BatchViews first =
      run_batch_iteration(store, initial_views(cfg), demo_corpus(), demo_roads(), cfg);
  const BatchViews second = run_batch_iteration(store, first, demo_corpus(), demo_roads(), cfg);
  c.require(second.insights == first.insights, "insights changed on replay");
  c.require(second.ledger == first.ledger, "ledger changed on replay");
  c.require(second.history == first.history, "history changed on replay");

  // (c) parity: stream and batch extraction agree on (knowledge, metadata)
  SpeedLayer layer(demo_roads(), cfg.engine, 15, 60);
  layer.refresh_models(first);
  const ConditionTimeline timeline = build_condition_timeline(store.weather);
  for (const Observation& obs : example_scenario()) {
    const auto stream_entry = layer.ingest(obs);
    const auto batch_record =
        process(resolve_condition(obs, timeline), first.model, demo_roads(), cfg.engine);
    c.require(stream_entry.has_value() == batch_record.has_value(),
              "stream and batch disagree on emitting a record");
    if (stream_entry && batch_record) {
      c.require(stream_entry->knowledge == batch_record->knowledge,
                "stream and batch disagree on knowledge");
      c.require(stream_entry->metadata == batch_record->metadata,
                "stream and batch disagree on metadata");
    }
  }
  return c;
}

// ---- criterion 9: query precedence and prediction ---------------------------

Check criterion_9() {
  Check c;
  const BatchConfig cfg = default_batch_config();
  const BatchViews views = run_batch_iteration(staged_example(), initial_views(cfg),
                                               demo_corpus(), demo_roads(), cfg);

  StreamViews streams(15, 60);
  StreamViewEntry entry;
  entry.knowledge = Knowledge::congested;
  entry.source = source("UserB", SourceKind::standard_social);
  entry.metadata.road_id = "100";
  entry.metadata.event_date = kEventDate;
  entry.metadata.event_time = TimeOfDay{8, 40, 0};
  entry.reliability = 0.20;
  entry.produced_at = make_utc(kEventDate, {8, 40, 0});
  streams.append(entry);

  const UtcTime at = make_utc(kEventDate, {8, 44, 0});
  const InsightAnswer from_stream = query_segment("100", at, streams, views);
  c.require(from_stream.provenance == Provenance::stream, "stream entry did not answer");
  c.require(std::abs(from_stream.reliability - 0.20) < 1e-12, "stream reliability wrong");

  const InsightAnswer from_batch = query_segment("100", at, StreamViews(15, 60), views);
  c.require(from_batch.provenance == Provenance::batch,
            "batch did not answer once streams emptied");
  c.require(std::abs(from_batch.reliability - 0.60 / 0.85) < 1e-9,
            "batch vote share wrong");

  const InsightAnswer predicted = query_segment("100", at, StreamViews(15, 60), BatchViews{});
  c.require(predicted.provenance == Provenance::predicted,
            "prediction did not answer once batch emptied");
  c.require(predicted.state == Knowledge::not_congested &&
                std::abs(predicted.reliability - 0.5) < 1e-12,
            "empty-history prediction is not the Laplace prior");

  // hand-computed Laplace values
  std::vector<HistoryEntry> history;
  for (const Date& monday : {Date{2017, 7, 3}, Date{2017, 7, 10}, Date{2017, 6, 26}}) {
    history.push_back(HistoryEntry{EventKey{"100", monday, TimeOfDay{8, 10, 0}},
                                   Knowledge::congested,
                                   make_utc(monday, TimeOfDay{8, 10, 0})});
  }
  const Prediction p = predict_state("100", make_utc(Date{2017, 7, 17}, {8, 30, 0}), history);
  c.require(p.state == Knowledge::congested && std::abs(p.probability - 0.8) < 1e-12,
            "(3+1)/(3+2) prediction wrong");
  return c;
}

// ---- criterion 10: in-process latency and the no-I/O stream path ------------

Check criterion_10() {
  Check c;
  const BatchConfig cfg = default_batch_config();
  BatchViews views = initial_views(cfg);
  views.model = train_text_model(demo_corpus(), 1.0);
  ReliabilityLedger ledger = views.ledger;
  for (int s = 0; s < 8; ++s) {
    ledger.set("Feed" + std::to_string(s), Condition::unknown, 0.15);
  }
  views.ledger = ledger;

  SpeedLayer layer(demo_roads(), cfg.engine, 15, 60);
  layer.refresh_models(views);
  StagingStore staging;
  layer.attach_staging(&staging);

  Broker broker(layer);
  const char* texts[] = {
      "huge jam on alpha road",
      "accident on beta road all lanes blocked",
      "gamma road flowing normally",
      "alpha road clear no delays",
  };
  for (int i = 0; i < 1000; ++i) {
    broker.enqueue(Observation{
        TextPayload{texts[i % 4]},
        source("Feed" + std::to_string(i % 8), SourceKind::standard_social),
        UtcTime(make_utc(kEventDate, {9, 0, 0}).seconds() + i), Condition::unknown});
  }

  const std::uint64_t io_before = textio::file_ops();
  broker.run();
  const StreamCounters last = layer.counters();
  c.require(textio::file_ops() == io_before, "stream path performed file I/O");
  c.require(last.processed + last.dropped == 1000, "not all records accounted for");
  c.require(last.max_latency_ms < 100.0,
            "max per-record latency " + std::to_string(last.max_latency_ms) + " ms");
  std::printf("      (1000 records: max %.3f ms, mean %.3f ms per record)\n",
              last.max_latency_ms, last.mean_latency_ms());
  return c;
}

}  // namespace

int main() {
  const auto suite_start = std::chrono::steady_clock::now();
  struct Criterion {
    const char* description;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {"reference vote scores 0.60 / 0.25 through match + vote", criterion_1},
      {"refreshed ledger matches the reference post-fusion values", criterion_2},
      {"merged metadata keeps reason 'accident' and resolution 18:00", criterion_3},
      {"vote equals brute-force oracle; scaling invariant; zero weights neutral", criterion_4},
      {"window clustering equals the O(n^2) transitive-closure oracle", criterion_5},
      {"classifier equals hand-computed posteriors; training byte-stable", criterion_6},
      {"ledger stays in [floor, cap]; only participants move, by one delta", criterion_7},
      {"lambda contracts: recompute purity, replay stability, layer parity", criterion_8},
      {"query precedence stream -> batch -> predicted with Laplace values", criterion_9},
      {"1000-record replay: < 100 ms/record, zero file I/O on the stream path", criterion_10},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check result;
    try {
      result = criteria[i].run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2zu. %s%s%s\n", result.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].description, result.ok ? "" : " -- ",
                result.ok ? "" : result.detail.c_str());
    if (!result.ok) ++failures;
  }

  const double total_s = ms_since(suite_start) / 1000.0;
  std::printf("acceptance suite finished in %.2f s (%d/%zu criteria passed)\n", total_s,
              static_cast<int>(criteria.size()) - failures, criteria.size());
  if (total_s >= 60.0) {
    std::printf("FAIL suite exceeded the 60 s budget\n");
    ++failures;
  }
  return failures == 0 ? 0 : 1;
}
