// Microbenchmarks for the hot paths: the weighted vote, window matching,
// text classification and the full stream ingest path.

#include <benchmark/benchmark.h>

#include <random>

#include "ma4bdi/batch.hpp"
#include "ma4bdi/extraction.hpp"
#include "ma4bdi/fusion.hpp"
#include "ma4bdi/speed.hpp"

using namespace ma4bdi;

namespace {

const Date kDay{2017, 7, 11};

ReliabilityLedger bench_ledger(int sources) {
  ReliabilityLedger ledger(0.0, 1.0, 0.05);
  for (int s = 0; s < sources; ++s) {
    ledger.set("S" + std::to_string(s), Condition::unknown,
               0.05 + 0.90 * static_cast<double>(s) / static_cast<double>(sources));
  }
  return ledger;
}

ExtractedRecord bench_record(int source, Knowledge k, const std::string& road, int minute) {
  ExtractedRecord r;
  r.knowledge = k;
  r.source = SourceDescriptor{"S" + std::to_string(source), SourceKind::standard_social, ""};
  r.metadata.road_id = road;
  r.metadata.event_date = kDay;
  r.metadata.event_time = TimeOfDay{minute / 60, minute % 60, 0};
  r.observed_at = make_utc(kDay, *r.metadata.event_time);
  return r;
}

std::vector<TextExample> bench_corpus() {
  return {
      {"huge traffic jam this morning", TextClass::congested},
      {"accident blocking all lanes road closed", TextClass::congested},
      {"heavy congestion cars at standstill", TextClass::congested},
      {"traffic flowing normally no delays", TextClass::not_congested},
      {"road clear smooth driving", TextClass::not_congested},
      {"lovely weather today in the city", TextClass::irrelevant},
      {"new cafe opened downtown great coffee", TextClass::irrelevant},
  };
}

RoadDb bench_roads() {
  std::vector<Road> roads;
  for (int i = 0; i < 200; ++i) {
    roads.push_back(Road{std::to_string(100 + i), "Road" + std::to_string(i),
                         33.5 + 0.001 * i, -7.6 + 0.001 * i, 40});
  }
  roads.push_back(Road{"500", "Alpha", 33.5731, -7.5898, 40});
  return RoadDb(std::move(roads));
}

void BM_weighted_vote(benchmark::State& state) {
  const ReliabilityLedger ledger = bench_ledger(8);
  EventCluster cluster;
  cluster.key = EventKey{"100", kDay, TimeOfDay{8, 0, 0}};
  for (int i = 0; i < state.range(0); ++i) {
    cluster.records.push_back(bench_record(
        i % 8, i % 3 == 0 ? Knowledge::not_congested : Knowledge::congested, "100", 480 + i));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(weighted_vote(cluster, ledger));
  }
}
BENCHMARK(BM_weighted_vote)->Arg(5)->Arg(64);

void BM_match_records(benchmark::State& state) {
  std::mt19937 rng(1);
  std::vector<ExtractedRecord> records;
  for (int i = 0; i < state.range(0); ++i) {
    records.push_back(bench_record(static_cast<int>(rng() % 32),
                                   rng() % 2 == 0 ? Knowledge::congested
                                                  : Knowledge::not_congested,
                                   std::to_string(100 + rng() % 16),
                                   static_cast<int>(rng() % 1440)));
  }
  const FusionConfig cfg{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_records(records, {}, cfg));
  }
}
BENCHMARK(BM_match_records)->Arg(100)->Arg(1000);

void BM_classify_text(benchmark::State& state) {
  const TextModel model = train_text_model(bench_corpus(), 1.0);
  const std::string text = "huge jam after an accident, alpha road completely blocked";
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_text(model, text));
  }
}
BENCHMARK(BM_classify_text);

void BM_stream_ingest(benchmark::State& state) {
  const BatchConfig cfg{EngineConfig{}, FusionConfig{}, 1.0, bench_ledger(8)};
  BatchViews views = initial_views(cfg);
  views.model = train_text_model(bench_corpus(), 1.0);
  SpeedLayer layer(bench_roads(), cfg.engine, 15, 60);
  layer.refresh_models(views);

  std::int64_t ts = make_utc(kDay, {9, 0, 0}).seconds();
  Observation obs{TextPayload{"huge jam on alpha road"},
                  SourceDescriptor{"S1", SourceKind::standard_social, ""}, UtcTime(ts),
                  Condition::unknown};
  for (auto _ : state) {
    obs.timestamp = UtcTime(ts++);
    benchmark::DoNotOptimize(layer.ingest(obs));
  }
}
BENCHMARK(BM_stream_ingest);

}  // namespace

BENCHMARK_MAIN();
