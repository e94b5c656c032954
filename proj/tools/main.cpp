// Operator entry point: train text models, stage and run batch iterations,
// replay streaming scenarios in virtual time, and query fused insights.
// Human output goes to stdout, diagnostics to stderr; machine-readable
// lines are prefixed "#>". Exit codes: 0 success, 1 a --check query found
// congestion, 2 operational error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ma4bdi/batch.hpp"
#include "ma4bdi/config.hpp"
#include "ma4bdi/error.hpp"
#include "ma4bdi/query.hpp"
#include "ma4bdi/scenario.hpp"
#include "ma4bdi/speed.hpp"
#include "ma4bdi/textio.hpp"

namespace {

using namespace ma4bdi;

constexpr int kExitOk = 0;
constexpr int kExitCongested = 1;
constexpr int kExitError = 2;

struct CommonOptions {
  std::string config_path;
  std::string scenario_path;
  std::string views_dir;
  std::string roads_path;
  std::string graph_path;
  std::string corpus_path;
};

Config load_effective_config(const CommonOptions& opts) {
  Config cfg = opts.config_path.empty() ? Config{} : load_config(opts.config_path);
  if (!opts.views_dir.empty()) cfg.views_dir = opts.views_dir;
  if (!opts.roads_path.empty()) cfg.road_db_path = opts.roads_path;
  if (!opts.graph_path.empty()) cfg.graph_path = opts.graph_path;
  if (!opts.corpus_path.empty()) cfg.corpus_path = opts.corpus_path;
  cfg.validate();
  return cfg;
}

RoadDb load_roads_or_empty(const Config& cfg) {
  if (cfg.road_db_path.empty()) {
    std::cerr << "note: no road db configured; road lookups will not resolve\n";
    return RoadDb{};
  }
  return load_road_db(cfg.road_db_path);
}

std::string short_scores(const GlobalInsight& insight) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "congested=%.2f not_congested=%.2f",
                insight.score_congested, insight.score_not_congested);
  return buf;
}

std::string joined_sources(const std::vector<std::string>& sources) {
  std::string out;
  for (const std::string& s : sources) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

void print_insight(const GlobalInsight& insight) {
  const EventKey& key = insight.event_key;
  std::cout << key.road_id << " " << to_string(key.event_date) << " "
            << to_string(key.window_start) << " | " << to_string(insight.knowledge)
            << " | " << short_scores(insight) << " | "
            << joined_sources(insight.contributing_sources) << "\n";
  std::cout << "#> insight|" << key.road_id << "|" << to_string(key.event_date) << "|"
            << to_string(key.window_start) << "|" << to_string(insight.knowledge) << "|"
            << textio::fmt_double(insight.score_congested) << "|"
            << textio::fmt_double(insight.score_not_congested) << "|"
            << joined_sources(insight.contributing_sources) << "\n";
}

void print_answer(const InsightAnswer& answer) {
  char reliability[32];
  std::snprintf(reliability, sizeof reliability, "%.2f", answer.reliability);
  std::cout << "road        " << answer.road_id << "\n"
            << "state       " << to_string(answer.state) << "\n"
            << "reliability " << reliability << "\n"
            << "provenance  " << to_string(answer.provenance) << "\n"
            << "as_of       " << to_string(answer.as_of) << "\n";
  std::cout << "#> answer|" << answer.road_id << "|" << to_string(answer.state) << "|"
            << textio::fmt_double(answer.reliability) << "|" << to_string(answer.provenance)
            << "|" << to_string(answer.as_of) << "\n";
}

int cmd_train(const CommonOptions& opts, const std::string& model_out) {
  const Config cfg = load_effective_config(opts);
  const std::string corpus_path = cfg.corpus_path;
  if (corpus_path.empty()) {
    throw Error(ErrorKind::bad_config, "no corpus given (--corpus or config paths.corpus)");
  }
  const auto corpus = load_corpus(corpus_path);
  const TextModel model = train_text_model(corpus, cfg.smoothing_alpha);
  save_text_model(model, model_out);

  std::cout << "trained on " << corpus.size() << " documents, vocabulary "
            << model.vocabulary_size() << " tokens\n";
  for (TextClass c : {TextClass::congested, TextClass::not_congested, TextClass::irrelevant}) {
    std::cout << "  prior " << to_string(c) << " = " << textio::fmt_double(model.prior(c))
              << "\n";
  }
  std::cout << "#> model|" << model_out << "|" << model.vocabulary_size() << "|"
            << textio::fmt_double(model.prior(TextClass::congested)) << "|"
            << textio::fmt_double(model.prior(TextClass::not_congested)) << "|"
            << textio::fmt_double(model.prior(TextClass::irrelevant)) << "\n";
  return kExitOk;
}

int cmd_batch(const CommonOptions& opts) {
  const Config cfg = load_effective_config(opts);
  if (cfg.views_dir.empty()) {
    throw Error(ErrorKind::bad_config, "no views directory given (--views or config)");
  }
  const RoadDb roads = load_roads_or_empty(cfg);

  StagingStore store = load_staging(cfg.views_dir);
  const BatchViews prev = views_present(cfg.views_dir)
                              ? load_views(cfg.views_dir)
                              : initial_views(BatchConfig{cfg.make_engine_config(),
                                                          cfg.make_fusion_config(),
                                                          cfg.smoothing_alpha,
                                                          cfg.make_ledger()});

  std::size_t rejected = 0;
  if (!opts.scenario_path.empty()) {
    for (const Observation& obs : load_scenario(opts.scenario_path)) {
      try {
        stage(store, obs);
      } catch (const Error& e) {
        ++rejected;
        std::cerr << "warning: rejected record from '" << obs.source.source_id
                  << "': " << e.what() << "\n";
      }
    }
  }

  std::vector<TextExample> corpus;
  if (!cfg.corpus_path.empty()) {
    corpus = load_corpus(cfg.corpus_path);
  } else if (!prev.model.trained()) {
    std::cerr << "note: no corpus configured; text observations will be skipped\n";
  }

  BatchIterationStats stats;
  const BatchConfig batch_cfg{cfg.make_engine_config(), cfg.make_fusion_config(),
                              cfg.smoothing_alpha, cfg.make_ledger()};
  const BatchViews views = run_batch_iteration(store, prev, corpus, roads, batch_cfg, &stats);

  persist_staging(store, cfg.views_dir);
  persist_views(views, cfg.views_dir);

  for (const auto& [key, insight] : views.insights) print_insight(insight);
  for (const auto& [key, index] : views.ledger.entries()) {
    std::cout << "#> ledger|" << key.first << "|" << to_string(key.second) << "|"
              << textio::fmt_double(index) << "\n";
  }
  std::cout << "iteration " << views.iteration << ": " << stats.observations
            << " observations, " << stats.records << " records, " << stats.clusters
            << " clusters (" << stats.reused << " unchanged), " << stats.skipped
            << " skipped, " << rejected << " rejected\n";
  return kExitOk;
}

int cmd_stream(const CommonOptions& opts, double speed_factor) {
  const Config cfg = load_effective_config(opts);
  if (cfg.views_dir.empty()) {
    throw Error(ErrorKind::bad_config, "no views directory given (--views or config)");
  }
  if (!views_present(cfg.views_dir)) {
    throw Error(ErrorKind::io_failure,
                "no batch views under '" + cfg.views_dir +
                    "': missing model/ledger files; run `ma4bdi batch` first");
  }
  const BatchViews views = load_views(cfg.views_dir);
  const RoadDb roads = load_roads_or_empty(cfg);

  SpeedLayer layer(roads, cfg.make_engine_config(), cfg.match_window_min,
                   cfg.freshness_horizon_min);
  layer.refresh_models(views);
  StagingStore staged_during_stream;
  layer.attach_staging(&staged_during_stream);

  Broker broker(layer);
  for (const Observation& obs : load_scenario(opts.scenario_path)) {
    broker.enqueue(obs);
  }
  broker.run(speed_factor, [](const Observation& obs, const std::optional<StreamViewEntry>& entry) {
    if (!entry) return;
    char reliability[32];
    std::snprintf(reliability, sizeof reliability, "%.2f", entry->reliability);
    std::cout << to_string(entry->produced_at) << " road " << *entry->metadata.road_id
              << " " << to_string(entry->knowledge) << " r=" << reliability << " from "
              << entry->source.source_id << "\n";
    std::cout << "#> entry|" << *entry->metadata.road_id << "|"
              << to_string(*entry->metadata.event_date) << "|"
              << to_string(*entry->metadata.event_time) << "|"
              << to_string(entry->knowledge) << "|"
              << textio::fmt_double(entry->reliability) << "|" << entry->source.source_id
              << "|" << to_string(entry->produced_at) << "\n";
    (void)obs;
  });

  // post-run persistence: the ingest path itself never touches files
  persist_stream_views(layer.views(), cfg.views_dir);
  StagingStore staging = load_staging(cfg.views_dir);
  for (const auto* partition :
       {&staged_during_stream.text, &staged_during_stream.gps, &staged_during_stream.loop,
        &staged_during_stream.count, &staged_during_stream.weather}) {
    for (const Observation& obs : *partition) stage(staging, obs);
  }
  persist_staging(staging, cfg.views_dir);

  const StreamCounters counters = layer.counters();
  std::cout << "#> counters processed=" << counters.processed
            << " dropped=" << counters.dropped << " irrelevant=" << counters.irrelevant
            << " entries=" << counters.entries << "\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "#> latency max_ms=%.3f mean_ms=%.3f",
                counters.max_latency_ms, counters.mean_latency_ms());
  std::cout << buf << "\n";
  return kExitOk;
}

int cmd_query_segment(const CommonOptions& opts, const std::string& road_id,
                      const std::string& at_text, bool check) {
  const Config cfg = load_effective_config(opts);
  if (cfg.views_dir.empty()) {
    throw Error(ErrorKind::bad_config, "no views directory given (--views or config)");
  }
  const UtcTime at = parse_timestamp(at_text);
  const BatchViews views = load_views(cfg.views_dir);
  const StreamViews streams =
      load_stream_views(cfg.views_dir, cfg.match_window_min, cfg.freshness_horizon_min);
  const RoadDb roads = load_roads_or_empty(cfg);

  const InsightAnswer answer =
      query_segment(road_id, at, streams, views, roads.empty() ? nullptr : &roads);
  print_answer(answer);
  if (check && answer.state == Knowledge::congested) return kExitCongested;
  return kExitOk;
}

int cmd_query_route(const CommonOptions& opts, const std::string& from_node,
                    const std::string& to_node, const std::string& at_text, bool check) {
  const Config cfg = load_effective_config(opts);
  if (cfg.views_dir.empty()) {
    throw Error(ErrorKind::bad_config, "no views directory given (--views or config)");
  }
  if (cfg.graph_path.empty()) {
    throw Error(ErrorKind::bad_config, "no road graph given (config paths.graph)");
  }
  const UtcTime at = parse_timestamp(at_text);
  const BatchViews views = load_views(cfg.views_dir);
  const StreamViews streams =
      load_stream_views(cfg.views_dir, cfg.match_window_min, cfg.freshness_horizon_min);
  const RoadGraph graph = load_road_graph(cfg.graph_path);

  const RouteResult route = query_route(from_node, to_node, at, graph, streams, views,
                                        QueryConfig{cfg.penalty_factor});
  for (const RouteStep& step : route.steps) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s -> %s via road %s (%.0f m, %s, effective %.0f m)",
                  step.edge.from.c_str(), step.edge.to.c_str(), step.edge.road_id.c_str(),
                  step.edge.length_m, to_string(step.state.state),
                  step.effective_length_m);
    std::cout << buf << "\n";
    std::cout << "#> step|" << step.edge.from << "|" << step.edge.to << "|"
              << step.edge.road_id << "|" << textio::fmt_double(step.edge.length_m) << "|"
              << to_string(step.state.state) << "|"
              << textio::fmt_double(step.state.reliability) << "|"
              << to_string(step.state.provenance) << "\n";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "total %.0f m, effective %.0f m", route.total_length_m,
                route.effective_length_m);
  std::cout << buf << "\n";
  std::cout << "#> route|" << textio::fmt_double(route.total_length_m) << "|"
            << textio::fmt_double(route.effective_length_m) << "\n";
  if (check && route.any_congested()) return kExitCongested;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-source traffic event fusion pipeline"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions opts;
  app.add_option("--config", opts.config_path, "config file (JSON)")
      ->envname("MA4BDI_CONFIG");

  std::string model_out;
  CLI::App* train = app.add_subcommand("train", "train the text model from a corpus");
  train->add_option("--corpus", opts.corpus_path, "training corpus (JSONL)");
  train->add_option("--out", model_out, "output model path")->required();

  CLI::App* batch = app.add_subcommand("batch", "stage a scenario and run one batch iteration");
  batch->add_option("--scenario", opts.scenario_path, "scenario file (JSONL envelopes)");
  batch->add_option("--views", opts.views_dir, "views directory");
  batch->add_option("--roads", opts.roads_path, "road db (JSON)");
  batch->add_option("--corpus", opts.corpus_path, "training corpus (JSONL)");

  double speed_factor = 0.0;
  CLI::App* stream = app.add_subcommand("stream", "replay a scenario through the speed layer");
  stream->add_option("--scenario", opts.scenario_path, "scenario file (JSONL envelopes)")
      ->required();
  stream->add_option("--views", opts.views_dir, "views directory with batch-built models");
  stream->add_option("--roads", opts.roads_path, "road db (JSON)");
  stream->add_option("--speed-factor", speed_factor,
                     "virtual-time pacing (0 = as fast as possible)");

  CLI::App* query = app.add_subcommand("query", "query fused insights");
  query->require_subcommand(1);
  query->fallthrough();
  std::string road_id, from_node, to_node, at_text;
  bool check = false;

  CLI::App* segment = query->add_subcommand("segment", "state of one road segment");
  segment->add_option("--road", road_id, "road id")->required();
  segment->add_option("--at", at_text, "query instant (YYYY-MM-DDTHH:MM[:SS])")->required();
  segment->add_option("--views", opts.views_dir, "views directory");
  segment->add_option("--roads", opts.roads_path, "road db (JSON)");
  segment->add_flag("--check", check, "exit 1 when the answer is congested");

  CLI::App* route = query->add_subcommand("route", "route avoiding congestion");
  route->add_option("--from", from_node, "origin node")->required();
  route->add_option("--to", to_node, "destination node")->required();
  route->add_option("--at", at_text, "query instant (YYYY-MM-DDTHH:MM[:SS])")->required();
  route->add_option("--views", opts.views_dir, "views directory");
  route->add_option("--graph", opts.graph_path, "road graph (JSON)");
  route->add_flag("--check", check, "exit 1 when the route still crosses congestion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (train->parsed()) return cmd_train(opts, model_out);
    if (batch->parsed()) return cmd_batch(opts);
    if (stream->parsed()) return cmd_stream(opts, speed_factor);
    if (segment->parsed()) return cmd_query_segment(opts, road_id, at_text, check);
    if (route->parsed()) return cmd_query_route(opts, from_node, to_node, at_text, check);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
