#include "ma4bdi/batch.hpp"

#include <algorithm>
#include <iostream>
#include <set>

#include "ma4bdi/error.hpp"
#include "ma4bdi/scenario.hpp"
#include "ma4bdi/textio.hpp"
#include "ma4bdi/validate.hpp"

namespace ma4bdi {

namespace {

constexpr const char* kLedgerMagic = "ma4bdi.ledger v1";
constexpr const char* kInsightsMagic = "ma4bdi.insights v1";
constexpr const char* kHistoryMagic = "ma4bdi.history v1";
constexpr const char* kIterationMagic = "ma4bdi.iteration v1";

std::string path_join(const std::string& dir, const char* name) {
  return dir + "/" + name;
}

std::string metadata_to_line(const Metadata& md) {
  std::string line = "meta";
  for (const std::string& field : metadata_to_fields(md)) {
    line += "\t";
    line += field;
  }
  return line;
}

std::string serialize_ledger(const ReliabilityLedger& ledger) {
  std::string body = std::string(kLedgerMagic) + "\n";
  body += "floor " + textio::fmt_double(ledger.floor()) + "\n";
  body += "cap " + textio::fmt_double(ledger.cap()) + "\n";
  body += "delta " + textio::fmt_double(ledger.delta()) + "\n";
  body += "count " + std::to_string(ledger.size()) + "\n";
  for (const auto& [key, index] : ledger.entries()) {
    body += "entry\t" + textio::escape_field(key.first) + "\t" + to_string(key.second) +
            "\t" + textio::fmt_double(index) + "\n";
  }
  return textio::seal_document(std::move(body));
}

ReliabilityLedger parse_ledger(std::string_view content) {
  auto lines = textio::open_document(content, kLedgerMagic);
  if (lines.size() < 4) throw Error(ErrorKind::corrupt_views, "ledger file truncated");
  auto value_after = [](const std::string& line, const char* prefix) {
    std::string_view p(prefix);
    if (line.rfind(prefix, 0) != 0) {
      throw Error(ErrorKind::corrupt_views,
                  "ledger file: expected '" + std::string(prefix) + "'");
    }
    return line.substr(p.size());
  };
  const double floor = textio::parse_double(value_after(lines[0], "floor "));
  const double cap = textio::parse_double(value_after(lines[1], "cap "));
  const double delta = textio::parse_double(value_after(lines[2], "delta "));
  const std::size_t count =
      static_cast<std::size_t>(textio::parse_int(value_after(lines[3], "count ")));
  if (lines.size() != 4 + count) {
    throw Error(ErrorKind::corrupt_views, "ledger file: entry count mismatch");
  }
  ReliabilityLedger ledger(floor, cap, delta);
  for (std::size_t i = 0; i < count; ++i) {
    auto fields = textio::split_tabs(lines[4 + i]);
    if (fields.size() != 4 || fields[0] != "entry") {
      throw Error(ErrorKind::corrupt_views, "ledger file: malformed entry row");
    }
    ledger.set(textio::unescape_field(fields[1]), parse_condition(fields[2]),
               textio::parse_double(fields[3]));
  }
  return ledger;
}

std::string serialize_insights(const std::map<EventKey, GlobalInsight>& insights) {
  std::string body = std::string(kInsightsMagic) + "\n";
  body += "count " + std::to_string(insights.size()) + "\n";
  for (const auto& [key, insight] : insights) {
    body += "insight\t" + textio::escape_field(key.road_id) + "\t" +
            to_string(key.event_date) + "\t" + to_string(key.window_start) + "\t" +
            to_string(insight.knowledge) + "\t" +
            textio::fmt_double(insight.score_congested) + "\t" +
            textio::fmt_double(insight.score_not_congested) + "\n";
    body += metadata_to_line(insight.metadata) + "\n";
    body += "sources";
    for (const std::string& source : insight.contributing_sources) {
      body += "\t" + textio::escape_field(source);
    }
    body += "\n";
  }
  return textio::seal_document(std::move(body));
}

std::map<EventKey, GlobalInsight> parse_insights(std::string_view content) {
  auto lines = textio::open_document(content, kInsightsMagic);
  if (lines.empty() || lines[0].rfind("count ", 0) != 0) {
    throw Error(ErrorKind::corrupt_views, "insights file: missing count");
  }
  const std::size_t count =
      static_cast<std::size_t>(textio::parse_int(lines[0].substr(6)));
  if (lines.size() != 1 + count * 3) {
    throw Error(ErrorKind::corrupt_views, "insights file: row count mismatch");
  }
  std::map<EventKey, GlobalInsight> insights;
  for (std::size_t i = 0; i < count; ++i) {
    const auto head = textio::split_tabs(lines[1 + i * 3]);
    const auto meta = textio::split_tabs(lines[2 + i * 3]);
    const auto sources = textio::split_tabs(lines[3 + i * 3]);
    if (head.size() != 7 || head[0] != "insight" || meta.empty() || meta[0] != "meta" ||
        sources.empty() || sources[0] != "sources") {
      throw Error(ErrorKind::corrupt_views, "insights file: malformed insight block");
    }
    GlobalInsight insight;
    insight.event_key = EventKey{textio::unescape_field(head[1]), parse_date(head[2]),
                                 parse_time(head[3])};
    insight.knowledge = parse_knowledge(head[4]);
    insight.score_congested = textio::parse_double(head[5]);
    insight.score_not_congested = textio::parse_double(head[6]);
    insight.metadata = metadata_from_fields(meta, 1);
    for (std::size_t s = 1; s < sources.size(); ++s) {
      insight.contributing_sources.push_back(textio::unescape_field(sources[s]));
    }
    insights.emplace(insight.event_key, std::move(insight));
  }
  return insights;
}

std::string serialize_history(const std::vector<HistoryEntry>& history) {
  std::string body = std::string(kHistoryMagic) + "\n";
  body += "count " + std::to_string(history.size()) + "\n";
  for (const HistoryEntry& entry : history) {
    body += "event\t" + textio::escape_field(entry.key.road_id) + "\t" +
            to_string(entry.key.event_date) + "\t" + to_string(entry.key.window_start) +
            "\t" + to_string(entry.knowledge) + "\t" + to_string(entry.timestamp) + "\n";
  }
  return textio::seal_document(std::move(body));
}

std::vector<HistoryEntry> parse_history(std::string_view content) {
  auto lines = textio::open_document(content, kHistoryMagic);
  if (lines.empty() || lines[0].rfind("count ", 0) != 0) {
    throw Error(ErrorKind::corrupt_views, "history file: missing count");
  }
  const std::size_t count =
      static_cast<std::size_t>(textio::parse_int(lines[0].substr(6)));
  if (lines.size() != 1 + count) {
    throw Error(ErrorKind::corrupt_views, "history file: row count mismatch");
  }
  std::vector<HistoryEntry> history;
  history.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto fields = textio::split_tabs(lines[1 + i]);
    if (fields.size() != 6 || fields[0] != "event") {
      throw Error(ErrorKind::corrupt_views, "history file: malformed event row");
    }
    history.push_back(HistoryEntry{
        EventKey{textio::unescape_field(fields[1]), parse_date(fields[2]),
                 parse_time(fields[3])},
        parse_knowledge(fields[4]), parse_timestamp(fields[5])});
  }
  return history;
}

}  // namespace

void stage(StagingStore& store, const Observation& obs) {
  const Observation validated = validate_observation(obs);
  switch (payload_kind(validated.payload)) {
    case PayloadKind::text:    store.text.push_back(validated); break;
    case PayloadKind::gps:     store.gps.push_back(validated); break;
    case PayloadKind::loop:    store.loop.push_back(validated); break;
    case PayloadKind::count:   store.count.push_back(validated); break;
    case PayloadKind::weather: store.weather.push_back(validated); break;
  }
}

BatchViews initial_views(const BatchConfig& cfg) {
  BatchViews views;
  views.ledger = cfg.initial_ledger;
  return views;
}

ConditionTimeline::ConditionTimeline(std::vector<std::pair<UtcTime, Condition>> points)
    : points_(std::move(points)) {
  std::stable_sort(points_.begin(), points_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
}

Condition ConditionTimeline::at(UtcTime t) const {
  Condition current = Condition::unknown;
  for (const auto& [when, condition] : points_) {
    if (when > t) break;
    current = condition;
  }
  return current;
}

ConditionTimeline build_condition_timeline(const std::vector<Observation>& weather) {
  std::vector<std::pair<UtcTime, Condition>> points;
  points.reserve(weather.size());
  for (const Observation& obs : weather) {
    if (const auto* payload = std::get_if<WeatherPayload>(&obs.payload)) {
      points.emplace_back(obs.timestamp, payload->condition);
    }
  }
  return ConditionTimeline(std::move(points));
}

Observation resolve_condition(Observation obs, const ConditionTimeline& timeline) {
  if (obs.condition == Condition::unknown) {
    obs.condition = timeline.at(obs.timestamp);
  }
  return obs;
}

BatchViews run_batch_iteration(const StagingStore& store, const BatchViews& prev,
                               const std::vector<TextExample>& corpus, const RoadDb& roads,
                               const BatchConfig& cfg, BatchIterationStats* stats) {
  cfg.engine.validate();
  cfg.fusion.validate();

  BatchIterationStats local;
  BatchIterationStats& st = stats != nullptr ? *stats : local;
  st = BatchIterationStats{};

  BatchViews views;
  views.iteration = prev.iteration + 1;
  views.model = corpus.empty() ? prev.model : train_text_model(corpus, cfg.smoothing_alpha);

  const ConditionTimeline timeline = build_condition_timeline(store.weather);

  std::vector<ExtractedRecord> records;
  auto extract_partition = [&](const std::vector<Observation>& partition) {
    for (const Observation& staged : partition) {
      st.observations += 1;
      try {
        const Observation obs = resolve_condition(staged, timeline);
        if (auto record = process(obs, views.model, roads, cfg.engine)) {
          records.push_back(std::move(*record));
        }
      } catch (const Error& e) {
        st.skipped += 1;
        std::cerr << "warning: skipped " << to_string(payload_kind(staged.payload))
                  << " observation from '" << staged.source.source_id << "': " << e.what()
                  << "\n";
      }
    }
  };
  extract_partition(store.text);
  extract_partition(store.gps);
  extract_partition(store.loop);
  extract_partition(store.count);
  st.observations += store.weather.size();
  st.records = records.size();

  std::vector<GlobalInsight> existing;
  existing.reserve(prev.insights.size());
  for (const auto& [key, insight] : prev.insights) existing.push_back(insight);

  std::vector<EventCluster> clusters = match_records(records, existing, cfg.fusion);
  st.clusters = clusters.size();

  // Votes already applied in earlier iterations: (event key, source) pairs
  // recorded by the stored insights.
  std::map<EventKey, std::set<std::string>> settled;
  for (const auto& [key, insight] : prev.insights) {
    settled.emplace(key, std::set<std::string>(insight.contributing_sources.begin(),
                                               insight.contributing_sources.end()));
  }

  // A cluster that matched exactly one stored event and brings no source the
  // event has not already counted is unchanged: carry the stored insight
  // verbatim so replaying old data moves neither insights nor ledger. A
  // cluster that absorbed several stored events (new data bridged them)
  // still skips every source those events already judged.
  std::vector<EventCluster> changed;
  std::set<EventKey> absorbed;
  std::map<EventKey, std::set<std::string>> skip_for_fuse;
  for (EventCluster& cluster : clusters) {
    std::set<std::string> already_judged;
    for (const EventKey& key : cluster.absorbed_keys) {
      absorbed.insert(key);
      if (auto it = settled.find(key); it != settled.end()) {
        already_judged.insert(it->second.begin(), it->second.end());
      }
    }
    bool reusable =
        cluster.absorbed_keys.size() == 1 && cluster.absorbed_keys.front() == cluster.key &&
        settled.count(cluster.key) > 0;
    if (reusable) {
      for (const ExtractedRecord& r : cluster.records) {
        if (already_judged.count(r.source.source_id) == 0) {
          reusable = false;
          break;
        }
      }
    }
    if (reusable) {
      views.insights.emplace(cluster.key, prev.insights.at(cluster.key));
      st.reused += 1;
    } else {
      skip_for_fuse.emplace(cluster.key, std::move(already_judged));
      changed.push_back(std::move(cluster));
    }
  }

  FuseOutput fused = fuse(std::move(changed), prev.ledger, &skip_for_fuse);
  views.ledger = std::move(fused.ledger);
  for (GlobalInsight& insight : fused.insights) {
    // a re-fused event keeps every source it ever counted
    if (auto it = skip_for_fuse.find(insight.event_key); it != skip_for_fuse.end()) {
      std::set<std::string> merged(insight.contributing_sources.begin(),
                                   insight.contributing_sources.end());
      merged.insert(it->second.begin(), it->second.end());
      insight.contributing_sources.assign(merged.begin(), merged.end());
    }
    views.insights[insight.event_key] = std::move(insight);
  }

  // carry stored insights whose records were not re-presented this round
  for (const auto& [key, insight] : prev.insights) {
    if (absorbed.count(key) == 0 && views.insights.count(key) == 0) {
      views.insights.emplace(key, insight);
    }
  }

  views.history.reserve(views.insights.size());
  for (const auto& [key, insight] : views.insights) {
    views.history.push_back(HistoryEntry{key, insight.knowledge,
                                         make_utc(key.event_date, key.window_start)});
  }
  return views;
}

void persist_views(const BatchViews& views, const std::string& dir) {
  textio::ensure_directory(dir);
  textio::write_file(path_join(dir, "ledger"), serialize_ledger(views.ledger));
  textio::write_file(path_join(dir, "insights"), serialize_insights(views.insights));
  textio::write_file(path_join(dir, "history"), serialize_history(views.history));
  textio::write_file(path_join(dir, "model"), serialize_text_model(views.model));
  std::string iteration = std::string(kIterationMagic) + "\niteration " +
                          std::to_string(views.iteration) + "\n";
  textio::write_file(path_join(dir, "iteration"), textio::seal_document(std::move(iteration)));
}

BatchViews load_views(const std::string& dir) {
  BatchViews views;
  views.ledger = parse_ledger(textio::read_file(path_join(dir, "ledger")));
  views.insights = parse_insights(textio::read_file(path_join(dir, "insights")));
  views.history = parse_history(textio::read_file(path_join(dir, "history")));
  views.model = parse_text_model(textio::read_file(path_join(dir, "model")));
  auto lines = textio::open_document(textio::read_file(path_join(dir, "iteration")),
                                     kIterationMagic);
  if (lines.size() != 1 || lines[0].rfind("iteration ", 0) != 0) {
    throw Error(ErrorKind::corrupt_views, "iteration file malformed");
  }
  views.iteration = textio::parse_int(lines[0].substr(10));
  return views;
}

bool views_present(const std::string& dir) {
  return textio::file_exists(path_join(dir, "model")) &&
         textio::file_exists(path_join(dir, "ledger"));
}

void persist_staging(const StagingStore& store, const std::string& dir) {
  textio::ensure_directory(dir);
  std::string body;
  for (const auto* partition : {&store.text, &store.gps, &store.loop, &store.count,
                                &store.weather}) {
    for (const Observation& obs : *partition) {
      body += format_envelope(obs);
      body += "\n";
    }
  }
  textio::write_file(path_join(dir, "staging"), body);
}

StagingStore load_staging(const std::string& dir) {
  StagingStore store;
  const std::string path = path_join(dir, "staging");
  if (!textio::file_exists(path)) return store;
  for (const Observation& obs : parse_scenario_text(textio::read_file(path))) {
    stage(store, obs);
  }
  return store;
}

}  // namespace ma4bdi
