#include "ma4bdi/config.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "ma4bdi/error.hpp"
#include "ma4bdi/textio.hpp"

namespace ma4bdi {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const char* context) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (allowed.count(key) == 0) {
      throw Error(ErrorKind::bad_config,
                  std::string("unknown key '") + key + "' in " + context);
    }
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw Error(ErrorKind::bad_config, std::string("'") + key + "' must be a number");
  }
  return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw Error(ErrorKind::bad_config, std::string("'") + key + "' must be an integer");
  }
  return obj[key].get<int>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) {
    throw Error(ErrorKind::bad_config, std::string("'") + key + "' must be a string");
  }
  return obj[key].get<std::string>();
}

}  // namespace

std::vector<LedgerSeed> default_ledger_seeds() {
  return {
      {"UserA", Condition::unknown, 0.30},
      {"UserB", Condition::unknown, 0.15},
      {"UserC", Condition::unknown, 0.15},
      {"UserD", Condition::unknown, 0.15},
      {"ID1", Condition::rain, 0.10},
      {"ID1", Condition::snow, 0.10},
      {"ID1", Condition::fog, 0.10},
      {"ID1", Condition::clear, 0.15},
  };
}

void Config::validate() const {
  if (!(ledger_floor >= 0.0 && ledger_cap <= 1.0 && ledger_floor <= ledger_cap)) {
    throw Error(ErrorKind::bad_config,
                "ledger floor/cap must satisfy 0 <= floor <= cap <= 1");
  }
  if (!(ledger_delta > 0.0)) {
    throw Error(ErrorKind::bad_config, "ledger delta must be > 0");
  }
  for (const LedgerSeed& seed : ledger_seeds) {
    if (seed.source_id.empty()) {
      throw Error(ErrorKind::bad_config, "ledger seed with empty source_id");
    }
    if (!(seed.index >= ledger_floor && seed.index <= ledger_cap)) {
      throw Error(ErrorKind::bad_config,
                  "ledger seed " + seed.source_id + "/" + to_string(seed.condition) +
                      "=" + textio::fmt_double(seed.index) + " outside [floor, cap]");
    }
  }
  if (match_window_min <= 0) {
    throw Error(ErrorKind::bad_config, "match_window_min must be > 0");
  }
  if (!(speed_threshold_kmh > 0.0)) {
    throw Error(ErrorKind::bad_config, "speed_threshold_kmh must be > 0");
  }
  if (!(gps_match_radius_m > 0.0)) {
    throw Error(ErrorKind::bad_config, "gps_match_radius_m must be > 0");
  }
  if (gps_window_min <= 0) {
    throw Error(ErrorKind::bad_config, "gps_window_min must be > 0");
  }
  if (freshness_horizon_min <= 0) {
    throw Error(ErrorKind::bad_config, "freshness_horizon_min must be > 0");
  }
  if (!(penalty_factor > 0.0)) {
    throw Error(ErrorKind::bad_config, "penalty_factor must be > 0");
  }
  if (!(smoothing_alpha > 0.0)) {
    throw Error(ErrorKind::bad_config, "smoothing_alpha must be > 0");
  }
}

ReliabilityLedger Config::make_ledger() const {
  ReliabilityLedger ledger(ledger_floor, ledger_cap, ledger_delta);
  for (const LedgerSeed& seed : ledger_seeds) {
    ledger.set(seed.source_id, seed.condition, seed.index);
  }
  return ledger;
}

EngineConfig Config::make_engine_config() const {
  return EngineConfig{speed_threshold_kmh, gps_match_radius_m, gps_window_min};
}

FusionConfig Config::make_fusion_config() const {
  return FusionConfig{match_window_min};
}

Config parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::bad_config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::bad_config, "config must be a JSON object");
  }
  reject_unknown_keys(doc,
                      {"ledger", "match_window_min", "speed_threshold_kmh",
                       "gps_match_radius_m", "gps_window_min", "freshness_horizon_min",
                       "penalty_factor", "smoothing_alpha", "paths"},
                      "config");

  Config cfg;
  if (doc.contains("ledger")) {
    const json& ledger = doc["ledger"];
    reject_unknown_keys(ledger, {"floor", "cap", "delta", "seeds"}, "config.ledger");
    cfg.ledger_floor = get_number(ledger, "floor", cfg.ledger_floor);
    cfg.ledger_cap = get_number(ledger, "cap", cfg.ledger_cap);
    cfg.ledger_delta = get_number(ledger, "delta", cfg.ledger_delta);
    if (ledger.contains("seeds")) {
      if (!ledger["seeds"].is_array()) {
        throw Error(ErrorKind::bad_config, "'ledger.seeds' must be an array");
      }
      cfg.ledger_seeds.clear();
      for (const json& row : ledger["seeds"]) {
        reject_unknown_keys(row, {"source_id", "condition", "index"}, "ledger seed");
        LedgerSeed seed;
        seed.source_id = get_string(row, "source_id", "");
        seed.condition = parse_condition(get_string(row, "condition", "unknown"));
        seed.index = get_number(row, "index", 0.0);
        cfg.ledger_seeds.push_back(std::move(seed));
      }
    }
  }
  cfg.match_window_min = get_int(doc, "match_window_min", cfg.match_window_min);
  cfg.speed_threshold_kmh = get_number(doc, "speed_threshold_kmh", cfg.speed_threshold_kmh);
  cfg.gps_match_radius_m = get_number(doc, "gps_match_radius_m", cfg.gps_match_radius_m);
  cfg.gps_window_min = get_int(doc, "gps_window_min", cfg.gps_window_min);
  cfg.freshness_horizon_min = get_int(doc, "freshness_horizon_min", cfg.freshness_horizon_min);
  cfg.penalty_factor = get_number(doc, "penalty_factor", cfg.penalty_factor);
  cfg.smoothing_alpha = get_number(doc, "smoothing_alpha", cfg.smoothing_alpha);
  if (doc.contains("paths")) {
    const json& paths = doc["paths"];
    reject_unknown_keys(paths, {"views_dir", "road_db", "graph", "corpus"}, "config.paths");
    cfg.views_dir = get_string(paths, "views_dir", "");
    cfg.road_db_path = get_string(paths, "road_db", "");
    cfg.graph_path = get_string(paths, "graph", "");
    cfg.corpus_path = get_string(paths, "corpus", "");
  }
  cfg.validate();
  return cfg;
}

Config load_config(const std::string& path) {
  return parse_config_text(textio::read_file(path));
}

}  // namespace ma4bdi
