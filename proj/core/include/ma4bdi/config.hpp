#pragma once
// Operator configuration: ledger seeds, tunables and file paths. Values are
// range-checked before any side effect and unknown keys are rejected.

#include <string>
#include <string_view>
#include <vector>

#include "ma4bdi/extraction.hpp"
#include "ma4bdi/fusion.hpp"
#include "ma4bdi/ledger.hpp"
#include "ma4bdi/types.hpp"

namespace ma4bdi {

struct LedgerSeed {
  std::string source_id;
  Condition condition = Condition::unknown;
  double index = 0.0;
};

// Stock seeds: the official account outranks standard and crowd accounts,
// and the CCTV unit carries degraded weather-conditioned entries.
std::vector<LedgerSeed> default_ledger_seeds();

struct Config {
  double ledger_floor = 0.0;
  double ledger_cap = 0.30;
  double ledger_delta = 0.05;
  std::vector<LedgerSeed> ledger_seeds = default_ledger_seeds();

  int match_window_min = 15;
  double speed_threshold_kmh = 20.0;
  double gps_match_radius_m = 100.0;
  int gps_window_min = 5;
  int freshness_horizon_min = 60;
  double penalty_factor = 5.0;
  double smoothing_alpha = 1.0;

  std::string views_dir;
  std::string road_db_path;
  std::string graph_path;
  std::string corpus_path;

  void validate() const;  // bad-config naming the offending key

  ReliabilityLedger make_ledger() const;
  EngineConfig make_engine_config() const;
  FusionConfig make_fusion_config() const;
};

Config parse_config_text(std::string_view text);  // JSON object, strict keys
Config load_config(const std::string& path);

}  // namespace ma4bdi
