#pragma once
// Line-delimited observation envelopes:
//   {"ts": "...", "source_id": "...", "source_kind": "...",
//    "condition": "...", "display_name": "...", "payload": {"kind": ...}}
// plus the training-corpus line format {"text": ..., "class": ...}.

#include <string>
#include <string_view>
#include <vector>

#include "ma4bdi/text_model.hpp"
#include "ma4bdi/types.hpp"

namespace ma4bdi {

Observation parse_envelope(const std::string& json_line);
std::string format_envelope(const Observation& obs);  // canonical round-trip form

// One envelope per non-empty line, in file order.
std::vector<Observation> parse_scenario_text(std::string_view text);
std::vector<Observation> load_scenario(const std::string& path);

std::vector<TextExample> parse_corpus_text(std::string_view text);
std::vector<TextExample> load_corpus(const std::string& path);

}  // namespace ma4bdi
