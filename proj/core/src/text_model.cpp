#include "ma4bdi/text_model.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "ma4bdi/error.hpp"
#include "ma4bdi/textio.hpp"

namespace ma4bdi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr const char* kModelMagic = "ma4bdi.model v1";

int class_index(TextClass c) { return static_cast<int>(c); }

TextClass class_at(int i) { return static_cast<TextClass>(i); }

}  // namespace

const char* to_string(TextClass c) {
  switch (c) {
    case TextClass::congested:     return "congested";
    case TextClass::not_congested: return "not_congested";
    case TextClass::irrelevant:    return "irrelevant";
  }
  return "?";
}

TextClass parse_text_class(std::string_view s) {
  if (s == "congested")     return TextClass::congested;
  if (s == "not_congested") return TextClass::not_congested;
  if (s == "irrelevant")    return TextClass::irrelevant;
  throw Error(ErrorKind::unknown_class_label,
              "class '" + std::string(s) + "' is not one of congested/not_congested/irrelevant");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

double TextModel::prior(TextClass c) const {
  const double lp = log_prior_[class_index(c)];
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

double TextModel::log_likelihood(TextClass c, std::string_view token) const {
  auto it = vocabulary_.find(std::string(token));
  if (it == vocabulary_.end()) return log_unseen_[class_index(c)];
  return token_log_likelihood_[static_cast<std::size_t>(it->second)][class_index(c)];
}

TextModel train_text_model(const std::vector<TextExample>& corpus, double alpha) {
  if (corpus.empty()) {
    throw Error(ErrorKind::empty_corpus, "training corpus has no documents");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::bad_config, "smoothing alpha must be finite and > 0");
  }

  std::array<std::int64_t, kTextClassCount> doc_counts{};
  std::array<std::int64_t, kTextClassCount> token_totals{};
  std::map<std::string, std::array<std::int64_t, kTextClassCount>> token_counts;
  for (const TextExample& example : corpus) {
    doc_counts[class_index(example.label)] += 1;
    for (std::string& token : tokenize(example.text)) {
      token_counts[token][class_index(example.label)] += 1;
      token_totals[class_index(example.label)] += 1;
    }
  }

  TextModel model;
  model.trained_ = true;
  model.alpha_ = alpha;

  const double total_docs = static_cast<double>(corpus.size());
  for (int c = 0; c < kTextClassCount; ++c) {
    model.log_prior_[c] =
        doc_counts[c] > 0 ? std::log(static_cast<double>(doc_counts[c]) / total_docs)
                          : kNegInf;
  }

  // The +1 token slot reserves smoothed mass for out-of-vocabulary tokens so
  // the per-class distribution over vocab + unseen sums to one.
  const double vocab_slots = static_cast<double>(token_counts.size()) + 1.0;
  std::array<double, kTextClassCount> denom{};
  for (int c = 0; c < kTextClassCount; ++c) {
    denom[c] = static_cast<double>(token_totals[c]) + alpha * vocab_slots;
    model.log_unseen_[c] = std::log(alpha / denom[c]);
  }

  model.token_log_likelihood_.reserve(token_counts.size());
  int next_id = 0;
  for (const auto& [token, counts] : token_counts) {
    model.vocabulary_.emplace(token, next_id++);
    TextModel::LogRow row{};
    for (int c = 0; c < kTextClassCount; ++c) {
      row[c] = std::log((static_cast<double>(counts[c]) + alpha) / denom[c]);
    }
    model.token_log_likelihood_.push_back(row);
  }
  return model;
}

TextPrediction classify_text(const TextModel& model, std::string_view text) {
  if (!model.trained()) {
    throw Error(ErrorKind::bad_config, "text model has not been trained");
  }
  std::array<double, kTextClassCount> score{};
  for (int c = 0; c < kTextClassCount; ++c) score[c] = model.log_prior(class_at(c));
  for (const std::string& token : tokenize(text)) {
    for (int c = 0; c < kTextClassCount; ++c) {
      if (score[c] != kNegInf) score[c] += model.log_likelihood(class_at(c), token);
    }
  }

  int best = 0;
  for (int c = 1; c < kTextClassCount; ++c) {
    if (score[c] > score[best]) best = c;
  }

  // Normalize via log-sum-exp; classes absent from the corpus contribute 0.
  double sum = 0.0;
  for (int c = 0; c < kTextClassCount; ++c) {
    if (score[c] != kNegInf) sum += std::exp(score[c] - score[best]);
  }
  return TextPrediction{class_at(best), 1.0 / sum};
}

std::string serialize_text_model(const TextModel& model) {
  std::string body = std::string(kModelMagic) + "\n";
  body += "alpha " + textio::fmt_double(model.smoothing_alpha()) + "\n";
  body += "prior";
  for (int c = 0; c < kTextClassCount; ++c) {
    body += " " + textio::fmt_double(model.log_prior(class_at(c)));
  }
  body += "\nunseen";
  for (int c = 0; c < kTextClassCount; ++c) {
    body += " " + textio::fmt_double(model.log_unseen(class_at(c)));
  }
  body += "\nvocab " + std::to_string(model.vocabulary_size()) + "\n";
  for (const auto& [token, id] : model.vocabulary()) {
    (void)id;
    body += textio::escape_field(token);
    for (int c = 0; c < kTextClassCount; ++c) {
      body += "\t" + textio::fmt_double(model.log_likelihood(class_at(c), token));
    }
    body += "\n";
  }
  return textio::seal_document(std::move(body));
}

TextModel parse_text_model(std::string_view content) {
  auto lines = textio::open_document(content, kModelMagic);
  if (lines.size() < 4) {
    throw Error(ErrorKind::corrupt_views, "model file truncated");
  }
  auto expect_prefix = [](const std::string& line, std::string_view prefix) {
    if (line.rfind(prefix, 0) != 0) {
      throw Error(ErrorKind::corrupt_views,
                  "model file: expected '" + std::string(prefix) + "' line");
    }
    return line.substr(prefix.size());
  };
  auto split_ws = [](std::string_view s) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && s[i] == ' ') ++i;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ') ++j;
      if (j > i) parts.emplace_back(s.substr(i, j - i));
      i = j;
    }
    return parts;
  };
  auto parse_logval = [](const std::string& s) {
    if (s == "-inf") return kNegInf;
    return textio::parse_double(s);
  };

  TextModel model;
  model.trained_ = true;
  model.alpha_ = textio::parse_double(expect_prefix(lines[0], "alpha "));

  auto priors = split_ws(expect_prefix(lines[1], "prior "));
  auto unseen = split_ws(expect_prefix(lines[2], "unseen "));
  if (priors.size() != kTextClassCount || unseen.size() != kTextClassCount) {
    throw Error(ErrorKind::corrupt_views, "model file: wrong class count");
  }
  for (int c = 0; c < kTextClassCount; ++c) {
    model.log_prior_[c] = parse_logval(priors[c]);
    model.log_unseen_[c] = parse_logval(unseen[c]);
  }

  const std::size_t vocab_size =
      static_cast<std::size_t>(textio::parse_int(expect_prefix(lines[3], "vocab ")));
  if (lines.size() != 4 + vocab_size) {
    throw Error(ErrorKind::corrupt_views, "model file: vocabulary count mismatch");
  }
  // Rows are written in sorted-token order and ids follow row order, so the
  // file must keep tokens strictly increasing for ids to stay consistent.
  model.token_log_likelihood_.reserve(vocab_size);
  std::string prev_token;
  for (std::size_t i = 0; i < vocab_size; ++i) {
    auto fields = textio::split_tabs(lines[4 + i]);
    if (fields.size() != 1 + kTextClassCount) {
      throw Error(ErrorKind::corrupt_views, "model file: malformed vocabulary row");
    }
    std::string token = textio::unescape_field(fields[0]);
    if (i > 0 && !(prev_token < token)) {
      throw Error(ErrorKind::corrupt_views, "model file: vocabulary rows out of order");
    }
    TextModel::LogRow row{};
    for (int c = 0; c < kTextClassCount; ++c) row[c] = parse_logval(fields[1 + c]);
    model.vocabulary_.emplace(token, static_cast<int>(i));
    model.token_log_likelihood_.push_back(row);
    prev_token = std::move(token);
  }
  return model;
}

void save_text_model(const TextModel& model, const std::string& path) {
  textio::write_file(path, serialize_text_model(model));
}

TextModel load_text_model(const std::string& path) {
  return parse_text_model(textio::read_file(path));
}

}  // namespace ma4bdi
