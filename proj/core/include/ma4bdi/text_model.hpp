#pragma once
// Bag-of-words multinomial naive Bayes text engine. Trained offline by the
// batch layer and reused read-only by the speed layer; training is fully
// deterministic and the persisted form is byte-stable for a given corpus.

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ma4bdi {

// Three classes so off-topic text is dropped instead of forced into a
// traffic label.
enum class TextClass { congested, not_congested, irrelevant };
inline constexpr int kTextClassCount = 3;

const char* to_string(TextClass c);
TextClass parse_text_class(std::string_view s);  // unknown-class-label on junk

// Lowercase, split on any non-alphanumeric run, drop empty tokens.
std::vector<std::string> tokenize(std::string_view text);

struct TextExample {
  std::string text;
  TextClass label = TextClass::irrelevant;
};

class TextModel {
 public:
  using LogRow = std::array<double, kTextClassCount>;

  TextModel() = default;

  bool trained() const { return trained_; }
  double smoothing_alpha() const { return alpha_; }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  const std::map<std::string, int>& vocabulary() const { return vocabulary_; }

  double log_prior(TextClass c) const { return log_prior_[static_cast<int>(c)]; }
  double prior(TextClass c) const;
  double log_unseen(TextClass c) const { return log_unseen_[static_cast<int>(c)]; }
  // Per-class log likelihood of a token; unseen tokens get the smoothed
  // out-of-vocabulary mass.
  double log_likelihood(TextClass c, std::string_view token) const;

  bool operator==(const TextModel&) const = default;

 private:
  friend TextModel train_text_model(const std::vector<TextExample>&, double);
  friend TextModel parse_text_model(std::string_view content);

  bool trained_ = false;
  double alpha_ = 1.0;
  std::map<std::string, int> vocabulary_;   // token -> id, ids in sorted-token order
  LogRow log_prior_{};
  LogRow log_unseen_{};
  std::vector<LogRow> token_log_likelihood_;  // indexed by vocabulary id
};

TextModel train_text_model(const std::vector<TextExample>& corpus, double alpha = 1.0);

struct TextPrediction {
  TextClass label = TextClass::irrelevant;
  double posterior = 0.0;  // normalized over the three classes
};

// Total over arbitrary strings; an empty token list falls back to the prior
// argmax. Ties break toward the first class in declaration order.
TextPrediction classify_text(const TextModel& model, std::string_view text);

std::string serialize_text_model(const TextModel& model);
TextModel parse_text_model(std::string_view content);   // corrupt-views on damage
void save_text_model(const TextModel& model, const std::string& path);
TextModel load_text_model(const std::string& path);

}  // namespace ma4bdi
