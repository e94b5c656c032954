#include <doctest.h>

#include <cmath>

#include "ma4bdi/error.hpp"
#include "ma4bdi/text_model.hpp"
#include "ma4bdi/textio.hpp"
#include "testutil.hpp"

using namespace ma4bdi;
using namespace ma4bdi::testutil;

TEST_CASE("tokenize lowercases and splits on non-alphanumeric runs") {
  CHECK(tokenize("Accident, Alpha   road--blocked!") ==
        std::vector<std::string>{"accident", "alpha", "road", "blocked"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("...!!!") == std::vector<std::string>{});
  CHECK(tokenize("at 18:00") == std::vector<std::string>{"at", "18", "00"});
}

TEST_CASE("two-document corpus trains to the hand-computed priors") {
  const std::vector<TextExample> corpus = {
      {"huge jam on alpha", TextClass::congested},
      {"nice weather today", TextClass::irrelevant},
  };
  const TextModel model = train_text_model(corpus, 1.0);
  CHECK(model.prior(TextClass::congested) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(model.prior(TextClass::irrelevant) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(model.prior(TextClass::not_congested) == doctest::Approx(0.0));
  CHECK(model.vocabulary_size() == 7);

  // hand-computed with vocabulary 7 and alpha 1:
  // congested holds 4 tokens -> P(jam | congested) = (1+1)/(4+8) = 2/12,
  // irrelevant holds 3 tokens -> P(jam | irrelevant) = (0+1)/(3+8) = 1/11
  CHECK(std::exp(model.log_likelihood(TextClass::congested, "jam")) ==
        doctest::Approx(2.0 / 12.0).epsilon(1e-12));
  CHECK(std::exp(model.log_likelihood(TextClass::irrelevant, "jam")) ==
        doctest::Approx(1.0 / 11.0).epsilon(1e-12));

  const TextPrediction p = classify_text(model, "jam on alpha");
  CHECK(p.label == TextClass::congested);
  const auto oracle = BayesOracle(corpus, 1.0).classify("jam on alpha");
  CHECK(oracle.first == p.label);
  CHECK(p.posterior == doctest::Approx(oracle.second).epsilon(1e-12));
}

TEST_CASE("per-class token distribution plus unseen mass sums to one") {
  const TextModel model = train_text_model(demo_corpus(), 1.0);
  for (TextClass c : {TextClass::congested, TextClass::not_congested, TextClass::irrelevant}) {
    double sum = std::exp(model.log_unseen(c));
    for (const auto& [token, id] : model.vocabulary()) {
      (void)id;
      sum += std::exp(model.log_likelihood(c, token));
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("single-document corpus gives its class probability one") {
  const TextModel model =
      train_text_model({{"jam everywhere", TextClass::congested}}, 1.0);
  CHECK(model.log_prior(TextClass::congested) == 0.0);
  CHECK(model.prior(TextClass::not_congested) == 0.0);
  CHECK(classify_text(model, "anything at all").label == TextClass::congested);
}

TEST_CASE("empty corpus and bad labels are rejected") {
  CHECK_THROWS_AS(train_text_model({}, 1.0), Error);
  CHECK_THROWS_AS(train_text_model({{"x", TextClass::congested}}, 0.0), Error);
  CHECK_THROWS_AS(parse_text_class("maybe"), Error);
}

TEST_CASE("empty text falls back to the prior argmax") {
  const TextModel model = train_text_model(demo_corpus(), 1.0);
  // demo corpus has 5 congested, 4 not_congested, 3 irrelevant documents
  const TextPrediction p = classify_text(model, "");
  CHECK(p.label == TextClass::congested);
  CHECK(p.posterior == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("all-unseen-token text agrees with the oracle") {
  const auto corpus = demo_corpus();
  const TextModel model = train_text_model(corpus, 1.0);
  const BayesOracle oracle(corpus, 1.0);
  for (const char* text : {"zzz qqq", "xyzzy", "zzz zzz zzz"}) {
    const TextPrediction p = classify_text(model, text);
    const auto expected = oracle.classify(text);
    CHECK(p.label == expected.first);
    CHECK(p.posterior == doctest::Approx(expected.second).epsilon(1e-12));
  }
}

TEST_CASE("classifier matches the brute-force oracle exhaustively on a small vocabulary") {
  // vocabulary of <= 10 tokens, then every token sequence of length <= 3
  const std::vector<TextExample> corpus = {
      {"jam jam slow", TextClass::congested},
      {"slow road", TextClass::congested},
      {"clear road fast", TextClass::not_congested},
      {"fast clear", TextClass::not_congested},
      {"pizza tonight", TextClass::irrelevant},
  };
  const TextModel model = train_text_model(corpus, 1.0);
  const BayesOracle oracle(corpus, 1.0);
  REQUIRE(model.vocabulary_size() <= 10);

  std::vector<std::string> alphabet = {"jam", "slow", "road", "clear", "fast", "pizza",
                                       "tonight", "unseen"};
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
      while (pos < index.size() && ++index[pos] == alphabet.size()) {
        index[pos++] = 0;
      }
      if (pos == index.size()) break;
    }
  }

  for (const std::string& text : inputs) {
    const TextPrediction got = classify_text(model, text);
    const auto expected = oracle.classify(text);
    CHECK_MESSAGE(got.label == expected.first, "input: '", text, "'");
    CHECK(got.posterior == doctest::Approx(expected.second).epsilon(1e-12));
  }
}

TEST_CASE("training and serialization are byte-deterministic") {
  const auto corpus = demo_corpus();
  const std::string first = serialize_text_model(train_text_model(corpus, 1.0));
  const std::string second = serialize_text_model(train_text_model(corpus, 1.0));
  CHECK(first == second);

  const TextModel reloaded = parse_text_model(first);
  CHECK(reloaded == train_text_model(corpus, 1.0));
  CHECK(serialize_text_model(reloaded) == first);
}

TEST_CASE("classification is bit-identical across retrains") {
  const auto corpus = demo_corpus();
  const TextModel a = train_text_model(corpus, 1.0);
  const TextModel b = train_text_model(corpus, 1.0);
  for (const TextExample& ex : corpus) {
    const TextPrediction pa = classify_text(a, ex.text);
    const TextPrediction pb = classify_text(b, ex.text);
    CHECK(pa.label == pb.label);
    CHECK(pa.posterior == pb.posterior);  // exact
  }
}

TEST_CASE("model files reject corruption") {
  const std::string good = serialize_text_model(train_text_model(demo_corpus(), 1.0));
  CHECK_THROWS_AS(parse_text_model(""), Error);
  std::string flipped = good;
  flipped[good.find("vocab") + 1] = 'X';
  try {
    parse_text_model(flipped);
    FAIL("expected corrupt-views");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::corrupt_views);
  }
}
