#include <doctest.h>

#include <cmath>
#include <vector>

#include "cner/crf.hpp"
#include "cner/error.hpp"
#include "cner/evaluation.hpp"
#include "cner/features.hpp"
#include "cner/lbfgs.hpp"
#include "cner/pipeline.hpp"
#include "oracles.hpp"

using namespace cner;

namespace {

double norm(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return std::sqrt(s);
}

double token_accuracy(const CrfModel& model, const std::vector<Document>& docs) {
  std::size_t right = 0, total = 0;
  for (const auto& d : docs) {
    auto predicted = tag(model, d);
    for (std::size_t s = 0; s < d.sentences.size(); ++s) {
      auto gold = encode_merging(segments_of(d.gold_spans, s, model.event_type), d.sentences[s].size(),
                                 model.scheme);
      for (std::size_t i = 0; i < gold.size(); ++i) right += gold[i] == predicted[s][i];
      total += gold.size();
    }
  }
  return static_cast<double>(right) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("lbfgs minimizes a shifted quadratic and the Rosenbrock function") {
  LbfgsOptions opts;
  opts.relative_tolerance = 1e-12;
  auto quad = [](std::span<const double> x, std::span<double> g) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - static_cast<double>(i);
      f += (1.0 + static_cast<double>(i)) * d * d + 1.0;
      g[i] = 2.0 * (1.0 + static_cast<double>(i)) * d;
    }
    return f;
  };
  auto r = lbfgs_minimize(quad, std::vector<double>(6, 3.0), opts);
  CHECK(r.converged);
  for (std::size_t i = 0; i < 6; ++i) CHECK(r.x[i] == doctest::Approx(static_cast<double>(i)).epsilon(1e-4));

  auto rosen = [](std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b + 1.0;
  };
  opts.max_iterations = 2000;
  r = lbfgs_minimize(rosen, {-1.2, 1.0}, opts);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("lbfgs reports line-search failure with the last iterate") {
  // The reported gradient points uphill, so no step can satisfy the Armijo condition.
  auto liar = [](std::span<const double> x, std::span<double> g) {
    g[0] = -2.0 * x[0];
    return x[0] * x[0];
  };
  try {
    lbfgs_minimize(liar, {1.5}, {});
    FAIL("expected a training error");
  } catch (const TrainingError& e) {
    REQUIRE(e.last_weights().size() == 1);
    CHECK(e.last_weights()[0] == 1.5);
  }
}

TEST_CASE("training on separable data") {
  auto corpus = separable_corpus(11, 200);
  auto tmpl = parse_template(clinical_template_text());
  auto result = train({}, corpus, tmpl, {"PROBLEM", TaggingScheme::IOB, true});
  CHECK(result.model.weights.size() == result.model.alphabet.dimension());
  CHECK(result.log.size() <= 500);
  CHECK(token_accuracy(result.model, corpus) >= 0.99);

  std::vector<Document> predicted;
  for (const auto& d : corpus) predicted.push_back(predict_document(result.model, d, PostMode::none, {}));
  auto report = evaluate(corpus, predicted, {"PROBLEM"});
  CHECK(report.scores("PROBLEM", MatchMode::strict).f1 >= 0.99);

  SUBCASE("stronger regularization gives a smaller weight vector") {
    TrainerConfig weak, strong;
    weak.C = 100.0;
    strong.C = 0.01;
    auto small = train(strong, corpus, tmpl, {"PROBLEM", TaggingScheme::IOB, true});
    auto large = train(weak, corpus, tmpl, {"PROBLEM", TaggingScheme::IOB, true});
    CHECK(norm(small.model.weights) < norm(large.model.weights));
  }

  SUBCASE("saved models reload exactly") {
    auto text = save_model(result.model);
    auto loaded = load_model(text);
    CHECK(loaded.weights == result.model.weights);
    CHECK(loaded.feature_template.source == tmpl.source);
    CHECK(save_model(loaded) == text);
    for (const auto& s : corpus[0].sentences)
      CHECK(tag_sentence(loaded, s) == tag_sentence(result.model, s));
  }

  SUBCASE("training is deterministic") {
    auto again = train({}, corpus, tmpl, {"PROBLEM", TaggingScheme::IOB, true});
    CHECK(again.model.weights == result.model.weights);
  }
}

TEST_CASE("training errors and edge cases") {
  auto tmpl = parse_template(clinical_template_text());
  std::vector<Document> empty;
  CHECK_THROWS_AS(train({}, empty, tmpl, {"PROBLEM", TaggingScheme::IOB, true}), Error);
  CHECK_THROWS_AS(load_model("cner-crf-model\t99\n"), Error);

  auto corpus = separable_corpus(3, 30);
  auto model = train({}, corpus, tmpl, {"PROBLEM", TaggingScheme::IOBEW, false}).model;
  CHECK(tag_sentence(model, Sentence{}).empty());
  CHECK(model.alphabet.dimension() == model.alphabet.attribute_count() * 5);
}
