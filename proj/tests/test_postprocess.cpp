#include <doctest.h>

#include <functional>
#include <string>
#include <vector>

#include "cner/corpus.hpp"
#include "cner/error.hpp"
#include "cner/pipeline.hpp"
#include "cner/postprocess.hpp"
#include "cner/stats.hpp"

using namespace cner;

namespace {

const TaggingScheme kSchemes[] = {TaggingScheme::IO, TaggingScheme::IOB, TaggingScheme::IOBW,
                                  TaggingScheme::IOBEW};

LabelSequence labels(const std::string& s) {
  LabelSequence out;
  for (char c : s) out.push_back(*parse_label(std::string(1, c)));
  return out;
}

std::string letters(std::span<const Label> ls) {
  std::string s;
  for (Label l : ls) s += to_string(l);
  return s;
}

void for_each_sequence(std::size_t n, const std::vector<Label>& alphabet,
                       const std::function<void(const LabelSequence&)>& f) {
  LabelSequence seq(n, alphabet.front());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) return f(seq);
    for (Label l : alphabet) {
      seq[i] = l;
      rec(i + 1);
    }
  };
  rec(0);
}

// Oracle: bridge each O sitting between B/I and I, then every maximal run of entity tokens
// becomes one mention.
LabelSequence adjust_oracle(const LabelSequence& in, TaggingScheme scheme) {
  std::vector<bool> entity(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) entity[i] = in[i] != Label::O;
  for (std::size_t i = 1; i + 1 < in.size(); ++i)
    if (in[i] == Label::O && (in[i - 1] == Label::B || in[i - 1] == Label::I) && in[i + 1] == Label::I)
      entity[i] = true;
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < in.size();) {
    if (!entity[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < in.size() && entity[j]) ++j;
    segs.push_back({i, j});
    i = j;
  }
  return encode(segs, in.size(), scheme);
}

Sentence sentence_of(const std::vector<std::string>& words, const std::vector<std::string>& pos,
                     const std::vector<std::string>& chunk) {
  Sentence s;
  for (std::size_t i = 0; i < words.size(); ++i) {
    Token t;
    t.surface = t.stem = words[i];
    t.pos = pos[i];
    t.chunk = chunk[i];
    s.tokens.push_back(t);
  }
  return s;
}

}  // namespace

TEST_CASE("boundary label adjustment rows") {
  CHECK(letters(adjust_labels(labels("OOOBOIIOO"), TaggingScheme::IOB)) == "OOOBIIIOO");
  CHECK(letters(adjust_labels(labels("OOOBIIBIIO"), TaggingScheme::IOB)) == "OOOBIIIIIO");
  CHECK(letters(adjust_labels(labels("OOOBIIBIIBIO"), TaggingScheme::IOB)) == "OOOBIIIIIIIO");
  CHECK(letters(adjust_labels(labels("OOOBOIIOO"), TaggingScheme::IOBW)) == "OOOBIIIOO");
  CHECK(letters(adjust_labels(labels("OWWO"), TaggingScheme::IOBW)) == "OBIO");
  CHECK(letters(adjust_labels(labels("OBOOIO"), TaggingScheme::IOB)) == "OBOOBO");
  CHECK_THROWS_AS(adjust_labels(labels("OWO"), TaggingScheme::IOB), ValidityError);
}

TEST_CASE("boundary label adjustment agrees with the run oracle") {
  for (TaggingScheme scheme : kSchemes)
    for (std::size_t n = 0; n <= 7; ++n)
      for_each_sequence(n, scheme_labels(scheme), [&](const LabelSequence& seq) {
        auto got = adjust_labels(seq, scheme);
        if (got != adjust_oracle(seq, scheme))
          FAIL_CHECK(to_string(scheme) << " " << letters(seq) << " -> " << letters(got));
      });
}

TEST_CASE("boundary label adjustment is idempotent and never adds segments on valid input") {
  for (TaggingScheme scheme : kSchemes)
    for (std::size_t n = 0; n <= 7; ++n)
      for_each_sequence(n, scheme_labels(scheme), [&](const LabelSequence& seq) {
        if (!is_valid(seq, scheme)) return;
        auto once = adjust_labels(seq, scheme);
        REQUIRE(is_valid(once, scheme));
        if (adjust_labels(once, scheme) != once) FAIL_CHECK("not idempotent on " << letters(seq));
        CHECK(decode(once, scheme).size() <= decode(seq, scheme).size());
      });
}

TEST_CASE("expander examples") {
  ExpanderConfig cfg;
  auto s = sentence_of({"has", "chest", "pain", "."}, {"VBZ", "NN", "NN", "."}, {"B-VP", "O", "O", "O"});
  std::vector<Span> spans{{0, 2, 3, "PROBLEM"}};
  CHECK(expand_boundaries(spans, s, cfg) == std::vector<Span>{{0, 1, 3, "PROBLEM"}});

  s = sentence_of({"saw", "the", "rash", "today"}, {"VBD", "DT", "NN", "RB"}, {"B-VP", "O", "O", "O"});
  spans = {{0, 2, 3, "PROBLEM"}};
  CHECK(expand_boundaries(spans, s, cfg) == std::vector<Span>{{0, 1, 3, "PROBLEM"}});

  s = sentence_of({"fever", ",", "cough"}, {"NN", ",", "NN"}, {"B-NP", "O", "B-NP"});
  spans = {{0, 2, 3, "PROBLEM"}};
  CHECK(expand_boundaries(spans, s, cfg) == spans);

  s = sentence_of({"a", "CT", "scan", "shows"}, {"DT", "NNP", "NN", "VBZ"}, {"B-NP", "I-NP", "I-NP", "B-VP"});
  spans = {{0, 1, 2, "TEST"}, {0, 2, 3, "TEST"}};
  CHECK(expand_boundaries(spans, s, cfg) == std::vector<Span>{{0, 0, 2, "TEST"}, {0, 2, 3, "TEST"}});

  spans = {{0, 2, 3, "OCCURRENCE"}};
  CHECK(expand_boundaries(spans, s, cfg) == spans);
}

TEST_CASE("expander properties on random sentences") {
  SplitMix64 rng(2718);
  const std::vector<std::string> pos{"NN", "JJ", "DT", "VB", ",", "NNS"};
  const std::vector<std::string> chunk{"B-NP", "I-NP", "O", "B-VP"};
  const std::vector<std::string> words{"the", "x", "y", ",", "z", "his"};
  const std::vector<std::string> types{"PROBLEM", "TEST", "EVIDENTIAL"};
  ExpanderConfig cfg;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.below(9);
    std::vector<std::string> w, p, c;
    for (std::size_t i = 0; i < n; ++i) {
      w.push_back(words[rng.below(words.size())]);
      p.push_back(pos[rng.below(pos.size())]);
      c.push_back(chunk[rng.below(chunk.size())]);
    }
    Sentence s = sentence_of(w, p, c);
    std::vector<Span> spans;
    for (const auto& type : types) {
      std::size_t i = 0;
      while (i < n) {
        if (rng.bernoulli(0.3)) {
          std::size_t end = i + 1 + rng.below(std::min<std::size_t>(3, n - i));
          spans.push_back({0, i, end, type});
          i = end;
        }
        ++i;
      }
    }
    sort_spans(spans);
    auto grown = expand_boundaries(spans, s, cfg);
    REQUIRE(grown.size() == spans.size());
    CHECK(expand_boundaries(grown, s, cfg) == grown);
    CHECK_NOTHROW(validate_spans(grown, std::span<const Sentence>(&s, 1)));
    for (const auto& type : types) {
      std::vector<Span> before, after;
      for (const auto& sp : spans)
        if (sp.event_type == type) before.push_back(sp);
      for (const auto& sp : grown)
        if (sp.event_type == type) after.push_back(sp);
      REQUIRE(before.size() == after.size());
      for (std::size_t k = 0; k < before.size(); ++k) {
        CHECK(after[k].start <= before[k].start);
        CHECK(after[k].end >= before[k].end);
        if (!cfg.enabled_event_types.count(type)) CHECK(after[k] == before[k]);
      }
    }
  }
}

TEST_CASE("post mode pairing and the full pipeline") {
  CHECK_THROWS_AS(check_post_mode(TaggingScheme::IOB, PostMode::iobw_plus), ConfigError);
  CHECK_NOTHROW(check_post_mode(TaggingScheme::IOBW, PostMode::iobw_plus));
  CHECK(parse_model_config("IOBW+")->post == PostMode::iobw_plus);
  CHECK(parse_model_config("IOBW+")->scheme == TaggingScheme::IOBW);
  CHECK_FALSE(parse_model_config("IOB+").has_value());

  auto s = sentence_of({"the", "mild", "x", "pain", "ok"}, {"DT", "JJ", "VB", "NN", "JJ"},
                       {"B-NP", "I-NP", "O", "B-NP", "O"});
  ExpanderConfig cfg;
  auto raw = labels("OBOIO");
  auto spans = spans_from_prediction(raw, TaggingScheme::IOBW, PostMode::iobw_plus, s, 0, "PROBLEM", cfg);
  CHECK(spans == std::vector<Span>{{0, 0, 4, "PROBLEM"}});
  spans = spans_from_prediction(raw, TaggingScheme::IOBW, PostMode::none, s, 0, "PROBLEM", cfg);
  CHECK(spans == std::vector<Span>{{0, 1, 2, "PROBLEM"}, {0, 3, 4, "PROBLEM"}});
  CHECK(spans_from_prediction(raw, TaggingScheme::IOBW, PostMode::iobw_plus, s, 0, "PROBLEM", cfg) ==
        spans_from_prediction(raw, TaggingScheme::IOBW, PostMode::iobw_plus, s, 0, "PROBLEM", cfg));
}

TEST_CASE("expander configuration round trip") {
  ExpanderConfig cfg;
  cfg.enabled_event_types = {"PROBLEM"};
  cfg.determiner_lexicon = {"the", "a"};
  auto back = parse_expander_config(format_expander_config(cfg));
  CHECK(back.enabled_event_types == cfg.enabled_event_types);
  CHECK(back.determiner_lexicon == cfg.determiner_lexicon);
  CHECK(back.noun_pos_tags == cfg.noun_pos_tags);
  CHECK_THROWS_AS(parse_expander_config("colour = red\n"), Error);
}
