#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cner/corpus.hpp"
#include "cner/error.hpp"
#include "cner/synth.hpp"

using namespace cner;

TEST_CASE("default profile targets") {
  auto p = default_profile();
  CHECK_NOTHROW(validate_profile(p));
  double total = 0.0;
  for (const auto& [type, t] : p.types) total += t.event_proportion;
  CHECK(std::abs(total - 1.0) < 1e-4);
  CHECK(p.types.at("EVIDENTIAL").unique_word_fraction == 0.10);
  CHECK(p.types.at("EVIDENTIAL").length_distribution[1] == doctest::Approx(0.96));
  CHECK(p.types.at("OCCURRENCE").length_distribution[1] == doctest::Approx(0.70));
  CHECK(p.types.at("PROBLEM").event_proportion == doctest::Approx(0.3293));
  CHECK(p.types.at("TEST").event_proportion == doctest::Approx(0.1683));
}

TEST_CASE("truncated geometric lengths") {
  auto d = truncated_geometric_lengths(0.4);
  REQUIRE(d.size() == 7);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(0.4));
  double sum = 0.0;
  for (double v : d) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 3; k <= 6; ++k) CHECK(d[k] == doctest::Approx(0.5 * d[k - 1]));
}

TEST_CASE("profile validation and text round trip") {
  auto p = default_profile();
  auto back = parse_synth_profile(format_synth_profile(p));
  CHECK(format_synth_profile(back) == format_synth_profile(p));
  p.types["PROBLEM"].length_distribution[1] += 0.1;
  CHECK_THROWS_AS(validate_profile(p), Error);
  p = default_profile();
  p.types["TEST"].unique_word_fraction = 1.5;
  CHECK_THROWS_AS(validate_profile(p), Error);
}

TEST_CASE("generation is deterministic and well formed") {
  auto a = generate(default_profile(), 5, 40);
  auto b = generate(default_profile(), 5, 40);
  CHECK(a == b);
  CHECK(a != generate(default_profile(), 6, 40));
  CHECK(write_column_file(a, TaggingScheme::IOBEW) == write_column_file(b, TaggingScheme::IOBEW));
  REQUIRE(a.size() == 40);
  CHECK(a[3].id == "synth00003");
  for (const auto& d : a) {
    CHECK_NOTHROW(validate_spans(d));
    for (std::size_t s = 0; s < d.sentences.size(); ++s)
      for (const auto& type : standard_event_types()) {
        auto segs = segments_of(d.gold_spans, s, type);
        auto labels = encode(segs, d.sentences[s].size(), TaggingScheme::IOB);
        CHECK(decode(labels, TaggingScheme::IOB) == segs);
      }
  }
  std::vector<Document> docs = a;
  CHECK(parse_column_file(write_column_file(docs, TaggingScheme::IOB)) == docs);
}

TEST_CASE("ten thousand evidential events hit the single-token target") {
  SynthProfile p = default_profile();
  auto ev = p.types.at("EVIDENTIAL");
  ev.event_proportion = 1.0;
  p.types = {{"EVIDENTIAL", ev}};
  std::vector<Document> docs;
  std::size_t events = 0;
  for (std::uint64_t chunk = 0; events < 10000; ++chunk) {
    auto more = generate(p, 100 + chunk, 100);
    for (auto& d : more) events += d.gold_spans.size();
    docs.insert(docs.end(), more.begin(), more.end());
  }
  auto profile = compute_profile(docs);
  CHECK(std::abs(profile.types.at("EVIDENTIAL").length_histogram[1] - 0.96) <= 0.02);
}

TEST_CASE("generated corpora reproduce their profile") {
  const auto p = default_profile();
  auto docs = generate(p, 2024, 16000);
  auto measured = compute_profile(docs);
  for (const auto& [type, target] : p.types) {
    INFO(type);
    REQUIRE(measured.types.count(type));
    const auto& m = measured.types.at(type);
    CHECK(m.event_count >= 10000);
    CHECK(std::abs(m.event_proportion - target.event_proportion) <= 0.02);
    CHECK(std::abs(m.unique_word_fraction - target.unique_word_fraction) <= 0.02);
    CHECK(std::abs(m.acronym_fraction - target.acronym_fraction) <= 0.02);
    for (std::size_t k = 1; k < target.length_distribution.size(); ++k) {
      const double got = k < m.length_histogram.size() ? m.length_histogram[k] : 0.0;
      CHECK(std::abs(got - target.length_distribution[k]) <= 0.02);
    }
  }
}
