#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cner/corpus.hpp"

namespace cner {

struct SynthTypeProfile {
  /// length_distribution[k] = probability of a k-token mention; index 0 unused.
  std::vector<double> length_distribution;
  double unique_word_fraction = 0.5;
  double event_proportion = 0.2;
  double acronym_fraction = 0.0;
  /// Chance that a multi-token mention opens with a determiner.
  double determiner_rate = 0.0;
  /// Chance that the token before a mention is one of the type's cue words.
  double trigger_rate = 0.5;
};

struct SynthProfile {
  std::map<std::string, SynthTypeProfile> types;
  std::size_t background_lexicon_size = 400;
  std::size_t min_sentence_background = 4;
  std::size_t max_sentence_background = 12;
  std::size_t min_sentences_per_doc = 6;
  std::size_t max_sentences_per_doc = 12;
  double events_per_sentence = 1.5;
  /// Chance that an entity token gets a non-noun POS tag (JJ).
  double pos_noise = 0.15;
  /// Chance that a mention is placed directly after a mention of the same type.
  double adjacent_rate = 0.03;
  /// Chance that a background token is a determiner.
  double background_determiner_rate = 0.0;
  /// Cue words per event type.
  std::size_t triggers_per_type = 5;
};

/// Single-token probability p1, then a geometric tail with ratio `ratio`
/// over lengths 2..6, renormalized to 1 - p1.
std::vector<double> truncated_geometric_lengths(double p1, double ratio = 0.5);

/// Five clinical event types with measured proportions, unique-word and
/// acronym rates. Multi-token length tails and the PROBLEM/TEST/TREATMENT
/// single-token rates are made up.
SynthProfile default_profile();

/// Throws Error when a distribution does not sum to 1 or a value is out of range.
void validate_profile(const SynthProfile& profile);

SynthProfile parse_synth_profile(std::string_view text);
std::string format_synth_profile(const SynthProfile& profile);

std::vector<Document> generate(const SynthProfile& profile, std::uint64_t seed,
                               std::size_t n_documents);

}  // namespace cner
