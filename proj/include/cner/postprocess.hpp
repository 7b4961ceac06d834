#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cner/corpus.hpp"
#include "cner/schemes.hpp"

namespace cner {

struct ExpanderConfig {
  std::set<std::string> noun_pos_tags{"NN", "NNS", "NNP", "NNPS"};
  std::set<std::string> np_chunk_tags{"B-NP", "I-NP"};
  std::set<std::string> determiner_lexicon{"a",     "an",    "the", "this", "that", "these",
                                           "those", "his",   "her", "its",  "their"};
  std::set<std::string> enabled_event_types{"PROBLEM", "TEST", "TREATMENT"};
};

/// Reads "key = value" lines; values are comma-separated lists. Keys:
/// noun_pos_tags, np_chunk_tags, determiner_lexicon, enabled_event_types.
ExpanderConfig parse_expander_config(std::string_view text);
std::string format_expander_config(const ExpanderConfig& config);

/// Boundary label adjustment. Works left to right until nothing changes:
/// a single O between an open segment (previous label B or I) and a
/// following I is relabeled I; segments that touch are merged. The result
/// is re-encoded in the scheme, so raw predictions with dangling I labels
/// are accepted. Throws ValidityError on labels outside the scheme alphabet.
LabelSequence adjust_labels(std::span<const Label> labels, TaggingScheme scheme);

/// Grows spans of enabled types over neighboring nouns, NP constituents and
/// determiners, left side first. Stops at sentence edges, punctuation and
/// other spans of the same type. Returns spans sorted.
std::vector<Span> expand_boundaries(std::span<const Span> spans, const Sentence& sentence,
                                    const ExpanderConfig& config);

}  // namespace cner
