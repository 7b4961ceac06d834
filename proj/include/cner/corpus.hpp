#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cner/schemes.hpp"

namespace cner {

/// Filler for absent stem, POS and chunk values.
inline constexpr std::string_view kNil = "_NIL_";

struct Token {
  std::string surface;
  std::size_t char_start = 0;  // inclusive
  std::size_t char_end = 0;    // exclusive
  std::string stem;
  std::string pos;
  std::string chunk;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const Sentence&) const = default;
};

/// A typed mention; start/end are token indices, half-open.
struct Span {
  std::size_t sentence_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string event_type;

  std::size_t length() const { return end - start; }
  bool overlaps(const Span& other) const {
    return sentence_index == other.sentence_index && start < other.end && other.start < end;
  }
  auto operator<=>(const Span&) const = default;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::vector<Span> gold_spans;

  bool operator==(const Document&) const = default;
};

inline const std::vector<std::string>& standard_event_types() {
  static const std::vector<std::string> types{"PROBLEM", "TEST", "TREATMENT", "OCCURRENCE",
                                              "EVIDENTIAL"};
  return types;
}

/// Sorts spans by (sentence, start, end, type).
void sort_spans(std::vector<Span>& spans);

/// Throws Error when a span is out of range or two same-type spans overlap.
void validate_spans(const Document& doc);
void validate_spans(std::span<const Span> spans, std::span<const Sentence> sentences);

/// Spans of one type in one sentence, as sorted segments.
std::vector<Segment> segments_of(std::span<const Span> spans, std::size_t sentence_index,
                                 std::string_view event_type);

/// Event types appearing in gold spans, sorted.
std::vector<std::string> event_types_of(std::span<const Document> docs);

/// Reads the tab-separated column format. The header directive
///   #! columns = surface stem pos chunk label:<SCHEME>:<TYPE> ...
/// declares the columns; "#! doc = <id>" starts a new document; blank lines
/// separate sentences. A "label:<SCHEME>" column without a type carries
/// joint labels such as "B-PROBLEM". An optional "offsets" column holds
/// "start-end" character offsets; without it offsets assume single spaces
/// between tokens. Missing stems are computed, missing POS/chunk become _NIL_.
std::vector<Document> parse_column_file(std::string_view text);

struct WriteOptions {
  /// Label columns to write; empty means every type present in the gold spans.
  std::vector<std::string> event_types;
};

/// Inverse of parse_column_file for representable documents.
std::string write_column_file(std::span<const Document> docs, TaggingScheme scheme,
                              const WriteOptions& options = {});

/// Standoff span lines: doc_id<TAB>sentence<TAB>start<TAB>end<TAB>type.
std::string write_standoff(std::span<const Document> docs);

struct TypeProfile {
  /// length_histogram[k] = fraction of mentions with k tokens (index 0 unused).
  std::vector<double> length_histogram;
  double unique_word_fraction = 0.0;
  std::size_t event_count = 0;
  double event_proportion = 0.0;
  /// Fraction of mentions containing an all-caps token.
  double acronym_fraction = 0.0;
  double mean_length() const;
};

struct CorpusProfile {
  std::map<std::string, TypeProfile> types;
};

CorpusProfile compute_profile(std::span<const Document> docs);

/// key = value lines, one block per event type.
std::string format_profile(const CorpusProfile& profile);

}  // namespace cner
