#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cner/corpus.hpp"

namespace cner {

enum class MatchMode { strict, lenient };

std::string_view to_string(MatchMode mode);

/// In strict mode tp_system == tp_gold. In lenient mode the system side and
/// the gold side are counted independently.
struct MatchCounts {
  MatchMode mode = MatchMode::strict;
  std::string event_type;
  std::size_t tp_system = 0;
  std::size_t tp_gold = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t tp() const { return tp_system; }
  MatchCounts& operator+=(const MatchCounts& other);
};

/// Matches spans of one sentence set (one document). Types are respected:
/// only same-type spans can match. Throws Error if either side has
/// overlapping spans of the same type.
MatchCounts match_spans(std::span<const Span> gold, std::span<const Span> system, MatchMode mode);

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Scores f1_report(const MatchCounts& counts);

struct EvalReport {
  /// Keyed by (event type, mode). The micro average uses type "ALL".
  std::map<std::pair<std::string, MatchMode>, MatchCounts> counts;

  Scores scores(const std::string& event_type, MatchMode mode) const;
  /// Aligned table followed by type<TAB>mode<TAB>P<TAB>R<TAB>F1 lines.
  std::string format() const;
};

inline constexpr std::string_view kMicroAverage = "ALL";

/// Scores system documents against gold documents, matched by position.
/// Only the listed event types are scored; empty means all gold and system types.
EvalReport evaluate(std::span<const Document> gold, std::span<const Document> system,
                    std::vector<std::string> event_types = {});

}  // namespace cner
