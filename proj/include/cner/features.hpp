#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cner/corpus.hpp"

namespace cner {

struct CellRef {
  int row_offset = 0;          // in [-4, 4]
  std::size_t column = 1;      // 1-based

  bool operator==(const CellRef&) const = default;
};

struct FeatureRule {
  std::string id;
  std::vector<CellRef> cells;
};

struct FeatureTemplate {
  std::vector<FeatureRule> rules;
  /// Set by a line consisting of exactly "B".
  bool transitions = false;
  /// Original text, kept so models can carry the template verbatim.
  std::string source;
};

/// Column numbering of a feature table row (1-based, as referenced by %x).
namespace feature_column {
inline constexpr std::size_t surface = 1;
inline constexpr std::size_t stem = 2;
inline constexpr std::size_t pos = 3;
inline constexpr std::size_t chunk = 4;
inline constexpr std::size_t kind = 5;
inline constexpr std::size_t token_case = 6;
inline constexpr std::size_t count = 6;
}  // namespace feature_column

/// One row per token: surface, stem, POS, chunk, token kind, token case.
using FeatureRow = std::vector<std::string>;
using FeatureTable = std::vector<FeatureRow>;

FeatureTemplate parse_template(std::string_view text);

/// The 31-rule template: five offsets for each of six column groups plus the
/// surface/stem/kind conjunction.
std::string_view clinical_template_text();

FeatureTable build_feature_table(const Sentence& sentence);

/// One "id=v1/v2/..." string per rule. Rows outside the sentence read as
/// "_B-k" / "_B+k" where k is the distance past the boundary.
std::vector<std::string> expand(const FeatureTemplate& tmpl, const FeatureTable& table,
                                std::size_t position);

}  // namespace cner
