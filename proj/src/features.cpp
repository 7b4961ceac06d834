#include "cner/features.hpp"

#include <cctype>
#include <set>

#include "cner/error.hpp"
#include "cner/text_prep.hpp"
#include "util.hpp"

namespace cner {
namespace {

constexpr int kMaxOffset = 4;

// Parses "%x[r,c]" at the front of `s`, advancing it.
CellRef parse_cell(std::string_view& s, std::size_t line_no) {
  if (!s.starts_with("%x[")) throw ParseError(line_no, "expected '%x[' in rule");
  s.remove_prefix(3);
  auto close = s.find(']');
  if (close == std::string_view::npos) throw ParseError(line_no, "missing ']' in cell reference");
  auto inner = s.substr(0, close);
  s.remove_prefix(close + 1);

  auto parts = detail::split(inner, ',');
  if (parts.size() != 2) throw ParseError(line_no, "cell reference needs [row,column]");
  auto row = detail::parse_int<int>(detail::trim(parts[0]));
  auto col = detail::parse_int<std::size_t>(detail::trim(parts[1]));
  if (!row || !col) throw ParseError(line_no, "non-numeric cell reference");
  if (*row < -kMaxOffset || *row > kMaxOffset)
    throw ParseError(line_no, "row offset out of range [-4,4]");
  if (*col == 0) throw ParseError(line_no, "column index must be positive");
  return {*row, *col};
}

}  // namespace

FeatureTemplate parse_template(std::string_view text) {
  FeatureTemplate tmpl;
  tmpl.source = std::string(text);
  std::set<std::string> ids;
  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto line = detail::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    if (line == "B") {
      tmpl.transitions = true;
      continue;
    }
    auto colon = line.find(':');
    if (line.front() != 'U' || colon == std::string_view::npos || colon == 1)
      throw ParseError(line_no, "expected 'Uid:%x[row,col]', got '" + std::string(line) + "'");
    FeatureRule rule;
    rule.id = std::string(line.substr(0, colon));
    for (char c : rule.id)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        throw ParseError(line_no, "bad rule id '" + rule.id + "'");
    if (!ids.insert(rule.id).second) throw ParseError(line_no, "duplicate rule id " + rule.id);

    std::string_view rest = line.substr(colon + 1);
    rule.cells.push_back(parse_cell(rest, line_no));
    while (!rest.empty()) {
      if (rest.front() != '/') throw ParseError(line_no, "cells must be joined by '/'");
      rest.remove_prefix(1);
      rule.cells.push_back(parse_cell(rest, line_no));
    }
    tmpl.rules.push_back(std::move(rule));
  }
  return tmpl;
}

std::string_view clinical_template_text() {
  static constexpr std::string_view text =
      "# String\n"
      "U00:%x[-2,1]\nU01:%x[-1,1]\nU02:%x[0,1]\nU03:%x[1,1]\nU04:%x[2,1]\n"
      "# Stem\n"
      "U05:%x[-2,2]\nU06:%x[-1,2]\nU07:%x[0,2]\nU08:%x[1,2]\nU09:%x[2,2]\n"
      "# POS\n"
      "U10:%x[-2,3]\nU11:%x[-1,3]\nU12:%x[0,3]\nU13:%x[1,3]\nU14:%x[2,3]\n"
      "# Chunk\n"
      "U15:%x[-2,4]\nU16:%x[-1,4]\nU17:%x[0,4]\nU18:%x[1,4]\nU19:%x[2,4]\n"
      "# Ortho:TokenKind\n"
      "U20:%x[-2,5]\nU21:%x[-1,5]\nU22:%x[0,5]\nU23:%x[1,5]\nU24:%x[2,5]\n"
      "# Ortho:TokenCase\n"
      "U25:%x[-2,6]\nU26:%x[-1,6]\nU27:%x[0,6]\nU28:%x[1,6]\nU29:%x[2,6]\n"
      "# String/Stem/TokenKind\n"
      "U30:%x[0,1]/%x[0,2]/%x[0,5]\n";
  return text;
}

FeatureTable build_feature_table(const Sentence& sentence) {
  FeatureTable table;
  table.reserve(sentence.size());
  for (const auto& tok : sentence.tokens) {
    table.push_back({tok.surface, tok.stem, tok.pos, tok.chunk,
                     std::string(to_string(token_kind(tok.surface))),
                     std::string(to_string(token_case(tok.surface)))});
  }
  return table;
}

std::vector<std::string> expand(const FeatureTemplate& tmpl, const FeatureTable& table,
                                std::size_t position) {
  const auto n = static_cast<long>(table.size());
  if (static_cast<long>(position) >= n) throw Error("expansion position out of range");
  std::vector<std::string> out;
  out.reserve(tmpl.rules.size());
  for (const auto& rule : tmpl.rules) {
    std::string feature = rule.id;
    feature += '=';
    for (std::size_t k = 0; k < rule.cells.size(); ++k) {
      const auto& cell = rule.cells[k];
      if (k) feature += '/';
      if (cell.column > table[position].size())
        throw Error("rule " + rule.id + " references column " + std::to_string(cell.column) +
                    " but rows have " + std::to_string(table[position].size()));
      long row = static_cast<long>(position) + cell.row_offset;
      if (row < 0) {
        feature += "_B-" + std::to_string(-row);
      } else if (row >= n) {
        feature += "_B+" + std::to_string(row - n + 1);
      } else {
        feature += table[static_cast<std::size_t>(row)][cell.column - 1];
      }
    }
    out.push_back(std::move(feature));
  }
  return out;
}

}  // namespace cner
