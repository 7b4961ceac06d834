#include "cner/text_prep.hpp"

#include <algorithm>

namespace cner {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_ascii_letter(char c) { return is_ascii_upper(c) || is_ascii_lower(c); }
bool is_letter(char c) { return is_ascii_letter(c) || static_cast<unsigned char>(c) >= 0x80; }

constexpr std::string_view kPunctuation = ".,;:!?'\"()[]{}-";

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::word: return "word";
    case TokenKind::number: return "number";
    case TokenKind::symbol: return "symbol";
    case TokenKind::punctuation: return "punctuation";
  }
  return "?";
}

std::string_view to_string(TokenCase token_case) {
  switch (token_case) {
    case TokenCase::lowercase: return "lowercase";
    case TokenCase::uppercase: return "uppercase";
    case TokenCase::upperInitial: return "upperInitial";
    case TokenCase::mixedCaps: return "mixedCaps";
    case TokenCase::allCaps: return "allCaps";
    case TokenCase::none: return "none";
  }
  return "?";
}

std::vector<RawSentence> tokenize(std::string_view text, const TokenizerOptions& options) {
  std::vector<RawSentence> sentences;
  RawSentence current;
  auto close_sentence = [&] {
    if (!current.empty()) sentences.push_back(std::move(current));
    current.clear();
  };

  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    char c = text[i];
    if (is_space(c)) {
      // A blank line is a line break followed by optional blanks and another line break.
      if (c == '\n') {
        std::size_t j = i + 1;
        while (j < n && is_space(text[j]) && text[j] != '\n') ++j;
        if (j < n && text[j] == '\n') close_sentence();
      }
      ++i;
      continue;
    }

    std::size_t start = i;
    if (is_letter(c)) {
      while (i < n) {
        if (is_letter(text[i])) {
          ++i;
        } else if (options.keep_hyphens && text[i] == '-' && i + 1 < n && is_letter(text[i + 1])) {
          i += 2;
        } else {
          break;
        }
      }
    } else if (is_digit(c)) {
      while (i < n && is_digit(text[i])) ++i;
    } else {
      ++i;
    }
    current.push_back({std::string(text.substr(start, i - start)), start, i});

    if (c == '.' || c == '!' || c == '?') {
      std::size_t j = i;
      while (j < n && is_space(text[j])) ++j;
      if (j > i && j < n && is_ascii_upper(text[j])) close_sentence();
    }
  }
  close_sentence();
  return sentences;
}

TokenKind token_kind(std::string_view surface) {
  if (surface.empty()) return TokenKind::symbol;
  if (std::all_of(surface.begin(), surface.end(), is_letter)) return TokenKind::word;
  if (std::all_of(surface.begin(), surface.end(), is_digit)) return TokenKind::number;
  if (surface.size() == 1 && kPunctuation.find(surface[0]) != std::string_view::npos)
    return TokenKind::punctuation;
  return TokenKind::symbol;
}

TokenCase token_case(std::string_view surface) {
  std::size_t letters = 0, upper = 0, lower = 0;
  for (char c : surface) {
    if (!is_ascii_letter(c)) continue;
    ++letters;
    if (is_ascii_upper(c)) ++upper; else ++lower;
  }
  if (letters == 0) return TokenCase::none;
  if (letters == 1 && upper == 1 && surface.size() == 1) return TokenCase::uppercase;
  if (upper == 0) return TokenCase::lowercase;
  if (lower == 0) return TokenCase::allCaps;

  auto first = std::find_if(surface.begin(), surface.end(), is_ascii_letter);
  if (is_ascii_upper(*first) && upper == 1) return TokenCase::upperInitial;
  return TokenCase::mixedCaps;
}

}  // namespace cner
