#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cner {

enum class TokenKind { word, number, symbol, punctuation };
enum class TokenCase { lowercase, uppercase, upperInitial, mixedCaps, allCaps, none };

std::string_view to_string(TokenKind kind);
std::string_view to_string(TokenCase token_case);

struct RawToken {
  std::string surface;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const RawToken&) const = default;
};

using RawSentence = std::vector<RawToken>;

struct TokenizerOptions {
  // Keep "x-ray" as one token instead of splitting at the hyphen.
  bool keep_hyphens = false;
};

/// Splits text into sentences of tokens.
///
/// Runs of letters and runs of digits form tokens; every other non-space
/// character is a token of its own. Bytes >= 0x80 count as letters so UTF-8
/// words stay whole. Offsets are byte offsets into `text`. A sentence ends
/// after '.', '!' or '?' when followed by whitespace and an uppercase letter,
/// and at blank lines.
std::vector<RawSentence> tokenize(std::string_view text, const TokenizerOptions& options = {});

/// Porter (1980) stemmer. Lowercases its input; tokens containing any
/// non-letter are returned lowercased and otherwise unchanged.
std::string porter_stem(std::string_view word);

TokenKind token_kind(std::string_view surface);
TokenCase token_case(std::string_view surface);

}  // namespace cner
