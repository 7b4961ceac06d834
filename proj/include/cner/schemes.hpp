#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cner {

enum class TaggingScheme { IO, IOB, IOBW, IOBEW };

/// Per-token label without an event-type suffix.
enum class Label { O, B, I, E, W };

using LabelSequence = std::vector<Label>;

/// Half-open token range [start, end) inside one sentence.
struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;

  auto operator<=>(const Segment&) const = default;
};

std::string_view to_string(TaggingScheme scheme);
std::string_view to_string(Label label);
std::optional<TaggingScheme> parse_scheme(std::string_view name);
std::optional<Label> parse_label(std::string_view text);

/// Labels of the scheme in canonical order, O first. This is also the label
/// order used by the CRF.
std::vector<Label> scheme_labels(TaggingScheme scheme);
bool in_alphabet(TaggingScheme scheme, Label label);

std::string format_labels(std::span<const Label> labels);

/// Segments must be sorted and non-overlapping.
/// Throws RepresentabilityError under IO when two segments touch.
LabelSequence encode(std::span<const Segment> segments, std::size_t length, TaggingScheme scheme);

/// Strict inverse of encode. Throws ValidityError on any grammar violation.
std::vector<Segment> decode(std::span<const Label> labels, TaggingScheme scheme);

/// True when decode would succeed.
bool is_valid(std::span<const Label> labels, TaggingScheme scheme);

/// Segments read with the label fixer's tolerant grammar: a segment opens at
/// B, W, E or at an I outside a segment, runs through following I and E
/// labels, closes at W or E, and a B inside a segment starts a new one.
/// Returned segments may touch but never overlap.
std::vector<Segment> lenient_decode(std::span<const Label> labels);

/// Like encode, but touching segments are merged when the scheme cannot
/// separate them (IO). Never throws for sorted, non-overlapping input.
LabelSequence encode_merging(std::span<const Segment> segments, std::size_t length,
                             TaggingScheme scheme);

/// Label fixer: lenient decode followed by re-encoding in the scheme.
/// Total, idempotent, and the identity on valid sequences.
LabelSequence repair(std::span<const Label> labels, TaggingScheme scheme);

}  // namespace cner
