#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cner/corpus.hpp"
#include "cner/crf.hpp"
#include "cner/postprocess.hpp"
#include "cner/schemes.hpp"

namespace cner {

enum class PostMode { none, iobw_plus };

std::string_view to_string(PostMode mode);
std::optional<PostMode> parse_post_mode(std::string_view text);

/// Throws ConfigError unless iobw+ is paired with the IOBW scheme.
void check_post_mode(TaggingScheme scheme, PostMode post);

/// Turns raw predicted labels of one sentence into spans. The label fixer
/// always runs; with iobw+ the boundary label adjustment and the boundary
/// expander follow.
std::vector<Span> spans_from_prediction(std::span<const Label> raw, TaggingScheme scheme,
                                        PostMode post, const Sentence& sentence,
                                        std::size_t sentence_index, const std::string& event_type,
                                        const ExpanderConfig& expander);

/// Predicted spans of the model's event type over a whole document.
std::vector<Span> predict_spans(const CrfModel& model, const Document& doc, PostMode post,
                                const ExpanderConfig& expander);

/// Copy of `doc` whose gold spans are replaced by the model's predictions.
Document predict_document(const CrfModel& model, const Document& doc, PostMode post,
                          const ExpanderConfig& expander);

/// Model configurations compared by the experiment harness.
struct ModelConfig {
  std::string name;
  TaggingScheme scheme = TaggingScheme::IOB;
  PostMode post = PostMode::none;
};

/// "IO", "IOB", "IOBW", "IOBEW" or "IOBW+".
std::optional<ModelConfig> parse_model_config(std::string_view name);

}  // namespace cner
