#include "cner/pipeline.hpp"

#include "cner/error.hpp"

namespace cner {

std::string_view to_string(PostMode mode) { return mode == PostMode::none ? "none" : "iobw+"; }

std::optional<PostMode> parse_post_mode(std::string_view text) {
  if (text == "none") return PostMode::none;
  if (text == "iobw+") return PostMode::iobw_plus;
  return std::nullopt;
}

void check_post_mode(TaggingScheme scheme, PostMode post) {
  if (post == PostMode::iobw_plus && scheme != TaggingScheme::IOBW)
    throw ConfigError("--post iobw+ requires --scheme IOBW, got " + std::string(to_string(scheme)));
}

std::vector<Span> spans_from_prediction(std::span<const Label> raw, TaggingScheme scheme,
                                        PostMode post, const Sentence& sentence,
                                        std::size_t sentence_index, const std::string& event_type,
                                        const ExpanderConfig& expander) {
  // Boundary label adjustment reads the raw predictions: its gap rule looks
  // for dangling I labels that the label fixer would otherwise reopen with B.
  LabelSequence labels = post == PostMode::iobw_plus ? adjust_labels(raw, scheme)
                                                     : repair(raw, scheme);
  std::vector<Span> spans;
  for (const auto& seg : decode(labels, scheme))
    spans.push_back({sentence_index, seg.start, seg.end, event_type});
  if (post == PostMode::iobw_plus) spans = expand_boundaries(spans, sentence, expander);
  return spans;
}

std::vector<Span> predict_spans(const CrfModel& model, const Document& doc, PostMode post,
                                const ExpanderConfig& expander) {
  check_post_mode(model.scheme, post);
  std::vector<Span> out;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const Sentence& sentence = doc.sentences[si];
    if (sentence.tokens.empty()) continue;
    auto raw = tag_sentence(model, sentence);
    auto spans = spans_from_prediction(raw, model.scheme, post, sentence, si, model.event_type, expander);
    out.insert(out.end(), spans.begin(), spans.end());
  }
  return out;
}

Document predict_document(const CrfModel& model, const Document& doc, PostMode post,
                          const ExpanderConfig& expander) {
  Document out;
  out.id = doc.id;
  out.sentences = doc.sentences;
  out.gold_spans = predict_spans(model, doc, post, expander);
  return out;
}

std::optional<ModelConfig> parse_model_config(std::string_view name) {
  if (name == "IOBW+") return ModelConfig{"IOBW+", TaggingScheme::IOBW, PostMode::iobw_plus};
  auto scheme = parse_scheme(name);
  if (!scheme) return std::nullopt;
  return ModelConfig{std::string(name), *scheme, PostMode::none};
}

}  // namespace cner
