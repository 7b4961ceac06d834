#include "cner/postprocess.hpp"

#include <algorithm>
#include <sstream>

#include "cner/error.hpp"
#include "cner/text_prep.hpp"
#include "util.hpp"

namespace cner {

ExpanderConfig parse_expander_config(std::string_view text) {
  ExpanderConfig config;
  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = detail::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(i + 1, "expected 'key = value'");
    auto key = detail::trim(line.substr(0, eq));
    std::set<std::string> values;
    for (auto v : detail::split(line.substr(eq + 1), ',')) {
      auto item = detail::trim(v);
      if (!item.empty()) values.emplace(item);
    }
    if (values.empty()) throw ParseError(i + 1, "empty list for '" + std::string(key) + "'");
    if (key == "noun_pos_tags") config.noun_pos_tags = std::move(values);
    else if (key == "np_chunk_tags") config.np_chunk_tags = std::move(values);
    else if (key == "determiner_lexicon") {
      config.determiner_lexicon.clear();
      for (const auto& v : values) config.determiner_lexicon.insert(detail::to_lower(v));
    } else if (key == "enabled_event_types") config.enabled_event_types = std::move(values);
    else throw ParseError(i + 1, "unknown key '" + std::string(key) + "'");
  }
  return config;
}

std::string format_expander_config(const ExpanderConfig& config) {
  std::ostringstream out;
  auto list = [&](std::string_view key, const std::set<std::string>& values) {
    out << key << " = ";
    bool first = true;
    for (const auto& v : values) {
      if (!first) out << ", ";
      out << v;
      first = false;
    }
    out << '\n';
  };
  list("noun_pos_tags", config.noun_pos_tags);
  list("np_chunk_tags", config.np_chunk_tags);
  list("determiner_lexicon", config.determiner_lexicon);
  list("enabled_event_types", config.enabled_event_types);
  return out.str();
}

namespace {

// One pass; returns true if anything changed.
bool adjust_once(LabelSequence& labels, TaggingScheme scheme) {
  LabelSequence before = labels;
  // Bridge a single O between an open segment and a dangling I-run.
  for (std::size_t i = 1; i + 1 < labels.size(); ++i) {
    const Label prev = labels[i - 1];
    if (labels[i] == Label::O && (prev == Label::B || prev == Label::I) && labels[i + 1] == Label::I)
      labels[i] = Label::I;
  }
  // Merge segments that touch.
  std::vector<Segment> merged;
  for (const auto& seg : lenient_decode(labels)) {
    if (!merged.empty() && merged.back().end == seg.start) merged.back().end = seg.end;
    else merged.push_back(seg);
  }
  labels = encode(merged, labels.size(), scheme);
  return labels != before;
}

}  // namespace

LabelSequence adjust_labels(std::span<const Label> labels, TaggingScheme scheme) {
  for (std::size_t t = 0; t < labels.size(); ++t)
    if (!in_alphabet(scheme, labels[t]))
      throw ValidityError(t, std::string(to_string(labels[t])) + " is not a " +
                                 std::string(to_string(scheme)) + " label");
  LabelSequence out(labels.begin(), labels.end());
  while (adjust_once(out, scheme)) {
  }
  return out;
}

std::vector<Span> expand_boundaries(std::span<const Span> spans, const Sentence& sentence,
                                    const ExpanderConfig& config) {
  std::vector<Span> out(spans.begin(), spans.end());
  sort_spans(out);

  auto qualifies = [&](std::size_t k) {
    const Token& tok = sentence.tokens[k];
    if (token_kind(tok.surface) == TokenKind::punctuation) return false;
    return config.noun_pos_tags.count(tok.pos) > 0 || config.np_chunk_tags.count(tok.chunk) > 0 ||
           config.determiner_lexicon.count(detail::to_lower(tok.surface)) > 0;
  };
  auto taken = [&](std::size_t self, std::size_t k) {
    for (std::size_t j = 0; j < out.size(); ++j)
      if (j != self && out[j].event_type == out[self].event_type &&
          out[j].sentence_index == out[self].sentence_index && out[j].start <= k && k < out[j].end)
        return true;
    return false;
  };

  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!config.enabled_event_types.count(out[i].event_type)) continue;
    while (out[i].start > 0 && qualifies(out[i].start - 1) && !taken(i, out[i].start - 1))
      --out[i].start;
    while (out[i].end < sentence.size() && qualifies(out[i].end) && !taken(i, out[i].end))
      ++out[i].end;
  }
  sort_spans(out);
  return out;
}

}  // namespace cner
