#include <cmath>
#include <sstream>

#include "cner/crf.hpp"
#include "cner/error.hpp"
#include "util.hpp"

namespace cner {
namespace {

constexpr std::string_view kMagic = "cner-crf-model";
constexpr int kFormatVersion = 1;
constexpr std::string_view kTransitionFeature = "B";

}  // namespace

std::string save_model(const CrfModel& model) {
  const auto& alphabet = model.alphabet;
  std::ostringstream out;
  out << kMagic << '\t' << kFormatVersion << '\n';
  out << "scheme\t" << to_string(model.scheme) << '\n';
  out << "event_type\t" << model.event_type << '\n';
  out << "post\t" << model.post << '\n';
  out << "transitions\t" << (alphabet.transitions() ? 1 : 0) << '\n';
  out << "labels\t" << format_labels(alphabet.labels()) << '\n';

  auto template_lines = detail::split_lines(model.feature_template.source);
  out << "template\t" << template_lines.size() << '\n';
  for (auto line : template_lines) out << line << '\n';

  out << "features\t" << alphabet.dimension() << '\n';
  const std::size_t L = alphabet.label_count();
  for (std::size_t a = 0; a < alphabet.attribute_count(); ++a)
    for (std::size_t y = 0; y < L; ++y) {
      const std::size_t i = alphabet.state_index(a, y);
      out << i << '\t' << alphabet.attribute(a) << '\t' << to_string(alphabet.labels()[y]) << '\t'
          << detail::format_double(model.weights[i]) << '\n';
    }
  if (alphabet.transitions())
    for (std::size_t p = 0; p < L; ++p)
      for (std::size_t c = 0; c < L; ++c) {
        const std::size_t i = alphabet.transition_index(p, c);
        out << i << '\t' << kTransitionFeature << '\t' << to_string(alphabet.labels()[p]) << ','
            << to_string(alphabet.labels()[c]) << '\t' << detail::format_double(model.weights[i])
            << '\n';
      }
  return out.str();
}

CrfModel load_model(std::string_view text) {
  auto lines = detail::split_lines(text);
  std::size_t pos = 0;
  auto next = [&](std::string_view key) -> std::string_view {
    if (pos >= lines.size()) throw ParseError(pos + 1, "unexpected end of model file");
    auto fields = detail::split(lines[pos], '\t');
    if (fields.size() != 2 || fields[0] != key)
      throw ParseError(pos + 1, "expected '" + std::string(key) + "'");
    ++pos;
    return fields[1];
  };

  auto version = next(kMagic);
  if (version != std::to_string(kFormatVersion))
    throw ParseError(1, "unsupported model format version '" + std::string(version) + "'");

  CrfModel model;
  auto scheme = parse_scheme(next("scheme"));
  if (!scheme) throw ParseError(pos, "unknown scheme");
  model.scheme = *scheme;
  model.event_type = std::string(next("event_type"));
  model.post = std::string(next("post"));
  auto transitions = next("transitions");
  if (transitions != "0" && transitions != "1") throw ParseError(pos, "bad transitions flag");

  std::vector<Label> labels;
  for (auto s : detail::split_whitespace(next("labels"))) {
    auto l = parse_label(s);
    if (!l) throw ParseError(pos, "unknown label '" + std::string(s) + "'");
    labels.push_back(*l);
  }
  if (labels != scheme_labels(model.scheme)) throw ParseError(pos, "label list does not match scheme");

  auto n_template = detail::parse_int<std::size_t>(next("template"));
  if (!n_template || pos + *n_template > lines.size()) throw ParseError(pos, "bad template length");
  std::string source;
  for (std::size_t k = 0; k < *n_template; ++k) {
    source += lines[pos++];
    source += '\n';
  }
  model.feature_template = parse_template(source);

  auto dim = detail::parse_int<std::size_t>(next("features"));
  if (!dim) throw ParseError(pos, "bad feature count");
  model.alphabet = FeatureAlphabet(labels, transitions == "1");
  const std::size_t L = labels.size();
  model.weights.assign(*dim, 0.0);
  const std::size_t transition_count = model.alphabet.transitions() ? L * L : 0;
  if (*dim < transition_count || (*dim - transition_count) % L != 0)
    throw ParseError(pos, "feature count does not fit the label set");

  for (std::size_t i = 0; i < *dim; ++i, ++pos) {
    if (pos >= lines.size()) throw ParseError(pos + 1, "model file ends before all features");
    auto fields = detail::split(lines[pos], '\t');
    if (fields.size() != 4) throw ParseError(pos + 1, "feature line needs 4 fields");
    auto index = detail::parse_int<std::size_t>(fields[0]);
    auto weight = detail::parse_double(fields[3]);
    if (!index || *index != i || !weight || !std::isfinite(*weight))
      throw ParseError(pos + 1, "bad feature line");
    model.weights[i] = *weight;

    if (i < *dim - transition_count) {
      const std::size_t attr = model.alphabet.add(std::string(fields[1]));
      if (attr != i / L || to_string(labels[i % L]) != fields[2])
        throw ParseError(pos + 1, "feature index does not match its attribute and label");
    } else if (fields[1] != kTransitionFeature) {
      throw ParseError(pos + 1, "expected a transition feature");
    }
  }
  if (model.alphabet.dimension() != *dim) throw ParseError(pos, "feature count mismatch");
  return model;
}

}  // namespace cner
