#include "cner/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cner/error.hpp"
#include "cner/lbfgs.hpp"

namespace cner {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

double Lattice::path_score(std::span<const std::size_t> path) const {
  double s = 0.0;
  for (std::size_t t = 0; t < path.size(); ++t) {
    s += node(t, path[t]);
    if (t > 0) s += transition(path[t - 1], path[t]);
  }
  return s;
}

Marginals forward_backward(const Lattice& lattice) {
  const std::size_t n = lattice.length();
  const std::size_t L = lattice.labels();
  Marginals out;
  out.node = Matrix(n, L);
  if (n == 0) return out;

  Matrix alpha(n, L), beta(n, L, 0.0);
  std::vector<double> buf(L);

  for (std::size_t y = 0; y < L; ++y) alpha(0, y) = lattice.node(0, y);
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t p = 0; p < L; ++p) buf[p] = alpha(t - 1, p) + lattice.transition(p, y);
      alpha(t, y) = lattice.node(t, y) + log_sum_exp(buf);
    }
  }
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t c = 0; c < L; ++c)
        buf[c] = lattice.transition(y, c) + lattice.node(t + 1, c) + beta(t + 1, c);
      beta(t, y) = log_sum_exp(buf);
    }
  }

  out.log_z = log_sum_exp(alpha.row(n - 1));
  for (std::size_t y = 0; y < L; ++y) buf[y] = lattice.node(0, y) + beta(0, y);
  out.log_z_backward = log_sum_exp(buf);

  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t y = 0; y < L; ++y) out.node(t, y) = std::exp(alpha(t, y) + beta(t, y) - out.log_z);

  out.edge.reserve(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    Matrix e(L, L);
    for (std::size_t p = 0; p < L; ++p)
      for (std::size_t c = 0; c < L; ++c)
        e(p, c) = std::exp(alpha(t, p) + lattice.transition(p, c) + lattice.node(t + 1, c) +
                           beta(t + 1, c) - out.log_z);
    out.edge.push_back(std::move(e));
  }
  return out;
}

std::vector<std::size_t> viterbi(const Lattice& lattice) {
  const std::size_t n = lattice.length();
  const std::size_t L = lattice.labels();
  std::vector<std::size_t> path(n, 0);
  if (n == 0 || L == 0) return path;

  Matrix delta(n, L);
  std::vector<std::size_t> back(n * L, 0);
  for (std::size_t y = 0; y < L; ++y) delta(0, y) = lattice.node(0, y);
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      std::size_t best = 0;
      double best_score = delta(t - 1, 0) + lattice.transition(0, y);
      for (std::size_t p = 1; p < L; ++p) {
        double s = delta(t - 1, p) + lattice.transition(p, y);
        if (s > best_score) {
          best_score = s;
          best = p;
        }
      }
      delta(t, y) = best_score + lattice.node(t, y);
      back[t * L + y] = best;
    }
  }
  std::size_t last = 0;
  for (std::size_t y = 1; y < L; ++y)
    if (delta(n - 1, y) > delta(n - 1, last)) last = y;
  path[n - 1] = last;
  for (std::size_t t = n - 1; t > 0; --t) path[t - 1] = back[t * L + path[t]];
  return path;
}

FeatureAlphabet::FeatureAlphabet(std::vector<Label> labels, bool transitions)
    : labels_(std::move(labels)), transitions_(transitions) {}

std::size_t FeatureAlphabet::add(const std::string& attribute) {
  auto [it, inserted] = index_.try_emplace(attribute, attributes_.size());
  if (inserted) attributes_.push_back(attribute);
  return it->second;
}

std::size_t FeatureAlphabet::find(const std::string& attribute) const {
  auto it = index_.find(attribute);
  return it == index_.end() ? npos : it->second;
}

std::size_t FeatureAlphabet::label_index(Label label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error("label " + std::string(to_string(label)) + " not in model");
  return static_cast<std::size_t>(it - labels_.begin());
}

FeatureAlphabet build_alphabet(std::span<const Document> corpus, const FeatureTemplate& tmpl,
                               TaggingScheme scheme, bool transitions) {
  FeatureAlphabet alphabet(scheme_labels(scheme), transitions);
  bool any_token = false;
  for (const auto& doc : corpus) {
    for (const auto& sentence : doc.sentences) {
      if (sentence.tokens.empty()) continue;
      any_token = true;
      auto table = build_feature_table(sentence);
      for (std::size_t t = 0; t < sentence.size(); ++t)
        for (const auto& f : expand(tmpl, table, t)) alphabet.add(f);
    }
  }
  if (!any_token) throw Error("cannot build a feature alphabet from an empty corpus");
  return alphabet;
}

Instance make_instance(const FeatureAlphabet& alphabet, const FeatureTemplate& tmpl,
                       const Sentence& sentence, const LabelSequence* gold) {
  Instance inst;
  auto table = build_feature_table(sentence);
  inst.attributes.resize(sentence.size());
  for (std::size_t t = 0; t < sentence.size(); ++t) {
    for (const auto& f : expand(tmpl, table, t)) {
      auto id = alphabet.find(f);
      if (id != FeatureAlphabet::npos) inst.attributes[t].push_back(id);
    }
  }
  if (gold) {
    inst.labels.reserve(gold->size());
    for (Label l : *gold) inst.labels.push_back(alphabet.label_index(l));
  }
  return inst;
}

std::vector<Instance> make_instances(const FeatureAlphabet& alphabet, const FeatureTemplate& tmpl,
                                     std::span<const Document> corpus, const TrainingSpec& spec) {
  std::vector<Instance> out;
  for (const auto& doc : corpus) {
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      const Sentence& sentence = doc.sentences[si];
      if (sentence.tokens.empty()) continue;
      // IO merges touching mentions; the other schemes reproduce them exactly.
      LabelSequence gold = encode_merging(segments_of(doc.gold_spans, si, spec.event_type),
                                          sentence.size(), spec.scheme);
      out.push_back(make_instance(alphabet, tmpl, sentence, &gold));
    }
  }
  return out;
}

Lattice build_lattice(const FeatureAlphabet& alphabet, std::span<const double> weights,
                      const Instance& instance) {
  const std::size_t n = instance.attributes.size();
  const std::size_t L = alphabet.label_count();
  Lattice lattice{Matrix(n, L, 0.0), Matrix(L, L, 0.0)};
  for (std::size_t t = 0; t < n; ++t) {
    auto row = lattice.node.row(t);
    for (std::size_t a : instance.attributes[t]) {
      const double* w = weights.data() + alphabet.state_index(a, 0);
      for (std::size_t y = 0; y < L; ++y) row[y] += w[y];
    }
  }
  if (alphabet.transitions())
    for (std::size_t p = 0; p < L; ++p)
      for (std::size_t c = 0; c < L; ++c) lattice.transition(p, c) = weights[alphabet.transition_index(p, c)];
  return lattice;
}

double objective_and_gradient(const FeatureAlphabet& alphabet, std::span<const Instance> data,
                              std::span<const double> weights, double C,
                              std::span<double> gradient) {
  const std::size_t L = alphabet.label_count();
  std::fill(gradient.begin(), gradient.end(), 0.0);
  double value = 0.0;

  for (const auto& inst : data) {
    const std::size_t n = inst.attributes.size();
    if (n == 0) continue;
    Lattice lattice = build_lattice(alphabet, weights, inst);
    Marginals m = forward_backward(lattice);
    value += m.log_z - lattice.path_score(inst.labels);

    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t a : inst.attributes[t]) {
        double* g = gradient.data() + alphabet.state_index(a, 0);
        for (std::size_t y = 0; y < L; ++y) g[y] += m.node(t, y);
        g[inst.labels[t]] -= 1.0;
      }
    }
    if (alphabet.transitions()) {
      for (std::size_t t = 0; t + 1 < n; ++t) {
        for (std::size_t p = 0; p < L; ++p)
          for (std::size_t c = 0; c < L; ++c)
            gradient[alphabet.transition_index(p, c)] += m.edge[t](p, c);
        gradient[alphabet.transition_index(inst.labels[t], inst.labels[t + 1])] -= 1.0;
      }
    }
  }

  double sq = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sq += weights[i] * weights[i];
    gradient[i] += weights[i] / C;
  }
  value += sq / (2.0 * C);
  if (!std::isfinite(value))
    throw NumericError("objective became non-finite (value " + std::to_string(value) + ")");
  return value;
}

TrainResult train(const TrainerConfig& config, std::span<const Document> corpus,
                  const FeatureTemplate& tmpl, const TrainingSpec& spec) {
  if (!(config.C > 0.0) || !(config.eta > 0.0) || config.max_iterations == 0 ||
      config.lbfgs_memory == 0)
    throw ConfigError("trainer parameters must be positive");
  if (corpus.empty()) throw Error("cannot train on an empty corpus");

  TrainResult result;
  CrfModel& model = result.model;
  model.alphabet = build_alphabet(corpus, tmpl, spec.scheme, spec.transitions || tmpl.transitions);
  model.scheme = spec.scheme;
  model.feature_template = tmpl;
  model.event_type = spec.event_type;

  const auto data = make_instances(model.alphabet, tmpl, corpus, spec);
  LbfgsOptions options;
  options.memory = config.lbfgs_memory;
  options.max_iterations = config.max_iterations;
  options.relative_tolerance = config.eta;

  const FeatureAlphabet& alphabet = model.alphabet;
  auto objective = [&](std::span<const double> w, std::span<double> g) {
    return objective_and_gradient(alphabet, data, w, config.C, g);
  };
  auto fit = lbfgs_minimize(objective, std::vector<double>(alphabet.dimension(), 0.0), options);

  model.weights = std::move(fit.x);
  result.converged = fit.converged;
  for (const auto& h : fit.history)
    result.log.push_back({h.iteration, h.value, h.gradient_norm, h.step});
  return result;
}

LabelSequence tag_sentence(const CrfModel& model, const Sentence& sentence) {
  if (sentence.tokens.empty()) return {};
  Instance inst = make_instance(model.alphabet, model.feature_template, sentence);
  auto path = viterbi(build_lattice(model.alphabet, model.weights, inst));
  LabelSequence out;
  out.reserve(path.size());
  for (auto y : path) out.push_back(model.alphabet.labels()[y]);
  return out;
}

std::vector<LabelSequence> tag(const CrfModel& model, const Document& doc) {
  std::vector<LabelSequence> out;
  out.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) out.push_back(tag_sentence(model, s));
  return out;
}

}  // namespace cner
