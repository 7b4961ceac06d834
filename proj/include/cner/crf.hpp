#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cner/corpus.hpp"
#include "cner/features.hpp"
#include "cner/schemes.hpp"

namespace cner {

/// Row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Log-space scores of one sentence: node(t, y) and transition(prev, cur).
struct Lattice {
  Matrix node;        // length x labels
  Matrix transition;  // labels x labels

  std::size_t length() const { return node.rows(); }
  std::size_t labels() const { return node.cols(); }
  double path_score(std::span<const std::size_t> path) const;
};

struct Marginals {
  double log_z = 0.0;
  /// logZ recomputed from the backward pass.
  double log_z_backward = 0.0;
  Matrix node;                 // length x labels
  std::vector<Matrix> edge;    // (length-1) entries of labels x labels
};

Marginals forward_backward(const Lattice& lattice);

/// Highest-scoring path; ties go to the lowest label index.
std::vector<std::size_t> viterbi(const Lattice& lattice);

/// Feature string x label -> weight index, plus label bigrams.
class FeatureAlphabet {
 public:
  FeatureAlphabet() = default;
  FeatureAlphabet(std::vector<Label> labels, bool transitions);

  const std::vector<Label>& labels() const { return labels_; }
  std::size_t label_count() const { return labels_.size(); }
  bool transitions() const { return transitions_; }

  std::size_t attribute_count() const { return attributes_.size(); }
  const std::string& attribute(std::size_t id) const { return attributes_[id]; }
  /// Interns the attribute and returns its id.
  std::size_t add(const std::string& attribute);
  /// Attribute id or npos when unseen.
  std::size_t find(const std::string& attribute) const;

  std::size_t state_index(std::size_t attribute, std::size_t label) const {
    return attribute * labels_.size() + label;
  }
  std::size_t transition_offset() const { return attributes_.size() * labels_.size(); }
  std::size_t transition_index(std::size_t prev, std::size_t cur) const {
    return transition_offset() + prev * labels_.size() + cur;
  }
  std::size_t dimension() const {
    return transition_offset() + (transitions_ ? labels_.size() * labels_.size() : 0);
  }
  std::size_t label_index(Label label) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<Label> labels_;
  bool transitions_ = false;
  std::vector<std::string> attributes_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TrainerConfig {
  double C = 1.0;
  double eta = 1e-4;
  std::size_t max_iterations = 500;
  std::size_t lbfgs_memory = 10;
};

/// Training data for one event type: the corpus, the type, and how to read it.
struct TrainingSpec {
  std::string event_type;
  TaggingScheme scheme = TaggingScheme::IOB;
  bool transitions = true;
};

/// One sentence prepared for the learner: attribute ids per position and,
/// for training data, gold label indices.
struct Instance {
  std::vector<std::vector<std::size_t>> attributes;
  std::vector<std::size_t> labels;
};

struct CrfModel {
  FeatureAlphabet alphabet;
  std::vector<double> weights;
  TaggingScheme scheme = TaggingScheme::IOB;
  FeatureTemplate feature_template;
  std::string event_type;
  /// Post-processing mode recorded at training time ("none" or "iobw+").
  std::string post = "none";
};

struct IterationRecord {
  std::size_t iteration = 0;
  double objective = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
};

struct TrainResult {
  CrfModel model;
  std::vector<IterationRecord> log;
  bool converged = false;
};

FeatureAlphabet build_alphabet(std::span<const Document> corpus, const FeatureTemplate& tmpl,
                               TaggingScheme scheme, bool transitions);

/// Unseen attributes are dropped; gold labels are filled when `gold` is given.
Instance make_instance(const FeatureAlphabet& alphabet, const FeatureTemplate& tmpl,
                       const Sentence& sentence, const LabelSequence* gold = nullptr);

std::vector<Instance> make_instances(const FeatureAlphabet& alphabet, const FeatureTemplate& tmpl,
                                     std::span<const Document> corpus, const TrainingSpec& spec);

Lattice build_lattice(const FeatureAlphabet& alphabet, std::span<const double> weights,
                      const Instance& instance);

/// Negative log-likelihood plus ||w||^2 / (2C) and its gradient.
double objective_and_gradient(const FeatureAlphabet& alphabet, std::span<const Instance> data,
                              std::span<const double> weights, double C,
                              std::span<double> gradient);

TrainResult train(const TrainerConfig& config, std::span<const Document> corpus,
                  const FeatureTemplate& tmpl, const TrainingSpec& spec);

std::vector<LabelSequence> tag(const CrfModel& model, const Document& doc);
LabelSequence tag_sentence(const CrfModel& model, const Sentence& sentence);

std::string save_model(const CrfModel& model);
CrfModel load_model(std::string_view text);

}  // namespace cner
