#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cner/corpus.hpp"
#include "cner/crf.hpp"
#include "cner/features.hpp"
#include "cner/postprocess.hpp"
#include "cner/stats.hpp"

namespace cner {

struct CvConfig {
  std::size_t repeats = 5;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::vector<std::string> models{"IO", "IOB", "IOBW", "IOBW+"};
  std::vector<std::string> event_types{"PROBLEM", "TEST", "TREATMENT"};
  bool transitions = true;
  std::size_t jobs = 1;
};

struct FoldScore {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  double strict_f1 = 0.0;
  double lenient_f1 = 0.0;
};

/// Scores per (event type, model) in (repeat, fold) order.
struct RunMatrix {
  std::vector<std::string> event_types;
  std::vector<std::string> models;
  std::map<std::pair<std::string, std::string>, std::vector<FoldScore>> cells;

  std::vector<double> strict(const std::string& type, const std::string& model) const;
  std::vector<double> lenient(const std::string& type, const std::string& model) const;
};

/// Sizes of `folds` near-equal folds over n items; the first n % folds get one extra.
std::vector<std::size_t> fold_sizes(std::size_t n, std::size_t folds);

/// Document indices of each test fold for one (event type, repeat).
std::vector<std::vector<std::size_t>> make_folds(std::size_t n_documents, std::size_t folds,
                                                 std::uint64_t seed, std::string_view event_type,
                                                 std::size_t repeat);

RunMatrix crossval(std::span<const Document> corpus, const CvConfig& cv,
                   const TrainerConfig& trainer, const FeatureTemplate& tmpl,
                   const ExpanderConfig& expander = {});

/// event<TAB>model<TAB>repeat<TAB>fold<TAB>strict_f1<TAB>lenient_f1
std::string format_run_matrix(const RunMatrix& matrix);
RunMatrix parse_run_matrix(std::string_view text);

/// Per event type and criterion: model means, one-way ANOVA across models,
/// and every pairwise two-tailed unpaired t-test.
std::string experiment_report(const RunMatrix& matrix);

}  // namespace cner
