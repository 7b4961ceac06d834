#include "cner/crossval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "cner/error.hpp"
#include "cner/evaluation.hpp"
#include "cner/pipeline.hpp"
#include "util.hpp"

namespace cner {
namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> column(const RunMatrix& m, const std::string& type, const std::string& model,
                           bool strict) {
  std::vector<double> out;
  auto it = m.cells.find({type, model});
  if (it == m.cells.end()) return out;
  for (const auto& s : it->second) out.push_back(strict ? s.strict_f1 : s.lenient_f1);
  return out;
}

double stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::string format_p(double p) {
  if (p == 0.0) return "0";
  if (p >= 1e-3) return detail::format_fixed(p, 4);
  return detail::format_scientific(p, 2);
}

std::string format_stat(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return detail::format_fixed(v, 4);
}

}  // namespace

std::vector<double> RunMatrix::strict(const std::string& type, const std::string& model) const {
  return column(*this, type, model, true);
}

std::vector<double> RunMatrix::lenient(const std::string& type, const std::string& model) const {
  return column(*this, type, model, false);
}

std::vector<std::size_t> fold_sizes(std::size_t n, std::size_t folds) {
  std::vector<std::size_t> sizes(folds, n / folds);
  for (std::size_t i = 0; i < n % folds; ++i) ++sizes[i];
  return sizes;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n_documents, std::size_t folds,
                                                 std::uint64_t seed, std::string_view event_type,
                                                 std::size_t repeat) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (n_documents < folds)
    throw ConfigError("cannot split " + std::to_string(n_documents) + " documents into " +
                      std::to_string(folds) + " folds");
  std::vector<std::size_t> order(n_documents);
  for (std::size_t i = 0; i < n_documents; ++i) order[i] = i;
  SplitMix64 rng(mix_seed(mix_seed(seed, fnv1a(event_type)), repeat));
  shuffle(order, rng);

  std::vector<std::vector<std::size_t>> out;
  std::size_t pos = 0;
  for (auto size : fold_sizes(n_documents, folds)) {
    std::vector<std::size_t> fold(order.begin() + static_cast<long>(pos),
                                  order.begin() + static_cast<long>(pos + size));
    std::sort(fold.begin(), fold.end());
    out.push_back(std::move(fold));
    pos += size;
  }
  return out;
}

RunMatrix crossval(std::span<const Document> corpus, const CvConfig& cv,
                   const TrainerConfig& trainer, const FeatureTemplate& tmpl,
                   const ExpanderConfig& expander) {
  if (corpus.empty()) throw ConfigError("cross-validation needs a non-empty corpus");
  if (cv.repeats == 0) throw ConfigError("repeats must be positive");
  if (cv.event_types.empty() || cv.models.empty())
    throw ConfigError("cross-validation needs event types and models");

  std::vector<ModelConfig> models;
  for (const auto& name : cv.models) {
    auto m = parse_model_config(name);
    if (!m) throw ConfigError("unknown model configuration '" + name + "'");
    models.push_back(*m);
  }
  // Schemes to train, in first-use order; IOBW+ reuses the IOBW model.
  std::vector<TaggingScheme> schemes;
  for (const auto& m : models)
    if (std::find(schemes.begin(), schemes.end(), m.scheme) == schemes.end())
      schemes.push_back(m.scheme);

  struct Job {
    std::string type;
    std::size_t repeat;
    std::size_t fold;
    std::vector<std::size_t> test;
  };
  std::vector<Job> jobs;
  for (const auto& type : cv.event_types)
    for (std::size_t r = 0; r < cv.repeats; ++r) {
      auto folds = make_folds(corpus.size(), cv.folds, cv.seed, type, r);
      for (std::size_t f = 0; f < folds.size(); ++f) jobs.push_back({type, r, f, folds[f]});
    }

  // results[job][model]
  std::vector<std::vector<FoldScore>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());

  auto run_job = [&](std::size_t j) {
    const Job& job = jobs[j];
    std::vector<bool> in_test(corpus.size(), false);
    for (auto d : job.test) in_test[d] = true;
    std::vector<Document> train_docs, test_docs;
    for (std::size_t d = 0; d < corpus.size(); ++d)
      (in_test[d] ? test_docs : train_docs).push_back(corpus[d]);

    std::vector<FoldScore> scores(models.size());
    for (auto scheme : schemes) {
      TrainingSpec spec{job.type, scheme, cv.transitions};
      CrfModel model = train(trainer, train_docs, tmpl, spec).model;
      for (std::size_t mi = 0; mi < models.size(); ++mi) {
        if (models[mi].scheme != scheme) continue;
        std::vector<Document> predicted;
        predicted.reserve(test_docs.size());
        for (const auto& doc : test_docs)
          predicted.push_back(predict_document(model, doc, models[mi].post, expander));
        auto report = evaluate(test_docs, predicted, {job.type});
        scores[mi] = {job.repeat, job.fold, report.scores(job.type, MatchMode::strict).f1,
                      report.scores(job.type, MatchMode::lenient).f1};
      }
    }
    results[j] = std::move(scores);
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(cv.jobs, jobs.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        run_job(j);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  RunMatrix matrix;
  matrix.event_types = cv.event_types;
  matrix.models = cv.models;
  for (std::size_t j = 0; j < jobs.size(); ++j)
    for (std::size_t mi = 0; mi < models.size(); ++mi)
      matrix.cells[{jobs[j].type, cv.models[mi]}].push_back(results[j][mi]);
  return matrix;
}

std::string format_run_matrix(const RunMatrix& matrix) {
  std::ostringstream out;
  out << "event\tmodel\trepeat\tfold\tstrict_f1\tlenient_f1\n";
  for (const auto& type : matrix.event_types)
    for (const auto& model : matrix.models) {
      auto it = matrix.cells.find({type, model});
      if (it == matrix.cells.end()) continue;
      for (const auto& s : it->second)
        out << type << '\t' << model << '\t' << s.repeat << '\t' << s.fold << '\t'
            << detail::format_double(s.strict_f1) << '\t' << detail::format_double(s.lenient_f1)
            << '\n';
    }
  return out.str();
}

RunMatrix parse_run_matrix(std::string_view text) {
  RunMatrix m;
  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i].starts_with("event\t")) continue;
    auto f = detail::split(lines[i], '\t');
    if (f.size() != 6) throw ParseError(i + 1, "run matrix rows need 6 fields");
    auto repeat = detail::parse_int<std::size_t>(f[2]);
    auto fold = detail::parse_int<std::size_t>(f[3]);
    auto s = detail::parse_double(f[4]);
    auto l = detail::parse_double(f[5]);
    if (!repeat || !fold || !s || !l) throw ParseError(i + 1, "bad run matrix row");
    std::string type(f[0]), model(f[1]);
    if (std::find(m.event_types.begin(), m.event_types.end(), type) == m.event_types.end())
      m.event_types.push_back(type);
    if (std::find(m.models.begin(), m.models.end(), model) == m.models.end())
      m.models.push_back(model);
    m.cells[{type, model}].push_back({*repeat, *fold, *s, *l});
  }
  return m;
}

std::string experiment_report(const RunMatrix& matrix) {
  std::ostringstream out;
  for (const auto& type : matrix.event_types) {
    for (bool strict : {true, false}) {
      out << "== " << type << " / " << (strict ? "strict" : "lenient") << " F1 ==\n";
      std::vector<std::vector<double>> groups;
      for (const auto& model : matrix.models) {
        auto values = column(matrix, type, model, strict);
        out << std::left << std::setw(8) << model << std::right << " mean "
            << detail::format_fixed(mean(values), 4) << "  sd "
            << detail::format_fixed(stddev(values), 4) << "  n " << values.size() << '\n';
        groups.push_back(std::move(values));
      }

      bool balanced = groups.size() >= 2 && groups.front().size() >= 2 &&
                      std::all_of(groups.begin(), groups.end(),
                                  [&](const auto& g) { return g.size() == groups.front().size(); });
      if (balanced) {
        auto a = anova_oneway(groups);
        out << "ANOVA F(" << a.df1 << ", " << a.df2 << ") = " << format_stat(a.statistic)
            << "  p = " << format_p(a.p_value) << (a.degenerate ? "  [zero variance]" : "") << '\n';
      } else {
        out << "ANOVA n/a\n";
      }

      out << "pairwise t-tests (two-tailed, pooled variance):\n";
      for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
          out << "  " << matrix.models[i] << " vs " << matrix.models[j];
          if (groups[i].size() < 2 || groups[j].size() < 2) {
            out << "  n/a\n";
            continue;
          }
          auto t = ttest_unpaired(groups[i], groups[j]);
          out << "  t(" << t.df1 << ") = " << format_stat(t.statistic) << "  p = "
              << format_p(t.p_value) << (t.degenerate ? "  [zero variance]" : "") << '\n';
        }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace cner
