// cner: train, tag, evaluate and cross-validate clinical event taggers.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "cner/corpus.hpp"
#include "cner/crf.hpp"
#include "cner/crossval.hpp"
#include "cner/error.hpp"
#include "cner/evaluation.hpp"
#include "cner/features.hpp"
#include "cner/pipeline.hpp"
#include "cner/synth.hpp"

namespace {

using namespace cner;

std::string read_file(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(what + " not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

FeatureTemplate load_template(const std::string& path) {
  if (path.empty()) return parse_template(clinical_template_text());
  return parse_template(read_file(path, "template"));
}

TaggingScheme scheme_from(const std::string& name) {
  auto s = parse_scheme(name);
  if (!s) throw ConfigError("unknown scheme '" + name + "'");
  return *s;
}

PostMode post_from(const std::string& name) {
  auto p = parse_post_mode(name);
  if (!p) throw ConfigError("unknown post-processing mode '" + name + "'");
  return *p;
}

ExpanderConfig load_expander(const std::string& path) {
  if (path.empty()) return {};
  return parse_expander_config(read_file(path, "expander configuration"));
}

struct TrainerFlags {
  double C = 1.0;
  double eta = 1e-4;
  std::size_t max_iter = 500;
  bool no_transitions = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--C", C, "L2 regularization strength (larger = weaker)")->capture_default_str();
    cmd->add_option("--eta", eta, "relative convergence tolerance")->capture_default_str();
    cmd->add_option("--max-iter", max_iter, "maximum L-BFGS iterations")->capture_default_str();
    cmd->add_flag("--no-transitions", no_transitions, "drop label-bigram features");
  }
  TrainerConfig config() const {
    TrainerConfig c;
    c.C = C;
    c.eta = eta;
    c.max_iterations = max_iter;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clinical event boundary identification with linear-chain CRFs"};
  app.require_subcommand(1);

  std::string output;
  std::uint64_t seed = 0;

  // train
  auto* train_cmd = app.add_subcommand("train", "train a CRF for one event type");
  std::string corpus_path, template_path, scheme_name = "IOB", post_name = "none", event_type;
  TrainerFlags trainer;
  train_cmd->add_option("--corpus", corpus_path, "training corpus (column format)")->required();
  train_cmd->add_option("--type", event_type, "event type to learn (default: the only type present)");
  train_cmd->add_option("--scheme", scheme_name, "IO, IOB, IOBW or IOBEW")->capture_default_str();
  train_cmd->add_option("--template", template_path, "feature template (default: built-in 31-rule template)");
  train_cmd->add_option("--post", post_name, "post-processing recorded in the model: none or iobw+")
      ->capture_default_str();
  train_cmd->add_option("--seed", seed, "unused by training; accepted for uniformity");
  train_cmd->add_option("-o,--output", output, "model file (default: stdout)");
  trainer.add(train_cmd);

  // tag
  auto* tag_cmd = app.add_subcommand("tag", "label a corpus with a trained model");
  std::string model_path, expander_path, tag_post;
  tag_cmd->add_option("--model", model_path, "model file")->required();
  tag_cmd->add_option("--corpus", corpus_path, "corpus to tag")->required();
  tag_cmd->add_option("--post", tag_post, "override the model's post-processing: none or iobw+");
  tag_cmd->add_option("--expander", expander_path, "boundary expander configuration");
  tag_cmd->add_option("-o,--output", output, "output column file (default: stdout)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "strict and lenient span scores");
  std::string gold_path, system_path;
  std::vector<std::string> eval_types;
  eval_cmd->add_option("--gold", gold_path, "gold corpus")->required();
  eval_cmd->add_option("--system", system_path, "system corpus")->required();
  eval_cmd->add_option("--type", eval_types, "event types to score (default: all)");
  eval_cmd->add_option("-o,--output", output, "report file (default: stdout)");

  // crossval
  auto* cv_cmd = app.add_subcommand("crossval", "repeated k-fold cross-validation with ANOVA and t-tests");
  CvConfig cv;
  std::size_t synth_docs = 0;
  std::string profile_path, report_path;
  cv_cmd->add_option("--corpus", corpus_path, "corpus (column format)");
  cv_cmd->add_option("--synth-docs", synth_docs, "generate a synthetic corpus of N documents instead");
  cv_cmd->add_option("--profile", profile_path, "synthetic profile file");
  cv_cmd->add_option("--types", cv.event_types, "event types")->capture_default_str();
  cv_cmd->add_option("--models", cv.models, "IO, IOB, IOBW, IOBEW, IOBW+")->capture_default_str();
  cv_cmd->add_option("--repeats", cv.repeats, "repetitions")->capture_default_str();
  cv_cmd->add_option("--folds", cv.folds, "folds per repetition")->capture_default_str();
  cv_cmd->add_option("--seed", seed, "seed for shuffles and synthetic data")->capture_default_str();
  cv_cmd->add_option("--jobs", cv.jobs, "parallel fold trainings")->capture_default_str();
  cv_cmd->add_option("--template", template_path, "feature template");
  cv_cmd->add_option("--expander", expander_path, "boundary expander configuration");
  cv_cmd->add_option("-o,--output", output, "run matrix TSV (default: stdout)");
  cv_cmd->add_option("--report", report_path, "report file (default: appended to stdout)");
  trainer.add(cv_cmd);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic annotated corpus");
  std::size_t n_docs = 100;
  synth_cmd->add_option("--docs", n_docs, "number of documents")->capture_default_str();
  synth_cmd->add_option("--seed", seed, "generator seed")->capture_default_str();
  synth_cmd->add_option("--profile", profile_path, "profile file (default: built-in)");
  synth_cmd->add_option("--scheme", scheme_name, "label scheme of the output")->capture_default_str();
  synth_cmd->add_option("-o,--output", output, "output column file (default: stdout)");
  bool dump_profile = false;
  synth_cmd->add_flag("--print-profile", dump_profile, "print the profile instead of generating");

  // profile
  auto* profile_cmd = app.add_subcommand("profile", "corpus profile statistics");
  profile_cmd->add_option("--corpus", corpus_path, "corpus")->required();
  profile_cmd->add_option("-o,--output", output, "report file (default: stdout)");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "ANOVA and t-test report for a run matrix");
  std::string matrix_path;
  stats_cmd->add_option("--matrix", matrix_path, "run matrix TSV from crossval")->required();
  stats_cmd->add_option("-o,--output", output, "report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train_cmd) {
      const auto scheme = scheme_from(scheme_name);
      const auto post = post_from(post_name);
      check_post_mode(scheme, post);
      auto tmpl = load_template(template_path);
      auto docs = parse_column_file(read_file(corpus_path, "corpus"));
      if (event_type.empty()) {
        auto types = event_types_of(docs);
        if (types.size() != 1) throw ConfigError("corpus has " + std::to_string(types.size()) +
                                                 " event types; choose one with --type");
        event_type = types.front();
      }
      auto result = train(trainer.config(), docs, tmpl, {event_type, scheme, !trainer.no_transitions});
      result.model.post = std::string(to_string(post));
      std::cerr << "trained " << event_type << " " << scheme_name << ": "
                << result.model.alphabet.dimension() << " weights, " << result.log.size()
                << " iterations" << (result.converged ? "" : " (iteration limit)") << '\n';
      write_output(output, save_model(result.model));
    } else if (*tag_cmd) {
      auto model = load_model(read_file(model_path, "model"));
      auto post = post_from(tag_post.empty() ? model.post : tag_post);
      check_post_mode(model.scheme, post);
      auto expander = load_expander(expander_path);
      auto docs = parse_column_file(read_file(corpus_path, "corpus"));
      if (docs.empty()) {
        write_output(output, "");
        return 0;
      }
      std::vector<Document> predicted;
      for (const auto& d : docs) predicted.push_back(predict_document(model, d, post, expander));
      WriteOptions opts;
      opts.event_types = {model.event_type};
      write_output(output, write_column_file(predicted, model.scheme, opts));
    } else if (*eval_cmd) {
      auto gold = parse_column_file(read_file(gold_path, "gold corpus"));
      auto system = parse_column_file(read_file(system_path, "system corpus"));
      write_output(output, evaluate(gold, system, eval_types).format());
    } else if (*cv_cmd) {
      auto tmpl = load_template(template_path);
      auto expander = load_expander(expander_path);
      std::vector<Document> docs;
      if (synth_docs > 0) {
        auto profile = profile_path.empty() ? default_profile()
                                            : parse_synth_profile(read_file(profile_path, "profile"));
        docs = generate(profile, seed, synth_docs);
      } else if (!corpus_path.empty()) {
        docs = parse_column_file(read_file(corpus_path, "corpus"));
      } else {
        throw ConfigError("crossval needs --corpus or --synth-docs");
      }
      cv.seed = seed;
      cv.transitions = !trainer.no_transitions;
      auto matrix = crossval(docs, cv, trainer.config(), tmpl, expander);
      auto tsv = format_run_matrix(matrix);
      auto report = experiment_report(matrix);
      if (report_path.empty()) {
        write_output(output, tsv);
        std::cout << (output.empty() || output == "-" ? "\n" : "") << report;
      } else {
        write_output(output, tsv);
        write_output(report_path, report);
      }
    } else if (*synth_cmd) {
      auto profile = profile_path.empty() ? default_profile()
                                          : parse_synth_profile(read_file(profile_path, "profile"));
      if (dump_profile) {
        write_output(output, format_synth_profile(profile));
        return 0;
      }
      auto docs = generate(profile, seed, n_docs);
      write_output(output, write_column_file(docs, scheme_from(scheme_name)));
    } else if (*profile_cmd) {
      auto docs = parse_column_file(read_file(corpus_path, "corpus"));
      write_output(output, format_profile(compute_profile(docs)));
    } else if (*stats_cmd) {
      auto matrix = parse_run_matrix(read_file(matrix_path, "run matrix"));
      write_output(output, experiment_report(matrix));
    }
  } catch (const ConfigError& e) {
    std::cerr << "cner: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cner: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
