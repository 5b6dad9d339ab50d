// Command-line front end: score, evaluate, sweep, validate.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "xlqe/commands.hpp"

namespace {

struct ScoreFlags {
  std::string variant = "base";
  double penalty = 0.8;
  double lambda = 0.01;
  std::string measure = "f";
  bool normalize = false;
  std::string gen_score_sign = "as_is";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  void attach(CLI::App& app) {
    app.add_option("--variant", variant, "Scoring variant")
        ->check(CLI::IsMember({"base", "align", "ppl", "align+ppl"}))
        ->capture_default_str();
    app.add_option("--penalty", penalty, "Weight of unaligned cells in the alignment mask")
        ->capture_default_str();
    app.add_option("--lambda", lambda, "Generation-score interpolation weight")
        ->capture_default_str();
    app.add_option("--measure", measure, "Which of F, P or R is reported")
        ->check(CLI::IsMember({"f", "p", "r"}))
        ->capture_default_str();
    app.add_flag("--normalize", normalize, "Use cosine instead of dot-product similarity");
    app.add_option("--gen-score-sign", gen_score_sign, "Sign applied to gen_score before mixing")
        ->check(CLI::IsMember({"as_is", "negated"}))
        ->capture_default_str();
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  }

  xlqe::ScoreConfig config() const {
    xlqe::ScoreConfig c;
    c.variant = xlqe::parse_variant(variant);
    c.penalty_a = penalty;
    c.lambda = lambda;
    c.measure = xlqe::parse_measure(measure);
    c.normalize_embeddings = normalize;
    c.gen_score_sign = xlqe::parse_gen_score_sign(gen_score_sign);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference-free translation quality estimation from contextual embeddings"};
  app.require_subcommand(1);

  auto* score = app.add_subcommand("score", "Score every pair of an interchange file");
  std::string score_input, score_output;
  ScoreFlags score_flags;
  score->add_option("--input", score_input, "Interchange file")->required();
  score->add_option("--output", score_output, "Score TSV")->required();
  score_flags.attach(*score);

  auto* evaluate = app.add_subcommand("evaluate", "Correlate a score file with DA scores");
  std::string eval_scores, eval_metric = "both";
  std::optional<std::string> eval_gold, eval_input, eval_output;
  evaluate->add_option("--scores", eval_scores, "Score TSV")->required();
  evaluate->add_option("--gold", eval_gold, "DA TSV (id, da)");
  evaluate->add_option("--input", eval_input, "Interchange file with embedded DA scores");
  evaluate->add_option("--metric", eval_metric)
      ->check(CLI::IsMember({"pearson", "kendall", "both"}))
      ->capture_default_str();
  evaluate->add_option("--output", eval_output, "Also write the report here");

  auto* sweep = app.add_subcommand("sweep", "Correlation as a function of lambda or penalty");
  std::string sweep_input, sweep_output, sweep_param, sweep_metric = "pearson";
  std::optional<std::string> sweep_gold;
  std::vector<double> sweep_values;
  std::optional<double> sweep_min, sweep_max, sweep_step;
  ScoreFlags sweep_flags;
  sweep->add_option("--input", sweep_input, "Interchange file")->required();
  sweep->add_option("--gold", sweep_gold, "DA TSV; embedded DA scores are used otherwise");
  sweep->add_option("--output", sweep_output, "Table TSV")->required();
  sweep->add_option("--param", sweep_param)->required()->check(CLI::IsMember({"lambda", "penalty"}));
  auto* values_opt = sweep->add_option("--values", sweep_values, "Comma-separated values")->delimiter(',');
  auto* min_opt = sweep->add_option("--min", sweep_min);
  auto* max_opt = sweep->add_option("--max", sweep_max);
  auto* step_opt = sweep->add_option("--step", sweep_step);
  values_opt->excludes(min_opt)->excludes(max_opt)->excludes(step_opt);
  min_opt->needs(max_opt)->needs(step_opt);
  max_opt->needs(min_opt);
  step_opt->needs(min_opt);
  sweep->add_option("--metric", sweep_metric)
      ->check(CLI::IsMember({"pearson", "kendall", "both"}))
      ->capture_default_str();
  sweep_flags.attach(*sweep);

  auto* validate = app.add_subcommand("validate", "Check an interchange file against all invariants");
  std::string validate_input;
  validate->add_option("--input", validate_input, "Interchange file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(xlqe::ExitCode::UsageError);
  }

  try {
    if (*score) {
      xlqe::run_score({score_input, score_output, score_flags.config(), score_flags.jobs});
    } else if (*evaluate) {
      xlqe::EvaluateCommand cmd;
      cmd.scores = eval_scores;
      if (eval_gold) cmd.gold = *eval_gold;
      if (eval_input) cmd.input = *eval_input;
      if (eval_output) cmd.output = *eval_output;
      cmd.metric = xlqe::parse_correlation_metric(eval_metric);
      xlqe::run_evaluate(cmd, std::cout, std::cerr);
    } else if (*sweep) {
      xlqe::SweepCommand cmd;
      cmd.input = sweep_input;
      if (sweep_gold) cmd.gold = *sweep_gold;
      cmd.output = sweep_output;
      cmd.config = sweep_flags.config();
      cmd.metric = xlqe::parse_correlation_metric(sweep_metric);
      cmd.jobs = sweep_flags.jobs;
      const auto param = xlqe::parse_sweep_param(sweep_param);
      if (!sweep_values.empty()) {
        cmd.sweep = xlqe::SweepSpec::from_values(param, sweep_values);
      } else if (sweep_min) {
        cmd.sweep = xlqe::SweepSpec::from_grid(param, *sweep_min, *sweep_max, *sweep_step);
      } else {
        cmd.sweep = xlqe::SweepSpec::defaults(param);
      }
      std::cout << xlqe::run_sweep(cmd, std::cerr);
    } else if (*validate) {
      return static_cast<int>(xlqe::run_validate(validate_input, std::cout));
    }
  } catch (const xlqe::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(xlqe::ExitCode::UsageError);
  } catch (const xlqe::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(xlqe::ExitCode::IoError);
  } catch (const xlqe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(xlqe::ExitCode::DataError);
  }
  return 0;
}
