#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hetinf/bif.hpp"
#include "hetinf/harness.hpp"
#include "json.hpp"

namespace {

using namespace hetinf;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed_data, seed_model, seed_predict;
  std::optional<std::string> network, out_dir, sampler;
  std::optional<int> train_n, test_n, epochs;
  bool ci = false;
  bool score_all = false;
  bool extra_state = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "experiment config JSON");
  cmd->add_option("--network", o.network, "BIF path or synth:A|B|C");
  cmd->add_option("--out", o.out_dir, "experiment output directory");
  cmd->add_option("--seed-data", o.seed_data, "data generation seed");
  cmd->add_option("--seed-model", o.seed_model, "model training seed");
  cmd->add_option("--seed-predict", o.seed_predict, "prediction seed");
  cmd->add_option("--train-n", o.train_n, "training set size");
  cmd->add_option("--test-n", o.test_n, "test set size cap");
  cmd->add_option("--sampler", o.sampler, "ancestral | gibbs");
  cmd->add_option("--epochs", o.epochs, "epoch cap override");
  cmd->add_flag("--ci", o.ci, "require explicit seeds");
  cmd->add_flag("--score-all-variables", o.score_all,
                "score observed variables too (literal metric formula)");
  cmd->add_flag("--extra-state-encoding", o.extra_state,
                "encode unobserved blocks with an extra state slot");
}

ExperimentConfig build_config(const CommonOpts& o) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    cfg = ExperimentConfig::from_json(read_text_file(o.config_path));
  }
  if (o.network) cfg.network = *o.network;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.seed_data) cfg.seed_data = *o.seed_data;
  if (o.seed_model) cfg.seed_model = *o.seed_model;
  if (o.seed_predict) cfg.seed_predict = *o.seed_predict;
  if (o.train_n) cfg.train_n = *o.train_n;
  if (o.test_n) cfg.test_n = *o.test_n;
  if (o.sampler) cfg.sampler = *o.sampler;
  if (o.epochs) cfg.epochs = o.epochs;
  if (o.score_all) cfg.score_all_variables = true;
  if (o.extra_state) cfg.extra_state_encoding = true;
  if (o.ci && (!o.seed_data || !o.seed_model || !o.seed_predict)) {
    throw std::invalid_argument(
        "--ci requires --seed-data, --seed-model and --seed-predict");
  }
  if (cfg.network.empty()) {
    throw std::invalid_argument("a network source is required");
  }
  if (cfg.out_dir.empty()) {
    throw std::invalid_argument("an output directory is required");
  }
  return cfg;
}

int fail_with_json(const std::exception& e) {
  nlohmann::ordered_json j;
  j["error"] = e.what();
  std::cerr << j.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hetinf: generative-model posterior inference over discrete Bayesian "
      "networks"};
  app.require_subcommand(1);

  CommonOpts gen_o, train_o, eval_o, sweep_o;
  std::string model_name = "ear";
  std::string ckpt;
  std::vector<double> grid;

  auto* gen = app.add_subcommand("gen-data",
                                 "sample a training set and build an exact "
                                 "posterior test set");
  add_common(gen, gen_o);

  auto* train = app.add_subcommand("train", "train one model kind");
  add_common(train, train_o);
  train->add_option("--model", model_name, "model kind")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  add_common(eval, eval_o);
  eval->add_option("--checkpoint", ckpt, "checkpoint path")->required();

  auto* sweep =
      app.add_subcommand("sweep-threshold", "metrics across truth thresholds");
  add_common(sweep, sweep_o);
  sweep->add_option("--checkpoint", ckpt, "checkpoint path");
  sweep->add_option("--grid", grid, "threshold grid");

  std::string mb_out = "runs/markov_border";
  std::uint64_t mb_seed_data = 1, mb_seed_model = 1, mb_seed_predict = 1;
  int mb_train_n = 10000;
  std::optional<int> mb_epochs;
  std::vector<std::string> mb_models;
  auto* mb = app.add_subcommand(
      "markov-border", "run the synthesized border study across models");
  mb->add_option("--out", mb_out, "output directory");
  mb->add_option("--seed-data", mb_seed_data, "data seed");
  mb->add_option("--seed-model", mb_seed_model, "model seed");
  mb->add_option("--seed-predict", mb_seed_predict, "prediction seed");
  mb->add_option("--train-n", mb_train_n, "training set size");
  mb->add_option("--epochs", mb_epochs, "epoch cap override");
  mb->add_option("--models", mb_models, "model kinds (default: all)");

  auto* nc = app.add_subcommand("compare-nc",
                                "EAR vs the single-target classifier on the "
                                "synthesized networks");
  nc->add_option("--out", mb_out, "output directory");
  nc->add_option("--seed-data", mb_seed_data, "data seed");
  nc->add_option("--seed-model", mb_seed_model, "model seed");
  nc->add_option("--seed-predict", mb_seed_predict, "prediction seed");
  nc->add_option("--train-n", mb_train_n, "training set size");
  nc->add_option("--epochs", mb_epochs, "epoch cap override");

  std::vector<std::string> report_dirs;
  std::string report_out = "runs/report";
  auto* report =
      app.add_subcommand("report", "consolidate eval records into tables");
  report->add_option("--runs", report_dirs, "experiment directories")
      ->required();
  report->add_option("--out", report_out, "report output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto res = cmd_gen_data(build_config(gen_o));
      std::cout << "network " << res.network_json << "\n"
                << "train " << res.train_prefix << ".csv\n"
                << "test " << res.test_prefix << ".csv\n";
    } else if (train->parsed()) {
      const auto cfg = build_config(train_o);
      const auto res = cmd_train(cfg, model_kind_from_name(model_name));
      std::cout << "checkpoint " << res.checkpoint_path << "\n"
                << "epochs " << res.epochs_ran << "\n";
    } else if (eval->parsed()) {
      const auto cfg = build_config(eval_o);
      const auto res = cmd_eval(cfg, ckpt);
      std::cout << res.report.to_json();
    } else if (sweep->parsed()) {
      const auto cfg = build_config(sweep_o);
      const auto use_grid = grid.empty() ? cfg.thresholds : grid;
      const auto path = cmd_sweep_threshold(cfg, ckpt, use_grid);
      std::cout << "sweep " << path << "\n";
    } else if (mb->parsed()) {
      std::vector<ModelKind> kinds;
      if (mb_models.empty()) {
        kinds = all_model_kinds();
      } else {
        for (const auto& n : mb_models) {
          kinds.push_back(model_kind_from_name(n));
        }
      }
      const auto path =
          cmd_markov_border(mb_out, kinds, mb_seed_data, mb_seed_model,
                            mb_seed_predict, mb_train_n, mb_epochs);
      std::cout << "table " << path << "\n";
    } else if (nc->parsed()) {
      const auto path = cmd_compare_nc(mb_out, mb_seed_data, mb_seed_model,
                                       mb_seed_predict, mb_train_n, mb_epochs);
      std::cout << "table " << path << "\n";
    } else if (report->parsed()) {
      const auto res = emit_report(report_dirs, report_out);
      std::cout << "report " << res.report_json << "\n"
                << "matrix " << res.matrix_csv << "\n";
    }
  } catch (const std::exception& e) {
    return fail_with_json(e);
  }
  return 0;
}
