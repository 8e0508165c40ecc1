#include "softhash/pipeline.hpp"
#include "softhash/types.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using softhash::RunConfig;

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->set_config("--config", "", "key=value config file; command-line flags win");
  cmd->allow_config_extras(CLI::config_extras_mode::error);
  cmd->add_option("--seed", cfg.seed, "master seed for every derived RNG stream");
  cmd->add_option("--threads", cfg.threads, "worker threads; 1 is fully sequential")
      ->check(CLI::PositiveNumber);
}

void add_split(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--query-frac", cfg.query_frac, "fraction of items used as queries");
  cmd->add_option("--train-frac", cfg.train_frac, "fraction of items used for training");
  cmd->add_flag("--db-exclude-query", cfg.db_exclude_query,
                "drop query items from the retrieval database");
  cmd->add_flag("--db-exclude-train", cfg.db_exclude_train,
                "drop training items from the retrieval database");
}

void add_model(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--bits", cfg.code_bits, "code length in bits");
  cmd->add_option("--hidden", cfg.hidden,
                  "hidden layer widths, comma separated; 0 means none")
      ->delimiter(',');
}

void add_loss(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--alpha", cfg.alpha, "logit bandwidth, number or '<x>/q'");
  cmd->add_option("--gamma", cfg.gamma, "squared-error weight, number or '<x>/q'");
  cmd->add_option("--lambda", cfg.lambda, "quantization weight, number or '<x>/q'");
  cmd->add_option("--loss-mode", cfg.loss_mode, "joint | coarse-ce | mse-only");
}

void add_training(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--batch-size", cfg.batch_size, "items per mini-batch");
  cmd->add_option("--lr", cfg.base_lr, "base learning rate");
  cmd->add_option("--decay-every", cfg.decay_every, "iterations between lr decays");
  cmd->add_option("--decay-rate", cfg.decay_rate, "lr multiplier at each decay");
  cmd->add_option("--iterations", cfg.max_iterations, "training iterations");
}

void add_eval(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--top-n", cfg.top_n,
                  "metric depths, comma separated; default is the full database")
      ->delimiter(',');
  cmd->add_flag("--include-self", cfg.include_self,
                "let a query match its own database entry");
}

void normalize(RunConfig& cfg) {
  if (cfg.hidden.size() == 1 && cfg.hidden[0] == 0) cfg.hidden.clear();
}

int dispatch(const std::string& command, RunConfig& cfg) {
  normalize(cfg);
  if (command == "generate") {
    softhash::run_generate(cfg);
  } else if (command == "train") {
    softhash::run_train(cfg);
  } else if (command == "encode") {
    softhash::run_encode(cfg);
  } else if (command == "query") {
    if (cfg.output_path.empty()) {
      softhash::run_query(cfg, std::cout);
    } else {
      std::ofstream out(cfg.output_path, std::ios::trunc);
      if (!out) throw softhash::ValidationError("cannot open " + cfg.output_path);
      softhash::run_query(cfg, out);
    }
  } else if (command == "evaluate") {
    const softhash::MetricsReport report = softhash::run_evaluate(cfg);
    for (const softhash::MetricsAtN& at : report.at) {
      std::cout << "n=" << at.n << " map=" << at.map << " wap=" << at.wap
                << " acg=" << at.mean_acg << " ndcg=" << at.mean_ndcg
                << " precision=" << at.mean_precision << '\n';
    }
  } else if (command == "sweep") {
    if (cfg.output_path.empty()) {
      softhash::run_sweep(cfg, std::cout);
    } else {
      std::ofstream out(cfg.output_path, std::ios::trunc);
      if (!out) throw softhash::ValidationError("cannot open " + cfg.output_path);
      softhash::run_sweep(cfg, out);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supervised hash-code learning and Hamming-space retrieval"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* generate = app.add_subcommand(
      "generate", "write a synthetic multi-label feature/label pair");
  add_common(generate, cfg);
  generate->add_option("--num-items", cfg.num_items, "dataset size");
  generate->add_option("--num-classes", cfg.num_classes, "label dimension");
  generate->add_option("--feature-dim", cfg.feature_dim, "feature dimension");
  generate->add_option("--label-density", cfg.label_density,
                       "per-class membership probability");
  generate->add_option("--noise", cfg.noise, "feature noise stddev");
  generate->add_option("--output-features", cfg.features_path, "feature file to write")
      ->required();
  generate->add_option("--output-labels", cfg.labels_path, "label file to write")
      ->required();

  CLI::App* train = app.add_subcommand("train", "fit a hash model on the train split");
  add_common(train, cfg);
  add_split(train, cfg);
  add_model(train, cfg);
  add_loss(train, cfg);
  add_training(train, cfg);
  train->add_option("--features", cfg.features_path, "feature file")->required();
  train->add_option("--labels", cfg.labels_path, "label file")->required();
  train->add_option("--output-model", cfg.model_path, "checkpoint to write")->required();
  train->add_option("--output-report", cfg.train_report_path,
                    "per-iteration cost CSV to write");

  CLI::App* encode = app.add_subcommand("encode", "binarize every item with a model");
  add_common(encode, cfg);
  encode->add_option("--model", cfg.model_path, "checkpoint to load")->required();
  encode->add_option("--features", cfg.features_path, "feature file")->required();
  encode->add_option("--output-codes", cfg.codes_path, "code file to write")->required();

  CLI::App* query = app.add_subcommand("query", "rank a code database by distance");
  add_common(query, cfg);
  query->add_option("--codes", cfg.codes_path, "database code file")->required();
  query->add_option("--query-codes", cfg.query_codes_path,
                    "query code file; defaults to the database file");
  query->add_option("--query-ids", cfg.query_ids,
                    "query positions, comma separated; default all")
      ->delimiter(',');
  query->add_option("--limit", cfg.rank_limit, "rows per query; 0 means all");
  query->add_option("--output", cfg.output_path, "ranking CSV; default stdout");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "retrieval metrics of a code file against its labels");
  add_common(evaluate, cfg);
  add_split(evaluate, cfg);
  add_eval(evaluate, cfg);
  evaluate->add_option("--codes", cfg.codes_path, "code file for every item")->required();
  evaluate->add_option("--labels", cfg.labels_path, "label file")->required();
  evaluate->add_option("--output-json", cfg.report_json_path, "metrics JSON to write");
  evaluate->add_option("--output-csv", cfg.report_csv_path,
                       "per-query metrics CSV to write");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "train/encode/evaluate over a hyperparameter grid");
  add_common(sweep, cfg);
  add_split(sweep, cfg);
  add_model(sweep, cfg);
  add_loss(sweep, cfg);
  add_training(sweep, cfg);
  add_eval(sweep, cfg);
  sweep->add_option("--features", cfg.features_path, "feature file")->required();
  sweep->add_option("--labels", cfg.labels_path, "label file")->required();
  sweep->add_option("--alpha-list", cfg.alpha_list, "alpha grid, comma separated")
      ->delimiter(',');
  sweep->add_option("--gamma-list", cfg.gamma_list, "gamma grid, comma separated")
      ->delimiter(',');
  sweep->add_option("--lambda-list", cfg.lambda_list, "lambda grid, comma separated")
      ->delimiter(',');
  sweep->add_option("--output", cfg.output_path, "result table CSV; default stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), cfg);
  } catch (const softhash::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
