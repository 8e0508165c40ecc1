#pragma once

#include "softhash/dataset.hpp"
#include "softhash/metrics.hpp"
#include "softhash/objective.hpp"
#include "softhash/trainer.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace softhash {

// Everything a command run needs, filled from flags and key=value config
// files by the CLI. One master seed feeds derived streams for the split,
// the model init, the batch sampler and the synthetic generator, so a whole
// pipeline is reproducible end to end from a single number.
struct RunConfig {
  std::uint64_t seed = 1;
  int threads = 1;

  // file paths
  std::string features_path;
  std::string labels_path;
  std::string model_path;
  std::string codes_path;
  std::string query_codes_path;  // query command; defaults to codes_path
  std::string train_report_path;
  std::string report_json_path;
  std::string report_csv_path;
  std::string output_path;  // query/sweep table; empty means stdout

  // synthetic data
  int num_items = 2000;
  int num_classes = 8;
  int feature_dim = 32;
  double label_density = 0.25;
  double noise = 0.25;

  // architecture
  int code_bits = 16;
  std::vector<int> hidden = {512};

  // loss; alpha and gamma accept "<x>/q" to scale with the code length
  std::string alpha = "5/q";
  std::string gamma = "0.1/q";
  std::string lambda = "0.1";
  std::string loss_mode = "joint";  // joint | coarse-ce | mse-only

  // training
  int batch_size = 128;
  double base_lr = 0.01;
  int decay_every = 500;
  double decay_rate = 0.5;
  int max_iterations = 1000;

  // split
  double query_frac = 0.1;
  double train_frac = 0.4;
  bool db_exclude_query = false;
  bool db_exclude_train = false;

  // retrieval evaluation
  std::vector<int> top_n;      // empty: deepest rank shared by all queries
  bool include_self = false;   // count a query's own database entry as a hit
  std::vector<int> query_ids;  // query command; empty means all
  int rank_limit = 0;          // query command; 0 means full ranking

  // sweep grids; empty lists fall back to the single configured value
  std::vector<std::string> alpha_list;
  std::vector<std::string> gamma_list;
  std::vector<std::string> lambda_list;

  LossConfig loss_config() const;
  TrainConfig train_config() const;
  SplitSpec split_spec() const;
  SyntheticSpec synthetic_spec() const;
};

// "0.3125" or "5/q"; the latter divides by the code length.
double parse_loss_value(const std::string& expr, int code_bits);
LossMode parse_loss_mode(const std::string& name);

void run_generate(const RunConfig& cfg);
void run_train(const RunConfig& cfg);
void run_encode(const RunConfig& cfg);
void run_query(const RunConfig& cfg, std::ostream& out);
MetricsReport run_evaluate(const RunConfig& cfg);
void run_sweep(const RunConfig& cfg, std::ostream& out);

// Forward + binarize for a whole feature set, chunked over threads.
CodeSet encode_dataset(const HashModel& model, const MatrixF& features, int threads);

}  // namespace softhash
