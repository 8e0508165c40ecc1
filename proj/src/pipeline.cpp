#include "softhash/pipeline.hpp"

#include "softhash/io.hpp"
#include "parallel_util.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

namespace softhash {

namespace {

constexpr std::uint64_t kModelInitStream = 0x21;
constexpr std::uint64_t kBatchStream = 0x22;

double parse_number(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const std::from_chars_result res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ValidationError("not a number: '" + text + "'");
  }
  return value;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  return out;
}

void require_path(const std::string& path, const std::string& flag) {
  if (path.empty()) throw ValidationError("missing required path: " + flag);
}

std::vector<Eigen::Index> hidden_widths(const RunConfig& cfg) {
  std::vector<Eigen::Index> widths;
  for (int h : cfg.hidden) widths.push_back(h);
  return widths;
}

}  // namespace

double parse_loss_value(const std::string& expr, int code_bits) {
  if (code_bits < 1) throw ValidationError("code length must be >= 1");
  if (expr.size() > 2 && expr.compare(expr.size() - 2, 2, "/q") == 0) {
    return parse_number(expr.substr(0, expr.size() - 2)) / code_bits;
  }
  return parse_number(expr);
}

LossMode parse_loss_mode(const std::string& name) {
  if (name == "joint") return LossMode::Joint;
  if (name == "coarse-ce") return LossMode::CoarseCe;
  if (name == "mse-only") return LossMode::MseOnly;
  throw ValidationError("unknown loss mode '" + name +
                        "' (expected joint, coarse-ce or mse-only)");
}

LossConfig RunConfig::loss_config() const {
  LossConfig cfg;
  cfg.code_bits = code_bits;
  cfg.alpha = parse_loss_value(alpha, code_bits);
  cfg.gamma = parse_loss_value(gamma, code_bits);
  cfg.lambda = parse_loss_value(lambda, code_bits);
  cfg.mode = parse_loss_mode(loss_mode);
  cfg.validate();
  return cfg;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig cfg;
  cfg.batch_size = batch_size;
  cfg.base_lr = base_lr;
  cfg.decay_every = decay_every;
  cfg.decay_rate = decay_rate;
  cfg.max_iterations = max_iterations;
  cfg.seed = derive_seed(seed, kBatchStream);
  cfg.validate();
  return cfg;
}

SplitSpec RunConfig::split_spec() const {
  SplitSpec spec;
  spec.query_frac = query_frac;
  spec.train_frac = train_frac;
  spec.db_exclude_query = db_exclude_query;
  spec.db_exclude_train = db_exclude_train;
  spec.seed = seed;
  spec.validate();
  return spec;
}

SyntheticSpec RunConfig::synthetic_spec() const {
  SyntheticSpec spec;
  spec.num_items = num_items;
  spec.num_classes = num_classes;
  spec.feature_dim = feature_dim;
  spec.label_density = label_density;
  spec.noise = noise;
  spec.seed = seed;
  spec.validate();
  return spec;
}

void run_generate(const RunConfig& cfg) {
  require_path(cfg.features_path, "--output-features");
  require_path(cfg.labels_path, "--output-labels");
  const DatasetBundle bundle = generate_synthetic(cfg.synthetic_spec());
  save_features(bundle.features, cfg.features_path);
  save_labels(bundle.labels, cfg.labels_path);
}

void run_train(const RunConfig& cfg) {
  require_path(cfg.features_path, "--features");
  require_path(cfg.labels_path, "--labels");
  require_path(cfg.model_path, "--output-model");
  const LossConfig loss_cfg = cfg.loss_config();
  const TrainConfig train_cfg = cfg.train_config();

  const DatasetBundle bundle = ingest(cfg.features_path, cfg.labels_path);
  const Split split = make_split(bundle.size(), cfg.split_spec());
  const Matrix train_features = gather_features(bundle.features, split.train_ids);
  const LabelMatrix train_labels = gather_labels(bundle.labels, split.train_ids);

  HashModel model = make_hash_model(bundle.feature_dim(), hidden_widths(cfg),
                                    cfg.code_bits, derive_seed(cfg.seed, kModelInitStream));

  if (!cfg.train_report_path.empty()) {
    std::ofstream report = open_output(cfg.train_report_path);
    train(train_features, train_labels, model, train_cfg, loss_cfg, &report);
    if (!report) throw std::runtime_error("write failed: " + cfg.train_report_path);
  } else {
    train(train_features, train_labels, model, train_cfg, loss_cfg);
  }
  save_model(model, cfg.model_path);
}

CodeSet encode_dataset(const HashModel& model, const MatrixF& features, int threads) {
  const Eigen::Index n = features.cols();
  Matrix relaxed(model.code_bits(), n);
  detail::run_chunked(std::size_t(n), threads, [&](std::size_t begin, std::size_t end) {
    const Eigen::Index lo = Eigen::Index(begin);
    const Eigen::Index count = Eigen::Index(end - begin);
    relaxed.middleCols(lo, count) =
        forward(model, features.middleCols(lo, count).cast<double>());
  });
  return binarize_all(relaxed);
}

void run_encode(const RunConfig& cfg) {
  require_path(cfg.model_path, "--model");
  require_path(cfg.features_path, "--features");
  require_path(cfg.codes_path, "--output-codes");
  const HashModel model = load_model(cfg.model_path);
  const MatrixF features = load_features(cfg.features_path);
  save_codes(encode_dataset(model, features, cfg.threads), cfg.codes_path);
}

void run_query(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.codes_path, "--codes");
  const CodeSet db = load_codes(cfg.codes_path);
  const CodeSet queries = cfg.query_codes_path.empty()
                              ? db
                              : load_codes(cfg.query_codes_path);

  std::vector<int> ids = cfg.query_ids;
  if (ids.empty()) {
    ids.resize(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) ids[i] = int(i);
  }
  for (int id : ids) {
    if (id < 0 || std::size_t(id) >= queries.size()) {
      throw ValidationError("query id " + std::to_string(id) +
                            " out of range for " + std::to_string(queries.size()) +
                            " codes");
    }
  }

  out << "query_id,rank,db_id,distance\n";
  for (int id : ids) {
    const std::vector<RankedHit> hits = rank(queries.at(std::size_t(id)), db);
    const std::size_t limit =
        cfg.rank_limit > 0 ? std::min(hits.size(), std::size_t(cfg.rank_limit))
                           : hits.size();
    for (std::size_t r = 0; r < limit; ++r) {
      out << id << ',' << r + 1 << ',' << hits[r].id << ',' << hits[r].distance << '\n';
    }
  }
}

namespace {

struct EvalInputs {
  CodeSet query_codes{0};
  LabelMatrix query_labels;
  std::vector<int> query_gids;
  CodeSet db_codes{0};
  LabelMatrix db_labels;
  std::vector<int> db_gids;
};

EvalInputs split_eval_inputs(const CodeSet& all_codes, const LabelMatrix& all_labels,
                             const Split& split) {
  EvalInputs in;
  in.query_codes = CodeSet(all_codes.bits());
  for (int id : split.query_ids) in.query_codes.append(all_codes.at(std::size_t(id)));
  in.query_labels = gather_labels(all_labels, split.query_ids);
  in.query_gids = split.query_ids;

  in.db_codes = CodeSet(all_codes.bits());
  for (int id : split.database_ids) in.db_codes.append(all_codes.at(std::size_t(id)));
  in.db_labels = gather_labels(all_labels, split.database_ids);
  in.db_gids = split.database_ids;
  return in;
}

std::vector<int> default_top_n(const EvalInputs& in, bool include_self) {
  // deepest n valid for every query: self-exclusion shortens a ranked list
  std::vector<bool> in_db(std::size_t(*std::max_element(in.db_gids.begin(),
                                                        in.db_gids.end()) + 1));
  for (int id : in.db_gids) in_db[std::size_t(id)] = true;
  int depth = int(in.db_gids.size());
  if (!include_self) {
    for (int gid : in.query_gids) {
      if (std::size_t(gid) < in_db.size() && in_db[std::size_t(gid)]) {
        depth = int(in.db_gids.size()) - 1;
        break;
      }
    }
  }
  if (depth < 1) throw ValidationError("database too small to evaluate");
  return {depth};
}

}  // namespace

MetricsReport run_evaluate(const RunConfig& cfg) {
  require_path(cfg.codes_path, "--codes");
  require_path(cfg.labels_path, "--labels");
  const CodeSet all_codes = load_codes(cfg.codes_path);
  const LabelMatrix all_labels = load_labels(cfg.labels_path);
  if (all_codes.size() != std::size_t(all_labels.cols())) {
    throw ValidationError("code/label record counts differ: " +
                          std::to_string(all_codes.size()) + " vs " +
                          std::to_string(all_labels.cols()));
  }

  const Split split = make_split(all_labels.cols(), cfg.split_spec());
  const EvalInputs in = split_eval_inputs(all_codes, all_labels, split);
  const std::vector<int> top_n =
      cfg.top_n.empty() ? default_top_n(in, cfg.include_self) : cfg.top_n;

  const MetricsReport report =
      evaluate(in.query_codes, in.query_labels, in.query_gids, in.db_codes,
               in.db_labels, in.db_gids, top_n, !cfg.include_self, cfg.threads);

  if (!cfg.report_json_path.empty()) {
    std::ofstream out = open_output(cfg.report_json_path);
    write_metrics_json(report, out);
    if (!out) throw std::runtime_error("write failed: " + cfg.report_json_path);
  }
  if (!cfg.report_csv_path.empty()) {
    std::ofstream out = open_output(cfg.report_csv_path);
    write_metrics_csv(report, out);
    if (!out) throw std::runtime_error("write failed: " + cfg.report_csv_path);
  }
  return report;
}

void run_sweep(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.features_path, "--features");
  require_path(cfg.labels_path, "--labels");
  const std::vector<std::string> alphas =
      cfg.alpha_list.empty() ? std::vector<std::string>{cfg.alpha} : cfg.alpha_list;
  const std::vector<std::string> gammas =
      cfg.gamma_list.empty() ? std::vector<std::string>{cfg.gamma} : cfg.gamma_list;
  const std::vector<std::string> lambdas =
      cfg.lambda_list.empty() ? std::vector<std::string>{cfg.lambda} : cfg.lambda_list;

  const DatasetBundle bundle = ingest(cfg.features_path, cfg.labels_path);
  const Split split = make_split(bundle.size(), cfg.split_spec());
  const Matrix train_features = gather_features(bundle.features, split.train_ids);
  const LabelMatrix train_labels = gather_labels(bundle.labels, split.train_ids);
  const TrainConfig train_cfg = cfg.train_config();

  out << "alpha,gamma,lambda,n,map,wap,acg,ndcg,precision\n";
  for (const std::string& a : alphas) {
    for (const std::string& g : gammas) {
      for (const std::string& l : lambdas) {
        RunConfig point = cfg;
        point.alpha = a;
        point.gamma = g;
        point.lambda = l;
        const LossConfig loss_cfg = point.loss_config();

        HashModel model =
            make_hash_model(bundle.feature_dim(), hidden_widths(cfg), cfg.code_bits,
                            derive_seed(cfg.seed, kModelInitStream));
        train(train_features, train_labels, model, train_cfg, loss_cfg);

        const CodeSet codes = encode_dataset(model, bundle.features, cfg.threads);
        const EvalInputs in = split_eval_inputs(codes, bundle.labels, split);
        const std::vector<int> top_n =
            cfg.top_n.empty() ? default_top_n(in, cfg.include_self) : cfg.top_n;
        const MetricsReport report =
            evaluate(in.query_codes, in.query_labels, in.query_gids, in.db_codes,
                     in.db_labels, in.db_gids, top_n, !cfg.include_self, cfg.threads);

        for (const MetricsAtN& at : report.at) {
          out << format_double(loss_cfg.alpha) << ',' << format_double(loss_cfg.gamma)
              << ',' << format_double(loss_cfg.lambda) << ',' << at.n << ','
              << format_double(at.map) << ',' << format_double(at.wap) << ','
              << format_double(at.mean_acg) << ',' << format_double(at.mean_ndcg)
              << ',' << format_double(at.mean_precision) << '\n';
        }
      }
    }
  }
}

}  // namespace softhash
