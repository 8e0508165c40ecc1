#include "softhash/metrics.hpp"

#include "softhash/io.hpp"
#include "parallel_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace softhash {

namespace {

void check_depth(const Eigen::Ref<const RelevanceProfile>& profile, int n) {
  if (n < 1) throw ValidationError("metric depth n must be >= 1");
  if (profile.size() < n) {
    throw ValidationError("metric depth " + std::to_string(n) +
                          " exceeds ranked list of length " +
                          std::to_string(profile.size()));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (profile[i] < 0) throw ValidationError("negative shared-label count");
  }
}

double gain(int shared) { return std::exp2(double(shared)) - 1.0; }

}  // namespace

double acg_at(const Eigen::Ref<const RelevanceProfile>& profile, int n) {
  check_depth(profile, n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += profile[i];
  return sum / n;
}

double dcg_at(const Eigen::Ref<const RelevanceProfile>& profile, int n) {
  check_depth(profile, n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += gain(profile[i]) / std::log2(2.0 + i);
  return sum;
}

double ndcg_at(const Eigen::Ref<const RelevanceProfile>& profile, int n) {
  const double dcg = dcg_at(profile, n);
  RelevanceProfile ideal = profile.head(n);
  std::sort(ideal.data(), ideal.data() + n, std::greater<int>());
  const double z = dcg_at(ideal, n);
  return z > 0.0 ? dcg / z : 0.0;
}

double precision_at(const Eigen::Ref<const RelevanceProfile>& profile, int n) {
  check_depth(profile, n);
  int relevant = 0;
  for (int i = 0; i < n; ++i) relevant += profile[i] > 0 ? 1 : 0;
  return double(relevant) / n;
}

double average_precision(const Eigen::Ref<const RelevanceProfile>& profile, int n,
                         bool* relevant_free) {
  check_depth(profile, n);
  int hits = 0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (profile[i] > 0) {
      ++hits;
      sum += double(hits) / (i + 1);
    }
  }
  if (relevant_free) *relevant_free = hits == 0;
  return hits == 0 ? 0.0 : sum / hits;
}

double weighted_average_precision(const Eigen::Ref<const RelevanceProfile>& profile,
                                  int n, bool* relevant_free) {
  check_depth(profile, n);
  int hits = 0;
  double shared_prefix = 0.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    shared_prefix += profile[i];
    if (profile[i] > 0) {
      ++hits;
      sum += shared_prefix / (i + 1);  // ACG at rank i+1
    }
  }
  if (relevant_free) *relevant_free = hits == 0;
  return hits == 0 ? 0.0 : sum / hits;
}

namespace {

double mean_over_relevant(const std::vector<RelevanceProfile>& profiles, int n,
                          int* excluded, double (*per_query)(
                              const Eigen::Ref<const RelevanceProfile>&, int, bool*),
                          const char* what) {
  if (profiles.empty()) throw ValidationError("no query profiles given");
  double sum = 0.0;
  int kept = 0;
  for (const RelevanceProfile& p : profiles) {
    bool free = false;
    const double v = per_query(p, n, &free);
    if (!free) {
      sum += v;
      ++kept;
    }
  }
  if (excluded) *excluded = int(profiles.size()) - kept;
  if (kept == 0) {
    throw ValidationError(std::string(what) +
                          " undefined: every query is relevant-free at n=" +
                          std::to_string(n));
  }
  return sum / kept;
}

}  // namespace

double mean_average_precision(const std::vector<RelevanceProfile>& profiles, int n,
                              int* excluded) {
  return mean_over_relevant(profiles, n, excluded, &average_precision, "MAP");
}

double mean_weighted_average_precision(const std::vector<RelevanceProfile>& profiles,
                                       int n, int* excluded) {
  return mean_over_relevant(profiles, n, excluded, &weighted_average_precision, "WAP");
}

MetricsReport evaluate(const CodeSet& query_codes, const LabelMatrix& query_labels,
                       const std::vector<int>& query_ids, const CodeSet& db_codes,
                       const LabelMatrix& db_labels, const std::vector<int>& db_ids,
                       const std::vector<int>& top_n, bool exclude_self, int threads) {
  const std::size_t nq = query_codes.size();
  const std::size_t nd = db_codes.size();
  if (nd == 0) throw ValidationError("empty code database");
  if (nq == 0) throw ValidationError("no queries");
  if (top_n.empty()) throw ValidationError("no metric depths requested");
  if (std::size_t(query_labels.cols()) != nq || query_ids.size() != nq) {
    throw ValidationError("query codes, labels and ids disagree in count");
  }
  if (std::size_t(db_labels.cols()) != nd || db_ids.size() != nd) {
    throw ValidationError("database codes, labels and ids disagree in count");
  }
  if (query_labels.rows() != db_labels.rows()) {
    throw ValidationError("query and database label dimensions differ");
  }
  if (query_codes.bits() != db_codes.bits()) {
    throw ValidationError("query and database code lengths differ");
  }

  std::vector<RelevanceProfile> profiles(nq);
  detail::run_chunked(nq, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t qi = begin; qi < end; ++qi) {
      const std::vector<RankedHit> hits = rank(query_codes.at(qi), db_codes);
      RelevanceProfile profile(hits.size());
      Eigen::Index depth = 0;
      for (const RankedHit& hit : hits) {
        if (exclude_self && db_ids[std::size_t(hit.id)] == query_ids[qi]) continue;
        profile[depth++] =
            int(query_labels.col(Eigen::Index(qi)).dot(db_labels.col(hit.id)));
      }
      profiles[qi] = profile.head(depth).eval();
    }
  });

  MetricsReport report;
  report.num_queries = int(nq);
  report.database_size = int(nd);
  report.self_match_excluded = exclude_self;
  report.query_ids = query_ids;

  for (int n : top_n) {
    MetricsAtN at;
    at.n = n;
    at.per_query.resize(nq);
    detail::run_chunked(nq, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t qi = begin; qi < end; ++qi) {
        QueryMetrics& m = at.per_query[qi];
        m.acg = acg_at(profiles[qi], n);
        m.ndcg = ndcg_at(profiles[qi], n);
        m.precision = precision_at(profiles[qi], n);
        m.ap = average_precision(profiles[qi], n, &m.relevant_free);
        m.wap = weighted_average_precision(profiles[qi], n);
      }
    });

    double ap_sum = 0.0, wap_sum = 0.0;
    int kept = 0;
    for (const QueryMetrics& m : at.per_query) {
      at.mean_acg += m.acg;
      at.mean_ndcg += m.ndcg;
      at.mean_precision += m.precision;
      if (!m.relevant_free) {
        ap_sum += m.ap;
        wap_sum += m.wap;
        ++kept;
      }
    }
    at.mean_acg /= double(nq);
    at.mean_ndcg /= double(nq);
    at.mean_precision /= double(nq);
    at.relevant_free_queries = int(nq) - kept;
    if (kept == 0) {
      throw ValidationError("MAP undefined: every query is relevant-free at n=" +
                            std::to_string(n));
    }
    at.map = ap_sum / kept;
    at.wap = wap_sum / kept;
    report.at.push_back(std::move(at));
  }
  return report;
}

void write_metrics_json(const MetricsReport& report, std::ostream& out) {
  nlohmann::json root;
  root["num_queries"] = report.num_queries;
  root["database_size"] = report.database_size;
  root["self_match_excluded"] = report.self_match_excluded;
  root["query_ids"] = report.query_ids;

  nlohmann::json aggregates = nlohmann::json::array();
  nlohmann::json per_query = nlohmann::json::array();
  for (const MetricsAtN& at : report.at) {
    nlohmann::json agg;
    agg["n"] = at.n;
    agg["acg"] = at.mean_acg;
    agg["ndcg"] = at.mean_ndcg;
    agg["precision"] = at.mean_precision;
    agg["map"] = at.map;
    agg["wap"] = at.wap;
    agg["relevant_free_queries"] = at.relevant_free_queries;
    aggregates.push_back(agg);

    nlohmann::json pq;
    pq["n"] = at.n;
    for (const char* key : {"acg", "ndcg", "precision", "ap", "wap"}) {
      pq[key] = nlohmann::json::array();
    }
    pq["relevant_free"] = nlohmann::json::array();
    for (const QueryMetrics& m : at.per_query) {
      pq["acg"].push_back(m.acg);
      pq["ndcg"].push_back(m.ndcg);
      pq["precision"].push_back(m.precision);
      pq["ap"].push_back(m.ap);
      pq["wap"].push_back(m.wap);
      pq["relevant_free"].push_back(m.relevant_free);
    }
    per_query.push_back(pq);
  }
  root["aggregates"] = aggregates;
  root["per_query"] = per_query;
  out << root.dump(2) << '\n';
}

void write_metrics_csv(const MetricsReport& report, std::ostream& out) {
  out << "query_id";
  for (const MetricsAtN& at : report.at) {
    const std::string suffix = "@" + std::to_string(at.n);
    out << ",acg" << suffix << ",ndcg" << suffix << ",precision" << suffix << ",ap"
        << suffix << ",wap" << suffix << ",relevant_free" << suffix;
  }
  out << '\n';
  for (int qi = 0; qi < report.num_queries; ++qi) {
    out << report.query_ids[std::size_t(qi)];
    for (const MetricsAtN& at : report.at) {
      const QueryMetrics& m = at.per_query[std::size_t(qi)];
      out << ',' << format_double(m.acg) << ',' << format_double(m.ndcg) << ','
          << format_double(m.precision) << ',' << format_double(m.ap) << ','
          << format_double(m.wap) << ',' << (m.relevant_free ? 1 : 0);
    }
    out << '\n';
  }
}

}  // namespace softhash
