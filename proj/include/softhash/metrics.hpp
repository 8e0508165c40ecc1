#pragma once

#include "softhash/code_index.hpp"
#include "softhash/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace softhash {

// Shared-label counts C(q,i) down a ranked list, query by query. An item is
// relevant when it shares at least one label with the query.
using RelevanceProfile = Eigen::VectorXi;

double acg_at(const Eigen::Ref<const RelevanceProfile>& profile, int n);
double dcg_at(const Eigen::Ref<const RelevanceProfile>& profile, int n);

// DCG normalized by the ideal (descending) ordering of the same top-n counts;
// 0 when nothing in the top n carries gain.
double ndcg_at(const Eigen::Ref<const RelevanceProfile>& profile, int n);

double precision_at(const Eigen::Ref<const RelevanceProfile>& profile, int n);

// Average precision over the top n; 0 with *relevant_free set when no
// relevant item appears there.
double average_precision(const Eigen::Ref<const RelevanceProfile>& profile, int n,
                         bool* relevant_free = nullptr);

// Per-query average of ACG at each relevant rank, the gain-weighted analogue
// of average precision.
double weighted_average_precision(const Eigen::Ref<const RelevanceProfile>& profile,
                                  int n, bool* relevant_free = nullptr);

// Means over queries with at least one relevant item in their top n;
// relevant-free queries are counted in *excluded. All queries relevant-free
// is an error.
double mean_average_precision(const std::vector<RelevanceProfile>& profiles, int n,
                              int* excluded = nullptr);
double mean_weighted_average_precision(const std::vector<RelevanceProfile>& profiles,
                                       int n, int* excluded = nullptr);

struct QueryMetrics {
  double acg = 0.0;
  double ndcg = 0.0;
  double precision = 0.0;
  double ap = 0.0;
  double wap = 0.0;
  bool relevant_free = false;
};

struct MetricsAtN {
  int n = 0;
  double mean_acg = 0.0;
  double mean_ndcg = 0.0;
  double mean_precision = 0.0;
  double map = 0.0;
  double wap = 0.0;
  int relevant_free_queries = 0;
  std::vector<QueryMetrics> per_query;
};

struct MetricsReport {
  int num_queries = 0;
  int database_size = 0;
  bool self_match_excluded = true;
  std::vector<int> query_ids;
  std::vector<MetricsAtN> at;
};

// Ranks every query against the database, builds relevance profiles from the
// labels, and evaluates all metrics at each requested depth. Item ids tie
// codes to labels; a database entry whose id equals the query's is dropped
// when exclude_self is set. Per-query work may fan out over `threads`;
// aggregation always reduces in query order.
MetricsReport evaluate(const CodeSet& query_codes, const LabelMatrix& query_labels,
                       const std::vector<int>& query_ids, const CodeSet& db_codes,
                       const LabelMatrix& db_labels, const std::vector<int>& db_ids,
                       const std::vector<int>& top_n, bool exclude_self, int threads);

void write_metrics_json(const MetricsReport& report, std::ostream& out);
void write_metrics_csv(const MetricsReport& report, std::ostream& out);

}  // namespace softhash
