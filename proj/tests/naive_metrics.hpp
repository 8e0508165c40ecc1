#pragma once

// Deliberately naive reference implementations of the retrieval metrics and
// of bit-by-bit Hamming ranking. Plain loops, fresh recomputation at every
// rank, no shared state with the library paths they check.

#include "softhash/code_index.hpp"
#include "softhash/types.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace naive {

inline int hamming_bits(const softhash::BinaryCode& a, const softhash::BinaryCode& b) {
  const softhash::LabelVector ua = softhash::unpack(a);
  const softhash::LabelVector ub = softhash::unpack(b);
  int dist = 0;
  for (Eigen::Index k = 0; k < ua.size(); ++k) {
    if (ua[k] != ub[k]) ++dist;
  }
  return dist;
}

struct Hit {
  int id;
  int distance;
};

inline std::vector<Hit> rank(const softhash::BinaryCode& query,
                             const std::vector<softhash::BinaryCode>& db) {
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < db.size(); ++i) {
    hits.push_back({int(i), hamming_bits(query, db[i])});
  }
  std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  });
  return hits;
}

inline double acg(const std::vector<int>& shared, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += shared[std::size_t(i)];
  return sum / n;
}

inline double dcg(const std::vector<int>& shared, int n) {
  double sum = 0.0;
  for (int i = 1; i <= n; ++i) {
    sum += (std::pow(2.0, shared[std::size_t(i - 1)]) - 1.0) /
           (std::log(1.0 + i) / std::log(2.0));
  }
  return sum;
}

inline double ndcg(const std::vector<int>& shared, int n) {
  std::vector<int> ideal(shared.begin(), shared.begin() + n);
  std::sort(ideal.begin(), ideal.end());
  std::reverse(ideal.begin(), ideal.end());
  const double z = dcg(ideal, n);
  if (z == 0.0) return 0.0;
  return dcg(shared, n) / z;
}

inline double precision(const std::vector<int>& shared, int n) {
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += shared[std::size_t(i)] > 0 ? 1 : 0;
  return double(hits) / n;
}

inline int relevant_in_top(const std::vector<int>& shared, int upto) {
  int count = 0;
  for (int i = 0; i < upto; ++i) count += shared[std::size_t(i)] > 0 ? 1 : 0;
  return count;
}

inline double average_precision(const std::vector<int>& shared, int n) {
  const int total = relevant_in_top(shared, n);
  if (total == 0) return 0.0;
  double sum = 0.0;
  for (int i = 1; i <= n; ++i) {
    if (shared[std::size_t(i - 1)] > 0) {
      sum += double(relevant_in_top(shared, i)) / i;
    }
  }
  return sum / total;
}

inline double weighted_average_precision(const std::vector<int>& shared, int n) {
  const int total = relevant_in_top(shared, n);
  if (total == 0) return 0.0;
  double sum = 0.0;
  for (int i = 1; i <= n; ++i) {
    if (shared[std::size_t(i - 1)] > 0) sum += acg(shared, i);
  }
  return sum / total;
}

// Mean over queries with at least one relevant item in the top n.
inline double mean_over_relevant(const std::vector<std::vector<int>>& profiles, int n,
                                 double (*per_query)(const std::vector<int>&, int)) {
  double sum = 0.0;
  int kept = 0;
  for (const std::vector<int>& p : profiles) {
    if (relevant_in_top(p, n) > 0) {
      sum += per_query(p, n);
      ++kept;
    }
  }
  return sum / kept;
}

}  // namespace naive
