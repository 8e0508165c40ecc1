#include "softhash/code_index.hpp"

#include <bit>
#include <string>

namespace softhash {

namespace {

void check_same_bits(int a, int b) {
  if (a != b) {
    throw ValidationError("code length mismatch: " + std::to_string(a) + " vs " +
                          std::to_string(b));
  }
  if (a < 1) throw ValidationError("code length must be >= 1");
}

int hamming_words(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  int dist = 0;
  for (std::size_t w = 0; w < n; ++w) dist += std::popcount(a[w] ^ b[w]);
  return dist;
}

}  // namespace

BinaryCode binarize(const Eigen::Ref<const Vector>& u) {
  if (u.size() == 0) throw ValidationError("cannot binarize an empty code");
  BinaryCode code;
  code.bits = int(u.size());
  code.words.assign(words_for_bits(code.bits), 0);
  for (int k = 0; k < code.bits; ++k) {
    if (u[k] >= 0.0) code.words[std::size_t(k) / 64] |= std::uint64_t(1) << (k % 64);
  }
  return code;
}

LabelVector unpack(const BinaryCode& code) {
  LabelVector out(code.bits);
  for (int k = 0; k < code.bits; ++k) {
    out[k] = (code.words[std::size_t(k) / 64] >> (k % 64)) & 1 ? 1 : -1;
  }
  return out;
}

int hamming(const BinaryCode& a, const BinaryCode& b) {
  check_same_bits(a.bits, b.bits);
  return hamming_words(a.words.data(), b.words.data(), a.words.size());
}

int inner_product(const BinaryCode& a, const BinaryCode& b) {
  return a.bits - 2 * hamming(a, b);
}

void CodeSet::append(const BinaryCode& code) {
  check_same_bits(code.bits, bits_);
  words_.insert(words_.end(), code.words.begin(), code.words.end());
  ++count_;
}

BinaryCode CodeSet::at(std::size_t i) const {
  BinaryCode code;
  code.bits = bits_;
  code.words.assign(code_words(i), code_words(i) + stride_);
  return code;
}

CodeSet binarize_all(const Eigen::Ref<const Matrix>& codes) {
  CodeSet set(int(codes.rows()));
  for (Eigen::Index i = 0; i < codes.cols(); ++i) set.append(binarize(codes.col(i)));
  return set;
}

int hamming(const BinaryCode& query, const CodeSet& db, std::size_t i) {
  check_same_bits(query.bits, db.bits());
  return hamming_words(query.words.data(), db.code_words(i), db.word_stride());
}

std::vector<RankedHit> rank(const BinaryCode& query, const CodeSet& db) {
  check_same_bits(query.bits, db.bits());
  const std::size_t n = db.size();
  std::vector<int> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = hamming_words(query.words.data(), db.code_words(i), db.word_stride());
  }

  // Counting sort over distances 0..q; scanning ids in order makes the
  // within-bucket order ascending by id.
  std::vector<std::size_t> bucket_start(std::size_t(query.bits) + 2, 0);
  for (std::size_t i = 0; i < n; ++i) ++bucket_start[std::size_t(dist[i]) + 1];
  for (std::size_t d = 1; d < bucket_start.size(); ++d) bucket_start[d] += bucket_start[d - 1];

  std::vector<RankedHit> hits(n);
  for (std::size_t i = 0; i < n; ++i) {
    hits[bucket_start[std::size_t(dist[i])]++] = RankedHit{int(i), dist[i]};
  }
  return hits;
}

}  // namespace softhash
