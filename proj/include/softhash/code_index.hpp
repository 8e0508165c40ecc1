#pragma once

#include "softhash/types.hpp"

#include <cstdint>
#include <vector>

namespace softhash {

// q-bit binary code packed into 64-bit words. Bit k of the stream (word
// k/64, bit k%64) set means b_k = +1, clear means b_k = -1. Pad bits past q
// are kept zero so packed buffers hash and compare canonically.
struct BinaryCode {
  int bits = 0;
  std::vector<std::uint64_t> words;
};

inline std::size_t words_for_bits(int bits) { return (std::size_t(bits) + 63) / 64; }
inline std::size_t bytes_for_bits(int bits) { return (std::size_t(bits) + 7) / 8; }

// Sign binarization with sgn(0) = +1.
BinaryCode binarize(const Eigen::Ref<const Vector>& u);

// Expands back to a +-1 integer vector.
LabelVector unpack(const BinaryCode& code);

int hamming(const BinaryCode& a, const BinaryCode& b);

// <a, b> over +-1 entries, which equals q - 2 * hamming(a, b).
int inner_product(const BinaryCode& a, const BinaryCode& b);

// Immutable array of equal-length codes in one contiguous word buffer.
class CodeSet {
 public:
  CodeSet() = default;
  explicit CodeSet(int bits) : bits_(bits), stride_(words_for_bits(bits)) {}

  int bits() const { return bits_; }
  std::size_t size() const { return count_; }
  std::size_t word_stride() const { return stride_; }
  const std::uint64_t* code_words(std::size_t i) const { return words_.data() + i * stride_; }

  void append(const BinaryCode& code);
  BinaryCode at(std::size_t i) const;

 private:
  int bits_ = 0;
  std::size_t stride_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> words_;

  friend CodeSet load_codes(const std::string& path);
};

// Binarizes every column of a relaxed-code matrix (q x N).
CodeSet binarize_all(const Eigen::Ref<const Matrix>& codes);

int hamming(const BinaryCode& query, const CodeSet& db, std::size_t i);

struct RankedHit {
  int id = 0;
  int distance = 0;
};

// Ascending Hamming distance, ties broken by ascending id. Linear scan plus
// counting sort, so the order is total and reproducible.
std::vector<RankedHit> rank(const BinaryCode& query, const CodeSet& db);

}  // namespace softhash
