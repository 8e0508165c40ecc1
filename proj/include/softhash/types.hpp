#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace softhash {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixF = Eigen::MatrixXf;

// Multi-hot class memberships. Items are columns, one row per class;
// entries are 0/1 integers so set logic stays exact.
using LabelMatrix = Eigen::MatrixXi;
using LabelVector = Eigen::VectorXi;

// Bad user input: malformed flags or config, unreadable or inconsistent
// files, dimension mismatches. The CLI maps this to exit status 1;
// every other exception exits 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// splitmix64 step, used to derive independent RNG streams from one user seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace softhash
