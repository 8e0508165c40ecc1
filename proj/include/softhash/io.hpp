#pragma once

#include "softhash/code_index.hpp"
#include "softhash/hash_model.hpp"
#include "softhash/types.hpp"

#include <string>

namespace softhash {

// All files are little-endian with a 4-byte ASCII magic and a u32 version.
// Readers reject unknown magic or version and truncated payloads outright.
//
//   model    "SHMD": layer count u32, then per layer rows u32, cols u32,
//            row-major f64 weights, f64 biases
//   codes    "SHCD": N u32, q u32, then N codes of ceil(q/8) bytes, bits
//            LSB-first within each byte, pad bits zero
//   features "SHFT": N u32, d u32, row-major f32 (one record per item)
//   labels   "SHLB": N u32, C u32, N*C bytes of 0/1 (one record per item)

void save_model(const HashModel& model, const std::string& path);
HashModel load_model(const std::string& path);

void save_codes(const CodeSet& codes, const std::string& path);
CodeSet load_codes(const std::string& path);

// Features are held as d x N (items in columns); records on disk are rows.
void save_features(const MatrixF& features, const std::string& path);
MatrixF load_features(const std::string& path);

// Labels are held as C x N; rejects non-binary bytes and all-zero records.
void save_labels(const LabelMatrix& labels, const std::string& path);
LabelMatrix load_labels(const std::string& path);

// Shortest round-trip decimal form, for reproducible CSV output.
std::string format_double(double value);

}  // namespace softhash
