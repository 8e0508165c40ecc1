#include "softhash/io.hpp"

#include "softhash/label_similarity.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>

namespace softhash {

namespace {

constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  explicit Writer(const std::string& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw ValidationError("cannot open " + path + " for writing");
  }

  void magic(const char tag[4]) { out_.write(tag, 4); }
  void u32(std::uint32_t v) {
    std::array<char, 4> b;
    for (int i = 0; i < 4; ++i) b[std::size_t(i)] = char((v >> (8 * i)) & 0xFF);
    out_.write(b.data(), 4);
  }
  void u64(std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[std::size_t(i)] = char((v >> (8 * i)) & 0xFF);
    out_.write(b.data(), 8);
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void byte(std::uint8_t v) { out_.put(char(v)); }

  void finish() {
    out_.flush();
    if (!out_) throw std::runtime_error("write failed: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw ValidationError("cannot open " + path);
  }

  void expect_magic(const char tag[4]) {
    char got[4] = {};
    in_.read(got, 4);
    if (!in_ || std::memcmp(got, tag, 4) != 0) {
      throw ValidationError(path_ + ": wrong magic, expected " +
                            std::string(tag, 4));
    }
  }
  void expect_version() {
    const std::uint32_t v = u32();
    if (v != kFormatVersion) {
      throw ValidationError(path_ + ": unsupported format version " +
                            std::to_string(v));
    }
  }
  std::uint32_t u32() {
    std::array<unsigned char, 4> b;
    read(b.data(), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[std::size_t(i)]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::array<unsigned char, 8> b;
    read(b.data(), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[std::size_t(i)]) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::uint8_t byte() {
    unsigned char b;
    read(&b, 1);
    return b;
  }
  void expect_eof() {
    in_.peek();
    if (!in_.eof()) throw ValidationError(path_ + ": trailing bytes after payload");
  }

 private:
  void read(unsigned char* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), std::streamsize(n));
    if (!in_) throw ValidationError(path_ + ": truncated file");
  }

  std::string path_;
  std::ifstream in_;
};

}  // namespace

void save_model(const HashModel& model, const std::string& path) {
  Writer w(path);
  w.magic("SHMD");
  w.u32(kFormatVersion);
  w.u32(std::uint32_t(model.layers.size()));
  for (const DenseLayer& layer : model.layers) {
    w.u32(std::uint32_t(layer.weights.rows()));
    w.u32(std::uint32_t(layer.weights.cols()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) w.f64(layer.weights(r, c));
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) w.f64(layer.bias[r]);
  }
  w.finish();
}

HashModel load_model(const std::string& path) {
  Reader r(path);
  r.expect_magic("SHMD");
  r.expect_version();
  const std::uint32_t depth = r.u32();
  if (depth == 0) throw ValidationError(path + ": model has no layers");
  HashModel model;
  for (std::uint32_t l = 0; l < depth; ++l) {
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    if (rows == 0 || cols == 0) {
      throw ValidationError(path + ": zero-sized layer " + std::to_string(l));
    }
    DenseLayer layer;
    layer.weights.resize(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i) {
      for (std::uint32_t j = 0; j < cols; ++j) layer.weights(i, j) = r.f64();
    }
    layer.bias.resize(rows);
    for (std::uint32_t i = 0; i < rows; ++i) layer.bias[i] = r.f64();
    if (!model.layers.empty() &&
        Eigen::Index(cols) != model.layers.back().weights.rows()) {
      throw ValidationError(path + ": layer " + std::to_string(l) +
                            " does not chain with previous layer");
    }
    model.layers.push_back(std::move(layer));
  }
  r.expect_eof();
  return model;
}

void save_codes(const CodeSet& codes, const std::string& path) {
  Writer w(path);
  w.magic("SHCD");
  w.u32(kFormatVersion);
  w.u32(std::uint32_t(codes.size()));
  w.u32(std::uint32_t(codes.bits()));
  const std::size_t nbytes = bytes_for_bits(codes.bits());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const std::uint64_t* words = codes.code_words(i);
    for (std::size_t b = 0; b < nbytes; ++b) {
      w.byte(std::uint8_t((words[b / 8] >> (8 * (b % 8))) & 0xFF));
    }
  }
  w.finish();
}

CodeSet load_codes(const std::string& path) {
  Reader r(path);
  r.expect_magic("SHCD");
  r.expect_version();
  const std::uint32_t n = r.u32();
  const std::uint32_t bits = r.u32();
  if (bits == 0) throw ValidationError(path + ": zero code length");
  CodeSet set(int(bits));
  const std::size_t nbytes = bytes_for_bits(int(bits));
  set.words_.assign(std::size_t(n) * set.stride_, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint64_t* words = set.words_.data() + std::size_t(i) * set.stride_;
    for (std::size_t b = 0; b < nbytes; ++b) {
      words[b / 8] |= std::uint64_t(r.byte()) << (8 * (b % 8));
    }
    // canonical form: bits past q must be zero
    for (int k = int(bits); k < int(nbytes * 8); ++k) {
      if ((words[std::size_t(k) / 64] >> (k % 64)) & 1) {
        throw ValidationError(path + ": nonzero pad bits in code " + std::to_string(i));
      }
    }
  }
  set.count_ = n;
  r.expect_eof();
  return set;
}

void save_features(const MatrixF& features, const std::string& path) {
  Writer w(path);
  w.magic("SHFT");
  w.u32(kFormatVersion);
  w.u32(std::uint32_t(features.cols()));
  w.u32(std::uint32_t(features.rows()));
  for (Eigen::Index i = 0; i < features.cols(); ++i) {
    for (Eigen::Index k = 0; k < features.rows(); ++k) w.f32(features(k, i));
  }
  w.finish();
}

MatrixF load_features(const std::string& path) {
  Reader r(path);
  r.expect_magic("SHFT");
  r.expect_version();
  const std::uint32_t n = r.u32();
  const std::uint32_t d = r.u32();
  if (n == 0 || d == 0) throw ValidationError(path + ": empty feature matrix");
  MatrixF features(d, n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t k = 0; k < d; ++k) {
      const float v = r.f32();
      if (!std::isfinite(v)) {
        throw ValidationError(path + ": non-finite feature at record " +
                              std::to_string(i));
      }
      features(k, i) = v;
    }
  }
  r.expect_eof();
  return features;
}

void save_labels(const LabelMatrix& labels, const std::string& path) {
  validate_labels(labels, path);
  Writer w(path);
  w.magic("SHLB");
  w.u32(kFormatVersion);
  w.u32(std::uint32_t(labels.cols()));
  w.u32(std::uint32_t(labels.rows()));
  for (Eigen::Index i = 0; i < labels.cols(); ++i) {
    for (Eigen::Index c = 0; c < labels.rows(); ++c) w.byte(std::uint8_t(labels(c, i)));
  }
  w.finish();
}

LabelMatrix load_labels(const std::string& path) {
  Reader r(path);
  r.expect_magic("SHLB");
  r.expect_version();
  const std::uint32_t n = r.u32();
  const std::uint32_t c = r.u32();
  if (n == 0 || c == 0) throw ValidationError(path + ": empty label matrix");
  LabelMatrix labels(c, n);
  for (std::uint32_t i = 0; i < n; ++i) {
    int set = 0;
    for (std::uint32_t k = 0; k < c; ++k) {
      const std::uint8_t v = r.byte();
      if (v > 1) {
        throw ValidationError(path + ": non-binary label byte at record " +
                              std::to_string(i));
      }
      labels(k, i) = v;
      set += v;
    }
    if (set == 0) {
      throw ValidationError(path + ": record " + std::to_string(i) + " has no labels");
    }
  }
  r.expect_eof();
  return labels;
}

std::string format_double(double value) {
  std::array<char, 64> buf;
  const std::to_chars_result res =
      std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

}  // namespace softhash
