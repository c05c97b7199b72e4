// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace splatlight {

// Binary tensor container, little-endian throughout:
//   magic "RHTC" (4 bytes) | version u16 | rank u16 | dims u64[rank] |
//   dtype u8 (0=f32, 1=f64, 2=u8) | payload, row-major.
enum class Dtype : uint8_t { F32 = 0, F64 = 1, U8 = 2 };

inline size_t dtype_size(Dtype t) {
  switch (t) {
    case Dtype::F32: return 4;
    case Dtype::F64: return 8;
    case Dtype::U8: return 1;
  }
  throw std::runtime_error("unknown dtype");
}

struct TensorFile {
  std::vector<uint64_t> dims;
  Dtype dtype = Dtype::F32;
  std::vector<uint8_t> payload;

  uint64_t element_count() const {
    uint64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }
  const float* as_f32() const {
    if (dtype != Dtype::F32) throw std::runtime_error("tensor is not f32");
    return reinterpret_cast<const float*>(payload.data());
  }
  const double* as_f64() const {
    if (dtype != Dtype::F64) throw std::runtime_error("tensor is not f64");
    return reinterpret_cast<const double*>(payload.data());
  }
  const uint8_t* as_u8() const {
    if (dtype != Dtype::U8) throw std::runtime_error("tensor is not u8");
    return payload.data();
  }
};

namespace detail {
template <typename T>
inline void write_le(std::ofstream& out, T v) {
  // Host is little-endian on every supported target.
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
inline T read_le(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}
template <typename T> struct dtype_of;
template <> struct dtype_of<float> { static constexpr Dtype value = Dtype::F32; };
template <> struct dtype_of<double> { static constexpr Dtype value = Dtype::F64; };
template <> struct dtype_of<uint8_t> { static constexpr Dtype value = Dtype::U8; };
}  // namespace detail

constexpr uint16_t kTensorFileVersion = 1;

inline void write_tensor_raw(const std::string& path, const std::vector<uint64_t>& dims, Dtype dtype,
                             const void* payload, size_t payload_bytes) {
  uint64_t n = 1;
  for (auto d : dims) n *= d;
  if (payload_bytes != n * dtype_size(dtype))
    throw std::invalid_argument("write_tensor: payload size does not match dims");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_tensor: cannot open " + path);
  out.write("RHTC", 4);
  detail::write_le<uint16_t>(out, kTensorFileVersion);
  detail::write_le<uint16_t>(out, uint16_t(dims.size()));
  for (auto d : dims) detail::write_le<uint64_t>(out, d);
  detail::write_le<uint8_t>(out, uint8_t(dtype));
  out.write(reinterpret_cast<const char*>(payload), std::streamsize(payload_bytes));
  if (!out) throw std::runtime_error("write_tensor: write failed for " + path);
}

template <typename T>
inline void write_tensor(const std::string& path, const std::vector<uint64_t>& dims, const std::vector<T>& values) {
  write_tensor_raw(path, dims, detail::dtype_of<T>::value, values.data(), values.size() * sizeof(T));
}

inline TensorFile read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_tensor: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "RHTC", 4) != 0)
    throw std::runtime_error("read_tensor: bad magic in " + path);
  uint16_t version = detail::read_le<uint16_t>(in);
  if (version != kTensorFileVersion) throw std::runtime_error("read_tensor: unsupported version");
  uint16_t rank = detail::read_le<uint16_t>(in);
  TensorFile t;
  t.dims.resize(rank);
  for (auto& d : t.dims) d = detail::read_le<uint64_t>(in);
  t.dtype = Dtype(detail::read_le<uint8_t>(in));
  if (t.dtype != Dtype::F32 && t.dtype != Dtype::F64 && t.dtype != Dtype::U8)
    throw std::runtime_error("read_tensor: unknown dtype tag");
  t.payload.resize(t.element_count() * dtype_size(t.dtype));
  in.read(reinterpret_cast<char*>(t.payload.data()), std::streamsize(t.payload.size()));
  if (!in) throw std::runtime_error("read_tensor: truncated payload in " + path);
  return t;
}

}  // namespace splatlight
