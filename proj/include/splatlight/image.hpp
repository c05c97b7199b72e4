// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "splatlight/math.hpp"

namespace splatlight {

// Row-major interleaved image, row 0 at the top. Radiance images are linear
// RGB; masks and shading maps use a single channel.
template <typename T>
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, int c, T fill = T(0)) : width(w), height(h), channels(c), data(size_t(w) * h * c, fill) {}

  T& at(int row, int col, int c = 0) { return data[(size_t(row) * width + col) * channels + c]; }
  const T& at(int row, int col, int c = 0) const { return data[(size_t(row) * width + col) * channels + c]; }

  Vec3<T> rgb(int row, int col) const {
    const T* p = &data[(size_t(row) * width + col) * channels];
    return {p[0], p[1], p[2]};
  }
  void set_rgb(int row, int col, Vec3<T> v) {
    T* p = &data[(size_t(row) * width + col) * channels];
    p[0] = v.x;
    p[1] = v.y;
    p[2] = v.z;
  }

  size_t pixel_count() const { return size_t(width) * height; }

  template <typename U>
  Image<U> cast() const {
    Image<U> out(width, height, channels);
    for (size_t i = 0; i < data.size(); i++) out.data[i] = U(data[i]);
    return out;
  }
};

using Imagef = Image<float>;
using Imaged = Image<double>;
using Imageu8 = Image<uint8_t>;

// Bilinear sample at continuous pixel coordinates (x right, y down), where
// integer coordinates land on pixel centers. Clamps at the border.
template <typename T>
inline Vec3<T> sample_bilinear(const Image<T>& img, T x, T y) {
  auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
  int x0 = int(std::floor(x)), y0 = int(std::floor(y));
  T fx = x - T(x0), fy = y - T(y0);
  int x1 = clampi(x0 + 1, 0, img.width - 1), y1 = clampi(y0 + 1, 0, img.height - 1);
  x0 = clampi(x0, 0, img.width - 1);
  y0 = clampi(y0, 0, img.height - 1);
  Vec3<T> v00 = img.rgb(y0, x0), v01 = img.rgb(y0, x1);
  Vec3<T> v10 = img.rgb(y1, x0), v11 = img.rgb(y1, x1);
  Vec3<T> top = (T(1) - fx) * v00 + fx * v01;
  Vec3<T> bot = (T(1) - fx) * v10 + fx * v11;
  return (T(1) - fy) * top + fy * bot;
}

// ---------------------------------------------------------------------------
// PFM: "PF\n<w> <h>\n-1.0\n" header, then little-endian f32 rows bottom-up.
// "Pf" is the single-channel variant.
// ---------------------------------------------------------------------------

inline void write_pfm(const std::string& path, const Imagef& img) {
  if (img.channels != 1 && img.channels != 3)
    throw std::invalid_argument("write_pfm: channels must be 1 or 3");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pfm: cannot open " + path);
  out << (img.channels == 3 ? "PF" : "Pf") << "\n"
      << img.width << " " << img.height << "\n"
      << "-1.0" << "\n";
  // Negative scale marks little-endian payload.
  for (int row = img.height - 1; row >= 0; row--) {
    const float* p = &img.data[size_t(row) * img.width * img.channels];
    out.write(reinterpret_cast<const char*>(p), std::streamsize(sizeof(float)) * img.width * img.channels);
  }
  if (!out) throw std::runtime_error("write_pfm: write failed for " + path);
}

inline Imagef read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pfm: cannot open " + path);
  std::string magic;
  in >> magic;
  int channels = 0;
  if (magic == "PF")
    channels = 3;
  else if (magic == "Pf")
    channels = 1;
  else
    throw std::runtime_error("read_pfm: bad magic in " + path);
  int w = 0, h = 0;
  double scale = 0;
  in >> w >> h >> scale;
  if (!in || w <= 0 || h <= 0) throw std::runtime_error("read_pfm: bad header in " + path);
  in.get();  // single whitespace byte before the payload
  if (scale >= 0) throw std::runtime_error("read_pfm: big-endian PFM unsupported: " + path);
  Imagef img(w, h, channels);
  for (int row = h - 1; row >= 0; row--) {
    float* p = &img.data[size_t(row) * w * channels];
    in.read(reinterpret_cast<char*>(p), std::streamsize(sizeof(float)) * w * channels);
  }
  if (!in) throw std::runtime_error("read_pfm: truncated payload in " + path);
  return img;
}

}  // namespace splatlight
