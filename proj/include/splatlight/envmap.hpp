// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "splatlight/image.hpp"
#include "splatlight/math.hpp"

namespace splatlight {

// ---------------------------------------------------------------------------
// Equirectangular HDR environment map. Convention used everywhere: world up
// is +y, row 0 is the zenith, azimuth runs along columns:
//   theta = pi * (row + 0.5) / rows      (inclination from +y)
//   phi   = 2 pi * (col + 0.5) / cols
//   dir   = (sin t cos p, cos t, sin t sin p)
// ---------------------------------------------------------------------------

struct EnvironmentMap {
  Imaged radiance;  // rows x cols x 3, linear RGB, finite and >= 0

  int rows() const { return radiance.height; }
  int cols() const { return radiance.width; }

  static Vec3d direction(double row, double col, int rows, int cols) {
    double theta = pi<double> * (row + 0.5) / rows;
    double phi = 2.0 * pi<double> * (col + 0.5) / cols;
    double st = std::sin(theta);
    return {st * std::cos(phi), std::cos(theta), st * std::sin(phi)};
  }

  Vec3d pixel_direction(int row, int col) const { return direction(row, col, rows(), cols()); }

  void validate() const {
    if (radiance.channels != 3) throw std::invalid_argument("environment map must have 3 channels");
    for (double v : radiance.data)
      if (!std::isfinite(v) || v < 0) throw std::invalid_argument("environment map radiance must be finite and >= 0");
  }

  static EnvironmentMap constant(Vec3d value, int rows = 256, int cols = 512) {
    EnvironmentMap env;
    env.radiance = Imaged(cols, rows, 3);
    for (int r = 0; r < rows; r++)
      for (int c = 0; c < cols; c++) env.radiance.set_rgb(r, c, value);
    return env;
  }
};

inline EnvironmentMap load_environment_pfm(const std::string& path) {
  EnvironmentMap env;
  env.radiance = read_pfm(path).cast<double>();
  env.validate();
  return env;
}

inline void save_environment_pfm(const std::string& path, const EnvironmentMap& env) {
  write_pfm(path, env.radiance.cast<float>());
}

// Procedural HDR environment: a few von Mises-Fisher lobes over a dim
// ambient floor. Deterministic per seed.
inline EnvironmentMap make_random_environment(uint64_t seed, int rows = 256, int cols = 512) {
  Rng rng(seed);
  int lobes = rng.uniform_int(2, 5);
  struct Lobe {
    Vec3d axis;
    double kappa;
    Vec3d amplitude;
  };
  std::vector<Lobe> ls;
  for (int k = 0; k < lobes; k++) {
    ls.push_back({rng.unit_vector(), rng.uniform(6.0, 60.0),
                  Vec3d{rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)}});
  }
  Vec3d ambient{rng.uniform(0.02, 0.15), rng.uniform(0.02, 0.15), rng.uniform(0.02, 0.15)};
  EnvironmentMap env;
  env.radiance = Imaged(cols, rows, 3);
  for (int r = 0; r < rows; r++)
    for (int c = 0; c < cols; c++) {
      Vec3d dir = EnvironmentMap::direction(r, c, rows, cols);
      Vec3d v = ambient;
      for (const auto& l : ls) v += std::exp(l.kappa * (dot(dir, l.axis) - 1.0)) * l.amplitude;
      env.radiance.set_rgb(r, c, v);
    }
  return env;
}

// ---------------------------------------------------------------------------
// Discrete LED rig on a stage sphere around the capture volume.
// ---------------------------------------------------------------------------

struct LedRig {
  std::vector<Vec3d> positions;  // meters, stage frame centered at origin
  std::vector<double> weights;   // per-LED solid angle

  size_t size() const { return positions.size(); }

  void validate() const {
    if (positions.size() != weights.size()) throw std::invalid_argument("rig: positions/weights size mismatch");
    for (double w : weights)
      if (!(w > 0)) throw std::invalid_argument("rig: weights must be positive");
    for (size_t i = 0; i < positions.size(); i++)
      for (size_t j = i + 1; j < positions.size(); j++)
        if (length(positions[i] - positions[j]) < 1e-12) throw std::invalid_argument("rig: duplicate LED positions");
  }

  // Near-uniform full-sphere placement; the weight is the average solid angle
  // per LED so that sums over the rig approximate sphere integrals.
  static LedRig fibonacci_sphere(int count = 331, double radius = 3.0) {
    LedRig rig;
    const double ga = pi<double> * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; i++) {
      double y = 1.0 - (2.0 * i + 1.0) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - y * y));
      double phi = ga * i;
      rig.positions.push_back(radius * Vec3d{r * std::cos(phi), y, r * std::sin(phi)});
      rig.weights.push_back(4.0 * pi<double> / count);
    }
    return rig;
  }

  // Upper hemisphere (y > 0) placement; weights sum to 2 pi.
  static LedRig fibonacci_hemisphere(int count, double radius = 3.0) {
    LedRig rig;
    const double ga = pi<double> * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; i++) {
      double y = (i + 0.5) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - y * y));
      double phi = ga * i;
      rig.positions.push_back(radius * Vec3d{r * std::cos(phi), y, r * std::sin(phi)});
      rig.weights.push_back(2.0 * pi<double> / count);
    }
    return rig;
  }
};

struct RigLighting {
  std::vector<Vec3d> intensity;  // linear RGB per LED, finite and >= 0

  size_t size() const { return intensity.size(); }

  void validate(const LedRig& rig) const {
    if (intensity.size() != rig.size()) throw std::invalid_argument("lighting does not match rig size");
    for (const auto& v : intensity)
      for (int c = 0; c < 3; c++)
        if (!std::isfinite(v[c]) || v[c] < 0) throw std::invalid_argument("lighting must be finite and >= 0");
  }

  static RigLighting zero(const LedRig& rig) {
    RigLighting l;
    l.intensity.assign(rig.size(), Vec3d{0, 0, 0});
    return l;
  }

  static RigLighting uniform(const LedRig& rig, double value) {
    RigLighting l;
    l.intensity.assign(rig.size(), Vec3d{value, value, value});
    return l;
  }
};

// Nearest-LED quantization of an environment map: each pixel is assigned to
// the angularly closest LED, per-LED values are the mean over assigned
// pixels, and the result is scaled so the maximum channel equals `cap`.
// cap <= 0 skips the normalization (raw averaged intensities).
inline RigLighting quantize_to_rig(const EnvironmentMap& env, const LedRig& rig, double cap = 0.0) {
  std::vector<Vec3d> led_dirs(rig.size());
  for (size_t i = 0; i < rig.size(); i++) led_dirs[i] = normalize(rig.positions[i]);

  RigLighting out = RigLighting::zero(rig);
  std::vector<int64_t> counts(rig.size(), 0);
  for (int r = 0; r < env.rows(); r++) {
    for (int c = 0; c < env.cols(); c++) {
      Vec3d dir = env.pixel_direction(r, c);
      size_t best = 0;
      double best_dot = -2;
      for (size_t i = 0; i < rig.size(); i++) {
        double d = dot(dir, led_dirs[i]);
        if (d > best_dot) {
          best_dot = d;
          best = i;
        }
      }
      out.intensity[best] += env.radiance.rgb(r, c);
      counts[best]++;
    }
  }
  for (size_t i = 0; i < rig.size(); i++)
    if (counts[i] > 0) out.intensity[i] = out.intensity[i] / double(counts[i]);

  if (cap > 0) {
    double peak = 0;
    for (const auto& v : out.intensity) peak = std::max(peak, max_component(v));
    if (peak > 0) {
      double scale = cap / peak;
      for (auto& v : out.intensity) v *= scale;
    }
  }
  return out;
}

// One lighting condition per LED, with only that LED lit.
inline std::vector<RigLighting> olat_basis(const LedRig& rig, double intensity) {
  if (!(intensity > 0)) throw std::invalid_argument("olat_basis: intensity must be > 0");
  std::vector<RigLighting> basis(rig.size(), RigLighting::zero(rig));
  for (size_t i = 0; i < rig.size(); i++) basis[i].intensity[i] = Vec3d{intensity, intensity, intensity};
  return basis;
}

// ---------------------------------------------------------------------------
// Interleaved capture schedule: tracking and relit frames strictly alternate,
// relit frames cycle the provided environment ids in order.
// ---------------------------------------------------------------------------

enum class FrameType { Tracking, Relit };

struct ScheduleFrame {
  FrameType type = FrameType::Tracking;
  int env_id = -1;             // valid for relit frames
  int adjacent_tracking = -1;  // index of the paired tracking frame
};

struct CaptureSchedule {
  double fps = 0;
  std::vector<ScheduleFrame> frames;

  void validate() const {
    if (!(fps > 0)) throw std::invalid_argument("schedule: fps must be > 0");
    for (size_t i = 0; i + 1 < frames.size(); i++)
      if (frames[i].type == frames[i + 1].type)
        throw std::invalid_argument("schedule: frame types must strictly alternate");
  }
};

inline CaptureSchedule make_schedule(const std::vector<int>& env_ids, double fps, int passes = 1) {
  if (env_ids.empty()) throw std::invalid_argument("make_schedule: env_ids must be nonempty");
  if (!(fps > 0)) throw std::invalid_argument("make_schedule: fps must be > 0");
  CaptureSchedule s;
  s.fps = fps;
  for (int p = 0; p < passes; p++) {
    for (int id : env_ids) {
      int tracking_index = int(s.frames.size());
      s.frames.push_back({FrameType::Tracking, -1, -1});
      s.frames.push_back({FrameType::Relit, id, tracking_index});
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Environment tokens for cross-attention: box-filtered down to the token
// grid, each token carrying its mean RGB, grid coordinate, and a fixed
// 64-dimensional sinusoidal positional encoding of that coordinate.
// ---------------------------------------------------------------------------

constexpr int kPositionalEncodingDims = 64;

// Transformer-style encoding of a 2D grid coordinate: 32 dims per axis.
inline std::array<double, kPositionalEncodingDims> positional_encoding_2d(int row, int col) {
  std::array<double, kPositionalEncodingDims> pe{};
  constexpr int per_axis = kPositionalEncodingDims / 2;
  for (int axis = 0; axis < 2; axis++) {
    double pos = axis == 0 ? double(row) : double(col);
    for (int i = 0; i < per_axis / 2; i++) {
      double freq = std::pow(10000.0, -2.0 * i / per_axis);
      pe[axis * per_axis + 2 * i] = std::sin(pos * freq);
      pe[axis * per_axis + 2 * i + 1] = std::cos(pos * freq);
    }
  }
  return pe;
}

struct EnvTokenSet {
  int grid_rows = 0;
  int grid_cols = 0;
  std::vector<Vec3d> rgb;
  std::vector<Vec2i> coords;
  std::vector<std::array<double, kPositionalEncodingDims>> pe;

  size_t size() const { return rgb.size(); }
};

inline EnvTokenSet env_tokens(const EnvironmentMap& env, int token_rows, int token_cols) {
  if (token_rows <= 0 || token_cols <= 0 || env.rows() % token_rows != 0 || env.cols() % token_cols != 0)
    throw std::invalid_argument("env_tokens: token grid must divide the environment resolution");
  int block_r = env.rows() / token_rows;
  int block_c = env.cols() / token_cols;
  EnvTokenSet tokens;
  tokens.grid_rows = token_rows;
  tokens.grid_cols = token_cols;
  for (int tr = 0; tr < token_rows; tr++) {
    for (int tc = 0; tc < token_cols; tc++) {
      Vec3d acc{0, 0, 0};
      for (int r = 0; r < block_r; r++)
        for (int c = 0; c < block_c; c++) acc += env.radiance.rgb(tr * block_r + r, tc * block_c + c);
      tokens.rgb.push_back(acc / double(block_r * block_c));
      tokens.coords.push_back({tr, tc});
      tokens.pe.push_back(positional_encoding_2d(tr, tc));
    }
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// JSON persistence for rigs and schedules
// ---------------------------------------------------------------------------

inline void save_led_rig_json(const std::string& path, const LedRig& rig) {
  nlohmann::json j;
  j["positions"] = nlohmann::json::array();
  for (const auto& p : rig.positions) j["positions"].push_back({p.x, p.y, p.z});
  j["weights"] = rig.weights;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_led_rig: cannot open " + path);
  out << j.dump(1) << "\n";
}

inline LedRig load_led_rig_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_led_rig: cannot open " + path);
  nlohmann::json j;
  in >> j;
  LedRig rig;
  for (const auto& p : j.at("positions"))
    rig.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
  rig.weights = j.at("weights").get<std::vector<double>>();
  rig.validate();
  return rig;
}

inline void save_schedule_json(const std::string& path, const CaptureSchedule& s) {
  nlohmann::json j;
  j["fps"] = s.fps;
  j["frames"] = nlohmann::json::array();
  for (const auto& f : s.frames) {
    nlohmann::json jf;
    jf["type"] = f.type == FrameType::Tracking ? "tracking" : "relit";
    if (f.type == FrameType::Relit) {
      jf["env"] = f.env_id;
      jf["adjacent_tracking"] = f.adjacent_tracking;
    }
    j["frames"].push_back(std::move(jf));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_schedule: cannot open " + path);
  out << j.dump(1) << "\n";
}

inline CaptureSchedule load_schedule_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_schedule: cannot open " + path);
  nlohmann::json j;
  in >> j;
  CaptureSchedule s;
  s.fps = j.at("fps").get<double>();
  for (const auto& jf : j.at("frames")) {
    ScheduleFrame f;
    if (jf.at("type") == "relit") {
      f.type = FrameType::Relit;
      f.env_id = jf.at("env").get<int>();
      f.adjacent_tracking = jf.at("adjacent_tracking").get<int>();
    }
    s.frames.push_back(f);
  }
  s.validate();
  return s;
}

}  // namespace splatlight
