// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "splatlight/container.hpp"
#include "splatlight/mesh.hpp"

namespace splatlight {

// Texel -> surface correspondence for a fixed template. Pose independent:
// baking only reads the UV atlas, so the same map serves every frame.
struct TexelSurfaceMap {
  int height = 0;
  int width = 0;
  std::vector<int32_t> face;  // -1 marks invalid texels
  std::vector<Vec3d> bary;    // non-negative, sums to 1 where valid

  bool valid(int row, int col) const { return face[size_t(row) * width + col] >= 0; }
  size_t index(int row, int col) const { return size_t(row) * width + col; }

  size_t valid_count() const {
    size_t n = 0;
    for (auto f : face) n += (f >= 0);
    return n;
  }
};

namespace detail {

struct UvTri {
  Vec2d a, b, c;
  double area2;  // signed doubled area, (u right, v down) orientation
};

// Antisymmetric tie-break so texel centers on a shared edge land in exactly
// one face.
inline bool tie_break_edge(Vec2d d) { return d.y < 0 || (d.y == 0 && d.x > 0); }

inline double edge_fn(Vec2d a, Vec2d b, Vec2d p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

// Distance from p to the triangle boundary when p is inside (min edge
// distance); used for the overlap margin test.
inline double interior_margin(const UvTri& t, Vec2d p) {
  double m = std::numeric_limits<double>::max();
  const Vec2d* v[3] = {&t.a, &t.b, &t.c};
  for (int i = 0; i < 3; i++) {
    Vec2d a = *v[i], b = *v[(i + 1) % 3];
    double len = length(b - a);
    if (len <= 0) return 0;
    double dist = std::abs(edge_fn(a, b, p)) / len;
    m = std::min(m, dist);
  }
  return m;
}

}  // namespace detail

// Rasterizes the UV atlas with texel-center coverage, antisymmetric edge
// tie-breaking, and one texel of conservative dilation at chart boundaries.
// Texel (row, col) has UV center ((col+0.5)/width, (row+0.5)/height).
inline TexelSurfaceMap bake_texel_surface_map(const SkinnedTemplate& tpl, int height, int width) {
  if (height < 8 || width < 8) throw std::invalid_argument("bake_texel_surface_map: resolution below 8x8");

  TexelSurfaceMap map;
  map.height = height;
  map.width = width;
  map.face.assign(size_t(height) * width, -1);
  map.bary.assign(size_t(height) * width, Vec3d{0, 0, 0});

  std::vector<detail::UvTri> tris(tpl.faces.size());
  for (size_t f = 0; f < tpl.faces.size(); f++) {
    const auto& uv = tpl.face_uvs[f];
    tris[f] = {tpl.uv_coords[uv[0]], tpl.uv_coords[uv[1]], tpl.uv_coords[uv[2]], 0};
    tris[f].area2 = detail::edge_fn(tris[f].a, tris[f].b, tris[f].c);
  }

  const double half_texel = 0.5 / std::max(height, width);
  std::string overlap_report;
  int overlap_count = 0;

  for (size_t f = 0; f < tris.size(); f++) {
    const auto& t = tris[f];
    if (t.area2 == 0) continue;  // degenerate UV face covers nothing
    double sign = t.area2 > 0 ? 1.0 : -1.0;
    Vec2d lo{std::min({t.a.x, t.b.x, t.c.x}), std::min({t.a.y, t.b.y, t.c.y})};
    Vec2d hi{std::max({t.a.x, t.b.x, t.c.x}), std::max({t.a.y, t.b.y, t.c.y})};
    int c0 = std::max(0, int(std::floor(lo.x * width - 0.5)));
    int c1 = std::min(width - 1, int(std::ceil(hi.x * width - 0.5)));
    int r0 = std::max(0, int(std::floor(lo.y * height - 0.5)));
    int r1 = std::min(height - 1, int(std::ceil(hi.y * height - 0.5)));
    for (int r = r0; r <= r1; r++) {
      for (int c = c0; c <= c1; c++) {
        Vec2d p{(c + 0.5) / width, (r + 0.5) / height};
        double e0 = sign * detail::edge_fn(t.a, t.b, p);
        double e1 = sign * detail::edge_fn(t.b, t.c, p);
        double e2 = sign * detail::edge_fn(t.c, t.a, p);
        auto edge_dir = [&](Vec2d a, Vec2d b) { return sign > 0 ? b - a : a - b; };
        bool covered = (e0 > 0 || (e0 == 0 && detail::tie_break_edge(edge_dir(t.a, t.b)))) &&
                       (e1 > 0 || (e1 == 0 && detail::tie_break_edge(edge_dir(t.b, t.c)))) &&
                       (e2 > 0 || (e2 == 0 && detail::tie_break_edge(edge_dir(t.c, t.a))));
        if (!covered) continue;
        size_t idx = map.index(r, c);
        if (map.face[idx] >= 0) {
          // Double coverage is an atlas error only when the center sits
          // deeper than half a texel inside both faces.
          if (detail::interior_margin(tris[map.face[idx]], p) > half_texel &&
              detail::interior_margin(t, p) > half_texel) {
            if (overlap_count < 8)
              overlap_report += " (" + std::to_string(map.face[idx]) + "," + std::to_string(f) + ")";
            overlap_count++;
          }
          continue;
        }
        double inv = 1.0 / std::abs(t.area2);
        map.face[idx] = int32_t(f);
        map.bary[idx] = {e1 * inv, e2 * inv, e0 * inv};
      }
    }
  }
  if (overlap_count > 0)
    throw std::runtime_error("bake_texel_surface_map: overlapping UV charts, face pairs:" + overlap_report +
                             (overlap_count > 8 ? " ... " + std::to_string(overlap_count) + " total" : ""));

  // One-texel conservative dilation: invalid texels bordering coverage adopt
  // the first valid neighbour's face with clamped barycentrics.
  std::vector<int32_t> base_face = map.face;
  const int offsets[8][2] = {{0, -1}, {0, 1}, {-1, 0}, {1, 0}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  for (int r = 0; r < height; r++) {
    for (int c = 0; c < width; c++) {
      size_t idx = map.index(r, c);
      if (base_face[idx] >= 0) continue;
      for (const auto& off : offsets) {
        int rn = r + off[0], cn = c + off[1];
        if (rn < 0 || rn >= height || cn < 0 || cn >= width) continue;
        int32_t nf = base_face[map.index(rn, cn)];
        if (nf < 0) continue;
        const auto& t = tris[nf];
        Vec2d p{(c + 0.5) / width, (r + 0.5) / height};
        double inv = 1.0 / t.area2;
        Vec3d b{detail::edge_fn(t.b, t.c, p) * inv, detail::edge_fn(t.c, t.a, p) * inv,
                detail::edge_fn(t.a, t.b, p) * inv};
        b = {std::max(b.x, 0.0), std::max(b.y, 0.0), std::max(b.z, 0.0)};
        double sum = b.x + b.y + b.z;
        map.face[idx] = nf;
        map.bary[idx] = sum > 0 ? b / sum : Vec3d{1.0 / 3, 1.0 / 3, 1.0 / 3};
        break;
      }
    }
  }
  return map;
}

struct SurfaceSample {
  Vec3d position;
  Vec3d normal;
};

inline SurfaceSample sample_surface(const TexelSurfaceMap& map, const SkinnedTemplate& tpl, const PosedMesh& mesh,
                                    int row, int col) {
  size_t idx = map.index(row, col);
  int32_t f = map.face[idx];
  if (f < 0) throw std::invalid_argument("sample_surface: invalid texel");
  const auto& face = tpl.faces[f];
  const Vec3d b = map.bary[idx];
  SurfaceSample s;
  s.position = b.x * mesh.vertices[face[0]] + b.y * mesh.vertices[face[1]] + b.z * mesh.vertices[face[2]];
  s.normal = normalize(b.x * mesh.normals[face[0]] + b.y * mesh.normals[face[1]] + b.z * mesh.normals[face[2]]);
  return s;
}

inline void save_texel_surface_map(const std::string& path, const TexelSurfaceMap& map) {
  // Row-major [H, W, 4]: face index (as f64 for a single payload), b0, b1, b2.
  std::vector<double> payload;
  payload.reserve(map.face.size() * 4);
  for (size_t i = 0; i < map.face.size(); i++) {
    payload.push_back(double(map.face[i]));
    payload.push_back(map.bary[i].x);
    payload.push_back(map.bary[i].y);
    payload.push_back(map.bary[i].z);
  }
  write_tensor(path, {uint64_t(map.height), uint64_t(map.width), 4}, payload);
}

inline TexelSurfaceMap load_texel_surface_map(const std::string& path) {
  TensorFile t = read_tensor(path);
  if (t.dims.size() != 3 || t.dims[2] != 4) throw std::runtime_error("load_texel_surface_map: bad shape");
  TexelSurfaceMap map;
  map.height = int(t.dims[0]);
  map.width = int(t.dims[1]);
  const double* p = t.as_f64();
  size_t n = size_t(map.height) * map.width;
  map.face.resize(n);
  map.bary.resize(n);
  for (size_t i = 0; i < n; i++) {
    map.face[i] = int32_t(p[i * 4]);
    map.bary[i] = {p[i * 4 + 1], p[i * 4 + 2], p[i * 4 + 3]};
  }
  return map;
}

}  // namespace splatlight
