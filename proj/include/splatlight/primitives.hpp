// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "splatlight/mesh.hpp"

namespace splatlight {

// Single root joint without DOFs and a single graph node: the template is
// rigid until a scene attaches a real rig.
inline void attach_trivial_rig(SkinnedTemplate& tpl) {
  tpl.skeleton.joints = {Joint{"root", -1, Rigidd::identity(), {}}};
  tpl.skinning_weights.assign(tpl.vertices.size(), {Influence{0, 1.0}});
  tpl.graph.node_positions = {Vec3d{0, 0, 0}};
  tpl.graph.vertex_weights.assign(tpl.vertices.size(), {Influence{0, 1.0}});
}

// One triangle whose UV footprint covers the whole atlas.
inline SkinnedTemplate make_triangle_template() {
  SkinnedTemplate tpl;
  tpl.vertices = {{0, 0, 0}, {3, 0, 0}, {0, 3, 0}};
  tpl.uv_coords = {{-0.5, -0.5}, {2.5, -0.5}, {-0.5, 2.5}};
  tpl.faces = {{0, 1, 2}};
  tpl.face_uvs = {{0, 1, 2}};
  attach_trivial_rig(tpl);
  return tpl;
}

// Subdivided planar quad spanning [0,size]^2 in the xz plane (normal +y),
// with UVs covering the full atlas.
inline SkinnedTemplate make_plane_template(int subdiv = 1, double size = 1.0) {
  SkinnedTemplate tpl;
  int n = subdiv + 1;
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) {
      double u = double(j) / subdiv, v = double(i) / subdiv;
      tpl.vertices.push_back({u * size, 0.0, v * size});
      tpl.uv_coords.push_back({u, v});
    }
  for (int i = 0; i < subdiv; i++)
    for (int j = 0; j < subdiv; j++) {
      int a = i * n + j, b = i * n + j + 1, c = (i + 1) * n + j, d = (i + 1) * n + j + 1;
      // +y facing: counter-clockwise seen from above
      tpl.faces.push_back({a, c, b});
      tpl.face_uvs.push_back({a, c, b});
      tpl.faces.push_back({b, c, d});
      tpl.face_uvs.push_back({b, c, d});
    }
  attach_trivial_rig(tpl);
  return tpl;
}

namespace detail {

// Longitude/latitude chart builder. ring_fn(s) gives (height y, ring radius)
// for s in [0,1] top to bottom; rings with radius 0 collapse to a pole
// vertex. Positions are shared across the UV seam; only uv corners split.
struct ChartRect {
  double u0 = 0, v0 = 0, u1 = 1, v1 = 1;
};

inline void add_revolution_chart(SkinnedTemplate& tpl, int rings, int segments,
                                 const std::function<std::pair<double, double>(double)>& ring_fn,
                                 Vec3d center, ChartRect rect) {
  const int uv_base = int(tpl.uv_coords.size());
  std::vector<std::vector<int>> ring_vertex(rings + 1);
  for (int i = 0; i <= rings; i++) {
    double s = double(i) / rings;
    auto [y, radius] = ring_fn(s);
    if (radius <= 0) {
      ring_vertex[i] = {int(tpl.vertices.size())};
      tpl.vertices.push_back(center + Vec3d{0, y, 0});
    } else {
      ring_vertex[i].resize(segments);
      for (int j = 0; j < segments; j++) {
        double phi = 2.0 * pi<double> * j / segments;
        ring_vertex[i][j] = int(tpl.vertices.size());
        tpl.vertices.push_back(center + Vec3d{radius * std::cos(phi), y, radius * std::sin(phi)});
      }
    }
    for (int j = 0; j <= segments; j++) {
      double u = rect.u0 + (rect.u1 - rect.u0) * double(j) / segments;
      double v = rect.v0 + (rect.v1 - rect.v0) * s;
      tpl.uv_coords.push_back({u, v});
    }
  }
  auto uv_index = [&](int i, int j) { return uv_base + i * (segments + 1) + j; };
  auto vert = [&](int i, int j) {
    const auto& ring = ring_vertex[i];
    return ring.size() == 1 ? ring[0] : ring[j % segments];
  };
  for (int i = 0; i < rings; i++) {
    for (int j = 0; j < segments; j++) {
      int a = vert(i, j), b = vert(i, j + 1), c = vert(i + 1, j), d = vert(i + 1, j + 1);
      int ua = uv_index(i, j), ub = uv_index(i, j + 1), uc = uv_index(i + 1, j), ud = uv_index(i + 1, j + 1);
      if (a != b) {
        tpl.faces.push_back({a, c, b});
        tpl.face_uvs.push_back({ua, uc, ub});
      }
      if (c != d) {
        tpl.faces.push_back({b, c, d});
        tpl.face_uvs.push_back({ub, uc, ud});
      }
    }
  }
}

}  // namespace detail

inline SkinnedTemplate make_sphere_template(double radius = 1.0, int rings = 16, int segments = 32,
                                            Vec3d center = {0, 0, 0}) {
  SkinnedTemplate tpl;
  detail::add_revolution_chart(
      tpl, rings, segments,
      [radius](double s) {
        double theta = pi<double> * s;
        return std::pair<double, double>{radius * std::cos(theta), radius * std::sin(theta)};
      },
      center, {0.02, 0.02, 0.98, 0.98});
  attach_trivial_rig(tpl);
  return tpl;
}

// Capsule along the y axis: hemispherical caps of the given radius around a
// cylinder of half_length. UV chart occupies the given rect.
inline void add_capsule_chart(SkinnedTemplate& tpl, double radius, double half_length, int rings, int segments,
                              Vec3d center, detail::ChartRect rect) {
  detail::add_revolution_chart(
      tpl, rings, segments,
      [radius, half_length](double s) -> std::pair<double, double> {
        if (s < 0.25) {
          double a = s / 0.25 * pi<double> / 2;
          return {half_length + radius * std::cos(a), radius * std::sin(a)};
        }
        if (s < 0.75) {
          return {half_length - (s - 0.25) / 0.5 * 2 * half_length, radius};
        }
        double a = (s - 0.75) / 0.25 * pi<double> / 2;
        return {-half_length - radius * std::sin(a), radius * std::cos(a)};
      },
      center, rect);
}

inline void add_sphere_chart(SkinnedTemplate& tpl, double radius, int rings, int segments, Vec3d center,
                             detail::ChartRect rect) {
  detail::add_revolution_chart(
      tpl, rings, segments,
      [radius](double s) {
        double theta = pi<double> * s;
        return std::pair<double, double>{radius * std::cos(theta), radius * std::sin(theta)};
      },
      center, rect);
}

}  // namespace splatlight
