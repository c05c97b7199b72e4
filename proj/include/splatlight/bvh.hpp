// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "splatlight/math.hpp"

namespace splatlight {

struct Ray {
  Vec3d origin;
  Vec3d direction;  // unit length
  double t_min = 0;
  double t_max = std::numeric_limits<double>::max();
};

struct Hit {
  double t = std::numeric_limits<double>::max();
  int face = -1;
  double u = 0, v = 0;  // barycentrics of corners 1 and 2

  bool valid() const { return face >= 0; }
};

// Moeller-Trumbore; returns false for parallel or out-of-range hits.
inline bool intersect_triangle(const Ray& ray, Vec3d v0, Vec3d v1, Vec3d v2, double& t, double& u, double& v) {
  Vec3d e1 = v1 - v0, e2 = v2 - v0;
  Vec3d pvec = cross(ray.direction, e2);
  double det = dot(e1, pvec);
  if (std::abs(det) < 1e-18) return false;
  double inv_det = 1.0 / det;
  Vec3d tvec = ray.origin - v0;
  u = dot(tvec, pvec) * inv_det;
  if (u < 0 || u > 1) return false;
  Vec3d qvec = cross(tvec, e1);
  v = dot(ray.direction, qvec) * inv_det;
  if (v < 0 || u + v > 1) return false;
  t = dot(e2, qvec) * inv_det;
  return t > ray.t_min && t < ray.t_max;
}

// Median-split BVH over posed-mesh triangles. Immutable after construction;
// all queries are read-only and thread safe.
class Bvh {
 public:
  Bvh() = default;

  Bvh(const std::vector<Vec3d>& vertices, const std::vector<std::array<int, 3>>& faces) {
    vertices_ = vertices;
    faces_ = faces;
    order_.resize(faces.size());
    for (size_t i = 0; i < faces.size(); i++) order_[i] = int(i);
    centroids_.resize(faces.size());
    bounds_.resize(faces.size());
    for (size_t i = 0; i < faces.size(); i++) {
      Aabbd b;
      for (int k : faces[i]) b.expand(vertices[k]);
      bounds_[i] = b;
      centroids_[i] = b.center();
    }
    nodes_.reserve(faces.size() * 2);
    if (!faces.empty()) build(0, int(faces.size()));
    scene_bounds_ = nodes_.empty() ? Aabbd{} : nodes_[0].bounds;
    centroids_.clear();
    bounds_.clear();
  }

  const Aabbd& scene_bounds() const { return scene_bounds_; }

  // Closest hit along the ray.
  Hit intersect(const Ray& ray) const {
    Hit best;
    if (nodes_.empty()) return best;
    double t_max = ray.t_max;
    Vec3d inv{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
    int stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
      int ni = stack[--sp];
      const Node& node = nodes_[ni];
      if (!slab_test(node.bounds, ray, inv, t_max)) continue;
      if (node.count > 0) {
        for (int i = 0; i < node.count; i++) {
          int f = order_[node.first + i];
          double t, u, v;
          Ray r = ray;
          r.t_max = t_max;
          if (intersect_triangle(r, vertices_[faces_[f][0]], vertices_[faces_[f][1]], vertices_[faces_[f][2]], t, u,
                                 v)) {
            t_max = t;
            best = {t, f, u, v};
          }
        }
      } else {
        // Left child directly follows the node; `first` holds the right child.
        stack[sp++] = node.first;
        stack[sp++] = ni + 1;
      }
    }
    return best;
  }

  // True iff any triangle blocks the open segment
  // (origin + t_min * dir, origin + t_max * dir).
  bool occluded(Vec3d origin, Vec3d direction, double max_dist, double epsilon) const {
    if (nodes_.empty()) return false;
    Ray ray{origin, direction, epsilon, max_dist};
    Vec3d inv{1.0 / direction.x, 1.0 / direction.y, 1.0 / direction.z};
    int stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
      int ni = stack[--sp];
      const Node& node = nodes_[ni];
      if (!slab_test(node.bounds, ray, inv, ray.t_max)) continue;
      if (node.count > 0) {
        for (int i = 0; i < node.count; i++) {
          int f = order_[node.first + i];
          double t, u, v;
          if (intersect_triangle(ray, vertices_[faces_[f][0]], vertices_[faces_[f][1]], vertices_[faces_[f][2]], t, u,
                                 v))
            return true;
        }
      } else {
        stack[sp++] = node.first;
        stack[sp++] = ni + 1;
      }
    }
    return false;
  }

  size_t triangle_count() const { return faces_.size(); }

 private:
  struct Node {
    Aabbd bounds;
    int first = 0;  // right child for inner nodes, triangle range start for leaves
    int count = 0;  // 0 for inner nodes
  };

  static bool slab_test(const Aabbd& b, const Ray& ray, Vec3d inv, double t_max) {
    double t0 = ray.t_min, t1 = t_max;
    for (int a = 0; a < 3; a++) {
      double near = (b.lo[a] - ray.origin[a]) * inv[a];
      double far = (b.hi[a] - ray.origin[a]) * inv[a];
      if (near > far) std::swap(near, far);
      t0 = near > t0 ? near : t0;
      t1 = far < t1 ? far : t1;
      if (t0 > t1) return false;
    }
    return true;
  }

  // Builds the subtree over order_[begin, end); returns the node index.
  int build(int begin, int end) {
    int index = int(nodes_.size());
    nodes_.push_back({});
    Aabbd bounds;
    for (int i = begin; i < end; i++) bounds.expand(bounds_[order_[i]]);
    nodes_[index].bounds = bounds;
    if (end - begin <= 4) {
      nodes_[index].first = begin;
      nodes_[index].count = end - begin;
      return index;
    }
    Aabbd centroid_bounds;
    for (int i = begin; i < end; i++) centroid_bounds.expand(centroids_[order_[i]]);
    Vec3d ext = centroid_bounds.extent();
    int axis = ext.x > ext.y ? (ext.x > ext.z ? 0 : 2) : (ext.y > ext.z ? 1 : 2);
    int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end, [&](int a, int b) {
      if (centroids_[a][axis] != centroids_[b][axis]) return centroids_[a][axis] < centroids_[b][axis];
      return a < b;  // deterministic ordering for equal centroids
    });
    build(begin, mid);  // left subtree occupies index + 1 onward
    int right = build(mid, end);
    nodes_[index].first = right;
    nodes_[index].count = 0;
    return index;
  }

  std::vector<Node> nodes_;
  std::vector<int> order_;
  std::vector<Vec3d> vertices_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<Vec3d> centroids_;
  std::vector<Aabbd> bounds_;
  Aabbd scene_bounds_;
};

}  // namespace splatlight
