// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "splatlight/math.hpp"

namespace splatlight {

// Sparse influence entry shared by skinning weights and embedded-graph
// weights: per-vertex lists must be non-negative and sum to 1.
struct Influence {
  int index = 0;
  double weight = 0;
};

struct Joint {
  std::string name;
  int parent = -1;          // -1 for the root
  Rigidd rest_local;        // joint frame relative to the parent
  std::vector<Vec3d> dof_axes;  // one rotation DOF per axis, applied in order
};

struct Skeleton {
  std::vector<Joint> joints;

  int dof_count() const {
    int n = 0;
    for (const auto& j : joints) n += int(j.dof_axes.size());
    return n;
  }

  // Global rest transforms per joint (parents precede children).
  std::vector<Rigidd> rest_global() const {
    std::vector<Rigidd> out(joints.size());
    for (size_t j = 0; j < joints.size(); j++) {
      int p = joints[j].parent;
      if (p < 0)
        out[j] = joints[j].rest_local;
      else
        out[j] = out[p] * joints[j].rest_local;
    }
    return out;
  }
};

struct EmbeddedGraph {
  std::vector<Vec3d> node_positions;                 // rest positions g_k
  std::vector<std::vector<Influence>> vertex_weights;  // per mesh vertex
};

struct SkinnedTemplate {
  std::vector<Vec3d> vertices;
  std::vector<std::array<int, 3>> faces;      // vertex indices
  std::vector<std::array<int, 3>> face_uvs;   // uv-corner indices into uv_coords
  std::vector<Vec2d> uv_coords;               // [0,1]^2 atlas coordinates
  Skeleton skeleton;
  std::vector<std::vector<Influence>> skinning_weights;  // per vertex, over joints
  EmbeddedGraph graph;

  void validate() const;
};

struct DeformationState {
  std::vector<Mat3d> node_rotations;
  std::vector<Vec3d> node_translations;
  std::vector<Vec3d> vertex_offsets;

  static DeformationState rest(const SkinnedTemplate& tpl) {
    DeformationState s;
    s.node_rotations.assign(tpl.graph.node_positions.size(), Mat3d::identity());
    s.node_translations.assign(tpl.graph.node_positions.size(), Vec3d{0, 0, 0});
    s.vertex_offsets.assign(tpl.vertices.size(), Vec3d{0, 0, 0});
    return s;
  }
};

struct Pose {
  std::vector<double> joint_angles;  // one scalar per skeleton DOF, in order
  Rigidd root_transform;

  static Pose rest(const Skeleton& skel) {
    Pose p;
    p.joint_angles.assign(skel.dof_count(), 0.0);
    return p;
  }
};

struct PosedMesh {
  std::vector<Vec3d> vertices;
  std::vector<Vec3d> normals;  // area-weighted vertex normals, unit length
  int frame_index = 0;

  Aabbd bounds() const {
    Aabbd b;
    for (const auto& v : vertices) b.expand(v);
    return b;
  }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {
inline void check_weights(const std::vector<std::vector<Influence>>& weights, size_t vertex_count,
                          size_t target_count, const char* what) {
  if (weights.size() != vertex_count)
    throw std::invalid_argument(std::string(what) + ": weight list size does not match vertex count");
  for (size_t v = 0; v < weights.size(); v++) {
    double sum = 0;
    for (const auto& w : weights[v]) {
      if (w.index < 0 || size_t(w.index) >= target_count)
        throw std::invalid_argument(std::string(what) + ": influence index out of range");
      if (w.weight < 0) throw std::invalid_argument(std::string(what) + ": negative weight");
      sum += w.weight;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw std::invalid_argument(std::string(what) + ": weights do not sum to 1 at vertex " + std::to_string(v));
  }
}
}  // namespace detail

inline void SkinnedTemplate::validate() const {
  for (const auto& f : faces)
    for (int i : f)
      if (i < 0 || size_t(i) >= vertices.size()) throw std::invalid_argument("template: face vertex out of range");
  if (face_uvs.size() != faces.size()) throw std::invalid_argument("template: face_uvs size mismatch");
  for (const auto& f : face_uvs)
    for (int i : f)
      if (i < 0 || size_t(i) >= uv_coords.size()) throw std::invalid_argument("template: face uv corner out of range");
  detail::check_weights(skinning_weights, vertices.size(), skeleton.joints.size(), "skinning");
  detail::check_weights(graph.vertex_weights, vertices.size(), graph.node_positions.size(), "embedded graph");
  for (size_t j = 0; j < skeleton.joints.size(); j++)
    if (skeleton.joints[j].parent >= int(j))
      throw std::invalid_argument("skeleton: joints must be ordered parents-first");
}

// ---------------------------------------------------------------------------
// Embedded-graph deformation: each vertex is moved by the influence-weighted
// blend of per-node rotations about the node rest positions plus node
// translations, then the fine per-vertex offset is added.
// ---------------------------------------------------------------------------

inline std::vector<Vec3d> deform_canonical(const SkinnedTemplate& tpl, const DeformationState& state) {
  const size_t node_count = tpl.graph.node_positions.size();
  if (state.node_rotations.size() != node_count || state.node_translations.size() != node_count)
    throw std::invalid_argument("deform_canonical: node state size mismatch");
  if (state.vertex_offsets.size() != tpl.vertices.size())
    throw std::invalid_argument("deform_canonical: vertex offset size mismatch");
  for (const auto& r : state.node_rotations)
    if (orthonormality_error(r) > 1e-6)
      throw std::invalid_argument("deform_canonical: node rotation is not orthonormal");

  std::vector<Vec3d> out(tpl.vertices.size());
  for (size_t v = 0; v < tpl.vertices.size(); v++) {
    Vec3d p = tpl.vertices[v];
    Vec3d blended{0, 0, 0};
    for (const auto& inf : tpl.graph.vertex_weights[v]) {
      const Vec3d g = tpl.graph.node_positions[inf.index];
      const Vec3d moved = state.node_rotations[inf.index] * (p - g) + g + state.node_translations[inf.index];
      blended += inf.weight * moved;
    }
    out[v] = blended + state.vertex_offsets[v];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Linear blend skinning
// ---------------------------------------------------------------------------

namespace detail {
inline std::vector<Rigidd> posed_global(const Skeleton& skel, const Pose& pose) {
  std::vector<Rigidd> out(skel.joints.size());
  size_t dof = 0;
  for (size_t j = 0; j < skel.joints.size(); j++) {
    Rigidd local = skel.joints[j].rest_local;
    for (const auto& axis : skel.joints[j].dof_axes) {
      Rigidd rot{Mat3d::axis_angle(axis, pose.joint_angles[dof++]), {0, 0, 0}};
      local = local * rot;
    }
    int p = skel.joints[j].parent;
    out[j] = (p < 0) ? local : out[p] * local;
  }
  return out;
}
}  // namespace detail

// Area-weighted vertex normals; degenerate faces contribute nothing.
inline std::vector<Vec3d> compute_vertex_normals(const std::vector<Vec3d>& vertices,
                                                 const std::vector<std::array<int, 3>>& faces) {
  std::vector<Vec3d> acc(vertices.size(), Vec3d{0, 0, 0});
  size_t usable = 0;
  for (const auto& f : faces) {
    Vec3d n = cross(vertices[f[1]] - vertices[f[0]], vertices[f[2]] - vertices[f[0]]);
    if (length_squared(n) < 1e-24) continue;  // zero-area face
    usable++;
    for (int i : f) acc[i] += n;
  }
  if (!faces.empty() && usable == 0) throw std::runtime_error("skin: all faces are degenerate");
  for (auto& n : acc) {
    double len = length(n);
    n = len > 1e-20 ? n / len : Vec3d{0, 0, 1};
  }
  return acc;
}

inline PosedMesh skin(const std::vector<Vec3d>& canonical_vertices, const Pose& pose, const SkinnedTemplate& tpl,
                      int frame_index = 0) {
  if (canonical_vertices.size() != tpl.vertices.size())
    throw std::invalid_argument("skin: canonical vertex count mismatch");
  if (int(pose.joint_angles.size()) != tpl.skeleton.dof_count())
    throw std::invalid_argument("skin: pose DOF count does not match skeleton");

  const auto rest = tpl.skeleton.rest_global();
  const auto posed = detail::posed_global(tpl.skeleton, pose);
  std::vector<Rigidd> skinning(rest.size());
  for (size_t j = 0; j < rest.size(); j++) skinning[j] = posed[j] * rest[j].inverse();

  PosedMesh mesh;
  mesh.frame_index = frame_index;
  mesh.vertices.resize(canonical_vertices.size());
  for (size_t v = 0; v < canonical_vertices.size(); v++) {
    Vec3d blended{0, 0, 0};
    for (const auto& inf : tpl.skinning_weights[v]) blended += inf.weight * skinning[inf.index].apply(canonical_vertices[v]);
    mesh.vertices[v] = pose.root_transform.apply(blended);
  }
  mesh.normals = compute_vertex_normals(mesh.vertices, tpl.faces);
  return mesh;
}

inline PosedMesh pose_template(const SkinnedTemplate& tpl, const DeformationState& state, const Pose& pose,
                               int frame_index = 0) {
  return skin(deform_canonical(tpl, state), pose, tpl, frame_index);
}

// ---------------------------------------------------------------------------
// OBJ subset: v, vt, and f with v/vt indices. Polygons are fan-triangulated.
// ---------------------------------------------------------------------------

inline void load_obj_geometry(const std::string& path, SkinnedTemplate& tpl) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_obj: cannot open " + path);
  tpl.vertices.clear();
  tpl.faces.clear();
  tpl.face_uvs.clear();
  tpl.uv_coords.clear();
  std::string line;
  auto parse_corner = [&](const std::string& tok, int& vi, int& ti) {
    size_t slash = tok.find('/');
    if (slash == std::string::npos) throw std::runtime_error("load_obj: face corner missing vt index: " + tok);
    vi = std::stoi(tok.substr(0, slash));
    std::string rest = tok.substr(slash + 1);
    size_t slash2 = rest.find('/');
    if (slash2 != std::string::npos) rest = rest.substr(0, slash2);
    if (rest.empty()) throw std::runtime_error("load_obj: face corner missing vt index: " + tok);
    ti = std::stoi(rest);
    vi = vi > 0 ? vi - 1 : int(tpl.vertices.size()) + vi;
    ti = ti > 0 ? ti - 1 : int(tpl.uv_coords.size()) + ti;
  };
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3d v;
      ss >> v.x >> v.y >> v.z;
      tpl.vertices.push_back(v);
    } else if (tag == "vt") {
      Vec2d t;
      ss >> t.x >> t.y;
      tpl.uv_coords.push_back(t);
    } else if (tag == "f") {
      std::vector<std::pair<int, int>> corners;
      std::string tok;
      while (ss >> tok) {
        int vi = 0, ti = 0;
        parse_corner(tok, vi, ti);
        corners.emplace_back(vi, ti);
      }
      if (corners.size() < 3) throw std::runtime_error("load_obj: face with fewer than 3 corners");
      for (size_t i = 2; i < corners.size(); i++) {
        tpl.faces.push_back({corners[0].first, corners[i - 1].first, corners[i].first});
        tpl.face_uvs.push_back({corners[0].second, corners[i - 1].second, corners[i].second});
      }
    }
  }
}

inline void save_obj_geometry(const std::string& path, const SkinnedTemplate& tpl) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_obj: cannot open " + path);
  out.precision(17);
  for (const auto& v : tpl.vertices) out << "v " << v.x << " " << v.y << " " << v.z << "\n";
  for (const auto& t : tpl.uv_coords) out << "vt " << t.x << " " << t.y << "\n";
  for (size_t f = 0; f < tpl.faces.size(); f++) {
    out << "f";
    for (int i = 0; i < 3; i++) out << " " << tpl.faces[f][i] + 1 << "/" << tpl.face_uvs[f][i] + 1;
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// Skeleton / skinning / embedded graph JSON schema (documented in README):
// {
//   "joints": [{"name", "parent", "translation", "rotation" (quat wxyz,
//               optional), "dof_axes": [[x,y,z], ...]}, ...],
//   "skinning_weights": [[[joint, weight], ...] per vertex],
//   "embedded_graph": {"node_positions": [[x,y,z], ...],
//                      "vertex_weights": [[[node, weight], ...] per vertex]}
// }
// ---------------------------------------------------------------------------

namespace detail {
inline Vec3d json_vec3(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }
inline std::vector<std::vector<Influence>> json_weights(const nlohmann::json& j) {
  std::vector<std::vector<Influence>> out;
  out.reserve(j.size());
  for (const auto& per_vertex : j) {
    std::vector<Influence> w;
    for (const auto& entry : per_vertex) w.push_back({entry.at(0).get<int>(), entry.at(1).get<double>()});
    out.push_back(std::move(w));
  }
  return out;
}
}  // namespace detail

inline void load_rig_json(const std::string& path, SkinnedTemplate& tpl) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_rig: cannot open " + path);
  nlohmann::json j;
  in >> j;
  tpl.skeleton.joints.clear();
  for (const auto& jj : j.at("joints")) {
    Joint joint;
    joint.name = jj.value("name", "");
    joint.parent = jj.at("parent").get<int>();
    joint.rest_local.translation = detail::json_vec3(jj.at("translation"));
    if (jj.contains("rotation")) {
      const auto& q = jj.at("rotation");
      joint.rest_local.rotation =
          Quatd{q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>(), q.at(3).get<double>()}
              .normalized()
              .to_matrix();
    }
    if (jj.contains("dof_axes"))
      for (const auto& a : jj.at("dof_axes")) joint.dof_axes.push_back(normalize(detail::json_vec3(a)));
    tpl.skeleton.joints.push_back(std::move(joint));
  }
  tpl.skinning_weights = detail::json_weights(j.at("skinning_weights"));
  const auto& g = j.at("embedded_graph");
  tpl.graph.node_positions.clear();
  for (const auto& p : g.at("node_positions")) tpl.graph.node_positions.push_back(detail::json_vec3(p));
  tpl.graph.vertex_weights = detail::json_weights(g.at("vertex_weights"));
}

inline void save_rig_json(const std::string& path, const SkinnedTemplate& tpl) {
  nlohmann::json j;
  j["joints"] = nlohmann::json::array();
  for (const auto& joint : tpl.skeleton.joints) {
    nlohmann::json jj;
    jj["name"] = joint.name;
    jj["parent"] = joint.parent;
    jj["translation"] = {joint.rest_local.translation.x, joint.rest_local.translation.y, joint.rest_local.translation.z};
    // Rest rotations are stored as matrices internally; persist only axis DOFs
    // and translation (rig generators emit identity rest rotations).
    jj["dof_axes"] = nlohmann::json::array();
    for (const auto& a : joint.dof_axes) jj["dof_axes"].push_back({a.x, a.y, a.z});
    j["joints"].push_back(std::move(jj));
  }
  auto weights_json = [](const std::vector<std::vector<Influence>>& ws) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& per_vertex : ws) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& w : per_vertex) row.push_back({w.index, w.weight});
      arr.push_back(std::move(row));
    }
    return arr;
  };
  j["skinning_weights"] = weights_json(tpl.skinning_weights);
  j["embedded_graph"]["node_positions"] = nlohmann::json::array();
  for (const auto& p : tpl.graph.node_positions)
    j["embedded_graph"]["node_positions"].push_back({p.x, p.y, p.z});
  j["embedded_graph"]["vertex_weights"] = weights_json(tpl.graph.vertex_weights);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_rig: cannot open " + path);
  out << j.dump(1) << "\n";
}

}  // namespace splatlight
