// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <stdexcept>

#include "splatlight/bvh.hpp"
#include "splatlight/camera.hpp"
#include "splatlight/envmap.hpp"
#include "splatlight/image.hpp"
#include "splatlight/parallel.hpp"
#include "splatlight/texelmap.hpp"

namespace splatlight {

// Fraction of the scene diagonal used as the shadow-ray offset.
constexpr double kSelfIntersectionScale = 1e-4;

enum class BrdfModel { Lambert, LambertPhong };

// Lambert albedo plus an optional Phong lobe:
//   f_r = 1/pi  +  k_s * max(<reflect(-w_i, n), w_o>, 0)^n_p
// The albedo multiplies the whole sum, so the pure-Lambert radiance
// factorizes exactly into albedo * d / pi with d the pre-integrated shading.
struct BrdfSpec {
  BrdfModel model = BrdfModel::Lambert;
  Imaged albedo_texture;       // UV space, linear RGB in [0,1]
  double specular_strength = 0;  // k_s >= 0
  double phong_exponent = 1;     // n_p >= 1

  void validate() const {
    if (albedo_texture.channels != 3) throw std::invalid_argument("brdf: albedo texture must be RGB");
    for (double v : albedo_texture.data)
      if (!std::isfinite(v) || v < 0 || v > 1) throw std::invalid_argument("brdf: albedo must lie in [0,1]");
    if (!(specular_strength >= 0) || !std::isfinite(specular_strength))
      throw std::invalid_argument("brdf: specular strength must be finite and >= 0");
    if (!(phong_exponent >= 1)) throw std::invalid_argument("brdf: phong exponent must be >= 1");
  }

  Vec3d albedo_at_uv(Vec2d uv) const {
    return sample_bilinear(albedo_texture, uv.x * albedo_texture.width - 0.5, uv.y * albedo_texture.height - 0.5);
  }
};

struct RadianceImage {
  Imaged image;
  CameraModel camera;
};

// Visibility wrapper: true iff the open segment from `x` toward the LED is
// blocked. `epsilon` is the self-intersection offset.
inline bool occluded(const Bvh& bvh, Vec3d origin, Vec3d direction, double max_dist, double epsilon) {
  return bvh.occluded(origin, direction, max_dist, epsilon);
}

namespace detail {

// Accumulates the two BRDF sums over LEDs at one surface point:
//   diffuse  = sum_i L_i V cos w_i
//   specular = sum_i max(<r_i, w_o>, 0)^n_p L_i V cos w_i
struct LightSums {
  Vec3d diffuse{0, 0, 0};
  Vec3d specular{0, 0, 0};
};

inline LightSums accumulate_lighting(Vec3d x, Vec3d n, Vec3d omega_o, const LedRig& rig, const RigLighting& lighting,
                                     const Bvh& bvh, double epsilon, bool with_specular, double phong_exponent) {
  LightSums sums;
  for (size_t i = 0; i < rig.size(); i++) {
    const Vec3d li = lighting.intensity[i];
    if (li.x == 0 && li.y == 0 && li.z == 0) continue;
    Vec3d to_led = rig.positions[i] - x;
    double dist = length(to_led);
    if (dist <= 0) continue;
    Vec3d omega = to_led / dist;
    double cos_theta = dot(omega, n);
    if (cos_theta <= 0) continue;
    if (bvh.occluded(x, omega, dist, epsilon)) continue;
    double geom = cos_theta * rig.weights[i];
    sums.diffuse += geom * li;
    if (with_specular) {
      double spec = dot(reflect(-omega, n), omega_o);
      if (spec > 0) sums.specular += (std::pow(spec, phong_exponent) * geom) * li;
    }
  }
  return sums;
}

}  // namespace detail

// Pre-integrated diffuse shading per valid texel (invalid texels stay zero):
//   d(x) = sum_i L_i V(x, w_i) max(<w_i, n>, 0) w_i
// Carries no albedo, BRDF, or 1/pi factor; the oracle divides by pi where the
// Lambert BRDF enters.
inline Imaged diffuse_shading(const SkinnedTemplate& tpl, const PosedMesh& mesh, const TexelSurfaceMap& map,
                              const LedRig& rig, const RigLighting& lighting, const Bvh& bvh) {
  lighting.validate(rig);
  const double epsilon = kSelfIntersectionScale * bvh.scene_bounds().diagonal();
  Imaged out(map.width, map.height, 3);
  parallel_for(int64_t(map.height), [&](int64_t row) {
    for (int col = 0; col < map.width; col++) {
      if (!map.valid(int(row), col)) continue;
      auto s = sample_surface(map, tpl, mesh, int(row), col);
      auto sums =
          detail::accumulate_lighting(s.position, s.normal, Vec3d{0, 0, 1}, rig, lighting, bvh, epsilon, false, 1.0);
      out.set_rgb(int(row), col, sums.diffuse);
    }
  });
  return out;
}

// Full direct-lighting evaluation per pixel:
//   L_o = albedo(x) * sum_i f_r(x, w_i, w_o) L_i V cos w_i
inline RadianceImage render_oracle(const SkinnedTemplate& tpl, const PosedMesh& mesh, const Bvh& bvh,
                                   const BrdfSpec& brdf, const LedRig& rig, const RigLighting& lighting,
                                   const CameraModel& camera) {
  camera.validate();
  lighting.validate(rig);
  const double epsilon = kSelfIntersectionScale * bvh.scene_bounds().diagonal();
  const bool with_spec = brdf.model == BrdfModel::LambertPhong;
  RadianceImage result;
  result.camera = camera;
  result.image = Imaged(camera.width, camera.height, 3);
  parallel_for(int64_t(camera.height), [&](int64_t row) {
    for (int col = 0; col < camera.width; col++) {
      Ray ray = camera.pixel_ray(col, int(row));
      Hit hit = bvh.intersect(ray);
      if (!hit.valid()) continue;  // background stays zero
      Vec3d x = ray.origin + hit.t * ray.direction;
      const auto& f = tpl.faces[hit.face];
      double b0 = 1.0 - hit.u - hit.v;
      Vec3d n = normalize(b0 * mesh.normals[f[0]] + hit.u * mesh.normals[f[1]] + hit.v * mesh.normals[f[2]]);
      const auto& fu = tpl.face_uvs[hit.face];
      Vec2d uv = b0 * tpl.uv_coords[fu[0]] + hit.u * tpl.uv_coords[fu[1]] + hit.v * tpl.uv_coords[fu[2]];
      Vec3d omega_o = -ray.direction;
      auto sums = detail::accumulate_lighting(x, n, omega_o, rig, lighting, bvh, epsilon, with_spec,
                                              brdf.phong_exponent);
      Vec3d radiance = sums.diffuse / pi<double>;
      if (with_spec) radiance += brdf.specular_strength * sums.specular;
      result.image.set_rgb(int(row), col, brdf.albedo_at_uv(uv) * radiance);
    }
  });
  return result;
}

// Same evaluation per texel instead of per pixel; used as the texel-space
// training target. The view direction comes from `view_dir`, typically the
// unit vector toward a fixed camera origin.
inline Imaged bake_oracle_texture(const SkinnedTemplate& tpl, const PosedMesh& mesh, const TexelSurfaceMap& map,
                                  const BrdfSpec& brdf, const LedRig& rig, const RigLighting& lighting,
                                  const Bvh& bvh, const std::function<Vec3d(Vec3d)>& view_dir) {
  lighting.validate(rig);
  const double epsilon = kSelfIntersectionScale * bvh.scene_bounds().diagonal();
  const bool with_spec = brdf.model == BrdfModel::LambertPhong;
  Imaged out(map.width, map.height, 3);
  parallel_for(int64_t(map.height), [&](int64_t row) {
    for (int col = 0; col < map.width; col++) {
      if (!map.valid(int(row), col)) continue;
      auto s = sample_surface(map, tpl, mesh, int(row), col);
      Vec3d omega_o = view_dir(s.position);
      auto sums = detail::accumulate_lighting(s.position, s.normal, omega_o, rig, lighting, bvh, epsilon, with_spec,
                                              brdf.phong_exponent);
      Vec3d radiance = sums.diffuse / pi<double>;
      if (with_spec) radiance += brdf.specular_strength * sums.specular;
      Vec2d uv{(col + 0.5) / map.width, (row + 0.5) / map.height};
      out.set_rgb(int(row), col, brdf.albedo_at_uv(uv) * radiance);
    }
  });
  return out;
}

inline std::function<Vec3d(Vec3d)> view_from_origin(Vec3d camera_origin) {
  return [camera_origin](Vec3d x) { return normalize(camera_origin - x); };
}

// Camera-space normal image at primary hits, background zero. Optional
// additive Gaussian noise (renormalized) stands in for a learned estimator.
inline Imaged render_normal_image(const SkinnedTemplate& tpl, const PosedMesh& mesh, const Bvh& bvh,
                                  const CameraModel& camera, double noise_sigma = 0.0, uint64_t seed = 0) {
  Imaged out(camera.width, camera.height, 3);
  const Mat3d world_to_cam = camera.world_to_camera.rotation;
  // Per-row RNG streams keep the output independent of the parallel schedule.
  parallel_for(int64_t(camera.height), [&](int64_t row) {
    Rng rng(seed * 0x1000193ULL + uint64_t(row));
    for (int col = 0; col < camera.width; col++) {
      Ray ray = camera.pixel_ray(col, int(row));
      Hit hit = bvh.intersect(ray);
      if (!hit.valid()) continue;
      const auto& f = tpl.faces[hit.face];
      double b0 = 1.0 - hit.u - hit.v;
      Vec3d n = normalize(b0 * mesh.normals[f[0]] + hit.u * mesh.normals[f[1]] + hit.v * mesh.normals[f[2]]);
      Vec3d n_cam = world_to_cam * n;
      if (noise_sigma > 0) {
        n_cam += Vec3d{rng.normal(), rng.normal(), rng.normal()} * noise_sigma;
        n_cam = normalize(n_cam);
      }
      out.set_rgb(int(row), col, n_cam);
    }
  });
  return out;
}

}  // namespace splatlight
