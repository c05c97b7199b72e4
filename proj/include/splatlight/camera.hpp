// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

#include <json.hpp>

#include "splatlight/bvh.hpp"
#include "splatlight/image.hpp"
#include "splatlight/math.hpp"

namespace splatlight {

// Pinhole camera, OpenCV axis convention: x right, y down, z forward.
// Projection of a camera-space point: u = fx x/z + cx, v = fy y/z + cy, in
// continuous pixel coordinates where pixel (col,row) spans
// [col,col+1) x [row,row+1) and has its center at (col+0.5, row+0.5).
struct CameraModel {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  int width = 0, height = 0;
  Rigidd world_to_camera;

  void validate() const {
    if (!(fx > 0) || !(fy > 0)) throw std::invalid_argument("camera: focal lengths must be positive");
    if (width <= 0 || height <= 0) throw std::invalid_argument("camera: invalid resolution");
    if (orthonormality_error(world_to_camera.rotation) > 1e-9)
      throw std::invalid_argument("camera: rotation is not orthonormal");
  }

  Vec3d origin() const {
    return -(world_to_camera.rotation.transposed() * world_to_camera.translation);
  }

  // Rotation taking camera-space vectors to world space.
  Mat3d cam_to_world_rotation() const { return world_to_camera.rotation.transposed(); }

  // Returns false behind the near plane; otherwise fills continuous pixel
  // coordinates and view depth.
  bool project(Vec3d world, Vec2d& pixel, double& depth, double near = 1e-6) const {
    Vec3d p = world_to_camera.apply(world);
    if (p.z <= near) return false;
    pixel = {fx * p.x / p.z + cx, fy * p.y / p.z + cy};
    depth = p.z;
    return true;
  }

  bool inside_image(Vec2d pixel) const {
    return pixel.x >= 0 && pixel.x <= width && pixel.y >= 0 && pixel.y <= height;
  }

  Ray pixel_ray(int col, int row) const {
    Vec3d dir_cam{(col + 0.5 - cx) / fx, (row + 0.5 - cy) / fy, 1.0};
    Ray ray;
    ray.origin = origin();
    ray.direction = normalize(cam_to_world_rotation() * dir_cam);
    return ray;
  }

  static CameraModel look_at(Vec3d eye, Vec3d target, Vec3d up, double focal_px, int width, int height) {
    Vec3d z = normalize(target - eye);
    Vec3d x_raw = cross(z, up);
    if (length(x_raw) < 1e-9) throw std::invalid_argument("camera look_at: up parallel to view direction");
    Vec3d x = normalize(x_raw);
    Vec3d y = cross(z, x);  // maps world-up to image-up (row 0 at the top)
    CameraModel cam;
    cam.world_to_camera.rotation = Mat3d::from_rows(x, y, z);
    cam.world_to_camera.translation = -(cam.world_to_camera.rotation * eye);
    cam.fx = cam.fy = focal_px;
    cam.cx = width * 0.5;
    cam.cy = height * 0.5;
    cam.width = width;
    cam.height = height;
    cam.validate();
    return cam;
  }
};

// Bilinear image lookup at continuous pixel coordinates (projection space).
template <typename T>
inline Vec3<T> sample_at_pixel(const Image<T>& img, Vec2d pixel) {
  return sample_bilinear(img, T(pixel.x - 0.5), T(pixel.y - 0.5));
}

inline void to_json(nlohmann::json& j, const CameraModel& cam) {
  j["fx"] = cam.fx;
  j["fy"] = cam.fy;
  j["cx"] = cam.cx;
  j["cy"] = cam.cy;
  j["width"] = cam.width;
  j["height"] = cam.height;
  j["rotation"] = cam.world_to_camera.rotation.m;
  j["translation"] = {cam.world_to_camera.translation.x, cam.world_to_camera.translation.y,
                      cam.world_to_camera.translation.z};
}

inline void from_json(const nlohmann::json& j, CameraModel& cam) {
  cam.fx = j.at("fx").get<double>();
  cam.fy = j.at("fy").get<double>();
  cam.cx = j.at("cx").get<double>();
  cam.cy = j.at("cy").get<double>();
  cam.width = j.at("width").get<int>();
  cam.height = j.at("height").get<int>();
  cam.world_to_camera.rotation.m = j.at("rotation").get<std::array<double, 9>>();
  auto t = j.at("translation");
  cam.world_to_camera.translation = {t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()};
  cam.validate();
}

}  // namespace splatlight
