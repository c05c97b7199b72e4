// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "splatlight/primitives.hpp"
#include "splatlight/shading.hpp"

using namespace splatlight;

namespace {

Bvh build_bvh(const SkinnedTemplate& tpl, const PosedMesh& mesh) { return Bvh(mesh.vertices, tpl.faces); }

PosedMesh rest_mesh(const SkinnedTemplate& tpl) { return skin(tpl.vertices, Pose::rest(tpl.skeleton), tpl); }

BrdfSpec gray_lambert(double albedo = 1.0, int res = 8) {
  BrdfSpec brdf;
  brdf.albedo_texture = Imaged(res, res, 3, albedo);
  return brdf;
}

TEST(Occlusion, OutwardRayFromSphereIsFree) {
  auto tpl = make_sphere_template(1.0, 12, 24);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  Vec3d x{0, 1.0001, 0};  // just above the north pole
  EXPECT_FALSE(bvh.occluded(x, {0, 1, 0}, 100.0, 1e-5));
}

TEST(Occlusion, RayAcrossSphereInteriorHits) {
  auto tpl = make_sphere_template(1.0, 12, 24);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  EXPECT_TRUE(bvh.occluded({-3, 0.1, 0.05}, {1, 0, 0}, 6.0, 1e-5));
}

TEST(Occlusion, MatchesBruteForceOnRandomRays) {
  auto tpl = make_sphere_template(1.0, 10, 20);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  Rng rng(123);
  int hits = 0;
  for (int i = 0; i < 1000; i++) {
    Vec3d origin = rng.unit_vector() * rng.uniform(0.2, 3.0);
    Vec3d dir = rng.unit_vector();
    double max_dist = rng.uniform(0.5, 6.0);
    double eps = 1e-6;
    // Exhaustive all-triangles intersector.
    bool brute = false;
    Ray ray{origin, dir, eps, max_dist};
    for (const auto& f : tpl.faces) {
      double t, u, v;
      if (intersect_triangle(ray, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]], t, u, v)) {
        brute = true;
        break;
      }
    }
    bool fast = bvh.occluded(origin, dir, max_dist, eps);
    ASSERT_EQ(fast, brute) << "ray " << i;
    hits += fast;
  }
  EXPECT_GT(hits, 100);  // the sample must actually exercise both outcomes
  EXPECT_LT(hits, 900);
}

TEST(Occlusion, ClosestHitMatchesBruteForce) {
  auto tpl = make_sphere_template(1.0, 10, 20);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  Rng rng(77);
  for (int i = 0; i < 300; i++) {
    Ray ray{rng.unit_vector() * 2.5, rng.unit_vector(), 1e-9, 100.0};
    Hit best;
    for (size_t fi = 0; fi < tpl.faces.size(); fi++) {
      const auto& f = tpl.faces[fi];
      double t, u, v;
      Ray r = ray;
      r.t_max = best.t;
      if (intersect_triangle(r, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]], t, u, v))
        best = {t, int(fi), u, v};
    }
    Hit got = bvh.intersect(ray);
    ASSERT_EQ(got.valid(), best.valid());
    if (got.valid()) {
      EXPECT_EQ(got.face, best.face);
      EXPECT_NEAR(got.t, best.t, 1e-12);
    }
  }
}

TEST(DiffuseShading, SingleLedAlongNormalGivesOne) {
  auto tpl = make_plane_template(2);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto map = bake_texel_surface_map(tpl, 16, 16);
  const int r = 7, c = 7;
  ASSERT_TRUE(map.valid(r, c));
  auto s = sample_surface(map, tpl, mesh, r, c);
  LedRig rig;
  rig.positions = {s.position + Vec3d{0, 10, 0}};
  rig.weights = {1.0};
  RigLighting lighting;
  lighting.intensity = {{1, 1, 1}};
  auto d = diffuse_shading(tpl, mesh, map, rig, lighting, bvh);
  EXPECT_DOUBLE_EQ(d.rgb(r, c).x, 1.0);
  EXPECT_DOUBLE_EQ(d.rgb(r, c).y, 1.0);
}

TEST(DiffuseShading, ZeroLightingIsZeroEverywhere) {
  auto tpl = make_plane_template(1);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto map = bake_texel_surface_map(tpl, 8, 8);
  auto rig = LedRig::fibonacci_sphere(16);
  auto d = diffuse_shading(tpl, mesh, map, rig, RigLighting::zero(rig), bvh);
  for (double v : d.data) EXPECT_EQ(v, 0.0);
}

TEST(DiffuseShading, HemisphereRigApproximatesCosineIntegral) {
  auto tpl = make_plane_template(1);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto map = bake_texel_surface_map(tpl, 8, 8);
  auto rig = LedRig::fibonacci_hemisphere(4096, 500.0);
  for (auto& p : rig.positions) p += Vec3d{0.5, 0, 0.5};  // center on the plane
  auto d = diffuse_shading(tpl, mesh, map, rig, RigLighting::uniform(rig, 1.0), bvh);
  for (int r = 0; r < 8; r++)
    for (int c = 0; c < 8; c++) {
      ASSERT_TRUE(map.valid(r, c));
      EXPECT_NEAR(d.rgb(r, c).x / pi<double>, 1.0, 0.01);
    }
}

TEST(DiffuseShading, LinearInLighting) {
  auto tpl = make_sphere_template(0.5, 8, 16);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto map = bake_texel_surface_map(tpl, 16, 16);
  auto rig = LedRig::fibonacci_sphere(12);
  Rng rng(5);
  RigLighting l1 = RigLighting::zero(rig), l2 = RigLighting::zero(rig), mix = RigLighting::zero(rig);
  double a = 0.3, b = 2.1;
  for (size_t i = 0; i < rig.size(); i++) {
    l1.intensity[i] = {rng.uniform(), rng.uniform(), rng.uniform()};
    l2.intensity[i] = {rng.uniform(), rng.uniform(), rng.uniform()};
    mix.intensity[i] = a * l1.intensity[i] + b * l2.intensity[i];
  }
  auto d1 = diffuse_shading(tpl, mesh, map, rig, l1, bvh);
  auto d2 = diffuse_shading(tpl, mesh, map, rig, l2, bvh);
  auto dm = diffuse_shading(tpl, mesh, map, rig, mix, bvh);
  for (size_t i = 0; i < dm.data.size(); i++)
    EXPECT_NEAR(dm.data[i], a * d1.data[i] + b * d2.data[i], 1e-12 + 1e-12 * std::abs(dm.data[i]));
}

TEST(DiffuseShading, OccluderNeverIncreasesShading) {
  auto tpl = make_plane_template(2);
  auto mesh = rest_mesh(tpl);
  auto map = bake_texel_surface_map(tpl, 16, 16);
  auto rig = LedRig::fibonacci_hemisphere(64, 5.0);
  for (auto& p : rig.positions) p += Vec3d{0.5, 0, 0.5};
  auto lighting = RigLighting::uniform(rig, 1.0);

  Bvh open_bvh = build_bvh(tpl, mesh);
  auto d_free = diffuse_shading(tpl, mesh, map, rig, lighting, open_bvh);

  // Hovering occluder over one quadrant, present only in the BVH geometry.
  std::vector<Vec3d> verts = mesh.vertices;
  std::vector<std::array<int, 3>> faces = tpl.faces;
  int base = int(verts.size());
  verts.push_back({0.0, 0.4, 0.0});
  verts.push_back({0.5, 0.4, 0.0});
  verts.push_back({0.0, 0.4, 0.5});
  verts.push_back({0.5, 0.4, 0.5});
  faces.push_back({base, base + 1, base + 2});
  faces.push_back({base + 1, base + 3, base + 2});
  Bvh blocked_bvh(verts, faces);
  auto d_occ = diffuse_shading(tpl, mesh, map, rig, lighting, blocked_bvh);

  bool any_darker = false;
  for (size_t i = 0; i < d_free.data.size(); i++) {
    EXPECT_LE(d_occ.data[i], d_free.data[i] + 1e-12);
    EXPECT_GE(d_occ.data[i], 0.0);
    if (d_occ.data[i] < d_free.data[i] - 1e-6) any_darker = true;
  }
  EXPECT_TRUE(any_darker);
}

TEST(DiffuseShading, BackFacingLightingIsZero) {
  auto tpl = make_plane_template(1);  // normal +y
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto map = bake_texel_surface_map(tpl, 8, 8);
  LedRig rig;
  rig.positions = {{0.5, -5.0, 0.5}};  // below the plane
  rig.weights = {1.0};
  RigLighting lighting;
  lighting.intensity = {{3, 3, 3}};
  auto d = diffuse_shading(tpl, mesh, map, rig, lighting, bvh);
  for (double v : d.data) EXPECT_EQ(v, 0.0);
}

TEST(RenderOracle, ZeroLightingRendersBlack) {
  auto tpl = make_sphere_template(0.5, 8, 16);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto rig = LedRig::fibonacci_sphere(8);
  auto cam = CameraModel::look_at({0, 0.2, 2.5}, {0, 0, 0}, {0, 1, 0}, 64, 32, 32);
  auto img = render_oracle(tpl, mesh, bvh, gray_lambert(), rig, RigLighting::zero(rig), cam);
  for (double v : img.image.data) EXPECT_EQ(v, 0.0);
}

TEST(RenderOracle, LambertClosedFormOnFacingPlane) {
  auto tpl = make_plane_template(1);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  const double albedo = 0.6, L = 2.0, w = 0.8;
  LedRig rig;
  rig.positions = {{0.5, 1e7, 0.5}};  // effectively along every normal
  rig.weights = {w};
  RigLighting lighting;
  lighting.intensity = {{L, L, L}};
  auto cam = CameraModel::look_at({0.5, 2.0, 0.5}, {0.5, 0, 0.5}, {0, 0, 1}, 48, 32, 32);
  auto img = render_oracle(tpl, mesh, bvh, gray_lambert(albedo), rig, lighting, cam);
  double want = albedo * L * w / pi<double>;
  int hit_pixels = 0;
  for (int r = 0; r < 32; r++)
    for (int c = 0; c < 32; c++) {
      Vec3d v = img.image.rgb(r, c);
      if (v.x == 0) continue;
      hit_pixels++;
      EXPECT_NEAR(v.x, want, 1e-9);
    }
  EXPECT_GT(hit_pixels, 200);
}

TEST(RenderOracle, SuperposesOverOlatBasis) {
  auto tpl = make_sphere_template(0.5, 8, 16);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto rig = LedRig::fibonacci_sphere(8, 2.0);
  auto cam = CameraModel::look_at({0.1, 0.3, 2.0}, {0, 0, 0}, {0, 1, 0}, 48, 24, 24);
  BrdfSpec brdf = gray_lambert(0.7);
  brdf.model = BrdfModel::LambertPhong;
  brdf.specular_strength = 0.4;
  brdf.phong_exponent = 8;

  Rng rng(31);
  RigLighting lighting = RigLighting::zero(rig);
  for (auto& v : lighting.intensity) v = {rng.uniform(), rng.uniform(), rng.uniform()};

  auto direct = render_oracle(tpl, mesh, bvh, brdf, rig, lighting, cam);

  const double olat_intensity = 1.0;
  auto basis = olat_basis(rig, olat_intensity);
  Imaged recombined(cam.width, cam.height, 3);
  for (size_t i = 0; i < rig.size(); i++) {
    auto img = render_oracle(tpl, mesh, bvh, brdf, rig, basis[i], cam);
    Vec3d scale = lighting.intensity[i] / olat_intensity;
    for (int r = 0; r < cam.height; r++)
      for (int c = 0; c < cam.width; c++)
        recombined.set_rgb(r, c, recombined.rgb(r, c) + scale * img.image.rgb(r, c));
  }
  double max_rel = 0;
  for (size_t i = 0; i < direct.image.data.size(); i++) {
    double denom = std::max(1e-12, std::abs(direct.image.data[i]));
    max_rel = std::max(max_rel, std::abs(direct.image.data[i] - recombined.data[i]) / denom);
  }
  EXPECT_LT(max_rel, 1e-12);
}

TEST(BakeOracle, LambertFactorizationIsBitExact) {
  auto tpl = make_sphere_template(0.5, 8, 16);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto map = bake_texel_surface_map(tpl, 16, 16);
  auto rig = LedRig::fibonacci_sphere(16, 2.0);
  auto env = make_random_environment(3, 16, 32);
  auto lighting = quantize_to_rig(env, rig, 2.0);
  BrdfSpec brdf = gray_lambert(0.5, 16);
  auto d = diffuse_shading(tpl, mesh, map, rig, lighting, bvh);
  auto baked = bake_oracle_texture(tpl, mesh, map, brdf, rig, lighting, bvh, view_from_origin({0, 0, 3}));
  for (int r = 0; r < 16; r++)
    for (int c = 0; c < 16; c++) {
      if (!map.valid(r, c)) {
        EXPECT_EQ(baked.rgb(r, c).x, 0.0);
        continue;
      }
      Vec2d uv{(c + 0.5) / 16, (r + 0.5) / 16};
      Vec3d want = brdf.albedo_at_uv(uv) * (d.rgb(r, c) / pi<double>);
      Vec3d got = baked.rgb(r, c);
      EXPECT_EQ(got.x, want.x);
      EXPECT_EQ(got.y, want.y);
      EXPECT_EQ(got.z, want.z);
    }
}

TEST(BakeOracle, ZeroSpecularReducesToLambertBitExact) {
  auto tpl = make_sphere_template(0.5, 8, 16);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto map = bake_texel_surface_map(tpl, 16, 16);
  auto rig = LedRig::fibonacci_sphere(12, 2.0);
  auto lighting = RigLighting::uniform(rig, 0.7);
  BrdfSpec lambert = gray_lambert(0.8);
  BrdfSpec phong0 = lambert;
  phong0.model = BrdfModel::LambertPhong;
  phong0.specular_strength = 0.0;
  phong0.phong_exponent = 32;
  auto view = view_from_origin({0, 0, 3});
  auto a = bake_oracle_texture(tpl, mesh, map, lambert, rig, lighting, bvh, view);
  auto b = bake_oracle_texture(tpl, mesh, map, phong0, rig, lighting, bvh, view);
  EXPECT_EQ(a.data, b.data);
}

TEST(BakeOracle, ZeroLightingBakesZeroMap) {
  auto tpl = make_plane_template(1);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto map = bake_texel_surface_map(tpl, 8, 8);
  auto rig = LedRig::fibonacci_sphere(4);
  auto baked =
      bake_oracle_texture(tpl, mesh, map, gray_lambert(), rig, RigLighting::zero(rig), bvh, view_from_origin({0, 2, 0}));
  for (double v : baked.data) EXPECT_EQ(v, 0.0);
}

TEST(BakeOracle, EnergySanityForLambert) {
  auto tpl = make_sphere_template(0.5, 8, 16);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto map = bake_texel_surface_map(tpl, 16, 16);
  auto rig = LedRig::fibonacci_sphere(16, 2.0);
  auto lighting = RigLighting::uniform(rig, 1.3);
  BrdfSpec brdf = gray_lambert(0.9);
  auto d = diffuse_shading(tpl, mesh, map, rig, lighting, bvh);
  auto baked = bake_oracle_texture(tpl, mesh, map, brdf, rig, lighting, bvh, view_from_origin({0, 0, 3}));
  for (int r = 0; r < 16; r++)
    for (int c = 0; c < 16; c++)
      for (int ch = 0; ch < 3; ch++)
        EXPECT_LE(baked.at(r, c, ch), 0.9 * d.at(r, c, ch) / pi<double> + 1e-6);
}

TEST(NormalImage, CameraSpaceRoundTrip) {
  auto tpl = make_sphere_template(0.7, 10, 20);
  auto mesh = rest_mesh(tpl);
  Bvh bvh = build_bvh(tpl, mesh);
  auto cam = CameraModel::look_at({0, 0.4, 2.2}, {0, 0, 0}, {0, 1, 0}, 40, 32, 32);
  auto normals = render_normal_image(tpl, mesh, bvh, cam, 0.0, 0);
  Mat3d back = cam.cam_to_world_rotation();
  int fg = 0, facing = 0;
  for (int r = 0; r < 32; r++)
    for (int c = 0; c < 32; c++) {
      Vec3d n_cam = normals.rgb(r, c);
      if (length(n_cam) == 0) continue;
      fg++;
      EXPECT_NEAR(length(n_cam), 1.0, 1e-12);
      if (dot(back * n_cam, cam.pixel_ray(c, r).direction) < 0) facing++;
    }
  EXPECT_GT(fg, 100);
  // Silhouette grazing aside, hits face the camera.
  EXPECT_GT(facing, fg * 9 / 10);
  // The surface point nearest the camera has its normal toward the camera.
  Vec3d to_cam = normalize(cam.origin());
  Vec2d center_px;
  double depth;
  ASSERT_TRUE(cam.project(0.7 * to_cam, center_px, depth));
  Vec3d n_center = back * normals.rgb(int(center_px.y), int(center_px.x));
  EXPECT_GT(dot(n_center, to_cam), 0.9);
}

}  // namespace
