// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace freqsplat {

struct Gaussian3D {
  Eigen::Vector3d mu = Eigen::Vector3d::Zero();
  Eigen::Vector3d scale = Eigen::Vector3d::Ones();  // per-axis standard deviations
  Eigen::Quaterniond rot = Eigen::Quaterniond::Identity();
  double opacity = 1.0;
  Eigen::Vector3d color = Eigen::Vector3d::Zero();
  std::uint64_t id = 0;

  Eigen::Matrix3d rotation() const { return rot.normalized().toRotationMatrix(); }
  Eigen::Matrix3d covariance() const;
  void validate() const;
};

// Undistorted pinhole camera. world_to_camera maps world points into a frame
// with +z along the viewing direction.
struct Camera {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
  double near_plane = 0.01;
  std::uint64_t id = 0;

  Eigen::Vector3d to_camera(const Eigen::Vector3d& world) const {
    return rotation * world + translation;
  }
  Eigen::Vector2d pixel(const Eigen::Vector3d& p_cam) const {
    return {fx * p_cam.x() / p_cam.z() + cx, fy * p_cam.y() / p_cam.z() + cy};
  }
  void validate() const;
};

struct ProjectedGaussian {
  Eigen::Vector2d mu2d = Eigen::Vector2d::Zero();
  std::array<Eigen::Vector2d, 3> axes{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
                                      Eigen::Vector2d::Zero()};
  double depth = 1.0;
};

using Jacobian23 = Eigen::Matrix<double, 2, 3>;

// d(pixel)/d(p_cam) of the pinhole map. Throws std::domain_error when
// p_cam.z <= near plane.
Jacobian23 projection_jacobian(const Eigen::Vector3d& p_cam, const Camera& cam);

// Screen-space mean and the three projected axis vectors J * W * R * (s_k e_k).
// Returns nullopt when the center is at or behind the near plane.
std::optional<ProjectedGaussian> project_gaussian(const Gaussian3D& g, const Camera& cam);

// True when mu2d lies in the image rectangle expanded by `margin` (1.2 means
// 10% extra on every side).
bool in_expanded_frame(const ProjectedGaussian& pg, int width, int height, double margin = 1.2);

// Line-oriented text formats, see docs/formats.md.
std::vector<Gaussian3D> read_gaussians(std::istream& in);
std::vector<Camera> read_cameras(std::istream& in);
void write_gaussians(std::ostream& out, const std::vector<Gaussian3D>& gaussians);
void write_cameras(std::ostream& out, const std::vector<Camera>& cameras);

}  // namespace freqsplat
