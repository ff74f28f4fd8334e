// Copyright 2026 The freqsplat Authors
// SPDX-License-Identifier: Apache-2.0
#include "freqsplat/projection.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace freqsplat {

Eigen::Matrix3d Gaussian3D::covariance() const {
  const Eigen::Matrix3d r = rotation();
  const Eigen::Matrix3d s = scale.asDiagonal();
  return r * s * s.transpose() * r.transpose();
}

void Gaussian3D::validate() const {
  if (std::abs(rot.norm() - 1.0) > 1e-9) throw std::invalid_argument("Gaussian3D: quaternion not unit");
  if ((scale.array() <= 0.0).any()) throw std::invalid_argument("Gaussian3D: scale must be positive");
  if (!(opacity >= 0.0 && opacity <= 1.0)) throw std::invalid_argument("Gaussian3D: opacity out of [0,1]");
}

void Camera::validate() const {
  if (!(fx > 0.0 && fy > 0.0)) throw std::invalid_argument("Camera: focal lengths must be positive");
  const Eigen::Matrix3d err = rotation * rotation.transpose() - Eigen::Matrix3d::Identity();
  if (err.cwiseAbs().maxCoeff() > 1e-9) throw std::invalid_argument("Camera: rotation not orthonormal");
  if (!(near_plane > 0.0)) throw std::invalid_argument("Camera: near plane must be positive");
}

Jacobian23 projection_jacobian(const Eigen::Vector3d& p_cam, const Camera& cam) {
  const double z = p_cam.z();
  if (!(z > cam.near_plane)) throw std::domain_error("projection_jacobian: point at or behind near plane");
  const double iz = 1.0 / z;
  const double iz2 = iz * iz;
  Jacobian23 j;
  j << cam.fx * iz, 0.0, -cam.fx * p_cam.x() * iz2,
       0.0, cam.fy * iz, -cam.fy * p_cam.y() * iz2;
  return j;
}

std::optional<ProjectedGaussian> project_gaussian(const Gaussian3D& g, const Camera& cam) {
  const Eigen::Vector3d p_cam = cam.to_camera(g.mu);
  if (!(p_cam.z() > cam.near_plane)) return std::nullopt;
  const Jacobian23 j = projection_jacobian(p_cam, cam);
  const Eigen::Matrix<double, 2, 3> jwr = j * cam.rotation * g.rotation();
  ProjectedGaussian pg;
  pg.mu2d = cam.pixel(p_cam);
  pg.depth = p_cam.z();
  for (int k = 0; k < 3; ++k) pg.axes[static_cast<std::size_t>(k)] = jwr.col(k) * g.scale[k];
  return pg;
}

bool in_expanded_frame(const ProjectedGaussian& pg, int width, int height, double margin) {
  const double pad_x = 0.5 * (margin - 1.0) * width;
  const double pad_y = 0.5 * (margin - 1.0) * height;
  return pg.mu2d.x() >= -pad_x && pg.mu2d.x() <= width + pad_x && pg.mu2d.y() >= -pad_y &&
         pg.mu2d.y() <= height + pad_y;
}

namespace {

// Yields non-empty, non-comment lines split into whitespace tokens.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<double> values;
    std::string token;
    while (ss >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + token + "'");
      }
    }
    if (!values.empty()) fn(values, line_no);
  }
}

}  // namespace

std::vector<Gaussian3D> read_gaussians(std::istream& in) {
  constexpr std::size_t kFields = 15;
  std::vector<Gaussian3D> out;
  for_each_record(in, [&](const std::vector<double>& v, int line_no) {
    if (v.size() != kFields) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(kFields) + " fields for a Gaussian, got " +
                               std::to_string(v.size()));
    }
    Gaussian3D g;
    g.id = static_cast<std::uint64_t>(v[0]);
    g.mu = {v[1], v[2], v[3]};
    g.scale = {v[4], v[5], v[6]};
    g.rot = Eigen::Quaterniond(v[7], v[8], v[9], v[10]).normalized();
    g.opacity = v[11];
    g.color = {v[12], v[13], v[14]};
    g.validate();
    out.push_back(g);
  });
  return out;
}

std::vector<Camera> read_cameras(std::istream& in) {
  constexpr std::size_t kFields = 19;
  std::vector<Camera> out;
  for_each_record(in, [&](const std::vector<double>& v, int line_no) {
    if (v.size() != kFields) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(kFields) + " fields for a camera, got " +
                               std::to_string(v.size()));
    }
    Camera c;
    c.id = static_cast<std::uint64_t>(v[0]);
    c.fx = v[1];
    c.fy = v[2];
    c.cx = v[3];
    c.cy = v[4];
    c.width = static_cast<int>(v[5]);
    c.height = static_cast<int>(v[6]);
    c.rotation << v[7], v[8], v[9], v[10], v[11], v[12], v[13], v[14], v[15];
    c.translation = {v[16], v[17], v[18]};
    c.validate();
    out.push_back(c);
  });
  return out;
}

void write_gaussians(std::ostream& out, const std::vector<Gaussian3D>& gaussians) {
  out << "# id mu_x mu_y mu_z s_x s_y s_z q_w q_x q_y q_z opacity r g b\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& g : gaussians) {
    out << g.id << ' ' << g.mu.x() << ' ' << g.mu.y() << ' ' << g.mu.z() << ' ' << g.scale.x() << ' '
        << g.scale.y() << ' ' << g.scale.z() << ' ' << g.rot.w() << ' ' << g.rot.x() << ' '
        << g.rot.y() << ' ' << g.rot.z() << ' ' << g.opacity << ' ' << g.color.x() << ' '
        << g.color.y() << ' ' << g.color.z() << '\n';
  }
}

void write_cameras(std::ostream& out, const std::vector<Camera>& cameras) {
  out << "# id fx fy cx cy width height r00 r01 r02 r10 r11 r12 r20 r21 r22 t_x t_y t_z\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& c : cameras) {
    out << c.id << ' ' << c.fx << ' ' << c.fy << ' ' << c.cx << ' ' << c.cy << ' ' << c.width << ' '
        << c.height;
    for (int r = 0; r < 3; ++r) {
      for (int k = 0; k < 3; ++k) out << ' ' << c.rotation(r, k);
    }
    out << ' ' << c.translation.x() << ' ' << c.translation.y() << ' ' << c.translation.z() << '\n';
  }
}

}  // namespace freqsplat
