#pragma once

#include <initializer_list>
#include <string>

#include <doctest.h>

#include "kreinframes/analysis.hpp"

namespace kft {

inline kf::Mat mat(std::initializer_list<std::initializer_list<kf::cplx>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  kf::Mat m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline kf::Vec vec(std::initializer_list<kf::cplx> xs) {
  kf::Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

inline double dist(const kf::Mat& a, const kf::Mat& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

/// f1 = (1, 0), f2 = (1, 2) in C^2 with J = diag(1, -1).
inline kf::Frame re1() {
  return kf::build_frame(kf::KreinSpace(1, 1), mat({{1.0, 1.0}, {0.0, 2.0}}));
}

inline kf::Frame canonical(int p, int q) {
  return kf::build_frame(kf::KreinSpace(p, q), kf::Mat::Identity(p + q, p + q));
}

inline std::string data_path(const std::string& name) {
  return std::string(KF_TEST_DATA) + "/" + name;
}

}  // namespace kft

#define CHECK_MAT(a, b, tol) CHECK(kft::dist((a), (b)) <= (tol))
