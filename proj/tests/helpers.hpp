#pragma once

#include <random>

#include <Eigen/Dense>

// Shared helpers for the unit tests: deterministic random tensors/vectors.
namespace testhelp {

inline Eigen::Matrix3d random_mat3(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Eigen::Matrix3d X;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) X(i, j) = d(rng);
  return X;
}

inline Eigen::VectorXd random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

}  // namespace testhelp
