#pragma once

#include <Eigen/Core>

namespace shiro {

using Vector = Eigen::VectorXd;
// Batches are stored column-major with one sample per column.
using Matrix = Eigen::MatrixXd;

inline Vector concat(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

inline Vector concat(const Vector& a, const Vector& b, const Vector& c) {
  Vector out(a.size() + b.size() + c.size());
  out << a, b, c;
  return out;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

inline Matrix vstack(const Matrix& a, const Matrix& b, const Matrix& c) {
  Matrix out(a.rows() + b.rows() + c.rows(), a.cols());
  out << a, b, c;
  return out;
}

}  // namespace shiro
