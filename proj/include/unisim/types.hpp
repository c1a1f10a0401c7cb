#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace unisim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

/// Base class for every failure raised by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class shape_error : public error {
public:
  using error::error;
};

class non_finite_error : public error {
public:
  using error::error;
};

class convergence_error : public error {
public:
  using error::error;
};

/// Per-cluster eigenvalue multiplicities of the two inputs disagree.
class spectra_mismatch : public error {
public:
  using error::error;
};

/// A linear system that must be consistent left a residual above tolerance.
class not_consistent : public error {
public:
  using error::error;
};

class permutation_error : public error {
public:
  using error::error;
};

class budget_error : public error {
public:
  using error::error;
};

inline void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw shape_error(std::string(what) + ": expected a nonempty square matrix");
}

inline void require_finite(const ComplexMatrix& a, const char* what) {
  if (!a.allFinite())
    throw non_finite_error(std::string(what) + ": matrix has non-finite entries");
}

}  // namespace unisim
