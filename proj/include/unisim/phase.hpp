#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "unisim/types.hpp"

namespace unisim {

/// Strictly-upper index pairs (i, j), i < j, in lexicographic order.
/// Indices are zero-based; pair (i, n-1) couples row i to the last node.
class PairIndex {
public:
  explicit PairIndex(int n);

  int n() const { return n_; }
  std::size_t size() const { return pairs_.size(); }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  const std::pair<int, int>& operator[](std::size_t k) const { return pairs_[k]; }

  /// Position of (i, j) in the ordering.
  std::size_t index(int i, int j) const;

  static std::size_t count(int n) {
    return n < 2 ? 0 : static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  }

private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
};

/// Magnitudes and shifted arguments of the strictly upper entries.
struct PhaseData {
  int n = 0;
  RealVector r;
  /// arg(T_ij) - pi, with arg taken in [0, 2 pi).
  RealVector phi;
  /// Set where r_ij is numerically zero; phi is 0 there.
  std::vector<bool> zero_mask;
};

struct PhaseSolution {
  /// psi_1..psi_{n-1}; the last node is fixed at 0.
  RealVector psi;
  /// r_ij (psi_i - psi_j), with psi_{n-1} == 0 for the last column.
  RealVector f;
  double solver_residual = 0.0;
};

/// Maps (-inf, inf) onto [-pi, pi).
double wrap_to_pi(double angle);

/// Argument in [0, 2 pi).
double arg_0_2pi(Complex z);

PhaseData extract_phase(const ComplexMatrix& t, double tol_zero = 1e-12);

/// Weighted grounded Laplacian over nodes 0..n-2; edges to the last node
/// contribute only to the diagonal. Rejects negative weights.
RealMatrix build_R(int n, const RealVector& w);

/// b_s = -sum_{k<s} r_ks phi_ks + sum_{k>s} r_sk phi_sk, s = 0..n-2.
RealVector build_b(int n, const RealVector& r, const RealVector& phi);

/// Solves R(r) psi = -b(r, phi + 2 pi m) for the minimum-norm psi.
PhaseSolution solve_phase(const PhaseData& p, const IntVector& m,
                          double tol_consistent = 1e-9);

/// The quantities r_ij (psi_i - psi_j) and r_{i,n} psi_i.
RealVector phase_invariants(int n, const RealVector& r, const RealVector& psi);

/// phi + 2 pi m + (psi_i - psi_j), unwrapped.
RealVector transformed_phases(const PhaseData& p, const IntVector& m,
                              const RealVector& psi);

/// Largest violation of the balance equations b(r, phi_transformed) = 0.
double k_residual(const PhaseData& p, const RealVector& phi_transformed);

}  // namespace unisim
