#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "unisim/similarity.hpp"

namespace unisim {

/// The 4x4 upper triangular test matrix with diagonal 1..4, every other
/// strictly upper entry equal to i, and `eps` at zero-based (2, 3).
ComplexMatrix builtin_a4(Complex eps);

/// Baseline normalizer: walks the superdiagonals outward and makes each
/// nonzero entry positive real while a free diagonal phase remains.
ComplexMatrix positive_superdiagonal_form(const ComplexMatrix& t, double tol_zero = 1e-12);

/// Two-sided Hausdorff distance under the Frobenius metric.
double hausdorff_distance(const std::vector<ComplexMatrix>& x,
                          const std::vector<ComplexMatrix>& y);

std::vector<ComplexMatrix> family_matrices(const CanonicalFamily& f);

struct StabilityRow {
  Complex epsilon;
  double family_distance = 0.0;
  /// family_distance / |epsilon|; 0 when epsilon is 0.
  double ratio = 0.0;
  std::optional<double> baseline_distance;
};

struct StabilityReport {
  std::pair<int, int> entry;
  /// Rows grouped by argument, magnitudes strictly decreasing in each group.
  std::vector<StabilityRow> rows;
};

struct PerturbationSpec {
  /// Zero-based position in the strict upper triangle.
  std::pair<int, int> entry{2, 3};
  std::vector<double> magnitudes;
  std::vector<double> arguments{0.0};
  bool baseline = false;
};

/// Upper triangular input is used as is; a general matrix is first reduced
/// to a Schur form in canonical eigenvalue order. The chosen entry is set to
/// each epsilon and the family is compared with the epsilon = 0 family.
StabilityReport run_perturbation(const ComplexMatrix& input, const PerturbationSpec& spec,
                                 const Config& cfg = {});

/// Schur form of a single matrix in canonical eigenvalue order, or the input
/// itself when already upper triangular.
SchurForm canonical_triangular_form(const ComplexMatrix& a, const Config& cfg);

bool is_upper_triangular(const ComplexMatrix& a);

}  // namespace unisim
