#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "unisim/types.hpp"

namespace unisim {

/// Upper triangular T and unitary U with A = U T U*.
struct SchurForm {
  ComplexMatrix T;
  ComplexMatrix U;
  /// Eigenvalues in the order they appear on diag(T).
  std::vector<Complex> order;
};

struct HessenbergForm {
  ComplexMatrix H;
  ComplexMatrix Q;
};

/// Householder reduction to upper Hessenberg form, A = Q H Q*.
/// Entries below the first subdiagonal of H are exact zeros.
HessenbergForm hessenberg(const ComplexMatrix& a);

struct SchurOptions {
  /// Total QR sweep budget; 0 selects 30 n.
  int max_iter = 0;
  /// Relative deflation threshold on subdiagonal entries.
  double deflation = 1e-14;
};

/// Complex Schur decomposition by single-shift QR on the Hessenberg form.
/// Throws convergence_error when the sweep budget is exhausted.
SchurForm schur(const ComplexMatrix& a, const SchurOptions& opts = {});

struct EigenCluster {
  Complex representative;
  int multiplicity = 0;
};

/// Joint single-linkage clustering of two spectra.
struct SpectrumClustering {
  /// Sorted ascending by (Re, Im) of the representative.
  std::vector<EigenCluster> clusters;
  /// Cluster id of each entry of the first and second input list.
  std::vector<int> assignment_a;
  std::vector<int> assignment_b;
  double tol_cluster = 0.0;

  /// Representatives repeated by multiplicity, in cluster order.
  std::vector<Complex> canonical_order() const;
};

/// Clusters eigs_a and eigs_b together and fixes the shared diagonal order.
/// Throws spectra_mismatch when the per-cluster multiplicities differ.
SpectrumClustering cluster_and_order(std::span<const Complex> eigs_a,
                                     std::span<const Complex> eigs_b,
                                     double tol_cluster);

/// Moves diag(T) into the order given by `target` using adjacent unitary
/// swaps. An entry matches a target value when it lies within `tol` of it;
/// entries that already match are never exchanged with each other.
SchurForm reorder_schur(const SchurForm& s, std::span<const Complex> target,
                        double tol);

/// Rebuilds the Schur form with diag(T) exactly equal to `target` by
/// successive deflation: the leading Schur vector of each trailing block is
/// the null vector of (T - target_p I) restricted to that block. For a
/// repeated eigenvalue this stays accurate where the QR diagonal only
/// resolves the cluster to O(eps^(1/k)).
SchurForm refine_schur(const SchurForm& s, std::span<const Complex> target);

/// Smallest ratio sigma_{n-1}(T - lambda I) / ||T||_F over the clusters.
double nonderogatory_margin(const SchurForm& s, double tol_cluster);

/// Geometric multiplicity one for every eigenvalue cluster of T.
bool is_nonderogatory(const SchurForm& s, double tol_rank, double tol_cluster);

struct PsdSolution {
  RealVector x;
  double residual = 0.0;
};

/// Minimum-norm least-squares solve of a symmetric positive semidefinite
/// system. Eigenvalues below `cutoff * max|lambda|` are treated as zero.
/// Throws not_consistent when
/// ||S x - c|| > tol_consistent * (||S|| ||x|| + ||c||).
PsdSolution solve_psd_consistent(const RealMatrix& s, const RealVector& c,
                                 double tol_consistent = 1e-9,
                                 double cutoff = 1e-12);

/// ||A||_F for the scale of relative tolerances; never returns zero.
double frobenius_scale(const ComplexMatrix& a);

}  // namespace unisim
