#pragma once

#include <optional>
#include <string_view>

#include "unisim/canonical.hpp"
#include "unisim/linalg.hpp"

namespace unisim {

enum class Reason {
  SpectraMismatch,
  NotNonderogatory,
  MagnitudeMismatch,
  NoFamilyIntersection,
  /// Families intersect but the assembled unitary fails the residual check.
  CertificateRejected,
  Similar,
};

std::string_view to_string(Reason r);

/// Tolerances are relative to max(||A||_F, ||B||_F) unless noted.
struct Config {
  double tol_cluster = 1e-5;
  double tol_rank = 1e-10;
  /// Relative to the largest off-diagonal magnitude.
  double tol_zero = 1e-12;
  double tol_match = 1e-6;
  /// Bound on ||B - U A U*||_F / ||A||_F.
  double tol_certificate = 1e-7;
  double tol_consistent = 1e-9;
  double quantum = 1e-7;
  /// 0 selects 30 n sweeps.
  int max_qr_iter = 0;
  int max_n_family = 6;
  /// Builds families beyond max_n_family.
  bool force = false;

  void validate() const;
  CanonicalOptions canonical_options() const;
};

struct Verdict {
  bool similar = false;
  Reason reason = Reason::NoFamilyIntersection;
  std::optional<IntVector> m1;
  std::optional<IntVector> m2;
  /// B = U A U*.
  std::optional<ComplexMatrix> certificate;
  std::optional<double> residual;
  /// Smallest sigma_{n-1}(T - lambda I) / ||T||_F over repeated clusters of
  /// both inputs; infinite when every eigenvalue is simple.
  double nonderogatory_margin = 0.0;
  /// Largest |r1_ij - r2_ij| of the ordered Schur forms, when compared.
  std::optional<double> magnitude_gap;
};

/// Schur forms of both inputs reordered to the shared eigenvalue order.
struct OrderedPair {
  SchurForm a;
  SchurForm b;
  SpectrumClustering clustering;
};

/// Steps (1)-(3) of the decision procedure. Throws spectra_mismatch.
OrderedPair ordered_schur_pair(const ComplexMatrix& a, const ComplexMatrix& b,
                               const Config& cfg);

Verdict check_unitary_similarity(const ComplexMatrix& a, const ComplexMatrix& b,
                                 const Config& cfg = {});

/// ||B - U A U*||_F / ||A||_F.
double certificate_residual(const ComplexMatrix& a, const ComplexMatrix& b,
                            const ComplexMatrix& u);

}  // namespace unisim
