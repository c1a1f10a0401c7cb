#include "unisim/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace unisim {

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::SpectraMismatch: return "SpectraMismatch";
    case Reason::NotNonderogatory: return "NotNonderogatory";
    case Reason::MagnitudeMismatch: return "MagnitudeMismatch";
    case Reason::NoFamilyIntersection: return "NoFamilyIntersection";
    case Reason::CertificateRejected: return "CertificateRejected";
    case Reason::Similar: return "Similar";
  }
  return "Unknown";
}

void Config::validate() const {
  for (double tol : {tol_cluster, tol_rank, tol_zero, tol_match, tol_certificate,
                     tol_consistent, quantum})
    if (!(tol > 0.0)) throw error("Config: tolerances must be positive");
  if (max_qr_iter < 0) throw error("Config: max_qr_iter must be nonnegative");
  if (max_n_family < 1) throw error("Config: max_n_family must be positive");
}

CanonicalOptions Config::canonical_options() const {
  return {tol_zero, tol_consistent, quantum};
}

double certificate_residual(const ComplexMatrix& a, const ComplexMatrix& b,
                            const ComplexMatrix& u) {
  if (a.rows() != b.rows() || a.rows() != u.rows() || a.cols() != u.cols())
    throw shape_error("certificate_residual: nonconforming dimensions");
  return (b - u * a * u.adjoint()).norm() / frobenius_scale(a);
}

OrderedPair ordered_schur_pair(const ComplexMatrix& a, const ComplexMatrix& b,
                               const Config& cfg) {
  const SchurOptions schur_opts{cfg.max_qr_iter};
  SchurForm sa = schur(a, schur_opts);
  SchurForm sb = schur(b, schur_opts);

  const double scale = std::max(frobenius_scale(a), frobenius_scale(b));
  const double tol_cluster = cfg.tol_cluster * scale;
  SpectrumClustering clustering = cluster_and_order(sa.order, sb.order, tol_cluster);
  const std::vector<Complex> target = clustering.canonical_order();

  // A single-linkage chain over 2n points stays within 2n tol of its mean.
  const double tol_reorder = 2.0 * static_cast<double>(a.rows()) * tol_cluster;
  sa = refine_schur(reorder_schur(sa, target, tol_reorder), target);
  sb = refine_schur(reorder_schur(sb, target, tol_reorder), target);
  return {std::move(sa), std::move(sb), std::move(clustering)};
}

Verdict check_unitary_similarity(const ComplexMatrix& a, const ComplexMatrix& b,
                                 const Config& cfg) {
  cfg.validate();
  require_square(a, "check_unitary_similarity");
  require_square(b, "check_unitary_similarity");
  require_finite(a, "check_unitary_similarity");
  require_finite(b, "check_unitary_similarity");
  if (a.rows() != b.rows())
    throw shape_error("check_unitary_similarity: dimension mismatch");
  const int n = static_cast<int>(a.rows());
  if (n > cfg.max_n_family && !cfg.force)
    throw budget_error("check_unitary_similarity: n exceeds max_n_family; pass force");

  Verdict v;
  OrderedPair pair;
  try {
    pair = ordered_schur_pair(a, b, cfg);
  } catch (const spectra_mismatch&) {
    v.reason = Reason::SpectraMismatch;
    return v;
  }

  const double scale = std::max(frobenius_scale(a), frobenius_scale(b));
  const double tol_cluster = cfg.tol_cluster * scale;
  v.nonderogatory_margin = std::min(nonderogatory_margin(pair.a, tol_cluster),
                                    nonderogatory_margin(pair.b, tol_cluster));
  if (!(v.nonderogatory_margin > cfg.tol_rank)) {
    v.reason = Reason::NotNonderogatory;
    return v;
  }

  const ComplexMatrix& t1 = pair.a.T;
  const ComplexMatrix& t2 = pair.b.T;
  double gap = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      gap = std::max(gap, std::abs(std::abs(t1(i, j)) - std::abs(t2(i, j))));
  v.magnitude_gap = gap;
  const double t_scale = std::max(frobenius_scale(t1), frobenius_scale(t2));
  if (gap > 10.0 * cfg.tol_match * t_scale) {
    v.reason = Reason::MagnitudeMismatch;
    return v;
  }

  const CanonicalOptions opts = cfg.canonical_options();
  const CanonicalFamily f1 = family(t1, opts);
  const CanonicalFamily f2 = family(t2, opts);
  const auto match = family_intersect(f1, f2, cfg.tol_match, cfg.quantum);
  if (!match) {
    v.reason = Reason::NoFamilyIntersection;
    return v;
  }

  // T1 = U_A* A U_A, K = X1 T1 X1* = X2 T2 X2*, so B = U A U* with
  // U = U_B X2* X1 U_A*.
  const CanonicalMember& k1 = f1.members[match->index1];
  const CanonicalMember& k2 = f2.members[match->index2];
  const ComplexVector x = k2.x_diag.conjugate().cwiseProduct(k1.x_diag);
  ComplexMatrix u = pair.b.U * x.asDiagonal() * pair.a.U.adjoint();

  v.m1 = match->m1;
  v.m2 = match->m2;
  v.residual = certificate_residual(a, b, u);
  if (*v.residual <= cfg.tol_certificate) {
    v.similar = true;
    v.reason = Reason::Similar;
    v.certificate = std::move(u);
  } else {
    v.reason = Reason::CertificateRejected;
  }
  return v;
}

}  // namespace unisim
