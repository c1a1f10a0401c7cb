#include "unisim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace unisim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Plane rotation G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
struct Givens {
  double c = 1.0;
  Complex s = 0.0;

  static Givens zeroing(Complex a, Complex b) {
    const double abs_a = std::abs(a);
    const double abs_b = std::abs(b);
    if (abs_b == 0.0) return {};
    if (abs_a == 0.0) return {0.0, Complex(1.0, 0.0)};
    const double norm = std::hypot(abs_a, abs_b);
    return {abs_a / norm, (a / abs_a) * std::conj(b) / norm};
  }

  // Rows (i, i+1) of m, columns [first, last).
  void apply_left(ComplexMatrix& m, Eigen::Index i, Eigen::Index first,
                  Eigen::Index last) const {
    for (Eigen::Index j = first; j < last; ++j) {
      const Complex x = m(i, j);
      const Complex y = m(i + 1, j);
      m(i, j) = c * x + s * y;
      m(i + 1, j) = -std::conj(s) * x + c * y;
    }
  }

  // Columns (j, j+1) of m times G*, rows [first, last).
  void apply_right_adjoint(ComplexMatrix& m, Eigen::Index j, Eigen::Index first,
                           Eigen::Index last) const {
    for (Eigen::Index i = first; i < last; ++i) {
      const Complex p = m(i, j);
      const Complex q = m(i, j + 1);
      m(i, j) = p * c + q * std::conj(s);
      m(i, j + 1) = -p * s + q * c;
    }
  }
};

Complex wilkinson_shift(const ComplexMatrix& h, Eigen::Index hi) {
  const Complex a = h(hi - 1, hi - 1);
  const Complex b = h(hi - 1, hi);
  const Complex c = h(hi, hi - 1);
  const Complex d = h(hi, hi);
  const Complex half_diff = 0.5 * (a - d);
  const Complex disc = std::sqrt(half_diff * half_diff + b * c);
  const Complex mid = 0.5 * (a + d);
  const Complex l1 = mid + disc;
  const Complex l2 = mid - disc;
  return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

// One explicitly shifted QR sweep on the active window [lo, hi]; the
// rotations are applied to the whole matrix so H stays a similarity of A.
void qr_sweep(ComplexMatrix& h, ComplexMatrix& z, Eigen::Index lo,
              Eigen::Index hi, Complex shift) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index i = lo; i <= hi; ++i) h(i, i) -= shift;

  std::vector<Givens> rotations;
  rotations.reserve(static_cast<std::size_t>(hi - lo));
  for (Eigen::Index k = lo; k < hi; ++k) {
    const Givens g = Givens::zeroing(h(k, k), h(k + 1, k));
    g.apply_left(h, k, k, n);
    h(k + 1, k) = 0.0;
    rotations.push_back(g);
  }
  for (Eigen::Index k = lo; k < hi; ++k) {
    const Givens& g = rotations[static_cast<std::size_t>(k - lo)];
    g.apply_right_adjoint(h, k, 0, k + 2);
    g.apply_right_adjoint(z, k, 0, n);
  }

  for (Eigen::Index i = lo; i <= hi; ++i) h(i, i) += shift;
}

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<std::size_t> parent_;
};

bool lex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Single-linkage groups of `values`, each group listed by member position.
std::vector<std::vector<std::size_t>> single_linkage(
    std::span<const Complex> values, double tol) {
  DisjointSets sets(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (std::abs(values[i] - values[j]) <= tol) sets.unite(i, j);

  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> group_of_root(values.size(), -1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (group_of_root[root] < 0) {
      group_of_root[root] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(group_of_root[root])].push_back(i);
  }
  return groups;
}

Complex mean_of(std::span<const Complex> values,
                const std::vector<std::size_t>& members) {
  Complex sum = 0.0;
  for (std::size_t i : members) sum += values[i];
  return sum / static_cast<double>(members.size());
}

}  // namespace

double frobenius_scale(const ComplexMatrix& a) {
  const double norm = a.norm();
  return norm > 0.0 ? norm : 1.0;
}

HessenbergForm hessenberg(const ComplexMatrix& a) {
  require_square(a, "hessenberg");
  require_finite(a, "hessenberg");

  const Eigen::Index n = a.rows();
  ComplexMatrix h = a;
  ComplexMatrix q = ComplexMatrix::Identity(n, n);

  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    ComplexVector v = h.block(k + 1, k, len, 1);
    const double tail = v.tail(len - 1).norm();
    if (tail == 0.0) continue;

    const double alpha_abs = v.norm();
    const Complex x0 = v(0);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    v(0) += phase * alpha_abs;
    const double vv = v.squaredNorm();

    // P = I - 2 v v* / (v* v), applied as H <- P H P and Q <- Q P.
    auto rows = h.bottomRows(len);
    const Eigen::RowVectorXcd vh_rows = v.adjoint() * rows;
    rows.noalias() -= (2.0 / vv) * v * vh_rows;

    auto cols = h.rightCols(len);
    const ComplexVector cols_v = cols * v;
    cols.noalias() -= (2.0 / vv) * cols_v * v.adjoint();

    auto qcols = q.rightCols(len);
    const ComplexVector q_v = qcols * v;
    qcols.noalias() -= (2.0 / vv) * q_v * v.adjoint();

    for (Eigen::Index i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return {std::move(h), std::move(q)};
}

SchurForm schur(const ComplexMatrix& a, const SchurOptions& opts) {
  auto [h, z] = hessenberg(a);
  const Eigen::Index n = h.rows();
  const int budget = opts.max_iter > 0 ? opts.max_iter : 30 * static_cast<int>(n);
  const double small = kEps * frobenius_scale(h);

  int sweeps = 0;
  int stalled = 0;
  Eigen::Index hi = n - 1;
  while (hi > 0) {
    Eigen::Index lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      const double local = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (sub <= opts.deflation * local || sub <= small) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      stalled = 0;
      continue;
    }
    if (++sweeps > budget)
      throw convergence_error("schur: QR iteration did not converge");

    Complex shift;
    if (++stalled % 10 == 0) {
      // Exceptional shift to break cycling.
      shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      shift = wilkinson_shift(h, hi);
    }
    qr_sweep(h, z, lo, hi, shift);
  }

  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) h(i, j) = 0.0;

  SchurForm out;
  out.order.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.order[static_cast<std::size_t>(i)] = h(i, i);
  out.T = std::move(h);
  out.U = std::move(z);
  return out;
}

std::vector<Complex> SpectrumClustering::canonical_order() const {
  std::vector<Complex> order;
  for (const auto& c : clusters)
    order.insert(order.end(), static_cast<std::size_t>(c.multiplicity),
                 c.representative);
  return order;
}

SpectrumClustering cluster_and_order(std::span<const Complex> eigs_a,
                                     std::span<const Complex> eigs_b,
                                     double tol_cluster) {
  if (eigs_a.size() != eigs_b.size())
    throw shape_error("cluster_and_order: spectra have different lengths");

  std::vector<Complex> all(eigs_a.begin(), eigs_a.end());
  all.insert(all.end(), eigs_b.begin(), eigs_b.end());
  auto groups = single_linkage(all, tol_cluster);

  std::vector<Complex> reps;
  reps.reserve(groups.size());
  for (const auto& g : groups) reps.push_back(mean_of(all, g));

  std::vector<std::size_t> perm(groups.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
    return lex_less(reps[x], reps[y]);
  });

  const std::size_t n = eigs_a.size();
  SpectrumClustering out;
  out.tol_cluster = tol_cluster;
  out.assignment_a.assign(n, -1);
  out.assignment_b.assign(n, -1);
  std::vector<int> count_b(groups.size(), 0);
  for (std::size_t rank = 0; rank < perm.size(); ++rank) {
    const auto& g = groups[perm[rank]];
    int mult_a = 0;
    for (std::size_t idx : g) {
      if (idx < n) {
        out.assignment_a[idx] = static_cast<int>(rank);
        ++mult_a;
      } else {
        out.assignment_b[idx - n] = static_cast<int>(rank);
        ++count_b[rank];
      }
    }
    out.clusters.push_back({reps[perm[rank]], mult_a});
  }
  for (std::size_t rank = 0; rank < out.clusters.size(); ++rank) {
    if (out.clusters[rank].multiplicity != count_b[rank])
      throw spectra_mismatch("cluster_and_order: eigenvalue multiplicities differ");
  }
  return out;
}

SchurForm reorder_schur(const SchurForm& s, std::span<const Complex> target,
                        double tol) {
  const Eigen::Index n = s.T.rows();
  if (static_cast<Eigen::Index>(target.size()) != n)
    throw permutation_error("reorder_schur: target length differs from n");

  // Each diagonal entry is bound to its nearest distinct target value.
  std::vector<Complex> distinct;
  for (const Complex& t : target)
    if (std::find(distinct.begin(), distinct.end(), t) == distinct.end())
      distinct.push_back(t);
  auto nearest = [&](Complex d) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < distinct.size(); ++k)
      if (std::abs(d - distinct[k]) < std::abs(d - distinct[best])) best = k;
    return best;
  };
  auto slot_of = [&](Complex t) {
    return static_cast<std::size_t>(
        std::find(distinct.begin(), distinct.end(), t) - distinct.begin());
  };

  SchurForm out = s;
  ComplexMatrix& t = out.T;
  ComplexMatrix& u = out.U;
  for (Eigen::Index p = 0; p < n; ++p) {
    const std::size_t want = slot_of(target[static_cast<std::size_t>(p)]);
    Eigen::Index q = p;
    while (q < n && nearest(t(q, q)) != want) ++q;
    if (q == n || std::abs(t(q, q) - distinct[want]) > tol)
      throw permutation_error("reorder_schur: target is not a permutation of the spectrum");

    for (Eigen::Index k = q - 1; k >= p; --k) {
      // Unit eigenvector of the 2x2 block for its trailing eigenvalue.
      const Complex a = t(k, k);
      const Complex b = t(k, k + 1);
      const Complex c = t(k + 1, k + 1);
      const Givens g = Givens::zeroing(b, c - a);
      // Q = G*, whose first column is the normalized eigenvector.
      g.apply_left(t, k, k, n);
      g.apply_right_adjoint(t, k, 0, k + 2);
      g.apply_right_adjoint(u, k, 0, n);
      t(k + 1, k) = 0.0;
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) out.order[static_cast<std::size_t>(i)] = t(i, i);
  return out;
}

SchurForm refine_schur(const SchurForm& s, std::span<const Complex> target) {
  const Eigen::Index n = s.T.rows();
  if (static_cast<Eigen::Index>(target.size()) != n)
    throw permutation_error("refine_schur: target length differs from n");

  SchurForm out = s;
  ComplexMatrix& t = out.T;
  ComplexMatrix& u = out.U;
  for (Eigen::Index p = 0; p + 1 < n; ++p) {
    const Eigen::Index len = n - p;
    const Complex lambda = target[static_cast<std::size_t>(p)];
    ComplexMatrix shifted = t.bottomRightCorner(len, len);
    shifted.diagonal().array() -= lambda;
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
    const ComplexVector v = svd.matrixV().col(len - 1);

    // Reflector P = I - 2 w w* / (w* w) with P e1 parallel to v.
    ComplexVector w = v;
    const Complex phase = std::abs(v(0)) > 0.0 ? v(0) / std::abs(v(0)) : Complex(1.0);
    w(0) += phase;
    const double ww = w.squaredNorm();
    if (ww > 0.0) {
      auto rows = t.bottomRows(len);
      const Eigen::RowVectorXcd wh_rows = w.adjoint() * rows;
      rows.noalias() -= (2.0 / ww) * w * wh_rows;
      auto cols = t.rightCols(len);
      const ComplexVector cols_w = cols * w;
      cols.noalias() -= (2.0 / ww) * cols_w * w.adjoint();
      auto ucols = u.rightCols(len);
      const ComplexVector u_w = ucols * w;
      ucols.noalias() -= (2.0 / ww) * u_w * w.adjoint();
    }
    t(p, p) = lambda;
    for (Eigen::Index i = p + 1; i < n; ++i) t(i, p) = 0.0;
  }
  t(n - 1, n - 1) = target[static_cast<std::size_t>(n - 1)];

  for (Eigen::Index i = 0; i < n; ++i) out.order[static_cast<std::size_t>(i)] = t(i, i);
  return out;
}

double nonderogatory_margin(const SchurForm& s, double tol_cluster) {
  const Eigen::Index n = s.T.rows();
  const double scale = frobenius_scale(s.T);
  const std::vector<Complex>& diag = s.order;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& members : single_linkage(diag, tol_cluster)) {
    if (members.size() < 2) continue;
    const Complex lambda = mean_of(diag, members);
    ComplexMatrix shifted = s.T;
    shifted.diagonal().array() -= lambda;
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
    // Singular values are sorted in decreasing order.
    const double second_smallest = svd.singularValues()(n - 2);
    margin = std::min(margin, second_smallest / scale);
  }
  return margin;
}

bool is_nonderogatory(const SchurForm& s, double tol_rank, double tol_cluster) {
  return nonderogatory_margin(s, tol_cluster) > tol_rank;
}

PsdSolution solve_psd_consistent(const RealMatrix& s, const RealVector& c,
                                 double tol_consistent, double cutoff) {
  if (s.rows() != s.cols() || s.rows() != c.size())
    throw shape_error("solve_psd_consistent: nonconforming system");
  if (!s.allFinite() || !c.allFinite())
    throw non_finite_error("solve_psd_consistent: non-finite input");

  PsdSolution out;
  out.x = RealVector::Zero(c.size());
  if (c.size() == 0) return out;

  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(s);
  const RealVector& lambda = eig.eigenvalues();
  const RealMatrix& v = eig.eigenvectors();
  const double lambda_max = lambda.cwiseAbs().maxCoeff();
  const double threshold = cutoff * lambda_max;

  const RealVector coeffs = v.transpose() * c;
  RealVector scaled = RealVector::Zero(c.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
    if (std::abs(lambda(k)) > threshold && lambda_max > 0.0)
      scaled(k) = coeffs(k) / lambda(k);
  out.x = v * scaled;
  out.residual = (s * out.x - c).norm();

  const double bound = tol_consistent * (s.norm() * out.x.norm() + c.norm());
  if (out.residual > bound)
    throw not_consistent("solve_psd_consistent: right-hand side is not in the range");
  return out;
}

}  // namespace unisim
