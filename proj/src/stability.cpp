#include "unisim/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace unisim {

ComplexMatrix builtin_a4(Complex eps) {
  const Complex i(0.0, 1.0);
  ComplexMatrix a = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) a(k, k) = static_cast<double>(k + 1);
  for (int r = 0; r < 4; ++r)
    for (int c = r + 1; c < 4; ++c) a(r, c) = i;
  a(2, 3) = eps;
  return a;
}

bool is_upper_triangular(const ComplexMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = j + 1; i < a.rows(); ++i)
      if (a(i, j) != Complex(0.0)) return false;
  return true;
}

ComplexMatrix positive_superdiagonal_form(const ComplexMatrix& t, double tol_zero) {
  require_square(t, "positive_superdiagonal_form");
  const int n = static_cast<int>(t.rows());
  double r_max = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) r_max = std::max(r_max, std::abs(t(i, j)));

  // Nodes joined by an already normalized entry share a component; psi is
  // fixed up to one constant per component.
  std::vector<int> component(static_cast<std::size_t>(n));
  std::iota(component.begin(), component.end(), 0);
  std::vector<double> psi(static_cast<std::size_t>(n), 0.0);

  for (int offset = 1; offset < n; ++offset) {
    for (int i = 0; i + offset < n; ++i) {
      const int j = i + offset;
      const Complex z = t(i, j);
      const auto ci = component[static_cast<std::size_t>(i)];
      const auto cj = component[static_cast<std::size_t>(j)];
      if (std::abs(z) <= tol_zero * r_max || ci == cj) continue;
      // arg(z) + psi_i - psi_j = 0 after shifting every node of j's component.
      const double shift = std::arg(z) + psi[static_cast<std::size_t>(i)] -
                           psi[static_cast<std::size_t>(j)];
      for (int k = 0; k < n; ++k) {
        if (component[static_cast<std::size_t>(k)] != cj) continue;
        psi[static_cast<std::size_t>(k)] += shift;
        component[static_cast<std::size_t>(k)] = ci;
      }
    }
  }

  const double last = psi[static_cast<std::size_t>(n - 1)];
  ComplexMatrix out = t;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out(i, j) = t(i, j) * std::polar(1.0, (psi[static_cast<std::size_t>(i)] - last) -
                                                (psi[static_cast<std::size_t>(j)] - last));
  return out;
}

double hausdorff_distance(const std::vector<ComplexMatrix>& x,
                          const std::vector<ComplexMatrix>& y) {
  if (x.empty() || y.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](const auto& from, const auto& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, (p - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(x, y), directed(y, x));
}

std::vector<ComplexMatrix> family_matrices(const CanonicalFamily& f) {
  std::vector<ComplexMatrix> out;
  out.reserve(f.members.size());
  for (const auto& m : f.members) out.push_back(m.K);
  return out;
}

SchurForm canonical_triangular_form(const ComplexMatrix& a, const Config& cfg) {
  require_square(a, "canonical_triangular_form");
  require_finite(a, "canonical_triangular_form");
  if (is_upper_triangular(a)) {
    SchurForm s;
    s.T = a;
    s.U = ComplexMatrix::Identity(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) s.order.push_back(a(i, i));
    return s;
  }
  return ordered_schur_pair(a, a, cfg).a;
}

StabilityReport run_perturbation(const ComplexMatrix& input, const PerturbationSpec& spec,
                                 const Config& cfg) {
  cfg.validate();
  const ComplexMatrix base = canonical_triangular_form(input, cfg).T;
  const int n = static_cast<int>(base.rows());
  const auto [ei, ej] = spec.entry;
  if (ei < 0 || ej >= n || ei >= ej)
    throw error("run_perturbation: entry must lie in the strict upper triangle");

  const CanonicalOptions opts = cfg.canonical_options();
  ComplexMatrix unperturbed = base;
  unperturbed(ei, ej) = 0.0;
  const auto reference = family_matrices(family(unperturbed, opts));
  const ComplexMatrix reference_baseline =
      positive_superdiagonal_form(unperturbed, cfg.tol_zero);

  std::vector<double> magnitudes = spec.magnitudes;
  std::sort(magnitudes.begin(), magnitudes.end(), std::greater<>());
  magnitudes.erase(std::unique(magnitudes.begin(), magnitudes.end()), magnitudes.end());
  if (!magnitudes.empty() && magnitudes.back() < 0.0)
    throw error("run_perturbation: magnitudes must be nonnegative");

  StabilityReport report;
  report.entry = spec.entry;
  for (double angle : spec.arguments) {
    for (double mag : magnitudes) {
      StabilityRow row;
      row.epsilon = std::polar(mag, angle);
      ComplexMatrix perturbed = base;
      perturbed(ei, ej) = row.epsilon;
      row.family_distance = hausdorff_distance(reference, family_matrices(family(perturbed, opts)));
      row.ratio = mag > 0.0 ? row.family_distance / mag : 0.0;
      if (spec.baseline)
        row.baseline_distance =
            (positive_superdiagonal_form(perturbed, cfg.tol_zero) - reference_baseline).norm();
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace unisim
