#include "unisim/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "unisim/linalg.hpp"

namespace unisim {

namespace {

constexpr double kPi = std::numbers::pi;

void require_upper_triangular(const ComplexMatrix& t, const char* what) {
  require_square(t, what);
  require_finite(t, what);
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    for (Eigen::Index i = j + 1; i < t.rows(); ++i)
      if (t(i, j) != Complex(0.0))
        throw shape_error(std::string(what) + ": matrix is not upper triangular");
}

}  // namespace

CanonicalMember canonical_member(const ComplexMatrix& t, const IntVector& m,
                                 const CanonicalOptions& opts) {
  require_upper_triangular(t, "canonical_member");
  const PhaseData p = extract_phase(t, opts.tol_zero);
  const PhaseSolution sol = solve_phase(p, m, opts.tol_consistent);

  const Eigen::Index n = t.rows();
  CanonicalMember out;
  out.m = m;
  out.psi = sol.psi;
  out.f = sol.f;
  out.zero_mask = p.zero_mask;
  out.phi_transformed = transformed_phases(p, m, sol.psi);
  out.x_diag = ComplexVector::Ones(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) out.x_diag(i) = std::polar(1.0, sol.psi(i));

  out.K = t;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      out.K(i, j) = t(i, j) * out.x_diag(i) * std::conj(out.x_diag(j));
  return out;
}

int free_pair_count(int n) { return n < 3 ? 0 : (n - 1) * (n - 2) / 2; }

std::uint64_t index_set_size(int n) {
  std::uint64_t size = 1;
  for (int k = 0; k < free_pair_count(n); ++k) size *= 3;
  return size;
}

IndexSetRange::IndexSetRange(int n)
    : n_(n), pair_count_(PairIndex::count(n)), size_(index_set_size(n)) {
  if (n < 1) throw shape_error("enumerate_I: n must be positive");
  const PairIndex pairs(n);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (pairs[k].second < n - 1) free_positions_.push_back(k);
}

IntVector IndexSetRange::operator[](std::uint64_t ordinal) const {
  IntVector m = IntVector::Zero(static_cast<Eigen::Index>(pair_count_));
  for (std::size_t slot = free_positions_.size(); slot-- > 0;) {
    m(static_cast<Eigen::Index>(free_positions_[slot])) = static_cast<int>(ordinal % 3) - 1;
    ordinal /= 3;
  }
  return m;
}

std::vector<IntVector> enumerate_I(int n) {
  const IndexSetRange range(n);
  std::vector<IntVector> out;
  out.reserve(static_cast<std::size_t>(range.size()));
  for (std::uint64_t k = 0; k < range.size(); ++k) out.push_back(range[k]);
  return out;
}

MemberKey member_key(const CanonicalMember& k, double quantum) {
  MemberKey key;
  for (std::size_t e = 0; e < k.zero_mask.size(); ++e) {
    if (k.zero_mask[e]) continue;
    const double angle = wrap_to_pi(k.phi_transformed(static_cast<Eigen::Index>(e)));
    key.push_back(static_cast<std::int64_t>(std::llround(angle / quantum)));
  }
  return key;
}

CanonicalFamily family(const ComplexMatrix& t, const CanonicalOptions& opts) {
  require_upper_triangular(t, "family");
  const int n = static_cast<int>(t.rows());
  const IndexSetRange range(n);

  std::vector<CanonicalMember> members;
  std::vector<MemberKey> keys;
  members.reserve(static_cast<std::size_t>(range.size()));
  keys.reserve(static_cast<std::size_t>(range.size()));
  for (std::uint64_t k = 0; k < range.size(); ++k) {
    members.push_back(canonical_member(t, range[k], opts));
    keys.push_back(member_key(members.back(), opts.quantum));
  }

  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  CanonicalFamily out;
  out.source = t;
  out.members.reserve(members.size());
  for (std::size_t idx : order) out.members.push_back(std::move(members[idx]));
  return out;
}

double member_distance(const CanonicalMember& a, const CanonicalMember& b) {
  if (a.K.rows() != b.K.rows()) return std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(a.K.rows());
  double dist = 0.0;
  for (int i = 0; i < n; ++i) dist = std::max(dist, std::abs(a.K(i, i) - b.K(i, i)));

  const PairIndex pairs(n);
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    const auto [i, j] = pairs[e];
    const Complex za = a.K(i, j);
    const Complex zb = b.K(i, j);
    const double d = (a.zero_mask[e] || b.zero_mask[e]) ? std::abs(std::abs(za) - std::abs(zb))
                                                        : std::abs(za - zb);
    dist = std::max(dist, d);
  }
  return dist;
}

std::optional<FamilyMatch> family_intersect(const CanonicalFamily& f1,
                                            const CanonicalFamily& f2,
                                            double tol_match, double quantum) {
  if (f1.members.empty() || f2.members.empty()) return std::nullopt;
  if (f1.source.rows() != f2.source.rows()) return std::nullopt;

  const double threshold =
      tol_match * std::max(frobenius_scale(f1.source), frobenius_scale(f2.source));

  auto make_match = [&](std::size_t i, std::size_t j, double d) {
    return FamilyMatch{i, j, f1.members[i].m, f2.members[j].m, d};
  };

  // Probe on the best-conditioned argument: the position unmasked in both
  // families with the largest magnitude.
  const CanonicalMember& lead1 = f1.members.front();
  const CanonicalMember& lead2 = f2.members.front();
  const int n = static_cast<int>(f1.source.rows());
  const PairIndex pairs(n);
  std::optional<std::size_t> probe;
  double probe_r = 0.0;
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    if (lead1.zero_mask[e] || lead2.zero_mask[e]) continue;
    const auto [i, j] = pairs[e];
    const double r = std::min(std::abs(lead1.K(i, j)), std::abs(lead2.K(i, j)));
    if (!probe || r > probe_r) {
      probe = e;
      probe_r = r;
    }
  }

  const bool all_masked1 = std::all_of(lead1.zero_mask.begin(), lead1.zero_mask.end(),
                                       [](bool b) { return b; });
  const bool all_masked2 = std::all_of(lead2.zero_mask.begin(), lead2.zero_mask.end(),
                                       [](bool b) { return b; });
  if (all_masked1 || all_masked2) {
    // Every member of a fully masked family equals its source.
    const std::size_t limit1 = all_masked1 ? 1 : f1.members.size();
    const std::size_t limit2 = all_masked2 ? 1 : f2.members.size();
    for (std::size_t i = 0; i < limit1; ++i)
      for (std::size_t j = 0; j < limit2; ++j) {
        const double d = member_distance(f1.members[i], f2.members[j]);
        if (d <= threshold) return make_match(i, j, d);
      }
    return std::nullopt;
  }

  if (!probe) {
    // Disjoint supports; only a magnitude-level match is possible.
    for (std::size_t i = 0; i < f1.members.size(); ++i)
      for (std::size_t j = 0; j < f2.members.size(); ++j) {
        const double d = member_distance(f1.members[i], f2.members[j]);
        if (d <= threshold) return make_match(i, j, d);
      }
    return std::nullopt;
  }

  const auto [pi, pj] = pairs[*probe];
  auto probe_angle = [&](const CanonicalMember& k) { return std::arg(k.K(pi, pj)); };

  std::vector<std::pair<double, std::size_t>> sorted2;
  sorted2.reserve(f2.members.size());
  for (std::size_t j = 0; j < f2.members.size(); ++j)
    sorted2.emplace_back(probe_angle(f2.members[j]), j);
  std::sort(sorted2.begin(), sorted2.end());

  // A match within threshold moves the probe argument by at most this much.
  const double half_width =
      2.0 * std::asin(std::min(1.0, threshold / probe_r)) + quantum;
  const bool whole_circle = half_width >= kPi;

  auto scan = [&](double lo, double hi, std::size_t i, std::optional<FamilyMatch>& best) {
    auto it = std::lower_bound(sorted2.begin(), sorted2.end(),
                               std::make_pair(lo, std::size_t{0}));
    for (; it != sorted2.end() && it->first <= hi; ++it) {
      const double d = member_distance(f1.members[i], f2.members[it->second]);
      if (d <= threshold && (!best || d < best->distance ||
                             (d == best->distance && it->second < best->index2)))
        best = make_match(i, it->second, d);
    }
  };

  for (std::size_t i = 0; i < f1.members.size(); ++i) {
    std::optional<FamilyMatch> best;
    const double theta = probe_angle(f1.members[i]);
    if (whole_circle) {
      scan(-kPi - 1.0, kPi + 1.0, i, best);
    } else {
      scan(theta - half_width, theta + half_width, i, best);
      if (theta - half_width < -kPi)
        scan(theta - half_width + 2.0 * kPi, kPi + 1.0, i, best);
      if (theta + half_width > kPi)
        scan(-kPi - 1.0, theta + half_width - 2.0 * kPi, i, best);
    }
    if (best) return best;
  }
  return std::nullopt;
}

}  // namespace unisim
