#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "unisim/phase.hpp"

namespace unisim {

/// K = X T X* for the branch choice m, with X = diag(e^{i psi}, 1).
struct CanonicalMember {
  ComplexMatrix K;
  IntVector m;
  RealVector psi;
  /// Diagonal of X; the last entry is exactly 1.
  ComplexVector x_diag;
  RealVector f;
  /// Unwrapped arguments phi + 2 pi m + (psi_i - psi_j).
  RealVector phi_transformed;
  std::vector<bool> zero_mask;

  ComplexMatrix X() const { return x_diag.asDiagonal(); }
};

struct CanonicalOptions {
  double tol_zero = 1e-12;
  double tol_consistent = 1e-9;
  /// Argument quantum of member_key.
  double quantum = 1e-7;
};

CanonicalMember canonical_member(const ComplexMatrix& t, const IntVector& m,
                                 const CanonicalOptions& opts = {});

/// Number of free positions (i, j) with j < n-1 in the index set.
int free_pair_count(int n);

/// |I| = 3^((n-1)(n-2)/2).
std::uint64_t index_set_size(int n);

/// All m with m_ij in {-1, 0, 1} for j < n-1 and m_{i,n-1} = 0, in
/// mixed-radix order over the free positions (last free position fastest).
class IndexSetRange {
public:
  explicit IndexSetRange(int n);

  std::uint64_t size() const { return size_; }
  /// The `ordinal`-th vector of the enumeration.
  IntVector operator[](std::uint64_t ordinal) const;

private:
  int n_;
  std::vector<std::size_t> free_positions_;
  std::size_t pair_count_;
  std::uint64_t size_;
};

std::vector<IntVector> enumerate_I(int n);

using MemberKey = std::vector<std::int64_t>;

/// Quantized wrapped arguments of the unmasked entries, in pair order.
MemberKey member_key(const CanonicalMember& k, double quantum = 1e-7);

struct CanonicalFamily {
  /// Sorted by member_key.
  std::vector<CanonicalMember> members;
  ComplexMatrix source;
};

CanonicalFamily family(const ComplexMatrix& t, const CanonicalOptions& opts = {});

struct FamilyMatch {
  std::size_t index1 = 0;
  std::size_t index2 = 0;
  IntVector m1;
  IntVector m2;
  double distance = 0.0;
};

/// Max entrywise distance; masked entries compare by magnitude only.
double member_distance(const CanonicalMember& a, const CanonicalMember& b);

/// Finds members of F1 and F2 with member_distance <= tol_match * ||T||_F.
std::optional<FamilyMatch> family_intersect(const CanonicalFamily& f1,
                                            const CanonicalFamily& f2,
                                            double tol_match = 1e-6,
                                            double quantum = 1e-7);

}  // namespace unisim
