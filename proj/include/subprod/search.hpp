#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "subprod/finite_field.hpp"
#include "subprod/linalg.hpp"

namespace subprod {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

/// Number of r-dimensional subspaces of an n-dimensional space over F_q,
/// saturating at kSaturated.
std::uint64_t gaussian_binomial(std::uint64_t q, unsigned n, unsigned r);

/// Walks the r-dimensional subspaces of F_{p^n} in RREF-profile order: pivot
/// sets lexicographically, then the free entries as an odometer whose last
/// entry turns fastest. With `containing_one` only subspaces containing 1 are
/// visited; they are ⟨1⟩ ⊕ W for W ⊆ span(x, ..., x^{n-1}) of dimension r - 1.
class SubspaceEnumerator {
 public:
  SubspaceEnumerator(FieldPtr field, unsigned r, bool containing_one = false);

  std::uint64_t count() const noexcept { return count_; }
  bool done() const noexcept { return done_; }
  std::uint64_t index() const noexcept { return index_; }
  /// RREF basis of the current subspace.
  const std::vector<FieldElement>& basis() const noexcept { return basis_; }
  Subspace current() const;

  void advance();
  /// Jumps to the subspace with the given position in the walk.
  void seek(std::uint64_t index);

 private:
  void start_pivot_set();
  bool next_pivot_set();
  void load_digits(std::uint64_t local);
  void materialize();

  FieldPtr field_;
  unsigned offset_;  // 1 when the walk is restricted to subspaces containing 1
  unsigned cols_;    // columns available to the free block
  unsigned k_;       // dimension inside the free block
  std::uint64_t count_;
  bool done_ = false;
  std::uint64_t index_ = 0;
  std::vector<unsigned> pivots_;
  std::vector<unsigned> free_col_;  // column of each digit
  std::vector<unsigned> free_row_;  // row of each digit
  std::vector<Residue> digits_;
  std::vector<FieldElement> basis_;
};

std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, unsigned r,
                                          bool containing_one = false);

struct SearchOptions {
  /// Maximum number of product computations for exhaustive searches.
  std::uint64_t budget = 1'000'000'000;
  unsigned workers = 1;
  /// Stop as soon as a proven lower bound is met (κ for field extensions and
  /// abelian groups, max(r, s) otherwise).
  bool prune_at_floor = true;
  /// Restrict to pairs with 1 ∈ A and 1 ∈ B.
  bool canonicalize = true;
};

struct RandomizedOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  /// Each trial starts from a uniformly sampled pair and applies random
  /// single-generator replacements, keeping non-worsening ones, until
  /// `patience` consecutive proposals fail to improve. 0 disables the descent.
  unsigned patience = 48;
  unsigned workers = 1;
  bool prune_at_floor = true;
};

template <class Witness>
struct MuResult {
  std::uint64_t value = 0;
  Witness witness_a;
  Witness witness_b;
  /// True when every (canonicalized) pair was examined.
  bool exhaustive = false;
};

using FieldMuResult = MuResult<Subspace>;

/// Pairs examined by mu_exact before the budget applies.
std::uint64_t estimated_pairs(const FieldPtr& field, unsigned r, unsigned s,
                              bool canonicalize = true);

/// min dim⟨AB⟩ over dim A = r, dim B = s. When the estimate exceeds the budget
/// only a prefix of the walk is searched and `exhaustive` is false. The result
/// and its witnesses do not depend on the number of workers.
FieldMuResult mu_exact(const FieldPtr& field, unsigned r, unsigned s,
                       const SearchOptions& options = {});

/// Upper bound from seeded random trials.
FieldMuResult mu_randomized(const FieldPtr& field, unsigned r, unsigned s,
                            const RandomizedOptions& options);

}  // namespace subprod
