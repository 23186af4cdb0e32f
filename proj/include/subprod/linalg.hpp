#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subprod/finite_field.hpp"

namespace subprod {

using Row = std::vector<Residue>;

/// Brings `rows` to reduced row echelon form over F_p in place and drops zero
/// rows. Returns the pivot column of each remaining row.
std::vector<std::size_t> reduce_to_rref(std::vector<Row>& rows, const PrimeField& fp);

/// Basis of the right kernel {x : M x = 0} of the matrix whose rows are
/// `rows`, each of length `cols`.
std::vector<Row> nullspace(std::vector<Row> rows, std::size_t cols,
                           const PrimeField& fp);

/// Echelon basis grown one vector at a time, for rank counting in hot loops.
class EchelonBasis {
 public:
  EchelonBasis(const PrimeField& fp, std::size_t cols);

  /// Returns true when v was independent of the vectors inserted so far.
  bool insert(std::span<const Residue> v);
  std::size_t rank() const noexcept { return rank_; }
  void clear();

 private:
  PrimeField fp_;
  std::size_t cols_;
  std::size_t rank_ = 0;
  std::vector<Row> row_at_pivot_;  // empty row: no pivot in that column
  Row scratch_;
};

/// An F_p-subspace of F_{p^n}, held as the unique reduced row echelon basis
/// in power-basis coordinates. Two subspaces are equal iff their bases are.
class Subspace {
 public:
  /// The zero subspace.
  explicit Subspace(FieldPtr field);

  static Subspace span(FieldPtr field, std::span<const FieldElement> vectors);
  static Subspace whole(FieldPtr field);

  const FieldPtr& field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  bool is_zero() const noexcept { return basis_.empty(); }
  const std::vector<FieldElement>& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// Remainder of v after elimination against the basis: zero at every pivot
  /// column, and zero altogether iff v is a member.
  FieldElement reduce(const FieldElement& v) const;
  bool contains(const FieldElement& v) const;
  bool is_subspace_of(const Subspace& other) const;

  Subspace sum(const Subspace& other) const;
  /// Zassenhaus: row reduce [U U; V 0] and read off the rows with a zero left half.
  Subspace intersect(const Subspace& other) const;

  /// One basis row per line, coordinates comma separated, low to high.
  std::string to_text() const;
  /// Inverse of to_text; blank lines and lines starting with '#' are skipped.
  /// Throws std::invalid_argument on malformed rows.
  static Subspace from_text(FieldPtr field, std::string_view text);

  friend bool operator==(const Subspace& a, const Subspace& b);

 private:
  Subspace(FieldPtr field, std::vector<Row> rref_rows, std::vector<std::size_t> pivots);
  void require_same_field(const Subspace& other) const;

  FieldPtr field_;
  std::vector<FieldElement> basis_;
  std::vector<std::size_t> pivots_;
};

bool same_field(const FieldPtr& a, const FieldPtr& b) noexcept;

/// Uniformly random subspace of the given dimension (a uniformly random
/// independent tuple spans each subspace equally often).
Subspace random_subspace(const FieldPtr& field, std::size_t dim, std::mt19937_64& rng);

}  // namespace subprod
