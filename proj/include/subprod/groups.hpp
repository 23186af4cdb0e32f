#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "subprod/kappa.hpp"
#include "subprod/search.hpp"

namespace subprod {

/// A finite group of order at most 64 given by its Cayley table. Subsets are
/// handled as 64-bit masks over element indices.
class GroupSpec {
 public:
  static constexpr std::uint32_t kMaxOrder = 64;

  /// Validates the table: square, entries in range, identity row and column,
  /// every row and column a permutation, and associativity on all triples.
  /// Throws std::invalid_argument otherwise.
  static GroupSpec from_table(std::vector<std::vector<std::uint32_t>> cayley,
                              std::uint32_t identity, std::string name = {});

  /// {"name": ..., "order": n, "identity": e, "cayley": [[...], ...]}
  static GroupSpec from_json(std::string_view text);
  std::string to_json() const;

  std::uint32_t order() const noexcept { return order_; }
  std::uint32_t identity() const noexcept { return identity_; }
  const std::string& name() const noexcept { return name_; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return cayley_[a][b]; }
  std::uint32_t inverse(std::uint32_t a) const { return inverses_[a]; }
  const std::vector<std::vector<std::uint32_t>>& cayley() const noexcept { return cayley_; }
  bool is_abelian() const noexcept { return abelian_; }

  /// Orders of all subgroups, found by closing generating sets.
  const std::vector<std::uint64_t>& subgroup_orders() const noexcept { return subgroup_orders_; }
  AdmissibleDegreeSet subgroup_degree_set() const;

  /// {g b : b ∈ B}
  std::uint64_t left_translate(std::uint32_t g, std::uint64_t b_mask) const;
  /// AB as a mask.
  std::uint64_t product_set(std::uint64_t a_mask, std::uint64_t b_mask) const;
  /// Mask of the subgroup generated by `generators`.
  std::uint64_t closure(const std::vector<std::uint32_t>& generators) const;

 private:
  GroupSpec() = default;

  std::string name_;
  std::uint32_t order_ = 0;
  std::uint32_t identity_ = 0;
  std::vector<std::vector<std::uint32_t>> cayley_;
  std::vector<std::uint32_t> inverses_;
  std::vector<std::uint64_t> subgroup_orders_;
  bool abelian_ = false;
};

/// "cyclic:n", "product:n,m[,...]" (direct product of cyclic groups) or
/// "Z7xZ3semidirect" (Z/7 ⋊ Z/3 with the generator of Z/3 acting as x ↦ 2x).
/// Throws std::invalid_argument for unknown names.
GroupSpec builtin_group(std::string_view name);

KappaResult kappa_group(std::uint64_t r, std::uint64_t s, const GroupSpec& group);

/// Sorted element indices.
using GroupSubset = std::vector<std::uint32_t>;
using GroupMuResult = MuResult<GroupSubset>;

std::uint64_t estimated_group_pairs(const GroupSpec& group, unsigned r, unsigned s,
                                    bool canonicalize = true);

/// min |AB| over |A| = r, |B| = s. The floor used for pruning is κ_G for
/// abelian groups and max(r, s) otherwise.
GroupMuResult mu_group_exact(const GroupSpec& group, unsigned r, unsigned s,
                             const SearchOptions& options = {});

GroupMuResult mu_group_randomized(const GroupSpec& group, unsigned r, unsigned s,
                                  const RandomizedOptions& options);

std::uint64_t subset_mask(const GroupSubset& subset);
GroupSubset mask_elements(std::uint64_t mask);

}  // namespace subprod
