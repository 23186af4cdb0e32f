#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>

#include "subprod/finite_field.hpp"
#include "subprod/kappa.hpp"
#include "subprod/linalg.hpp"

namespace subprod {

/// ⟨AB⟩: the span of all products a_i b_j of basis vectors.
/// Throws std::invalid_argument for a zero factor.
Subspace product_span(const Subspace& a, const Subspace& b);

/// cA for a nonzero scalar c of the field.
Subspace scaled(const FieldElement& c, const Subspace& a);

/// The subfield F_{p^d} as an F_p-subspace, spanned by the powers of
/// subfield_generator(d).
Subspace subfield_subspace(const FieldPtr& field, unsigned d);

struct StabilizerReport {
  Subspace h;
  std::size_t g = 0;  // dim H
  /// 1 ∈ H, H closed under products of basis pairs, g | n, and H·V = V.
  bool is_subfield_verified = false;
};

/// H = {x : xV ⊆ V}, computed as the common kernel of the maps
/// x ↦ (x·v mod V) over the basis vectors v of V.
StabilizerReport stabilizer(const Subspace& v);

struct KneserReport {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::size_t dim_ab = 0;
  std::size_t dim_h = 0;
  /// dim⟨AB⟩ - (dim A + dim B - dim H)
  std::int64_t slack = 0;
  bool holds = false;
  bool stabilizer_verified = false;
};

KneserReport kneser_check(const Subspace& a, const Subspace& b);

struct KneserSurvey {
  std::uint64_t pairs = 0;
  std::uint64_t violations = 0;
  std::uint64_t stabilizer_failures = 0;
  std::map<std::int64_t, std::uint64_t> slack_histogram;
};

/// kneser_check on `pairs` random pairs. Pair i draws from its own generator
/// seeded by (seed, i); dimensions are uniform in [1, n] unless fixed.
KneserSurvey survey_kneser(const FieldPtr& field, std::uint64_t pairs, std::uint64_t seed,
                           std::optional<std::size_t> r = std::nullopt,
                           std::optional<std::size_t> s = std::nullopt);

/// ⟨1, α, ..., α^{r-1}⟩. Throws std::invalid_argument when r is zero or
/// exceeds the degree of α over F_p.
Subspace power_basis_subspace(const FieldPtr& field, const FieldElement& alpha,
                              std::size_t r);

struct OptimalPair {
  Subspace a;
  Subspace b;
  KappaResult certificate;
};

/// A pair with dim A = r, dim B = s and dim⟨AB⟩ ≤ κ(r, s), built from H-spans
/// of powers of the primitive element over the subfield H of degree h0.
OptimalPair optimal_pair(const FieldPtr& field, std::size_t r, std::size_t s);

/// Certificate that an optimal pair is exactly optimal: the stabilizer of the
/// product gives the lower bound (⌈r/g⌉ + ⌈s/g⌉ - 1)g ≥ κ.
struct OptimalityCertificate {
  std::size_t dim_ab = 0;
  std::uint64_t kappa = 0;
  std::uint64_t stabilizer_bound = 0;   // f_g(r, s), g = dim H
  KneserReport kneser;                  // on the pair itself
  KneserReport enlarged_kneser;         // on ⟨HA⟩, ⟨HB⟩
  bool certified = false;               // stabilizer_bound ≤ dim_ab == kappa
};

OptimalityCertificate certify_optimal(const OptimalPair& pair);

/// One step F_p ⊂ M ⊂ F_{p^{m d}} ⊆ L of the small products tower.
struct TowerSpec {
  FieldPtr field;
  unsigned m = 0;  // [M : F_p]
  unsigned d = 0;  // [F_{p^{md}} : M]
  FieldElement alpha;
  std::size_t q1 = 0, q2 = 0;
  std::size_t r0 = 0, s0 = 0;

  /// Splits r = q1·m + r0 with 1 ≤ r0 ≤ m (likewise s). When `alpha` is
  /// omitted the generator of F_{p^{md}} is used. Throws std::invalid_argument
  /// unless m·d divides n, 1 ≤ r, s ≤ m·d, and α has degree d over M.
  static TowerSpec make(const FieldPtr& field, unsigned m, unsigned d, std::size_t r,
                        std::size_t s, std::optional<FieldElement> alpha = std::nullopt);

  std::size_t r() const noexcept { return q1 * m + r0; }
  std::size_t s() const noexcept { return q2 * m + s0; }
};

/// A = M·{1, α, ..., α^{q1-1}} ⊕ A0·α^{q1}, and likewise B. A0, B0 must lie in M
/// with dims r0, s0 and dim⟨A0 B0⟩ ≤ r0 + s0 - 1.
std::pair<Subspace, Subspace> tower_construction(const TowerSpec& spec, const Subspace& a0,
                                                 const Subspace& b0);

/// Climbs the chain of subfield degrees 1 = m_0 | m_1 | ... | m_k (each
/// dividing n), applying tower_construction at each step starting from
/// A0 = B0 = ⟨1⟩. Returns a pair in F_{p^{m_k}} with dim⟨AB⟩ ≤ r + s - 1.
std::pair<Subspace, Subspace> small_products_pair(const FieldPtr& field,
                                                  std::span<const unsigned> chain,
                                                  std::size_t r, std::size_t s);

}  // namespace subprod
