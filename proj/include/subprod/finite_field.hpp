#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace subprod {

using Residue = std::uint32_t;

/// Coefficients over F_p, lowest degree first.
using Polynomial = std::vector<Residue>;

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Distinct prime factors of n in ascending order (trial division up to 10^6,
/// then Pollard rho).
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Arithmetic in F_p for a prime p < 2^16.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const noexcept { return p_; }
  Residue add(Residue a, Residue b) const noexcept {
    const Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>((std::uint64_t{a} * b) % p_);
  }
  /// Throws std::domain_error for zero.
  Residue inv(Residue a) const;

 private:
  std::uint32_t p_;
};

/// Irreducibility of a monic polynomial of degree >= 1: gcd(x^{p^k} - x, f) = 1
/// for every k <= deg/2 and x^{p^deg} = x mod f.
bool is_irreducible(const PrimeField& fp, const Polynomial& monic);

/// Smallest monic irreducible polynomial of degree n, ordering candidates by
/// the base-p integer sum c_i p^i of their lower coefficients.
Polynomial find_irreducible(std::uint32_t p, unsigned n);

/// An element of F_{p^n}: n residues, coordinates in the power basis
/// 1, x, ..., x^{n-1}.
class FieldElement {
 public:
  FieldElement() = default;
  explicit FieldElement(std::vector<Residue> coeffs) : coeffs_(std::move(coeffs)) {}

  std::span<const Residue> coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  Residue operator[](std::size_t i) const { return coeffs_[i]; }
  bool is_zero() const noexcept;

  std::vector<Residue> into_coeffs() && { return std::move(coeffs_); }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  std::vector<Residue> coeffs_;
};

class ExtensionField;
using FieldPtr = std::shared_ptr<const ExtensionField>;

/// The extension F_p ⊂ F_{p^n} = F_p[x]/(modulus). Immutable once built.
class ExtensionField {
 public:
  /// Uses find_irreducible(p, n) as modulus.
  static FieldPtr create(std::uint32_t p, unsigned n);
  /// Throws std::invalid_argument unless `modulus` is monic and irreducible.
  static FieldPtr create(std::uint32_t p, Polynomial modulus);

  std::uint32_t p() const noexcept { return fp_.p(); }
  unsigned n() const noexcept { return n_; }
  /// p^n.
  std::uint64_t order() const noexcept { return order_; }
  const Polynomial& modulus() const noexcept { return modulus_; }
  const PrimeField& prime_field() const noexcept { return fp_; }
  const FieldElement& primitive() const noexcept { return primitive_; }
  const std::vector<std::uint64_t>& unit_group_factors() const noexcept {
    return unit_factors_;
  }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement constant(Residue c) const;
  /// The class of x.
  FieldElement generator() const;
  /// Validates length and residue range.
  FieldElement element(std::vector<Residue> coeffs) const;
  bool belongs(const FieldElement& a) const noexcept;

  /// Elements indexed by the base-p integer sum c_i p^i.
  FieldElement element_at(std::uint64_t index) const;
  std::uint64_t index_of(const FieldElement& a) const;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement scale(Residue c, const FieldElement& a) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  /// Throws std::domain_error for zero.
  FieldElement inv(const FieldElement& a) const;
  FieldElement pow(const FieldElement& a, std::uint64_t e) const;
  /// a^{p^k}.
  FieldElement frobenius(const FieldElement& a, unsigned k = 1) const;

  /// Order of a in the multiplicative group; throws for zero.
  std::uint64_t multiplicative_order(const FieldElement& a) const;
  bool is_primitive(const FieldElement& a) const;
  /// Degree of a over F_p: the smallest k with a^{p^k} = a.
  unsigned degree_over_prime_field(const FieldElement& a) const;

  /// primitive^{(p^n-1)/(p^d-1)}, a generator of the subfield F_{p^d}.
  /// Throws std::invalid_argument unless d divides n.
  FieldElement subfield_generator(unsigned d) const;

  FieldElement random(std::mt19937_64& rng) const;

  /// Same characteristic and modulus.
  bool same_as(const ExtensionField& other) const noexcept {
    return p() == other.p() && modulus_ == other.modulus_;
  }

 private:
  ExtensionField(PrimeField fp, Polynomial modulus);

  PrimeField fp_;
  unsigned n_;
  std::uint64_t order_;
  Polynomial modulus_;
  std::vector<std::uint64_t> unit_factors_;
  FieldElement primitive_;
};

/// Smallest element (in index order) of multiplicative order p^n - 1.
FieldElement find_primitive(const ExtensionField& field);

/// Parses "p^n" (or a bare prime "p" for n = 1).
struct FieldSpec {
  std::uint32_t p = 0;
  unsigned n = 0;
};
FieldSpec parse_field_spec(std::string_view text);
/// Parses a comma separated coefficient list, low to high.
Polynomial parse_polynomial(std::string_view text);

}  // namespace subprod
