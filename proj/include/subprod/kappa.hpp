#pragma once

#include <cstdint>
#include <vector>

namespace subprod {

/// Largest r, s or n accepted by the numeric kappa routines.
inline constexpr std::uint64_t kMaxKappaArgument = std::uint64_t{1} << 31;

/// The dimensions h = [H:K] of the intermediate fields K ⊂ H ⊂ L (or the
/// subgroup orders of a finite group). Always contains 1; when the ambient
/// degree n is finite every member divides n. n == 0 stands for an extension
/// of infinite degree.
class AdmissibleDegreeSet {
 public:
  static constexpr std::uint64_t kInfinite = 0;

  /// Sorts and deduplicates `degrees`; throws std::invalid_argument when 1 is
  /// missing, a degree is zero, or a degree does not divide a finite n.
  AdmissibleDegreeSet(std::uint64_t n, std::vector<std::uint64_t> degrees);

  std::uint64_t n() const noexcept { return n_; }
  bool is_finite() const noexcept { return n_ != kInfinite; }
  const std::vector<std::uint64_t>& degrees() const noexcept { return degrees_; }
  bool contains(std::uint64_t h) const noexcept;

  friend bool operator==(const AdmissibleDegreeSet&,
                         const AdmissibleDegreeSet&) = default;

 private:
  std::uint64_t n_;
  std::vector<std::uint64_t> degrees_;
};

/// All divisors of n, i.e. the intermediate degrees of F_p ⊂ F_{p^n}.
AdmissibleDegreeSet divisors(std::uint64_t n);

struct KappaQuery {
  KappaQuery(std::uint64_t r, std::uint64_t s, AdmissibleDegreeSet degrees);

  std::uint64_t r;
  std::uint64_t s;
  AdmissibleDegreeSet degrees;
};

struct KappaResult {
  std::uint64_t value = 0;
  std::uint64_t h0 = 0;  // smallest minimizing degree
  std::uint64_t r0 = 0;  // ceil(r / h0)
  std::uint64_t s0 = 0;  // ceil(s / h0)

  friend bool operator==(const KappaResult&, const KappaResult&) = default;
};

/// (ceil(r/h) + ceil(s/h) - 1) * h, in exact integer arithmetic.
std::uint64_t f_h(std::uint64_t r, std::uint64_t s, std::uint64_t h);

KappaResult kappa(const KappaQuery& query);
KappaResult kappa(std::uint64_t r, std::uint64_t s,
                  const AdmissibleDegreeSet& degrees);

/// n x n matrix whose (r-1, s-1) entry is kappa(r, s).
std::vector<std::vector<std::uint64_t>> kappa_table(
    std::uint64_t n, const AdmissibleDegreeSet& degrees);

}  // namespace subprod
