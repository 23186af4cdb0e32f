#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "subprod/finite_field.hpp"
#include "subprod/linalg.hpp"

using namespace subprod;

namespace {

// Reference GF(2^n) arithmetic on bitmasks: carry-less product reduced by
// the modulus given as a bitmask including the leading term.
std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t modulus, unsigned n) {
  std::uint64_t prod = 0;
  for (unsigned i = 0; i < 32; ++i) {
    if (b >> i & 1U) prod ^= std::uint64_t{a} << i;
  }
  for (int bit = 63; bit >= static_cast<int>(n); --bit) {
    if (prod >> bit & 1U) prod ^= std::uint64_t{modulus} << (bit - static_cast<int>(n));
  }
  return static_cast<std::uint32_t>(prod);
}

std::uint32_t to_mask(const FieldElement& e) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < e.size(); ++i) m |= e[i] << i;
  return m;
}

// Polynomial remainder over F_p by schoolbook division, for trial division.
Polynomial poly_mod(Polynomial a, const Polynomial& b, std::uint32_t p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const Residue lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    if (lead != 0) {
      for (std::size_t i = 0; i <= db; ++i) {
        a[shift + i] = static_cast<Residue>((a[shift + i] + p - lead * b[i] % p) % p);
      }
    }
    a.pop_back();
  }
  return a;
}

bool is_zero_poly(const Polynomial& a) {
  for (Residue c : a) {
    if (c != 0) return false;
  }
  return true;
}

// Monic polynomial of degree `deg` whose lower coefficients are the base-p digits of `code`.
Polynomial monic_from_code(std::uint64_t code, unsigned deg, std::uint32_t p) {
  Polynomial poly(deg + 1, 0);
  for (unsigned i = 0; i < deg; ++i) {
    poly[i] = static_cast<Residue>(code % p);
    code /= p;
  }
  poly[deg] = 1;
  return poly;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

bool irreducible_by_trial_division(const Polynomial& f, std::uint32_t p) {
  const unsigned n = static_cast<unsigned>(f.size() - 1);
  for (unsigned d = 1; 2 * d <= n; ++d) {
    for (std::uint64_t code = 0; code < ipow(p, d); ++code) {
      if (is_zero_poly(poly_mod(f, monic_from_code(code, d, p), p))) return false;
    }
  }
  return true;
}

std::uint64_t order_by_iteration(const ExtensionField& f, const FieldElement& a) {
  std::uint64_t k = 1;
  FieldElement cur = a;
  while (!(cur == f.one())) {
    cur = f.mul(cur, a);
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("is_prime and prime_factors against trial division") {
  for (std::uint64_t n = 0; n < 5000; ++n) {
    bool prime = n >= 2;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) prime = false;
    }
    REQUIRE(is_prime(n) == prime);
  }
  CHECK(is_prime(18446744073709551557ULL));
  CHECK_FALSE(is_prime(18446744073709551615ULL));
  CHECK_FALSE(is_prime(4294967297ULL));  // 641 * 6700417
  CHECK(prime_factors(1) == std::vector<std::uint64_t>{});
  CHECK(prime_factors(63) == std::vector<std::uint64_t>{3, 7});
  CHECK(prime_factors(4095) == std::vector<std::uint64_t>{3, 5, 7, 13});
  // 2^62 - 1 = 3 * 715827883 * 2147483647
  CHECK(prime_factors((std::uint64_t{1} << 62) - 1) ==
        std::vector<std::uint64_t>{3, 715827883, 2147483647});
  // 2^63 - 1 = 7^2 * 73 * 127 * 337 * 92737 * 649657
  CHECK(prime_factors((std::uint64_t{1} << 63) - 1) ==
        std::vector<std::uint64_t>{7, 73, 127, 337, 92737, 649657});
}

TEST_CASE("prime field arithmetic") {
  const PrimeField f7(7);
  CHECK(f7.add(5, 4) == 2);
  CHECK(f7.sub(2, 5) == 4);
  CHECK(f7.neg(0) == 0);
  CHECK(f7.mul(3, 5) == 1);
  for (Residue a = 1; a < 7; ++a) CHECK(f7.mul(a, f7.inv(a)) == 1);
  CHECK_THROWS_AS(f7.inv(0), std::domain_error);
  CHECK_THROWS_AS(PrimeField(9), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(65537), std::invalid_argument);
  CHECK_NOTHROW(PrimeField(65521));
}

TEST_CASE("find_irreducible examples") {
  CHECK(find_irreducible(2, 1) == Polynomial{0, 1});
  CHECK(find_irreducible(2, 4) == Polynomial{1, 1, 0, 0, 1});
  CHECK(find_irreducible(3, 2) == Polynomial{1, 0, 1});
}

TEST_CASE("find_irreducible is the first irreducible in base-p order") {
  for (std::uint32_t p : {2U, 3U, 5U}) {
    for (unsigned n = 1; n <= (p == 2 ? 8U : 4U); ++n) {
      Polynomial expected;
      for (std::uint64_t code = 0;; ++code) {
        expected = monic_from_code(code, n, p);
        if (irreducible_by_trial_division(expected, p)) break;
      }
      CHECK(find_irreducible(p, n) == expected);
    }
  }
}

TEST_CASE("is_irreducible agrees with trial division") {
  for (std::uint32_t p : {2U, 3U}) {
    const PrimeField fp(p);
    for (unsigned n = 1; n <= (p == 2 ? 8U : 5U); ++n) {
      for (std::uint64_t code = 0; code < ipow(p, n); ++code) {
        const Polynomial f = monic_from_code(code, n, p);
        REQUIRE(is_irreducible(fp, f) == irreducible_by_trial_division(f, p));
      }
    }
  }
}

TEST_CASE("field construction validates its inputs") {
  CHECK_THROWS_AS(ExtensionField::create(4, 2), std::invalid_argument);
  CHECK_THROWS_AS(ExtensionField::create(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(ExtensionField::create(2, 64), std::invalid_argument);
  CHECK_THROWS_AS(ExtensionField::create(65521, 4), std::invalid_argument);
  CHECK_THROWS_AS(ExtensionField::create(2, Polynomial{1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ExtensionField::create(2, Polynomial{1, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(ExtensionField::create(3, Polynomial{1, 3, 1}), std::invalid_argument);
  CHECK_NOTHROW(ExtensionField::create(2, 63));
  CHECK_NOTHROW(ExtensionField::create(65521, 3));
}

TEST_CASE("GF(2^4) arithmetic by hand") {
  const FieldPtr f = ExtensionField::create(2, 4);
  REQUIRE(f->modulus() == Polynomial{1, 1, 0, 0, 1});
  const FieldElement x = f->generator();
  const FieldElement x3 = f->element({0, 0, 0, 1});
  CHECK(f->mul(x3, x) == f->element({1, 1, 0, 0}));
  CHECK_THROWS_AS(f->inv(f->zero()), std::domain_error);
  CHECK_THROWS_AS(f->element({1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(f->element({1, 0, 2, 0}), std::invalid_argument);
}

TEST_CASE("GF(2^n) multiplication matches a carry-less reference") {
  for (unsigned n = 1; n <= 8; ++n) {
    const FieldPtr f = ExtensionField::create(2, n);
    std::uint32_t modulus = 0;
    for (std::size_t i = 0; i < f->modulus().size(); ++i) modulus |= f->modulus()[i] << i;
    for (std::uint64_t i = 0; i < f->order(); ++i) {
      for (std::uint64_t j = 0; j < f->order(); ++j) {
        const FieldElement a = f->element_at(i);
        const FieldElement b = f->element_at(j);
        REQUIRE(to_mask(f->mul(a, b)) == clmul_mod(static_cast<std::uint32_t>(i),
                                                   static_cast<std::uint32_t>(j), modulus, n));
      }
    }
  }
}

TEST_CASE("field axioms exhaustively on small fields") {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{
           {2, 1}, {2, 3}, {3, 2}, {5, 1}, {2, 4}, {3, 3}, {7, 2}}) {
    const FieldPtr f = ExtensionField::create(p, n);
    const std::uint64_t q = f->order();
    std::vector<FieldElement> all;
    for (std::uint64_t i = 0; i < q; ++i) all.push_back(f->element_at(i));
    for (const auto& a : all) {
      REQUIRE(f->mul(a, f->one()) == a);
      REQUIRE(f->add(a, f->zero()) == a);
      REQUIRE(f->add(a, f->neg(a)) == f->zero());
      if (!a.is_zero()) REQUIRE(f->mul(a, f->inv(a)) == f->one());
      for (const auto& b : all) {
        REQUIRE(f->mul(a, b) == f->mul(b, a));
        REQUIRE(f->sub(f->add(a, b), b) == a);
        for (const auto& c : all) {
          REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
          REQUIRE(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("field axioms on random triples up to 4096 elements") {
  std::mt19937_64 rng(7);
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{
           {2, 12}, {3, 7}, {5, 5}, {7, 4}, {17, 2}, {4093, 1}}) {
    const FieldPtr f = ExtensionField::create(p, n);
    for (int t = 0; t < 3000; ++t) {
      const FieldElement a = f->random(rng), b = f->random(rng), c = f->random(rng);
      REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
      REQUIRE(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
      if (!a.is_zero()) REQUIRE(f->mul(a, f->inv(a)) == f->one());
    }
  }
}

TEST_CASE("every element is fixed by the full Frobenius") {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{
           {2, 12}, {3, 7}, {5, 5}, {2, 6}, {13, 3}}) {
    const FieldPtr f = ExtensionField::create(p, n);
    for (std::uint64_t i = 0; i < f->order(); ++i) {
      const FieldElement a = f->element_at(i);
      REQUIRE(f->pow(a, f->order()) == a);
      REQUIRE(f->frobenius(a, n) == a);
      REQUIRE(f->index_of(a) == i);
    }
  }
}

TEST_CASE("find_primitive examples") {
  CHECK(ExtensionField::create(2, 1)->primitive() == FieldElement({1}));
  CHECK(ExtensionField::create(7, 1)->primitive() == FieldElement({3}));
  const FieldPtr f16 = ExtensionField::create(2, 4);
  CHECK(f16->primitive() == f16->generator());
  CHECK_FALSE(f16->pow(f16->generator(), 5) == f16->one());
  CHECK_FALSE(f16->pow(f16->generator(), 3) == f16->one());
}

TEST_CASE("find_primitive is the first element of full order") {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{
           {2, 2}, {2, 5}, {2, 6}, {2, 8}, {3, 2}, {3, 4}, {5, 2}, {7, 1}, {11, 1}, {13, 2}}) {
    const FieldPtr f = ExtensionField::create(p, n);
    std::uint64_t expected = 0;
    for (std::uint64_t i = 1; i < f->order(); ++i) {
      if (order_by_iteration(*f, f->element_at(i)) == f->order() - 1) {
        expected = i;
        break;
      }
    }
    CHECK(f->index_of(f->primitive()) == expected);
    CHECK(f->multiplicative_order(f->primitive()) == f->order() - 1);
  }
}

TEST_CASE("multiplicative order agrees with iteration") {
  const FieldPtr f = ExtensionField::create(3, 4);
  for (std::uint64_t i = 1; i < f->order(); ++i) {
    const FieldElement a = f->element_at(i);
    REQUIRE(f->multiplicative_order(a) == order_by_iteration(*f, a));
  }
}

TEST_CASE("construction is deterministic") {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 12}, {3, 6}, {2, 40}}) {
    const FieldPtr a = ExtensionField::create(p, n);
    const FieldPtr b = ExtensionField::create(p, n);
    CHECK(a->modulus() == b->modulus());
    CHECK(a->primitive() == b->primitive());
    CHECK(a->same_as(*b));
  }
}

TEST_CASE("large fields have primitive elements of full order") {
  const FieldPtr f = ExtensionField::create(2, 63);
  CHECK(f->is_primitive(f->primitive()));
  const FieldPtr g = ExtensionField::create(65521, 3);
  CHECK(g->is_primitive(g->primitive()));
  CHECK(g->unit_group_factors() == prime_factors(g->order() - 1));
}

TEST_CASE("subfield generators") {
  const FieldPtr f16 = ExtensionField::create(2, 4);
  const FieldElement gamma = f16->subfield_generator(2);
  CHECK(gamma == f16->pow(f16->primitive(), 5));
  CHECK(f16->add(f16->add(f16->mul(gamma, gamma), gamma), f16->one()) == f16->zero());
  CHECK(f16->subfield_generator(4) == f16->primitive());
  CHECK_THROWS_AS(f16->subfield_generator(3), std::invalid_argument);

  const FieldPtr f81 = ExtensionField::create(3, 4);
  const FieldElement g1 = f81->subfield_generator(1);
  CHECK(f81->multiplicative_order(g1) == 2);
  CHECK(Subspace::span(f81, std::vector<FieldElement>{g1}) ==
        Subspace::span(f81, std::vector<FieldElement>{f81->one()}));
}

TEST_CASE("subfield spans are the fixed points of Frobenius") {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{
           {2, 6}, {2, 12}, {3, 4}, {3, 6}, {5, 4}, {2, 8}}) {
    const FieldPtr f = ExtensionField::create(p, n);
    for (unsigned d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      const FieldElement gamma = f->subfield_generator(d);
      std::vector<FieldElement> powers{f->one()};
      for (unsigned i = 1; i < d; ++i) powers.push_back(f->mul(powers.back(), gamma));
      const Subspace span = Subspace::span(f, powers);
      REQUIRE(span.dim() == d);
      for (const auto& a : span.basis()) {
        for (const auto& b : span.basis()) REQUIRE(span.contains(f->mul(a, b)));
      }
      std::uint64_t fixed = 0;
      for (std::uint64_t i = 0; i < f->order(); ++i) {
        const FieldElement a = f->element_at(i);
        const bool is_root = f->pow(a, ipow(p, d)) == a;
        REQUIRE(is_root == span.contains(a));
        fixed += is_root ? 1 : 0;
      }
      REQUIRE(fixed == ipow(p, d));
    }
  }
}

TEST_CASE("degree over the prime field") {
  const FieldPtr f = ExtensionField::create(2, 6);
  std::vector<std::uint64_t> by_degree(7, 0);
  for (std::uint64_t i = 0; i < f->order(); ++i) ++by_degree[f->degree_over_prime_field(f->element_at(i))];
  // 2 elements of F_2, 2 more in F_4, 6 more in F_8, the remaining 54 generate F_64.
  CHECK(by_degree == std::vector<std::uint64_t>{0, 2, 2, 6, 0, 0, 54});
}

TEST_CASE("explicit modulus overrides the default") {
  const FieldPtr f = ExtensionField::create(2, Polynomial{1, 0, 0, 1, 1});
  CHECK(f->n() == 4);
  CHECK(f->modulus() == Polynomial{1, 0, 0, 1, 1});
  CHECK(f->is_primitive(f->primitive()));
  CHECK_FALSE(f->same_as(*ExtensionField::create(2, 4)));
}

TEST_CASE("parsing field specs and polynomials") {
  const FieldSpec a = parse_field_spec("2^6");
  CHECK(a.p == 2);
  CHECK(a.n == 6);
  const FieldSpec b = parse_field_spec("7");
  CHECK(b.p == 7);
  CHECK(b.n == 1);
  CHECK_THROWS_AS(parse_field_spec("4^2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_spec("2^"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_spec("2^x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_spec(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_spec("2^65"), std::invalid_argument);
  CHECK(parse_polynomial("1,1,0,0,1") == Polynomial{1, 1, 0, 0, 1});
  CHECK(parse_polynomial(" 1, 2 ,0") == Polynomial{1, 2, 0});
  CHECK_THROWS_AS(parse_polynomial("1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("1,a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial(""), std::invalid_argument);
}

TEST_CASE("element indexing round trips") {
  const FieldPtr f = ExtensionField::create(5, 3);
  std::set<std::vector<Residue>> seen;
  for (std::uint64_t i = 0; i < f->order(); ++i) {
    const FieldElement a = f->element_at(i);
    seen.insert(std::vector<Residue>(a.coeffs().begin(), a.coeffs().end()));
    REQUIRE(f->index_of(a) == i);
  }
  CHECK(seen.size() == f->order());
  CHECK(f->element_at(1) == f->one());
  CHECK(f->element_at(5) == f->generator());
  CHECK_THROWS_AS(f->element_at(f->order()), std::out_of_range);
}
