#include "subprod/finite_field.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace subprod {

namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

std::uint64_t pollard_rho(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    auto step = [&](std::uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
    std::uint64_t x = 2, y = 2, d = 1;
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

// Polynomials over F_p, trimmed so the last coefficient is nonzero; the zero
// polynomial is empty.
void trim(Polynomial& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Polynomial poly_mod(Polynomial a, const Polynomial& f, const PrimeField& fp) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const Residue lead_inv = fp.inv(f.back());
  while (a.size() > df) {
    const Residue c = fp.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t j = 0; j <= df; ++j) {
      a[shift + j] = fp.sub(a[shift + j], fp.mul(c, f[j]));
    }
    trim(a);
  }
  return a;
}

Polynomial poly_mulmod(const Polynomial& a, const Polynomial& b,
                       const Polynomial& f, const PrimeField& fp) {
  if (a.empty() || b.empty()) return {};
  Polynomial prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = fp.add(prod[i + j], fp.mul(a[i], b[j]));
    }
  }
  return poly_mod(std::move(prod), f, fp);
}

Polynomial poly_powmod(Polynomial base, std::uint64_t e, const Polynomial& f,
                       const PrimeField& fp) {
  Polynomial result = poly_mod({1}, f, fp);
  base = poly_mod(std::move(base), f, fp);
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, f, fp);
    base = poly_mulmod(base, base, f, fp);
    e >>= 1;
  }
  return result;
}

Polynomial poly_gcd(Polynomial a, Polynomial b, const PrimeField& fp) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Polynomial r = poly_mod(a, b, fp);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Polynomial poly_sub(Polynomial a, const Polynomial& b, const PrimeField& fp) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = fp.sub(a[i], b[i]);
  trim(a);
  return a;
}

// p^k; throws once the value would pass 2^63.
std::uint64_t checked_power(std::uint64_t p, unsigned k) {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;
  std::uint64_t v = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (v > kLimit / p) {
      throw std::invalid_argument("field order exceeds 2^63");
    }
    v *= p;
  }
  return v;
}

void check_characteristic(std::uint32_t p) {
  if (p >= (1u << 16) || !is_prime(p)) {
    throw std::invalid_argument("characteristic must be a prime below 2^16, got " +
                                std::to_string(p));
  }
}

std::uint64_t parse_uint(std::string_view text, const char* what) {
  std::uint64_t v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw std::invalid_argument(std::string("malformed ") + what + ": '" +
                                std::string(text) + "'");
  }
  return v;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d <= 1'000'000 && d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  factor_into(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) { check_characteristic(p); }

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw std::domain_error("inverse of zero in F_p");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p_, new_r = a % p_;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (t < 0) t += p_;
  return static_cast<Residue>(t);
}

bool is_irreducible(const PrimeField& fp, const Polynomial& monic) {
  if (monic.size() < 2 || monic.back() != 1) {
    throw std::invalid_argument("irreducibility test needs a monic polynomial of degree >= 1");
  }
  const unsigned n = static_cast<unsigned>(monic.size() - 1);
  if (n == 1) return true;
  const Polynomial x = poly_mod({0, 1}, monic, fp);
  Polynomial frob = x;
  for (unsigned k = 1; k <= n; ++k) {
    frob = poly_powmod(frob, fp.p(), monic, fp);
    if (k <= n / 2) {
      const Polynomial g = poly_gcd(poly_sub(frob, x, fp), monic, fp);
      if (g.size() != 1) return false;
    }
  }
  return frob == x;
}

Polynomial find_irreducible(std::uint32_t p, unsigned n) {
  if (n == 0) throw std::invalid_argument("degree must be positive");
  const PrimeField fp(p);
  checked_power(p, n);
  for (std::uint64_t index = 0;; ++index) {
    Polynomial candidate(n + 1, 0);
    std::uint64_t rest = index;
    for (unsigned i = 0; i < n; ++i) {
      candidate[i] = static_cast<Residue>(rest % p);
      rest /= p;
    }
    candidate[n] = 1;
    if (is_irreducible(fp, candidate)) return candidate;
  }
}

bool FieldElement::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](Residue c) { return c == 0; });
}

FieldPtr ExtensionField::create(std::uint32_t p, unsigned n) {
  return create(p, find_irreducible(p, n));
}

FieldPtr ExtensionField::create(std::uint32_t p, Polynomial modulus) {
  PrimeField fp(p);
  if (modulus.size() < 2) {
    throw std::invalid_argument("modulus must have degree >= 1");
  }
  for (Residue c : modulus) {
    if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
  }
  if (modulus.back() != 1) throw std::invalid_argument("modulus must be monic");
  if (!is_irreducible(fp, modulus)) {
    throw std::invalid_argument("modulus is reducible over F_" + std::to_string(p));
  }
  return FieldPtr(new ExtensionField(fp, std::move(modulus)));
}

ExtensionField::ExtensionField(PrimeField fp, Polynomial modulus)
    : fp_(fp),
      n_(static_cast<unsigned>(modulus.size() - 1)),
      order_(checked_power(fp.p(), static_cast<unsigned>(modulus.size() - 1))),
      modulus_(std::move(modulus)),
      unit_factors_(prime_factors(order_ - 1)) {
  primitive_ = find_primitive(*this);
}

FieldElement ExtensionField::zero() const {
  return FieldElement(std::vector<Residue>(n_, 0));
}

FieldElement ExtensionField::one() const { return constant(1); }

FieldElement ExtensionField::constant(Residue c) const {
  std::vector<Residue> v(n_, 0);
  v[0] = c % p();
  return FieldElement(std::move(v));
}

FieldElement ExtensionField::generator() const {
  if (n_ == 1) return constant(fp_.neg(modulus_[0]));
  std::vector<Residue> v(n_, 0);
  v[1] = 1;
  return FieldElement(std::move(v));
}

FieldElement ExtensionField::element(std::vector<Residue> coeffs) const {
  if (coeffs.size() != n_) {
    throw std::invalid_argument("element has " + std::to_string(coeffs.size()) +
                                " coordinates, field degree is " +
                                std::to_string(n_));
  }
  for (Residue c : coeffs) {
    if (c >= p()) throw std::invalid_argument("coordinate out of range");
  }
  return FieldElement(std::move(coeffs));
}

bool ExtensionField::belongs(const FieldElement& a) const noexcept {
  if (a.size() != n_) return false;
  const auto c = a.coeffs();
  return std::all_of(c.begin(), c.end(), [&](Residue v) { return v < p(); });
}

FieldElement ExtensionField::element_at(std::uint64_t index) const {
  if (index >= order_) throw std::out_of_range("element index out of range");
  std::vector<Residue> v(n_, 0);
  for (unsigned i = 0; i < n_; ++i) {
    v[i] = static_cast<Residue>(index % p());
    index /= p();
  }
  return FieldElement(std::move(v));
}

std::uint64_t ExtensionField::index_of(const FieldElement& a) const {
  std::uint64_t index = 0;
  for (unsigned i = n_; i-- > 0;) index = index * p() + a[i];
  return index;
}

FieldElement ExtensionField::add(const FieldElement& a, const FieldElement& b) const {
  std::vector<Residue> v(n_);
  for (unsigned i = 0; i < n_; ++i) v[i] = fp_.add(a[i], b[i]);
  return FieldElement(std::move(v));
}

FieldElement ExtensionField::sub(const FieldElement& a, const FieldElement& b) const {
  std::vector<Residue> v(n_);
  for (unsigned i = 0; i < n_; ++i) v[i] = fp_.sub(a[i], b[i]);
  return FieldElement(std::move(v));
}

FieldElement ExtensionField::neg(const FieldElement& a) const {
  std::vector<Residue> v(n_);
  for (unsigned i = 0; i < n_; ++i) v[i] = fp_.neg(a[i]);
  return FieldElement(std::move(v));
}

FieldElement ExtensionField::scale(Residue c, const FieldElement& a) const {
  std::vector<Residue> v(n_);
  for (unsigned i = 0; i < n_; ++i) v[i] = fp_.mul(c % p(), a[i]);
  return FieldElement(std::move(v));
}

FieldElement ExtensionField::mul(const FieldElement& a, const FieldElement& b) const {
  const std::uint64_t p64 = p();
  // Partial sums stay below n * p^2 < 2^38.
  std::vector<std::uint64_t> prod(2 * n_ - 1, 0);
  for (unsigned i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < n_; ++j) prod[i + j] += std::uint64_t{a[i]} * b[j];
  }
  for (auto& c : prod) c %= p64;
  for (unsigned i = 2 * n_ - 1; i-- > n_;) {
    const std::uint64_t c = prod[i];
    if (c == 0) continue;
    const std::uint64_t neg_c = p64 - c;
    for (unsigned j = 0; j < n_; ++j) {
      prod[i - n_ + j] = (prod[i - n_ + j] + neg_c * modulus_[j]) % p64;
    }
  }
  std::vector<Residue> v(n_);
  for (unsigned i = 0; i < n_; ++i) v[i] = static_cast<Residue>(prod[i]);
  return FieldElement(std::move(v));
}

FieldElement ExtensionField::pow(const FieldElement& a, std::uint64_t e) const {
  FieldElement result = one();
  FieldElement base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return result;
}

FieldElement ExtensionField::inv(const FieldElement& a) const {
  if (a.is_zero()) throw std::domain_error("inverse of zero field element");
  return pow(a, order_ - 2);
}

FieldElement ExtensionField::frobenius(const FieldElement& a, unsigned k) const {
  FieldElement b = a;
  for (unsigned i = 0; i < k; ++i) b = pow(b, p());
  return b;
}

std::uint64_t ExtensionField::multiplicative_order(const FieldElement& a) const {
  if (a.is_zero()) throw std::domain_error("zero has no multiplicative order");
  const FieldElement unit = one();
  std::uint64_t ord = order_ - 1;
  for (std::uint64_t q : unit_factors_) {
    while (ord % q == 0 && pow(a, ord / q) == unit) ord /= q;
  }
  return ord;
}

bool ExtensionField::is_primitive(const FieldElement& a) const {
  if (a.is_zero()) return false;
  const FieldElement unit = one();
  return std::none_of(unit_factors_.begin(), unit_factors_.end(),
                      [&](std::uint64_t q) { return pow(a, (order_ - 1) / q) == unit; });
}

unsigned ExtensionField::degree_over_prime_field(const FieldElement& a) const {
  FieldElement b = a;
  for (unsigned k = 1; k <= n_; ++k) {
    b = pow(b, p());
    if (b == a) return k;
  }
  throw std::logic_error("Frobenius orbit longer than the field degree");
}

FieldElement ExtensionField::subfield_generator(unsigned d) const {
  if (d == 0 || n_ % d != 0) {
    throw std::invalid_argument("subfield degree " + std::to_string(d) +
                                " does not divide " + std::to_string(n_));
  }
  const std::uint64_t sub_units = checked_power(p(), d) - 1;
  return pow(primitive_, (order_ - 1) / sub_units);
}

FieldElement ExtensionField::random(std::mt19937_64& rng) const {
  std::uniform_int_distribution<Residue> dist(0, p() - 1);
  std::vector<Residue> v(n_);
  for (auto& c : v) c = dist(rng);
  return FieldElement(std::move(v));
}

FieldElement find_primitive(const ExtensionField& field) {
  for (std::uint64_t index = 1; index < field.order(); ++index) {
    FieldElement candidate = field.element_at(index);
    if (field.is_primitive(candidate)) return candidate;
  }
  throw std::logic_error("no primitive element found");
}

FieldSpec parse_field_spec(std::string_view text) {
  text = strip(text);
  FieldSpec spec;
  const auto caret = text.find('^');
  const std::uint64_t p = parse_uint(text.substr(0, caret), "field characteristic");
  const std::uint64_t n =
      caret == std::string_view::npos ? 1 : parse_uint(text.substr(caret + 1), "field degree");
  if (p >= (1u << 16) || !is_prime(p)) {
    throw std::invalid_argument("field characteristic must be a prime below 2^16");
  }
  if (n == 0 || n > 64) throw std::invalid_argument("field degree must be in [1, 64]");
  spec.p = static_cast<std::uint32_t>(p);
  spec.n = static_cast<unsigned>(n);
  return spec;
}

Polynomial parse_polynomial(std::string_view text) {
  Polynomial out;
  while (true) {
    const auto comma = text.find(',');
    const std::uint64_t c = parse_uint(strip(text.substr(0, comma)), "coefficient");
    if (c > std::numeric_limits<Residue>::max()) {
      throw std::invalid_argument("coefficient too large");
    }
    out.push_back(static_cast<Residue>(c));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace subprod
