#include "subprod/product_spaces.hpp"

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace subprod {

namespace {

void require_nonzero(const Subspace& v, const char* what) {
  if (v.is_zero()) throw std::invalid_argument(std::string(what) + " is the zero subspace");
}

std::vector<FieldElement> powers(const ExtensionField& field, const FieldElement& base,
                                 std::size_t count) {
  std::vector<FieldElement> out;
  out.reserve(count);
  FieldElement cur = field.one();
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(cur);
    cur = field.mul(cur, base);
  }
  return out;
}

// Keeps the first r independent vectors of `ordered`.
Subspace first_independent(const FieldPtr& field, const std::vector<FieldElement>& ordered,
                           std::size_t r) {
  EchelonBasis echelon(field->prime_field(), field->n());
  std::vector<FieldElement> kept;
  for (const FieldElement& v : ordered) {
    if (kept.size() == r) break;
    if (echelon.insert(v.coeffs())) kept.push_back(v);
  }
  if (kept.size() != r) throw std::logic_error("not enough independent vectors to trim");
  return Subspace::span(field, kept);
}

}  // namespace

Subspace product_span(const Subspace& a, const Subspace& b) {
  require_nonzero(a, "left factor");
  require_nonzero(b, "right factor");
  if (!same_field(a.field(), b.field())) {
    throw std::invalid_argument("subspaces live in different fields");
  }
  const ExtensionField& field = *a.field();
  std::vector<FieldElement> products;
  products.reserve(a.dim() * b.dim());
  for (const FieldElement& x : a.basis()) {
    for (const FieldElement& y : b.basis()) products.push_back(field.mul(x, y));
  }
  return Subspace::span(a.field(), products);
}

Subspace scaled(const FieldElement& c, const Subspace& a) {
  if (c.is_zero()) throw std::invalid_argument("scaling by zero");
  std::vector<FieldElement> images;
  for (const FieldElement& x : a.basis()) images.push_back(a.field()->mul(c, x));
  return Subspace::span(a.field(), images);
}

Subspace subfield_subspace(const FieldPtr& field, unsigned d) {
  const FieldElement gamma = field->subfield_generator(d);
  return Subspace::span(field, powers(*field, gamma, d));
}

StabilizerReport stabilizer(const Subspace& v) {
  require_nonzero(v, "stabilized subspace");
  const FieldPtr& field = v.field();
  const std::size_t n = field->n();

  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : v.pivots()) is_pivot[c] = true;

  // remainder[j] = (e_j · v) mod V, one block per basis vector v.
  std::vector<Row> equations;
  for (const FieldElement& basis_vec : v.basis()) {
    std::vector<FieldElement> remainders;
    remainders.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Residue> unit(n, 0);
      unit[j] = 1;
      remainders.push_back(v.reduce(field->mul(FieldElement(std::move(unit)), basis_vec)));
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (is_pivot[t]) continue;  // remainders vanish there
      Row eq(n);
      for (std::size_t j = 0; j < n; ++j) eq[j] = remainders[j][t];
      equations.push_back(std::move(eq));
    }
  }
  std::vector<FieldElement> kernel;
  for (Row& x : nullspace(std::move(equations), n, field->prime_field())) {
    kernel.emplace_back(std::move(x));
  }

  StabilizerReport report{Subspace::span(field, kernel), 0, false};
  report.g = report.h.dim();

  const Subspace& h = report.h;
  bool ok = h.contains(field->one()) && n % report.g == 0;
  for (std::size_t i = 0; ok && i < h.dim(); ++i) {
    for (std::size_t j = i; ok && j < h.dim(); ++j) {
      ok = h.contains(field->mul(h.basis()[i], h.basis()[j]));
    }
  }
  ok = ok && product_span(h, v) == v;
  report.is_subfield_verified = ok;
  return report;
}

KneserReport kneser_check(const Subspace& a, const Subspace& b) {
  const Subspace ab = product_span(a, b);
  const StabilizerReport st = stabilizer(ab);
  KneserReport r;
  r.dim_a = a.dim();
  r.dim_b = b.dim();
  r.dim_ab = ab.dim();
  r.dim_h = st.g;
  r.slack = static_cast<std::int64_t>(r.dim_ab) -
            (static_cast<std::int64_t>(r.dim_a) + static_cast<std::int64_t>(r.dim_b) -
             static_cast<std::int64_t>(r.dim_h));
  r.holds = r.slack >= 0;
  r.stabilizer_verified = st.is_subfield_verified;
  return r;
}

KneserSurvey survey_kneser(const FieldPtr& field, std::uint64_t pairs, std::uint64_t seed,
                           std::optional<std::size_t> r, std::optional<std::size_t> s) {
  const std::size_t n = field->n();
  for (auto dim : {r, s}) {
    if (dim && (*dim < 1 || *dim > n)) {
      throw std::invalid_argument("r and s must lie in [1, " + std::to_string(n) + "]");
    }
  }
  KneserSurvey survey;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> any_dim(1, n);
    const std::size_t dim_a = r ? *r : any_dim(rng);
    const std::size_t dim_b = s ? *s : any_dim(rng);
    const Subspace a = random_subspace(field, dim_a, rng);
    const Subspace b = random_subspace(field, dim_b, rng);
    const KneserReport report = kneser_check(a, b);
    ++survey.pairs;
    if (!report.holds) ++survey.violations;
    if (!report.stabilizer_verified) ++survey.stabilizer_failures;
    ++survey.slack_histogram[report.slack];
  }
  return survey;
}

Subspace power_basis_subspace(const FieldPtr& field, const FieldElement& alpha,
                              std::size_t r) {
  if (!field->belongs(alpha)) throw std::invalid_argument("alpha is not in the field");
  if (r == 0) throw std::invalid_argument("power basis needs r >= 1");
  const unsigned degree = alpha.is_zero() ? 1 : field->degree_over_prime_field(alpha);
  if (r > degree) {
    throw std::invalid_argument("r = " + std::to_string(r) + " exceeds the degree " +
                                std::to_string(degree) + " of alpha");
  }
  Subspace out = Subspace::span(field, powers(*field, alpha, r));
  if (out.dim() != r) throw std::logic_error("powers of alpha are dependent");
  return out;
}

OptimalPair optimal_pair(const FieldPtr& field, std::size_t r, std::size_t s) {
  const std::size_t n = field->n();
  if (r < 1 || r > n || s < 1 || s > n) {
    throw std::invalid_argument("r and s must lie in [1, " + std::to_string(n) + "]");
  }
  const KappaResult k = kappa(r, s, divisors(n));
  const unsigned h0 = static_cast<unsigned>(k.h0);
  const std::vector<FieldElement> h_basis =
      powers(*field, field->subfield_generator(h0), h0);
  const FieldElement& beta = field->primitive();

  // F_p-basis {γ^i β^j : i < h0, j < count} of the H-span of 1, β, ..., β^{count-1}.
  auto h_span = [&](std::size_t count) {
    std::vector<FieldElement> gens;
    const std::vector<FieldElement> beta_powers = powers(*field, beta, count);
    for (const FieldElement& bj : beta_powers) {
      for (const FieldElement& gi : h_basis) gens.push_back(field->mul(gi, bj));
    }
    Subspace out = Subspace::span(field, gens);
    if (out.dim() != count * h0) throw std::logic_error("H-span has the wrong dimension");
    return out;
  };
  auto trimmed = [&](const Subspace& big, std::size_t dim) {
    std::vector<FieldElement> ordered{field->one()};
    ordered.insert(ordered.end(), big.basis().begin(), big.basis().end());
    return first_independent(field, ordered, dim);
  };

  const Subspace a0 = h_span(k.r0);
  const Subspace b0 = h_span(k.s0);
  return OptimalPair{trimmed(a0, r), trimmed(b0, s), k};
}

OptimalityCertificate certify_optimal(const OptimalPair& pair) {
  OptimalityCertificate c;
  const Subspace ab = product_span(pair.a, pair.b);
  const StabilizerReport st = stabilizer(ab);
  c.dim_ab = ab.dim();
  c.kappa = kappa(pair.a.dim(), pair.b.dim(), divisors(pair.a.field()->n())).value;
  c.stabilizer_bound = f_h(pair.a.dim(), pair.b.dim(), st.g);
  c.kneser = kneser_check(pair.a, pair.b);
  const Subspace ha = product_span(st.h, pair.a);
  const Subspace hb = product_span(st.h, pair.b);
  c.enlarged_kneser = kneser_check(ha, hb);
  const bool same_product = product_span(ha, hb) == ab;
  c.certified = st.is_subfield_verified && same_product && c.kneser.holds &&
                c.enlarged_kneser.holds && c.stabilizer_bound >= c.kappa &&
                c.stabilizer_bound <= c.dim_ab && c.dim_ab == c.kappa;
  return c;
}

TowerSpec TowerSpec::make(const FieldPtr& field, unsigned m, unsigned d, std::size_t r,
                          std::size_t s, std::optional<FieldElement> alpha) {
  if (m == 0 || d == 0 || field->n() % (m * d) != 0) {
    throw std::invalid_argument("tower degrees m = " + std::to_string(m) + ", d = " +
                                std::to_string(d) + " do not fit in degree " +
                                std::to_string(field->n()));
  }
  const std::size_t top = std::size_t{m} * d;
  if (r < 1 || r > top || s < 1 || s > top) {
    throw std::invalid_argument("r and s must lie in [1, " + std::to_string(top) + "]");
  }
  TowerSpec spec;
  spec.field = field;
  spec.m = m;
  spec.d = d;
  spec.alpha = alpha ? *alpha : field->subfield_generator(static_cast<unsigned>(top));
  if (!field->belongs(spec.alpha)) throw std::invalid_argument("alpha is not in the field");
  if (field->frobenius(spec.alpha, static_cast<unsigned>(top)) != spec.alpha) {
    throw std::invalid_argument("alpha is not in the top field of the tower");
  }
  unsigned degree_over_m = 1;
  while (field->frobenius(spec.alpha, m * degree_over_m) != spec.alpha) ++degree_over_m;
  if (degree_over_m != d) {
    throw std::invalid_argument("alpha has degree " + std::to_string(degree_over_m) +
                                " over M, expected " + std::to_string(d));
  }
  spec.r0 = (r - 1) % m + 1;
  spec.q1 = (r - spec.r0) / m;
  spec.s0 = (s - 1) % m + 1;
  spec.q2 = (s - spec.s0) / m;
  return spec;
}

std::pair<Subspace, Subspace> tower_construction(const TowerSpec& spec, const Subspace& a0,
                                                 const Subspace& b0) {
  const FieldPtr& field = spec.field;
  if (!same_field(a0.field(), field) || !same_field(b0.field(), field)) {
    throw std::invalid_argument("seed subspaces live in a different field");
  }
  if (a0.dim() != spec.r0 || b0.dim() != spec.s0) {
    throw std::invalid_argument("seed dimensions (" + std::to_string(a0.dim()) + ", " +
                                std::to_string(b0.dim()) + ") do not match r0 = " +
                                std::to_string(spec.r0) + ", s0 = " +
                                std::to_string(spec.s0));
  }
  const Subspace m_space = subfield_subspace(field, spec.m);
  if (!a0.is_subspace_of(m_space) || !b0.is_subspace_of(m_space)) {
    throw std::invalid_argument("seed subspaces are not contained in M");
  }
  if (product_span(a0, b0).dim() > spec.r0 + spec.s0 - 1) {
    throw std::invalid_argument("seed pair does not have a small product");
  }

  auto build = [&](std::size_t q, const Subspace& seed) {
    if (q == 0) return seed;
    const std::vector<FieldElement> alpha_powers = powers(*field, spec.alpha, q + 1);
    std::vector<FieldElement> gens;
    for (std::size_t j = 0; j < q; ++j) {
      for (const FieldElement& mi : m_space.basis()) {
        gens.push_back(field->mul(mi, alpha_powers[j]));
      }
    }
    for (const FieldElement& x : seed.basis()) gens.push_back(field->mul(x, alpha_powers[q]));
    Subspace out = Subspace::span(field, gens);
    if (out.dim() != q * spec.m + seed.dim()) {
      throw std::logic_error("tower step produced a dependent spanning set");
    }
    return out;
  };
  return {build(spec.q1, a0), build(spec.q2, b0)};
}

std::pair<Subspace, Subspace> small_products_pair(const FieldPtr& field,
                                                  std::span<const unsigned> chain,
                                                  std::size_t r, std::size_t s) {
  if (chain.empty() || chain.front() != 1) {
    throw std::invalid_argument("degree chain must start at 1");
  }
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (chain[i] <= chain[i - 1] || chain[i] % chain[i - 1] != 0) {
      throw std::invalid_argument("degree chain must be strictly increasing by divisibility");
    }
  }
  if (field->n() % chain.back() != 0) {
    throw std::invalid_argument("top of the chain does not divide the field degree");
  }
  if (r < 1 || r > chain.back() || s < 1 || s > chain.back()) {
    throw std::invalid_argument("r and s must lie in [1, top of chain]");
  }

  auto climb = [&](auto&& self, std::size_t level, std::size_t rr,
                   std::size_t ss) -> std::pair<Subspace, Subspace> {
    if (level == 0) {
      const Subspace unit = Subspace::span(field, std::vector<FieldElement>{field->one()});
      return {unit, unit};
    }
    const unsigned m = chain[level - 1];
    const TowerSpec spec = TowerSpec::make(field, m, chain[level] / m, rr, ss);
    auto [a0, b0] = self(self, level - 1, spec.r0, spec.s0);
    return tower_construction(spec, a0, b0);
  };
  return climb(climb, chain.size() - 1, r, s);
}

}  // namespace subprod
