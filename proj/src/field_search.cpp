#include <algorithm>
#include <array>
#include <bit>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "min_search.hpp"
#include "subprod/kappa.hpp"
#include "subprod/search.hpp"

namespace subprod {

namespace {

using Generators = std::vector<FieldElement>;
using PairPayload = std::pair<Generators, Generators>;

// Characteristic 2: elements packed into one word, multiplication by
// precomputed x^k multiples, rank by an XOR basis keyed on the top bit.
class Gf2Ranker {
 public:
  explicit Gf2Ranker(const ExtensionField& field) : n_(field.n()) {
    for (unsigned i = 0; i < n_; ++i) {
      if (field.modulus()[i] != 0) reduction_ |= std::uint64_t{1} << i;
    }
  }

  void load_a(const Generators& a) {
    shifted_.resize(a.size() * n_);
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::uint64_t t = pack(a[i]);
      for (unsigned k = 0; k < n_; ++k) {
        shifted_[i * n_ + k] = t;
        t <<= 1;
        if ((t >> n_) & 1) t = (t ^ (std::uint64_t{1} << n_)) ^ reduction_;
      }
    }
    a_count_ = a.size();
  }

  std::uint64_t rank(const Generators& b, std::uint64_t cap) {
    slots_.fill(0);
    std::uint64_t rank = 0;
    for (const FieldElement& bj : b) {
      const std::uint64_t mb = pack(bj);
      for (std::size_t i = 0; i < a_count_; ++i) {
        std::uint64_t prod = 0;
        for (std::uint64_t bits = mb; bits != 0; bits &= bits - 1) {
          prod ^= shifted_[i * n_ + static_cast<unsigned>(std::countr_zero(bits))];
        }
        while (prod != 0) {
          const unsigned top = 63 - static_cast<unsigned>(std::countl_zero(prod));
          if (slots_[top] == 0) {
            slots_[top] = prod;
            if (++rank >= cap) return rank;
            break;
          }
          prod ^= slots_[top];
        }
      }
    }
    return rank;
  }

 private:
  static std::uint64_t pack(const FieldElement& e) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) m |= std::uint64_t{1} << i;
    }
    return m;
  }

  unsigned n_;
  std::uint64_t reduction_ = 0;
  std::vector<std::uint64_t> shifted_;
  std::size_t a_count_ = 0;
  std::array<std::uint64_t, 64> slots_{};
};

class GenericRanker {
 public:
  explicit GenericRanker(const ExtensionField& field)
      : field_(field), echelon_(field.prime_field(), field.n()) {}

  void load_a(const Generators& a) { a_ = a; }

  std::uint64_t rank(const Generators& b, std::uint64_t cap) {
    echelon_.clear();
    for (const FieldElement& bj : b) {
      for (const FieldElement& ai : a_) {
        if (echelon_.insert(field_.mul(ai, bj).coeffs()) && echelon_.rank() >= cap) {
          return echelon_.rank();
        }
      }
    }
    return echelon_.rank();
  }

 private:
  const ExtensionField& field_;
  EchelonBasis echelon_;
  Generators a_;
};

template <class Fn>
auto with_ranker(const FieldPtr& field, Fn&& fn) {
  if (field->p() == 2) return fn([&] { return Gf2Ranker(*field); });
  return fn([&] { return GenericRanker(*field); });
}

void validate_dims(const FieldPtr& field, unsigned r, unsigned s) {
  const unsigned n = field->n();
  if (r < 1 || r > n || s < 1 || s > n) {
    throw std::invalid_argument("r and s must lie in [1, " + std::to_string(n) + "]");
  }
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

FieldMuResult to_result(const FieldPtr& field, detail::Hit<PairPayload>&& hit, bool exhaustive) {
  if (!hit.payload) throw std::logic_error("search finished without a witness");
  return FieldMuResult{hit.value, Subspace::span(field, hit.payload->first),
                       Subspace::span(field, hit.payload->second), exhaustive};
}

}  // namespace

std::uint64_t estimated_pairs(const FieldPtr& field, unsigned r, unsigned s,
                              bool canonicalize) {
  const unsigned n = field->n();
  const unsigned c = canonicalize ? 1 : 0;
  if (r < c || s < c) return 0;
  return sat_mul(gaussian_binomial(field->p(), n - c, r - c),
                 gaussian_binomial(field->p(), n - c, s - c));
}

FieldMuResult mu_exact(const FieldPtr& field, unsigned r, unsigned s,
                       const SearchOptions& options) {
  validate_dims(field, r, s);
  detail::require_workers(options.workers);
  const bool canon = options.canonicalize;
  const std::uint64_t outer_count = SubspaceEnumerator(field, r, canon).count();
  const std::uint64_t inner_count = SubspaceEnumerator(field, s, canon).count();
  const bool exhaustive = sat_mul(outer_count, inner_count) <= options.budget;
  const std::uint64_t outer_limit =
      exhaustive ? outer_count
                 : std::clamp<std::uint64_t>(options.budget / inner_count, 1, outer_count);

  detail::SearchState state(kappa(r, s, divisors(field->n())).value, options.prune_at_floor);
  const std::uint64_t chunk = detail::pick_chunk_size(outer_limit, options.workers);

  auto hit = with_ranker(field, [&](auto make_ranker) {
    return detail::parallel_min<PairPayload>(
        outer_limit, options.workers, chunk, state,
        [&](std::uint64_t begin, std::uint64_t end, std::uint64_t c,
            detail::SearchState& st) {
          auto ranker = make_ranker();
          detail::Hit<PairPayload> local;
          SubspaceEnumerator a(field, r, canon);
          SubspaceEnumerator b(field, s, canon);
          a.seek(begin);
          for (std::uint64_t idx = begin; idx < end; ++idx, a.advance()) {
            ranker.load_a(a.basis());
            for (b.seek(0); !b.done(); b.advance()) {
              const std::uint64_t cap = st.cap(local.value);
              const std::uint64_t v = ranker.rank(b.basis(), cap);
              if (v >= cap) continue;
              local.value = v;
              local.outer = idx;
              local.inner = b.index();
              local.payload = PairPayload{a.basis(), b.basis()};
              st.offer(v);
              if (st.reached_floor(v, c)) return local;
            }
          }
          return local;
        });
  });
  return to_result(field, std::move(hit), exhaustive);
}

FieldMuResult mu_randomized(const FieldPtr& field, unsigned r, unsigned s,
                            const RandomizedOptions& options) {
  validate_dims(field, r, s);
  detail::require_workers(options.workers);
  if (options.trials == 0) throw std::invalid_argument("trials must be positive");
  const unsigned n = field->n();
  const PrimeField& fp = field->prime_field();
  detail::SearchState state(kappa(r, s, divisors(n)).value, options.prune_at_floor);
  const std::uint64_t chunk = detail::pick_chunk_size(options.trials, options.workers);

  // Random vector of the complement span(x, ..., x^{n-1}) of ⟨1⟩.
  auto random_tail = [&](std::mt19937_64& rng) {
    std::uniform_int_distribution<Residue> dist(0, fp.p() - 1);
    std::vector<Residue> v(n, 0);
    for (unsigned i = 1; i < n; ++i) v[i] = dist(rng);
    return FieldElement(std::move(v));
  };
  auto sample_side = [&](unsigned dim, std::mt19937_64& rng) {
    Generators gens{field->one()};
    EchelonBasis echelon(fp, n);
    echelon.insert(gens.front().coeffs());
    while (gens.size() < dim) {
      FieldElement v = random_tail(rng);
      if (echelon.insert(v.coeffs())) gens.push_back(std::move(v));
    }
    return gens;
  };
  auto independent = [&](const Generators& gens) {
    EchelonBasis echelon(fp, n);
    return std::all_of(gens.begin(), gens.end(),
                       [&](const FieldElement& g) { return echelon.insert(g.coeffs()); });
  };

  auto hit = with_ranker(field, [&](auto make_ranker) {
    return detail::parallel_min<PairPayload>(
        options.trials, options.workers, chunk, state,
        [&](std::uint64_t begin, std::uint64_t end, std::uint64_t c,
            detail::SearchState& st) {
          auto ranker = make_ranker();
          auto evaluate = [&](const Generators& a, const Generators& b, std::uint64_t cap) {
            ranker.load_a(a);
            return ranker.rank(b, cap);
          };
          detail::Hit<PairPayload> local;
          for (std::uint64_t trial = begin; trial < end; ++trial) {
            std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                              static_cast<std::uint32_t>(options.seed >> 32),
                              static_cast<std::uint32_t>(trial),
                              static_cast<std::uint32_t>(trial >> 32)};
            std::mt19937_64 rng(seq);
            Generators a = sample_side(r, rng);
            Generators b = sample_side(s, rng);
            std::uint64_t value = evaluate(a, b, kSaturated);

            unsigned fails = 0;
            while (fails < options.patience && (r > 1 || s > 1) &&
                   (!options.prune_at_floor || value > st.floor())) {
              const bool pick_a = s == 1 || (r > 1 && std::bernoulli_distribution(0.5)(rng));
              Generators& side = pick_a ? a : b;
              const std::size_t slot =
                  std::uniform_int_distribution<std::size_t>(1, side.size() - 1)(rng);
              FieldElement previous = side[slot];
              side[slot] = random_tail(rng);
              if (!independent(side)) {
                side[slot] = std::move(previous);
                ++fails;
                continue;
              }
              const std::uint64_t candidate = evaluate(a, b, value + 1);
              if (candidate > value) {
                side[slot] = std::move(previous);
                ++fails;
              } else if (candidate < value) {
                value = candidate;
                fails = 0;
              } else {
                ++fails;
              }
            }

            if (value < local.value) {
              local.value = value;
              local.outer = trial;
              local.payload = PairPayload{a, b};
              st.offer(value);
              if (st.reached_floor(value, c)) return local;
            }
          }
          return local;
        });
  });
  return to_result(field, std::move(hit), false);
}

}  // namespace subprod
