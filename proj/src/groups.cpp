#include "subprod/groups.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "min_search.hpp"

namespace subprod {

namespace {

using Mask = std::uint64_t;

Mask bit(std::uint32_t i) { return Mask{1} << i; }

std::uint32_t parse_small(std::string_view text) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed group parameter '" + std::string(text) + "'");
  }
  return v;
}

// Binomial coefficients up to C(64, k); C(64, 32) < 2^63.
const std::array<std::array<std::uint64_t, 65>, 65>& binomials() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, 65>, 65> t{};
    for (unsigned n = 0; n <= 64; ++n) {
      t[n][0] = 1;
      for (unsigned k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
  }();
  return table;
}

std::uint64_t choose(unsigned n, unsigned k) { return k > n ? 0 : binomials()[n][k]; }

// Combinations of k positions as masks, in increasing integer (colex) order.
Mask first_combination(unsigned k) { return k == 64 ? ~Mask{0} : bit(k) - 1; }

Mask next_combination(Mask x) {
  const Mask c = x & (~x + 1);
  const Mask r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

Mask unrank_combination(std::uint64_t rank, unsigned k, unsigned m) {
  Mask out = 0;
  unsigned hi = m;
  for (unsigned i = k; i >= 1; --i) {
    unsigned c = i - 1;
    while (c + 1 < hi && choose(c + 1, i) <= rank) ++c;
    rank -= choose(c, i);
    out |= bit(c);
    hi = c;
  }
  return out;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

struct Positions {
  std::vector<std::uint32_t> elems;
  Mask fixed = 0;  // the identity when canonicalizing

  Mask expand(Mask compact) const {
    Mask out = fixed;
    for (Mask b = compact; b != 0; b &= b - 1) {
      out |= bit(elems[static_cast<unsigned>(std::countr_zero(b))]);
    }
    return out;
  }
};

Positions make_positions(const GroupSpec& g, bool canonicalize) {
  Positions pos;
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    if (canonicalize && x == g.identity()) continue;
    pos.elems.push_back(x);
  }
  if (canonicalize) pos.fixed = bit(g.identity());
  return pos;
}

void validate_group_dims(const GroupSpec& g, unsigned r, unsigned s) {
  if (r < 1 || r > g.order() || s < 1 || s > g.order()) {
    throw std::invalid_argument("r and s must lie in [1, " + std::to_string(g.order()) + "]");
  }
}

std::uint64_t group_floor(const GroupSpec& g, unsigned r, unsigned s) {
  if (g.is_abelian()) return kappa_group(r, s, g).value;
  return std::max(r, s);
}

using MaskPair = std::pair<Mask, Mask>;

GroupMuResult to_result(detail::Hit<MaskPair>&& hit, bool exhaustive) {
  if (!hit.payload) throw std::logic_error("search finished without a witness");
  return GroupMuResult{hit.value, mask_elements(hit.payload->first),
                       mask_elements(hit.payload->second), exhaustive};
}

}  // namespace

GroupSpec GroupSpec::from_table(std::vector<std::vector<std::uint32_t>> cayley,
                                std::uint32_t identity, std::string name) {
  const std::size_t order = cayley.size();
  if (order == 0 || order > kMaxOrder) {
    throw std::invalid_argument("group order must lie in [1, 64]");
  }
  if (identity >= order) throw std::invalid_argument("identity index out of range");
  for (const auto& row : cayley) {
    if (row.size() != order) throw std::invalid_argument("Cayley table is not square");
    std::vector<bool> seen(order, false);
    for (std::uint32_t v : row) {
      if (v >= order) throw std::invalid_argument("Cayley table entry out of range");
      if (seen[v]) throw std::invalid_argument("Cayley table row is not a permutation");
      seen[v] = true;
    }
  }
  for (std::size_t c = 0; c < order; ++c) {
    std::vector<bool> seen(order, false);
    for (std::size_t r = 0; r < order; ++r) {
      if (seen[cayley[r][c]]) {
        throw std::invalid_argument("Cayley table column is not a permutation");
      }
      seen[cayley[r][c]] = true;
    }
  }
  for (std::uint32_t x = 0; x < order; ++x) {
    if (cayley[identity][x] != x || cayley[x][identity] != x) {
      throw std::invalid_argument("identity element does not act trivially");
    }
  }
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      for (std::size_t c = 0; c < order; ++c) {
        if (cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]]) {
          throw std::invalid_argument("Cayley table is not associative");
        }
      }
    }
  }

  GroupSpec g;
  g.name_ = std::move(name);
  g.order_ = static_cast<std::uint32_t>(order);
  g.identity_ = identity;
  g.cayley_ = std::move(cayley);
  g.inverses_.resize(order);
  g.abelian_ = true;
  for (std::uint32_t a = 0; a < order; ++a) {
    for (std::uint32_t b = 0; b < order; ++b) {
      if (g.cayley_[a][b] == identity) g.inverses_[a] = b;
      if (g.cayley_[a][b] != g.cayley_[b][a]) g.abelian_ = false;
    }
  }

  // Breadth-first over subgroups: extend each known subgroup by one element.
  std::set<Mask> seen{bit(identity)};
  std::deque<std::pair<Mask, std::vector<std::uint32_t>>> queue{{bit(identity), {}}};
  std::set<std::uint64_t> orders;
  while (!queue.empty()) {
    auto [mask, gens] = std::move(queue.front());
    queue.pop_front();
    orders.insert(static_cast<std::uint64_t>(std::popcount(mask)));
    for (std::uint32_t x = 0; x < order; ++x) {
      if (mask & bit(x)) continue;
      std::vector<std::uint32_t> extended = gens;
      extended.push_back(x);
      const Mask sub = g.closure(extended);
      if (seen.insert(sub).second) queue.emplace_back(sub, std::move(extended));
    }
  }
  g.subgroup_orders_.assign(orders.begin(), orders.end());
  return g;
}

GroupSpec GroupSpec::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    auto cayley = j.at("cayley").get<std::vector<std::vector<std::uint32_t>>>();
    const auto identity = j.value("identity", std::uint32_t{0});
    if (j.contains("order") && j.at("order").get<std::size_t>() != cayley.size()) {
      throw std::invalid_argument("declared order does not match the Cayley table");
    }
    return from_table(std::move(cayley), identity, j.value("name", std::string{}));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed group JSON: ") + e.what());
  }
}

std::string GroupSpec::to_json() const {
  nlohmann::json j;
  j["name"] = name_;
  j["order"] = order_;
  j["identity"] = identity_;
  j["cayley"] = cayley_;
  return j.dump();
}

AdmissibleDegreeSet GroupSpec::subgroup_degree_set() const {
  return AdmissibleDegreeSet(order_, subgroup_orders_);
}

std::uint64_t GroupSpec::left_translate(std::uint32_t g, std::uint64_t b_mask) const {
  Mask out = 0;
  const auto& row = cayley_[g];
  for (Mask b = b_mask; b != 0; b &= b - 1) {
    out |= bit(row[static_cast<unsigned>(std::countr_zero(b))]);
  }
  return out;
}

std::uint64_t GroupSpec::product_set(std::uint64_t a_mask, std::uint64_t b_mask) const {
  Mask out = 0;
  for (Mask a = a_mask; a != 0; a &= a - 1) {
    out |= left_translate(static_cast<std::uint32_t>(std::countr_zero(a)), b_mask);
  }
  return out;
}

std::uint64_t GroupSpec::closure(const std::vector<std::uint32_t>& generators) const {
  Mask mask = bit(identity_);
  std::vector<std::uint32_t> frontier{identity_};
  while (!frontier.empty()) {
    const std::uint32_t x = frontier.back();
    frontier.pop_back();
    for (std::uint32_t gen : generators) {
      const std::uint32_t y = cayley_[x][gen];
      if (!(mask & bit(y))) {
        mask |= bit(y);
        frontier.push_back(y);
      }
    }
  }
  return mask;
}

GroupSpec builtin_group(std::string_view name) {
  auto cyclic_product = [&](const std::vector<std::uint32_t>& factors) {
    std::uint64_t order = 1;
    for (std::uint32_t f : factors) {
      if (f == 0) throw std::invalid_argument("cyclic factor must be positive");
      order *= f;
      if (order > GroupSpec::kMaxOrder) throw std::invalid_argument("group order exceeds 64");
    }
    // Mixed radix with the first factor turning fastest.
    auto digits = [&](std::uint32_t x) {
      std::vector<std::uint32_t> d;
      for (std::uint32_t f : factors) {
        d.push_back(x % f);
        x /= f;
      }
      return d;
    };
    std::vector<std::vector<std::uint32_t>> table(order, std::vector<std::uint32_t>(order));
    for (std::uint32_t a = 0; a < order; ++a) {
      const auto da = digits(a);
      for (std::uint32_t b = 0; b < order; ++b) {
        const auto db = digits(b);
        std::uint32_t idx = 0, stride = 1;
        for (std::size_t i = 0; i < factors.size(); ++i) {
          idx += ((da[i] + db[i]) % factors[i]) * stride;
          stride *= factors[i];
        }
        table[a][b] = idx;
      }
    }
    return GroupSpec::from_table(std::move(table), 0, std::string(name));
  };

  if (name.starts_with("cyclic:")) {
    return cyclic_product({parse_small(name.substr(7))});
  }
  if (name.starts_with("product:")) {
    std::vector<std::uint32_t> factors;
    std::string_view rest = name.substr(8);
    while (true) {
      const auto comma = rest.find(',');
      factors.push_back(parse_small(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return cyclic_product(factors);
  }
  if (name == "Z7xZ3semidirect") {
    // (a, b)·(c, d) = (a + 2^b c, b + d), element (a, b) at index a + 7b.
    constexpr std::uint32_t twist[3] = {1, 2, 4};
    std::vector<std::vector<std::uint32_t>> table(21, std::vector<std::uint32_t>(21));
    for (std::uint32_t x = 0; x < 21; ++x) {
      for (std::uint32_t y = 0; y < 21; ++y) {
        const std::uint32_t a = x % 7, b = x / 7, c = y % 7, d = y / 7;
        table[x][y] = (a + twist[b] * c) % 7 + 7 * ((b + d) % 3);
      }
    }
    return GroupSpec::from_table(std::move(table), 0, std::string(name));
  }
  throw std::invalid_argument("unknown group '" + std::string(name) + "'");
}

KappaResult kappa_group(std::uint64_t r, std::uint64_t s, const GroupSpec& group) {
  return kappa(r, s, group.subgroup_degree_set());
}

std::uint64_t subset_mask(const GroupSubset& subset) {
  Mask m = 0;
  for (std::uint32_t x : subset) {
    if (x >= GroupSpec::kMaxOrder) throw std::invalid_argument("element index out of range");
    m |= bit(x);
  }
  return m;
}

GroupSubset mask_elements(std::uint64_t mask) {
  GroupSubset out;
  for (Mask b = mask; b != 0; b &= b - 1) {
    out.push_back(static_cast<std::uint32_t>(std::countr_zero(b)));
  }
  return out;
}

std::uint64_t estimated_group_pairs(const GroupSpec& group, unsigned r, unsigned s,
                                    bool canonicalize) {
  const unsigned c = canonicalize ? 1 : 0;
  const unsigned m = group.order() - c;
  if (r < c || s < c) return 0;
  return sat_mul(choose(m, r - c), choose(m, s - c));
}

GroupMuResult mu_group_exact(const GroupSpec& group, unsigned r, unsigned s,
                             const SearchOptions& options) {
  validate_group_dims(group, r, s);
  detail::require_workers(options.workers);
  const Positions pos = make_positions(group, options.canonicalize);
  const unsigned m = static_cast<unsigned>(pos.elems.size());
  const unsigned c = options.canonicalize ? 1 : 0;
  const unsigned ka = r - c;
  const unsigned kb = s - c;
  const std::uint64_t outer_count = choose(m, kb);
  const std::uint64_t inner_count = choose(m, ka);
  const bool exhaustive = sat_mul(outer_count, inner_count) <= options.budget;
  const std::uint64_t outer_limit =
      exhaustive ? outer_count
                 : std::clamp<std::uint64_t>(options.budget / inner_count, 1, outer_count);

  detail::SearchState state(group_floor(group, r, s), options.prune_at_floor);
  const std::uint64_t chunk = detail::pick_chunk_size(outer_limit, options.workers);
  const std::uint32_t order = group.order();

  auto hit = detail::parallel_min<MaskPair>(
      outer_limit, options.workers, chunk, state,
      [&](std::uint64_t begin, std::uint64_t end, std::uint64_t chunk_index,
          detail::SearchState& st) {
        detail::Hit<MaskPair> local;
        std::array<Mask, 64> translated{};
        std::array<Mask, 64> by_position{};
        Mask b_compact = unrank_combination(begin, kb, m);
        for (std::uint64_t bi = begin; bi < end; ++bi) {
          const Mask b_mask = pos.expand(b_compact);
          for (std::uint32_t g = 0; g < order; ++g) translated[g] = group.left_translate(g, b_mask);
          for (unsigned i = 0; i < m; ++i) by_position[i] = translated[pos.elems[i]];
          const Mask base = pos.fixed ? translated[group.identity()] : 0;

          Mask a_compact = first_combination(ka);
          for (std::uint64_t ai = 0; ai < inner_count; ++ai) {
            Mask prod = base;
            for (Mask bits = a_compact; bits != 0; bits &= bits - 1) {
              prod |= by_position[static_cast<unsigned>(std::countr_zero(bits))];
            }
            const auto v = static_cast<std::uint64_t>(std::popcount(prod));
            if (v < st.cap(local.value)) {
              local.value = v;
              local.outer = bi;
              local.inner = ai;
              local.payload = MaskPair{pos.expand(a_compact), b_mask};
              st.offer(v);
              if (st.reached_floor(v, chunk_index)) return local;
            }
            if (ai + 1 < inner_count) a_compact = next_combination(a_compact);
          }
          if (bi + 1 < end) b_compact = next_combination(b_compact);
        }
        return local;
      });
  return to_result(std::move(hit), exhaustive);
}

GroupMuResult mu_group_randomized(const GroupSpec& group, unsigned r, unsigned s,
                                  const RandomizedOptions& options) {
  validate_group_dims(group, r, s);
  detail::require_workers(options.workers);
  if (options.trials == 0) throw std::invalid_argument("trials must be positive");
  const std::uint32_t order = group.order();
  const std::uint32_t e = group.identity();
  std::vector<std::uint32_t> others;
  for (std::uint32_t x = 0; x < order; ++x) {
    if (x != e) others.push_back(x);
  }
  detail::SearchState state(group_floor(group, r, s), options.prune_at_floor);
  const std::uint64_t chunk = detail::pick_chunk_size(options.trials, options.workers);

  auto sample = [&](unsigned size, std::mt19937_64& rng) {
    std::vector<std::uint32_t> pool = others;
    Mask m = bit(e);
    for (unsigned i = 0; i + 1 < size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      m |= bit(pool[i]);
    }
    return m;
  };
  // Swap one non-identity member for one non-member.
  auto mutate = [&](Mask m, std::mt19937_64& rng) {
    const GroupSubset inside = mask_elements(m & ~bit(e));
    const GroupSubset outside = mask_elements(~m & ((order == 64) ? ~Mask{0} : bit(order) - 1));
    const std::uint32_t drop =
        inside[std::uniform_int_distribution<std::size_t>(0, inside.size() - 1)(rng)];
    const std::uint32_t add =
        outside[std::uniform_int_distribution<std::size_t>(0, outside.size() - 1)(rng)];
    return (m & ~bit(drop)) | bit(add);
  };

  const bool a_movable = r > 1 && r < order;
  const bool b_movable = s > 1 && s < order;

  auto hit = detail::parallel_min<MaskPair>(
      options.trials, options.workers, chunk, state,
      [&](std::uint64_t begin, std::uint64_t end, std::uint64_t chunk_index,
          detail::SearchState& st) {
        detail::Hit<MaskPair> local;
        for (std::uint64_t trial = begin; trial < end; ++trial) {
          std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                            static_cast<std::uint32_t>(options.seed >> 32),
                            static_cast<std::uint32_t>(trial),
                            static_cast<std::uint32_t>(trial >> 32)};
          std::mt19937_64 rng(seq);
          Mask a = sample(r, rng);
          Mask b = sample(s, rng);
          auto value = static_cast<std::uint64_t>(std::popcount(group.product_set(a, b)));

          unsigned fails = 0;
          while (fails < options.patience && (a_movable || b_movable) &&
                 (!options.prune_at_floor || value > st.floor())) {
            const bool pick_a = !b_movable || (a_movable && std::bernoulli_distribution(0.5)(rng));
            const Mask next_a = pick_a ? mutate(a, rng) : a;
            const Mask next_b = pick_a ? b : mutate(b, rng);
            const auto candidate =
                static_cast<std::uint64_t>(std::popcount(group.product_set(next_a, next_b)));
            if (candidate > value) {
              ++fails;
              continue;
            }
            fails = candidate < value ? 0 : fails + 1;
            value = candidate;
            a = next_a;
            b = next_b;
          }

          if (value < local.value) {
            local.value = value;
            local.outer = trial;
            local.payload = MaskPair{a, b};
            st.offer(value);
            if (st.reached_floor(value, chunk_index)) return local;
          }
        }
        return local;
      });
  return to_result(std::move(hit), false);
}

}  // namespace subprod
