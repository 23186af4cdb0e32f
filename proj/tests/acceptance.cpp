#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "subprod/cli.hpp"
#include "subprod/finite_field.hpp"
#include "subprod/groups.hpp"
#include "subprod/kappa.hpp"
#include "subprod/linalg.hpp"
#include "subprod/product_spaces.hpp"
#include "subprod/search.hpp"

using namespace subprod;

namespace {

// Every comparison below is exact; the only tolerances are wall-clock limits.
constexpr double kSecond = 1.0;
constexpr double kMinute = 60.0;

constexpr std::uint64_t kKneserPairs = 10'000;
constexpr std::uint64_t kKneserSeed = 20240601;
constexpr std::uint64_t kCounterexampleTrials = 2000;
constexpr std::uint64_t kCounterexampleSeed = 1;
constexpr std::uint64_t kLongBudget = 4'000'000'000ULL;
constexpr double kKappaGroupLimit = 0.001;

unsigned search_workers() {
  return std::clamp(std::thread::hardware_concurrency(), 1U, 8U);
}

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string str(std::uint64_t v) { return std::to_string(v); }

SearchOptions exhaustive_options(unsigned workers = 1) {
  SearchOptions o;
  o.workers = workers;
  // The floor is a consequence of the statement under test, so the
  // cross-checks walk every pair.
  o.prune_at_floor = false;
  o.budget = kLongBudget;
  return o;
}

Check golden_table() {
  Check c;
  std::ifstream in(SUBPROD_TEST_DATA_DIR "/kappa_table_16.txt");
  std::stringstream golden;
  golden << in.rdbuf();
  if (golden.str().empty()) {
    c.fail("golden file missing");
    return c;
  }
  std::ostringstream out, err;
  const int code = cli::run({"kappa-table", "--n", "16"}, out, err);
  if (code != 0) c.fail("kappa-table exited with " + std::to_string(code));
  if (out.str() != golden.str()) c.fail("kappa-table output differs from the golden table");
  std::istringstream rows(golden.str());
  const auto table = kappa_table(16, divisors(16));
  std::size_t entries = 0;
  for (std::size_t r = 0; r < 16; ++r) {
    for (std::size_t s = 0; s < 16; ++s) {
      std::uint64_t v = 0;
      rows >> v;
      if (v != table[r][s]) c.fail("entry (" + str(r + 1) + "," + str(s + 1) + ") differs");
      ++entries;
    }
  }
  if (c.ok) c.detail = str(entries) + " entries match";
  return c;
}

Check cauchy_davenport() {
  Check c;
  std::uint64_t pairs = 0;
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 5}, {3, 3}}) {
    const FieldPtr f = ExtensionField::create(p, n);
    for (unsigned r = 1; r <= n; ++r) {
      for (unsigned s = 1; s <= n; ++s) {
        const auto mu = mu_exact(f, r, s, exhaustive_options());
        const std::uint64_t expected = std::min<std::uint64_t>(r + s - 1, n);
        if (!mu.exhaustive) c.fail("search not exhaustive");
        if (mu.value != expected) {
          c.fail(str(p) + "^" + str(n) + " (" + str(r) + "," + str(s) + "): mu " + str(mu.value) +
                 " != " + str(expected));
        }
        ++pairs;
      }
    }
  }
  if (c.ok) c.detail = str(pairs) + " (r,s) pairs equal min(r+s-1, n)";
  return c;
}

Check mu_equals_kappa_small_fields() {
  Check c;
  std::uint64_t pairs = 0;
  for (auto [p, n] :
       std::vector<std::pair<std::uint32_t, unsigned>>{{2, 2}, {2, 3}, {2, 4}, {2, 6}, {3, 4}}) {
    const FieldPtr f = ExtensionField::create(p, n);
    const auto degrees = divisors(n);
    for (unsigned r = 1; r <= n; ++r) {
      for (unsigned s = 1; s <= n; ++s) {
        const auto mu = mu_exact(f, r, s, exhaustive_options(search_workers()));
        const auto k = kappa(r, s, degrees).value;
        if (!mu.exhaustive) c.fail("search not exhaustive");
        if (mu.value != k) {
          c.fail(str(p) + "^" + str(n) + " (" + str(r) + "," + str(s) + "): mu " + str(mu.value) +
                 " != kappa " + str(k));
        }
        ++pairs;
      }
    }
  }
  if (c.ok) c.detail = str(pairs) + " (r,s) pairs with mu = kappa";
  return c;
}

Check construction_optimality() {
  Check c;
  std::uint64_t pairs = 0;
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 12}, {3, 6}}) {
    const FieldPtr f = ExtensionField::create(p, n);
    for (unsigned r = 1; r <= n; ++r) {
      for (unsigned s = 1; s <= n; ++s) {
        const OptimalPair pair = optimal_pair(f, r, s);
        const OptimalityCertificate cert = certify_optimal(pair);
        const std::string where = str(p) + "^" + str(n) + " (" + str(r) + "," + str(s) + ")";
        if (pair.a.dim() != r || pair.b.dim() != s) c.fail(where + ": wrong dimensions");
        if (product_span(pair.a, pair.b).dim() != cert.dim_ab) c.fail(where + ": dim_ab mismatch");
        if (cert.dim_ab != kappa(r, s, divisors(n)).value) c.fail(where + ": dim_ab != kappa");
        if (!cert.certified) c.fail(where + ": not certified");
        if (!cert.kneser.stabilizer_verified || !cert.kneser.holds) {
          c.fail(where + ": stabilizer or Kneser check failed");
        }
        if (cert.kneser.slack !=
            static_cast<std::int64_t>(cert.dim_ab + cert.kneser.dim_h) -
                static_cast<std::int64_t>(r + s)) {
          c.fail(where + ": inconsistent slack");
        }
        ++pairs;
      }
    }
  }
  if (c.ok) c.detail = str(pairs) + " certified pairs at kappa";
  return c;
}

Check kneser_suite() {
  Check c;
  std::ostringstream detail;
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 8}, {2, 12}, {3, 6}}) {
    const FieldPtr f = ExtensionField::create(p, n);
    const KneserSurvey survey = survey_kneser(f, kKneserPairs, kKneserSeed);
    const std::string where = str(p) + "^" + str(n);
    if (survey.pairs != kKneserPairs) c.fail(where + ": wrong pair count");
    if (survey.violations != 0) c.fail(where + ": " + str(survey.violations) + " violations");
    if (survey.stabilizer_failures != 0) {
      c.fail(where + ": " + str(survey.stabilizer_failures) + " stabilizer failures");
    }
    detail << where << " " << survey.pairs << " pairs; ";
  }
  if (c.ok) c.detail = detail.str() + "no violations";
  return c;
}

Check tower() {
  Check c;
  const FieldPtr f = ExtensionField::create(2, 6);
  const std::vector<unsigned> chain{1, 2, 6};
  std::uint64_t pairs = 0;
  for (unsigned r = 1; r <= 6; ++r) {
    for (unsigned s = 1; s <= 6; ++s) {
      const auto [a, b] = small_products_pair(f, chain, r, s);
      const std::string where = "(" + str(r) + "," + str(s) + ")";
      if (a.dim() != r || b.dim() != s) c.fail(where + ": wrong dimensions");
      if (product_span(a, b).dim() > r + s - 1) c.fail(where + ": product too large");
      ++pairs;
    }
  }
  if (c.ok) c.detail = str(pairs) + " pairs with dim <= r+s-1";
  return c;
}

Check galois_cross_check() {
  Check c;
  std::uint64_t pairs = 0;
  for (unsigned n : {4U, 6U}) {
    const FieldPtr f = ExtensionField::create(2, n);
    const GroupSpec g = builtin_group("cyclic:" + str(n));
    for (unsigned r = 1; r <= n; ++r) {
      for (unsigned s = 1; s <= n; ++s) {
        const auto field_mu = mu_exact(f, r, s, exhaustive_options());
        const auto group_mu = mu_group_exact(g, r, s, exhaustive_options());
        if (!field_mu.exhaustive || !group_mu.exhaustive) c.fail("search not exhaustive");
        if (field_mu.value != group_mu.value) {
          c.fail("n=" + str(n) + " (" + str(r) + "," + str(s) + "): " + str(field_mu.value) +
                 " != " + str(group_mu.value));
        }
        ++pairs;
      }
    }
  }
  if (c.ok) c.detail = str(pairs) + " pairs agree (GF(2^4)/Z4 and GF(2^6)/Z6)";
  return c;
}

Check abelian_groups() {
  Check c;
  std::vector<std::string> names;
  for (int n = 1; n <= 10; ++n) names.push_back("cyclic:" + std::to_string(n));
  names.push_back("product:2,2");
  names.push_back("product:2,4");
  std::uint64_t pairs = 0;
  for (const auto& name : names) {
    const GroupSpec g = builtin_group(name);
    for (unsigned r = 1; r <= g.order(); ++r) {
      for (unsigned s = 1; s <= g.order(); ++s) {
        const auto mu = mu_group_exact(g, r, s, exhaustive_options());
        const auto k = kappa_group(r, s, g).value;
        if (!mu.exhaustive) c.fail("search not exhaustive");
        if (mu.value != k) {
          c.fail(name + " (" + str(r) + "," + str(s) + "): " + str(mu.value) + " != " + str(k));
        }
        ++pairs;
      }
    }
  }
  if (c.ok) c.detail = str(pairs) + " pairs over " + str(names.size()) + " groups";
  return c;
}

Check counterexample(bool long_mode) {
  Check c;
  const GroupSpec g = builtin_group("Z7xZ3semidirect");
  const auto t0 = Clock::now();
  const auto k = kappa_group(5, 9, g);
  const double kappa_seconds = seconds_since(t0);
  if (k.value != 12) c.fail("kappa_G(5,9) = " + str(k.value));
  if (kappa_seconds > kKappaGroupLimit) c.fail("kappa_G too slow");

  RandomizedOptions o;
  o.trials = kCounterexampleTrials;
  o.seed = kCounterexampleSeed;
  o.workers = search_workers();
  const auto t1 = Clock::now();
  const auto found = mu_group_randomized(g, 5, 9, o);
  const double random_seconds = seconds_since(t1);
  if (random_seconds > kMinute) c.fail("randomized search too slow");
  if (found.value != 13) c.fail("randomized search found " + str(found.value));
  if (found.witness_a.size() != 5 || found.witness_b.size() != 9 ||
      g.product_set(subset_mask(found.witness_a), subset_mask(found.witness_b)) == 0 ||
      static_cast<std::uint64_t>(__builtin_popcountll(g.product_set(
          subset_mask(found.witness_a), subset_mask(found.witness_b)))) != 13) {
    c.fail("witness does not reproduce |AB| = 13");
  }
  std::string detail = "kappa_G = 12, witness with |AB| = 13 (seed " + str(o.seed) + ")";
  if (long_mode) {
    SearchOptions e;
    e.workers = search_workers();
    e.budget = kLongBudget;
    const auto mu = mu_group_exact(g, 5, 9, e);
    if (!mu.exhaustive) c.fail("exhaustive search exceeded its budget");
    if (mu.value != 13) c.fail("exhaustive mu_G(5,9) = " + str(mu.value));
    detail += "; exhaustive mu_G = 13";
  }
  if (c.ok) c.detail = detail;
  return c;
}

Check infrastructure() {
  Check c;
  for (auto [p, max_n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 8}, {3, 5}}) {
    for (unsigned n = 1; n <= max_n; ++n) {
      const FieldPtr f = ExtensionField::create(p, n);
      for (unsigned r = 0; r <= n; ++r) {
        std::uint64_t visited = 0;
        for (SubspaceEnumerator e(f, r); !e.done(); e.advance()) ++visited;
        if (visited != gaussian_binomial(p, n, r)) {
          c.fail(str(p) + "^" + str(n) + " r=" + str(r) + ": visited " + str(visited));
        }
      }
    }
  }
  for (unsigned n = 1; n <= 4; ++n) {
    const FieldPtr f = ExtensionField::create(2, n);
    for (unsigned r = 1; r <= n; ++r) {
      for (unsigned s = 1; s <= n; ++s) {
        SearchOptions canon = exhaustive_options();
        SearchOptions full = exhaustive_options();
        full.canonicalize = false;
        if (mu_exact(f, r, s, canon).value != mu_exact(f, r, s, full).value) {
          c.fail("canonical and full searches differ at n=" + str(n));
        }
      }
    }
  }
  const FieldPtr f = ExtensionField::create(2, 6);
  const GroupSpec g = builtin_group("Z7xZ3semidirect");
  for (bool prune : {false, true}) {
    std::vector<FieldMuResult> field_runs;
    std::vector<GroupMuResult> group_runs;
    std::vector<GroupMuResult> random_runs;
    for (unsigned w : {1U, 4U, 8U}) {
      SearchOptions o = exhaustive_options(w);
      o.prune_at_floor = prune;
      field_runs.push_back(mu_exact(f, 3, 4, o));
      group_runs.push_back(mu_group_exact(g, 3, 4, o));
      RandomizedOptions ro;
      ro.trials = 200;
      ro.seed = 7;
      ro.workers = w;
      ro.prune_at_floor = prune;
      random_runs.push_back(mu_group_randomized(g, 5, 9, ro));
    }
    for (std::size_t i = 1; i < 3; ++i) {
      if (field_runs[i].value != field_runs[0].value ||
          !(field_runs[i].witness_a == field_runs[0].witness_a) ||
          !(field_runs[i].witness_b == field_runs[0].witness_b)) {
        c.fail("field search depends on worker count");
      }
      if (group_runs[i].value != group_runs[0].value ||
          group_runs[i].witness_a != group_runs[0].witness_a ||
          group_runs[i].witness_b != group_runs[0].witness_b) {
        c.fail("group search depends on worker count");
      }
      if (random_runs[i].value != random_runs[0].value ||
          random_runs[i].witness_a != random_runs[0].witness_a ||
          random_runs[i].witness_b != random_runs[0].witness_b) {
        c.fail("randomized search depends on worker count");
      }
    }
  }
  if (c.ok) c.detail = "enumeration counts, canonicalization and worker determinism hold";
  return c;
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Check()> run;
};

}  // namespace

int main(int argc, char** argv) {
  bool long_mode = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--long") {
      long_mode = true;
    } else {
      std::cerr << "usage: acceptance [--long]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "golden kappa table n=16", 1 * kSecond, golden_table},
      {2, "linear Cauchy-Davenport in GF(2^5) and GF(3^3)", 1 * kMinute, cauchy_davenport},
      {3, "mu = kappa in GF(2^2,3,4,6) and GF(3^4)", 30 * kMinute, mu_equals_kappa_small_fields},
      {4, "construction optimality in GF(2^12) and GF(3^6)", 1 * kMinute, construction_optimality},
      {5, "Kneser property on random pairs", 5 * kMinute, kneser_suite},
      {6, "tower construction over F_2 < F_4 < F_64", 10 * kSecond, tower},
      {7, "field versus cyclic group minima", 1 * kMinute, galois_cross_check},
      {8, "mu_G = kappa_G for small abelian groups", 10 * kMinute, abelian_groups},
      {9, "nonabelian group of order 21",
       long_mode ? 24 * 60 * kMinute : 2 * kMinute, [long_mode] { return counterexample(long_mode); }},
      {10, "enumeration and search infrastructure", 5 * kMinute, infrastructure},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = Clock::now();
    Check result;
    try {
      result = criterion.run();
    } catch (const std::exception& e) {
      result.fail(std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    if (elapsed > criterion.limit_seconds) {
      result.fail("took " + std::to_string(elapsed) + " s");
    }
    if (!result.ok) ++failures;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.3f s of %.0f s", elapsed, criterion.limit_seconds);
    std::cout << (result.ok ? "[PASS] " : "[FAIL] ") << criterion.id << ". " << criterion.name
              << " (" << timing << "): " << result.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << (long_mode ? " (long mode)" : "") << std::endl;
  return failures == 0 ? 0 : 1;
}
