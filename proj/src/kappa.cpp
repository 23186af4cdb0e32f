#include "subprod/kappa.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace subprod {

namespace {

void check_argument(std::uint64_t v, const char* what) {
  if (v == 0) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
  if (v > kMaxKappaArgument) {
    throw std::invalid_argument(std::string(what) + " exceeds 2^31");
  }
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return a / b + (a % b != 0 ? 1 : 0);
}

}  // namespace

AdmissibleDegreeSet::AdmissibleDegreeSet(std::uint64_t n,
                                         std::vector<std::uint64_t> degrees)
    : n_(n), degrees_(std::move(degrees)) {
  if (n_ > kMaxKappaArgument) {
    throw std::invalid_argument("extension degree exceeds 2^31");
  }
  std::sort(degrees_.begin(), degrees_.end());
  degrees_.erase(std::unique(degrees_.begin(), degrees_.end()), degrees_.end());
  if (degrees_.empty() || degrees_.front() != 1) {
    throw std::invalid_argument("degree set must contain 1");
  }
  for (std::uint64_t h : degrees_) {
    if (h > kMaxKappaArgument) {
      throw std::invalid_argument("degree exceeds 2^31");
    }
    if (is_finite() && n_ % h != 0) {
      throw std::invalid_argument("degree " + std::to_string(h) +
                                  " does not divide " + std::to_string(n_));
    }
  }
}

bool AdmissibleDegreeSet::contains(std::uint64_t h) const noexcept {
  return std::binary_search(degrees_.begin(), degrees_.end(), h);
}

AdmissibleDegreeSet divisors(std::uint64_t n) {
  check_argument(n, "n");
  std::vector<std::uint64_t> small;
  std::vector<std::uint64_t> large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return AdmissibleDegreeSet(n, std::move(small));
}

KappaQuery::KappaQuery(std::uint64_t r_, std::uint64_t s_,
                       AdmissibleDegreeSet degrees_)
    : r(r_), s(s_), degrees(std::move(degrees_)) {
  check_argument(r, "r");
  check_argument(s, "s");
  if (degrees.is_finite() && (r > degrees.n() || s > degrees.n())) {
    throw std::invalid_argument("r and s must not exceed n");
  }
}

std::uint64_t f_h(std::uint64_t r, std::uint64_t s, std::uint64_t h) {
  check_argument(r, "r");
  check_argument(s, "s");
  check_argument(h, "h");
  // Each ceiling is at most 2^31, so the product stays below 2^63.
  return (ceil_div(r, h) + ceil_div(s, h) - 1) * h;
}

KappaResult kappa(const KappaQuery& query) {
  KappaResult best;
  for (std::uint64_t h : query.degrees.degrees()) {
    const std::uint64_t value = f_h(query.r, query.s, h);
    if (best.h0 == 0 || value < best.value) {
      best = {value, h, ceil_div(query.r, h), ceil_div(query.s, h)};
    }
  }
  return best;
}

KappaResult kappa(std::uint64_t r, std::uint64_t s,
                  const AdmissibleDegreeSet& degrees) {
  return kappa(KappaQuery(r, s, degrees));
}

std::vector<std::vector<std::uint64_t>> kappa_table(
    std::uint64_t n, const AdmissibleDegreeSet& degrees) {
  check_argument(n, "n");
  if (degrees.n() != n) {
    throw std::invalid_argument("degree set belongs to a different extension");
  }
  std::vector<std::vector<std::uint64_t>> table(
      n, std::vector<std::uint64_t>(n, 0));
  for (std::uint64_t r = 1; r <= n; ++r) {
    for (std::uint64_t s = 1; s <= n; ++s) {
      table[r - 1][s - 1] = kappa(r, s, degrees).value;
    }
  }
  return table;
}

}  // namespace subprod
