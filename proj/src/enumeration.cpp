#include <algorithm>
#include <stdexcept>

#include "subprod/search.hpp"

namespace subprod {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

std::uint64_t sat_pow(std::uint64_t q, std::size_t e) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < e; ++i) v = sat_mul(v, q);
  return v;
}

}  // namespace

std::uint64_t gaussian_binomial(std::uint64_t q, unsigned n, unsigned r) {
  if (r > n) return 0;
  // row[j] holds C_q(i, j) while i runs from 0 to n.
  std::vector<std::uint64_t> row(r + 1, 0);
  row[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    for (unsigned j = std::min(i, r); j >= 1; --j) {
      row[j] = sat_add(row[j - 1], sat_mul(sat_pow(q, j), row[j]));
    }
  }
  return row[r];
}

SubspaceEnumerator::SubspaceEnumerator(FieldPtr field, unsigned r, bool containing_one)
    : field_(std::move(field)) {
  const unsigned n = field_->n();
  offset_ = containing_one ? 1 : 0;
  cols_ = n - offset_;
  if (r > n || (containing_one && r == 0)) {
    k_ = 0;
    count_ = 0;
    done_ = true;
    return;
  }
  k_ = r - offset_;
  count_ = gaussian_binomial(field_->p(), cols_, k_);
  pivots_.resize(k_);
  for (unsigned i = 0; i < k_; ++i) pivots_[i] = i;
  start_pivot_set();
  materialize();
}

Subspace SubspaceEnumerator::current() const {
  if (done_) throw std::out_of_range("enumerator is exhausted");
  return Subspace::span(field_, basis_);
}

void SubspaceEnumerator::start_pivot_set() {
  free_col_.clear();
  free_row_.clear();
  std::vector<bool> is_pivot(cols_, false);
  for (unsigned c : pivots_) is_pivot[c] = true;
  for (unsigned i = 0; i < k_; ++i) {
    for (unsigned c = pivots_[i] + 1; c < cols_; ++c) {
      if (is_pivot[c]) continue;
      free_col_.push_back(c);
      free_row_.push_back(i);
    }
  }
  digits_.assign(free_col_.size(), 0);
}

bool SubspaceEnumerator::next_pivot_set() {
  for (unsigned i = k_; i-- > 0;) {
    if (pivots_[i] < cols_ - k_ + i) {
      ++pivots_[i];
      for (unsigned j = i + 1; j < k_; ++j) pivots_[j] = pivots_[j - 1] + 1;
      return true;
    }
  }
  return false;
}

void SubspaceEnumerator::load_digits(std::uint64_t local) {
  const std::uint64_t p = field_->p();
  for (std::size_t j = digits_.size(); j-- > 0;) {
    digits_[j] = static_cast<Residue>(local % p);
    local /= p;
  }
}

void SubspaceEnumerator::materialize() {
  const unsigned n = field_->n();
  basis_.clear();
  std::vector<std::vector<Residue>> rows(k_ + offset_, std::vector<Residue>(n, 0));
  if (offset_ == 1) rows[0][0] = 1;
  for (unsigned i = 0; i < k_; ++i) rows[offset_ + i][offset_ + pivots_[i]] = 1;
  for (std::size_t j = 0; j < digits_.size(); ++j) {
    rows[offset_ + free_row_[j]][offset_ + free_col_[j]] = digits_[j];
  }
  for (auto& row : rows) basis_.emplace_back(std::move(row));
}

void SubspaceEnumerator::advance() {
  if (done_) return;
  ++index_;
  const Residue p = field_->p();
  for (std::size_t j = digits_.size(); j-- > 0;) {
    if (digits_[j] + 1 < p) {
      ++digits_[j];
      materialize();
      return;
    }
    digits_[j] = 0;
  }
  if (!next_pivot_set()) {
    done_ = true;
    return;
  }
  start_pivot_set();
  materialize();
}

void SubspaceEnumerator::seek(std::uint64_t index) {
  index_ = index;
  if (index >= count_) {
    done_ = true;
    return;
  }
  done_ = false;
  for (unsigned i = 0; i < k_; ++i) pivots_[i] = i;
  std::uint64_t local = index;
  while (true) {
    start_pivot_set();
    const std::uint64_t block = sat_pow(field_->p(), free_col_.size());
    if (local < block) break;
    local -= block;
    if (!next_pivot_set()) throw std::logic_error("seek ran past the last pivot set");
  }
  load_digits(local);
  materialize();
}

std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, unsigned r,
                                          bool containing_one) {
  std::vector<Subspace> out;
  for (SubspaceEnumerator e(field, r, containing_one); !e.done(); e.advance()) {
    out.push_back(e.current());
  }
  return out;
}

}  // namespace subprod
