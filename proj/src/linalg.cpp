#include "subprod/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace subprod {

std::vector<std::size_t> reduce_to_rref(std::vector<Row>& rows, const PrimeField& fp) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t found = rank;
    while (found < rows.size() && rows[found][c] == 0) ++found;
    if (found == rows.size()) continue;
    std::swap(rows[rank], rows[found]);
    Row& pivot_row = rows[rank];
    const Residue scale = fp.inv(pivot_row[c]);
    for (std::size_t j = c; j < cols; ++j) pivot_row[j] = fp.mul(pivot_row[j], scale);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][c] == 0) continue;
      const Residue factor = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) {
        rows[i][j] = fp.sub(rows[i][j], fp.mul(factor, pivot_row[j]));
      }
    }
    pivots.push_back(c);
    ++rank;
  }
  rows.resize(rank);
  return pivots;
}

std::vector<Row> nullspace(std::vector<Row> rows, std::size_t cols, const PrimeField& fp) {
  for (const Row& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("ragged matrix");
  }
  const std::vector<std::size_t> pivots = reduce_to_rref(rows, fp);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<Row> kernel;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Row x(cols, 0);
    x[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = fp.neg(rows[i][free]);
    kernel.push_back(std::move(x));
  }
  return kernel;
}

EchelonBasis::EchelonBasis(const PrimeField& fp, std::size_t cols)
    : fp_(fp), cols_(cols), row_at_pivot_(cols), scratch_(cols) {}

bool EchelonBasis::insert(std::span<const Residue> v) {
  std::copy(v.begin(), v.end(), scratch_.begin());
  for (std::size_t c = 0; c < cols_; ++c) {
    const Residue lead = scratch_[c];
    if (lead == 0) continue;
    const Row& row = row_at_pivot_[c];
    if (row.empty()) {
      const Residue scale = fp_.inv(lead);
      Row stored(cols_, 0);
      for (std::size_t j = c; j < cols_; ++j) stored[j] = fp_.mul(scratch_[j], scale);
      row_at_pivot_[c] = std::move(stored);
      ++rank_;
      return true;
    }
    for (std::size_t j = c; j < cols_; ++j) {
      scratch_[j] = fp_.sub(scratch_[j], fp_.mul(lead, row[j]));
    }
  }
  return false;
}

void EchelonBasis::clear() {
  for (Row& r : row_at_pivot_) r.clear();
  rank_ = 0;
}

bool same_field(const FieldPtr& a, const FieldPtr& b) noexcept {
  return a == b || (a && b && a->same_as(*b));
}

Subspace random_subspace(const FieldPtr& field, std::size_t dim, std::mt19937_64& rng) {
  if (dim > field->n()) throw std::invalid_argument("dimension exceeds the field degree");
  EchelonBasis echelon(field->prime_field(), field->n());
  std::vector<FieldElement> gens;
  while (gens.size() < dim) {
    FieldElement v = field->random(rng);
    if (echelon.insert(v.coeffs())) gens.push_back(std::move(v));
  }
  return Subspace::span(field, gens);
}

Subspace::Subspace(FieldPtr field) : field_(std::move(field)) {
  if (!field_) throw std::invalid_argument("subspace needs an ambient field");
}

Subspace::Subspace(FieldPtr field, std::vector<Row> rref_rows,
                   std::vector<std::size_t> pivots)
    : field_(std::move(field)), pivots_(std::move(pivots)) {
  basis_.reserve(rref_rows.size());
  for (Row& r : rref_rows) basis_.emplace_back(std::move(r));
}

Subspace Subspace::span(FieldPtr field, std::span<const FieldElement> vectors) {
  if (!field) throw std::invalid_argument("subspace needs an ambient field");
  std::vector<Row> rows;
  rows.reserve(vectors.size());
  for (const FieldElement& v : vectors) {
    if (!field->belongs(v)) throw std::invalid_argument("vector is not in the ambient field");
    rows.emplace_back(v.coeffs().begin(), v.coeffs().end());
  }
  std::vector<std::size_t> pivots = reduce_to_rref(rows, field->prime_field());
  return Subspace(std::move(field), std::move(rows), std::move(pivots));
}

Subspace Subspace::whole(FieldPtr field) {
  std::vector<FieldElement> unit_vectors;
  for (unsigned i = 0; i < field->n(); ++i) {
    std::vector<Residue> v(field->n(), 0);
    v[i] = 1;
    unit_vectors.emplace_back(std::move(v));
  }
  return span(std::move(field), unit_vectors);
}

FieldElement Subspace::reduce(const FieldElement& v) const {
  if (!field_->belongs(v)) throw std::invalid_argument("vector is not in the ambient field");
  const PrimeField& fp = field_->prime_field();
  Row rem(v.coeffs().begin(), v.coeffs().end());
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const Residue factor = rem[pivots_[i]];
    if (factor == 0) continue;
    const auto row = basis_[i].coeffs();
    for (std::size_t j = 0; j < rem.size(); ++j) {
      rem[j] = fp.sub(rem[j], fp.mul(factor, row[j]));
    }
  }
  return FieldElement(std::move(rem));
}

bool Subspace::contains(const FieldElement& v) const { return reduce(v).is_zero(); }

bool Subspace::is_subspace_of(const Subspace& other) const {
  require_same_field(other);
  return std::all_of(basis_.begin(), basis_.end(),
                     [&](const FieldElement& b) { return other.contains(b); });
}

Subspace Subspace::sum(const Subspace& other) const {
  require_same_field(other);
  std::vector<FieldElement> all = basis_;
  all.insert(all.end(), other.basis_.begin(), other.basis_.end());
  return span(field_, all);
}

Subspace Subspace::intersect(const Subspace& other) const {
  require_same_field(other);
  const std::size_t n = field_->n();
  std::vector<Row> rows;
  for (const FieldElement& u : basis_) {
    Row r(2 * n, 0);
    std::copy(u.coeffs().begin(), u.coeffs().end(), r.begin());
    std::copy(u.coeffs().begin(), u.coeffs().end(), r.begin() + static_cast<std::ptrdiff_t>(n));
    rows.push_back(std::move(r));
  }
  for (const FieldElement& v : other.basis_) {
    Row r(2 * n, 0);
    std::copy(v.coeffs().begin(), v.coeffs().end(), r.begin());
    rows.push_back(std::move(r));
  }
  const std::vector<std::size_t> pivots = reduce_to_rref(rows, field_->prime_field());
  std::vector<FieldElement> common;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (pivots[i] < n) continue;
    common.emplace_back(Row(rows[i].begin() + static_cast<std::ptrdiff_t>(n), rows[i].end()));
  }
  return span(field_, common);
}

std::string Subspace::to_text() const {
  std::ostringstream out;
  for (const FieldElement& b : basis_) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (j > 0) out << ',';
      out << b[j];
    }
    out << '\n';
  }
  return out.str();
}

Subspace Subspace::from_text(FieldPtr field, std::string_view text) {
  std::vector<FieldElement> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    try {
      rows.push_back(field->element(parse_polynomial(line)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return span(std::move(field), rows);
}

bool operator==(const Subspace& a, const Subspace& b) {
  return same_field(a.field_, b.field_) && a.basis_ == b.basis_;
}

void Subspace::require_same_field(const Subspace& other) const {
  if (!same_field(field_, other.field_)) {
    throw std::invalid_argument("subspaces live in different fields");
  }
}

}  // namespace subprod
