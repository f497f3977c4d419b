#include "mtk/abelian.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <tuple>

#include "mtk/errors.hpp"

namespace mtk {

// ---------------------------------------------------------------------------
// GroupWord

GroupWord::GroupWord(std::size_t size, std::vector<Term> terms) : size_(size) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  for (const auto& [index, coefficient] : terms) {
    if (index >= size_) throw Error(ErrorCode::SizeMismatch, "generator index out of range");
    if (!terms_.empty() && terms_.back().first == index)
      terms_.back().second = checked_add(terms_.back().second, coefficient);
    else
      terms_.emplace_back(index, coefficient);
    if (terms_.back().second == 0) terms_.pop_back();
  }
}

GroupWord GroupWord::generator(std::size_t size, std::size_t index, std::int64_t coefficient) {
  return GroupWord(size, {{index, coefficient}});
}

GroupWord GroupWord::from_dense(const std::vector<std::int64_t>& coefficients) {
  GroupWord w(coefficients.size());
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    if (coefficients[i] != 0) w.terms_.emplace_back(i, coefficients[i]);
  return w;
}

std::int64_t GroupWord::coefficient(std::size_t index) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                             [](const Term& t, std::size_t i) { return t.first < i; });
  return it != terms_.end() && it->first == index ? it->second : 0;
}

std::vector<std::int64_t> GroupWord::to_dense() const {
  std::vector<std::int64_t> out(size_, 0);
  for (const auto& [i, c] : terms_) out[i] = c;
  return out;
}

GroupWord& GroupWord::add_scaled(const GroupWord& other, std::int64_t factor) {
  if (other.size_ != size_) throw Error(ErrorCode::SizeMismatch, "words over different generator sets");
  if (factor == 0 || other.terms_.empty()) return *this;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      merged.emplace_back(b->first, checked_mul(b->second, factor));
      ++b;
    } else {
      std::int64_t c = checked_add(a->second, checked_mul(b->second, factor));
      if (c != 0) merged.emplace_back(a->first, c);
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

GroupWord GroupWord::operator+(const GroupWord& other) const {
  GroupWord w = *this;
  return w.add_scaled(other, 1);
}

GroupWord GroupWord::operator-(const GroupWord& other) const {
  GroupWord w = *this;
  return w.add_scaled(other, -1);
}

GroupWord GroupWord::operator-() const { return *this * -1; }

GroupWord GroupWord::operator*(std::int64_t factor) const {
  GroupWord w(size_);
  if (factor == 0) return w;
  w.terms_.reserve(terms_.size());
  for (const auto& [i, c] : terms_) w.terms_.emplace_back(i, checked_mul(c, factor));
  return w;
}

bool GroupWord::operator<(const GroupWord& other) const {
  return std::tie(size_, terms_) < std::tie(other.size_, other.terms_);
}

std::string GroupWord::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [i, c] : terms_) {
    std::int64_t m = c;
    if (!first) {
      out << (c < 0 ? " - " : " + ");
      if (c < 0) m = -c;
    } else if (c < 0) {
      out << '-';
      m = -c;
    }
    if (m != 1) out << m << '*';
    out << 'e' << i;
    first = false;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Sparse unit-pivot elimination

namespace {

// int64 with overflow-checked arithmetic; the elimination reruns over mpz on overflow.
struct Checked {
  std::int64_t v = 0;
  Checked() = default;
  Checked(std::int64_t x) : v(x) {}
  friend Checked operator*(Checked a, Checked b) { return checked_mul(a.v, b.v); }
  friend Checked operator-(Checked a, Checked b) { return checked_sub(a.v, b.v); }
  friend bool operator==(Checked a, Checked b) { return a.v == b.v; }
};

bool is_zero(const Checked& x) { return x.v == 0; }
bool is_zero(const Integer& x) { return x == 0; }
bool is_pm_one(const Checked& x) { return x.v == 1 || x.v == -1; }
bool is_pm_one(const Integer& x) { return x == 1 || x == -1; }
Integer widen(const Checked& x) { return to_integer(x.v); }
Integer widen(const Integer& x) { return x; }

template <class T>
struct SparseRow {
  std::vector<std::uint32_t> cols;
  std::vector<T> vals;
};

template <class T>
struct Elimination {
  std::vector<std::pair<std::uint32_t, SparseRow<T>>> pivots;  // in elimination order
  std::vector<SparseRow<T>> remaining;
  std::vector<char> eliminated;
};

template <class T>
SparseRow<T> subtract_multiple(const SparseRow<T>& q, const T& factor, const SparseRow<T>& p) {
  SparseRow<T> r;
  r.cols.reserve(q.cols.size() + p.cols.size());
  r.vals.reserve(q.cols.size() + p.cols.size());
  std::size_t i = 0, j = 0;
  while (i < q.cols.size() || j < p.cols.size()) {
    if (j == p.cols.size() || (i < q.cols.size() && q.cols[i] < p.cols[j])) {
      r.cols.push_back(q.cols[i]);
      r.vals.push_back(q.vals[i]);
      ++i;
    } else if (i == q.cols.size() || p.cols[j] < q.cols[i]) {
      r.cols.push_back(p.cols[j]);
      r.vals.push_back(T(0) - factor * p.vals[j]);
      ++j;
    } else {
      T v = q.vals[i] - factor * p.vals[j];
      if (!is_zero(v)) {
        r.cols.push_back(q.cols[i]);
        r.vals.push_back(v);
      }
      ++i;
      ++j;
    }
  }
  return r;
}

// Repeatedly pivots on a +-1 entry of a shortest row, choosing the sparsest column,
// until no row has a unit entry. Pivot rows are recorded for back substitution.
template <class T>
Elimination<T> eliminate_unit_pivots(std::size_t ncols, std::vector<SparseRow<T>> rows) {
  Elimination<T> out;
  out.eliminated.assign(ncols, 0);
  std::vector<std::vector<std::uint32_t>> col_rows(ncols);
  std::vector<char> alive(rows.size(), 1);
  std::vector<std::uint32_t> version(rows.size(), 0);
  using Entry = std::tuple<std::size_t, std::uint32_t, std::uint32_t>;  // length, row, version
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (std::uint32_t r = 0; r < rows.size(); ++r) {
    for (auto c : rows[r].cols) col_rows[c].push_back(r);
    heap.emplace(rows[r].cols.size(), r, 0);
  }
  while (!heap.empty()) {
    auto [len, p, ver] = heap.top();
    heap.pop();
    if (!alive[p] || ver != version[p]) continue;
    SparseRow<T>& pivot = rows[p];
    std::size_t best = pivot.cols.size();
    for (std::size_t k = 0; k < pivot.cols.size(); ++k)
      if (is_pm_one(pivot.vals[k]) &&
          (best == pivot.cols.size() || col_rows[pivot.cols[k]].size() < col_rows[pivot.cols[best]].size()))
        best = k;
    if (best == pivot.cols.size()) continue;  // parked until modified
    const std::uint32_t c = pivot.cols[best];
    const T u = pivot.vals[best];
    std::vector<std::uint32_t> touched = std::move(col_rows[c]);
    col_rows[c].clear();
    for (std::uint32_t q : touched) {
      if (q == p || !alive[q]) continue;
      SparseRow<T>& row = rows[q];
      auto it = std::lower_bound(row.cols.begin(), row.cols.end(), c);
      if (it == row.cols.end() || *it != c) continue;
      T factor = row.vals[it - row.cols.begin()] * u;
      std::vector<std::uint32_t> before = row.cols;
      row = subtract_multiple(row, factor, pivot);
      std::size_t a = 0;
      for (auto col : row.cols) {
        while (a < before.size() && before[a] < col) ++a;
        if (a == before.size() || before[a] != col) col_rows[col].push_back(q);
      }
      if (row.cols.empty()) {
        alive[q] = 0;
      } else {
        ++version[q];
        heap.emplace(row.cols.size(), q, version[q]);
      }
    }
    alive[p] = 0;
    out.eliminated[c] = 1;
    out.pivots.emplace_back(c, std::move(pivot));
  }
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (alive[r] && !rows[r].cols.empty()) out.remaining.push_back(std::move(rows[r]));
  return out;
}

template <class T>
std::vector<SparseRow<T>> sparse_rows(const std::vector<GroupWord>& relations) {
  std::vector<SparseRow<T>> rows;
  rows.reserve(relations.size());
  for (const auto& w : relations) {
    SparseRow<T> r;
    for (const auto& [i, c] : w.terms()) {
      r.cols.push_back(static_cast<std::uint32_t>(i));
      r.vals.push_back(T(c));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

// Everything the structure computation needs from the elimination, widened to mpz.
struct WideElimination {
  std::vector<std::tuple<std::uint32_t, std::vector<std::uint32_t>, std::vector<Integer>>> pivots;
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<Integer>>> remaining;
  std::vector<char> eliminated;
};

template <class T>
WideElimination widen_elimination(Elimination<T>&& e) {
  WideElimination w;
  w.eliminated = std::move(e.eliminated);
  for (auto& [c, row] : e.pivots) {
    std::vector<Integer> vals;
    vals.reserve(row.vals.size());
    for (const auto& v : row.vals) vals.push_back(widen(v));
    w.pivots.emplace_back(c, std::move(row.cols), std::move(vals));
  }
  for (auto& row : e.remaining) {
    std::vector<Integer> vals;
    vals.reserve(row.vals.size());
    for (const auto& v : row.vals) vals.push_back(widen(v));
    w.remaining.emplace_back(std::move(row.cols), std::move(vals));
  }
  return w;
}

WideElimination run_elimination(std::size_t ncols, const std::vector<GroupWord>& relations) {
  try {
    return widen_elimination(eliminate_unit_pivots<Checked>(ncols, sparse_rows<Checked>(relations)));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Overflow) throw;
  }
  return widen_elimination(eliminate_unit_pivots<Integer>(ncols, sparse_rows<Integer>(relations)));
}

GroupWord word_from_integers(std::size_t size, const std::vector<std::pair<std::size_t, Integer>>& terms) {
  std::vector<GroupWord::Term> t;
  t.reserve(terms.size());
  for (const auto& [i, c] : terms)
    if (c != 0) t.emplace_back(i, to_int64(c));
  return GroupWord(size, std::move(t));
}

GroupWord normalize_sign(GroupWord w) {
  if (!w.empty() && w.terms().front().second < 0) return -w;
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// FpAbelianGroup

FpAbelianGroup::FpAbelianGroup(std::size_t generators, std::vector<GroupWord> relations) : generators_(generators) {
  for (auto& r : relations) {
    if (r.size() != generators_) throw Error(ErrorCode::SizeMismatch, "relation over a different generator set");
    if (!r.empty()) relations_.push_back(normalize_sign(std::move(r)));
  }
  std::sort(relations_.begin(), relations_.end());
  relations_.erase(std::unique(relations_.begin(), relations_.end()), relations_.end());
}

std::shared_ptr<const FpAbelianGroup> FpAbelianGroup::make(std::size_t generators, std::vector<GroupWord> relations) {
  return std::make_shared<const FpAbelianGroup>(generators, std::move(relations));
}

std::shared_ptr<const FpAbelianGroup> FpAbelianGroup::cyclic_sum(const std::vector<Integer>& factors,
                                                                 std::size_t free) {
  const std::size_t n = factors.size() + free;
  std::vector<GroupWord> relations;
  for (std::size_t i = 0; i < factors.size(); ++i)
    relations.push_back(GroupWord::generator(n, i, to_int64(factors[i])));
  return make(n, std::move(relations));
}

GroupWord FpAbelianGroup::generator(std::size_t i, std::int64_t coefficient) const {
  if (i >= generators_) throw Error(ErrorCode::SizeMismatch, "generator index out of range");
  return GroupWord::generator(generators_, i, coefficient);
}

const FpAbelianGroup::Structure& FpAbelianGroup::structure() const {
  std::call_once(once_, [this] { compute_structure(); });
  return *structure_;
}

void FpAbelianGroup::compute_structure() const {
  auto s = std::make_unique<Structure>();
  WideElimination elim = run_elimination(generators_, relations_);

  // Surviving generators carry the leftover (non-unit) relations; reduce them densely.
  std::vector<std::size_t> dense_of(generators_, static_cast<std::size_t>(-1));
  std::vector<std::size_t> alive;
  for (std::size_t g = 0; g < generators_; ++g)
    if (!elim.eliminated[g]) {
      dense_of[g] = alive.size();
      alive.push_back(g);
    }
  const std::size_t n = alive.size();
  // If every surviving generator has a single-term relation c*e_g, the lcm of those c
  // annihilates the group and the dense reduction can work modulo it.
  std::vector<Integer> own_order(generators_, Integer(0));
  for (const auto& r : relations_)
    if (r.terms().size() == 1) {
      const auto& [g, c] = r.terms().front();
      own_order[g] = gcd(own_order[g], Integer(static_cast<long>(c)));
    }
  Integer exponent = 1;
  for (auto g : alive) {
    if (own_order[g] == 0) {
      exponent = 0;
      break;
    }
    exponent = lcm(exponent, own_order[g]);
  }
  LatticeBasis lattice = exponent > 0 ? LatticeBasis(n, exponent) : LatticeBasis(n);
  for (const auto& [cols, vals] : elim.remaining) {
    std::vector<Integer> v(n);
    for (std::size_t k = 0; k < cols.size(); ++k) v[dense_of[cols[k]]] = vals[k];
    lattice.insert(std::move(v));
  }
  auto basis = lattice.basis();
  IntMatrix a(basis.size(), n);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = basis[i][j];
  IntMatrix v = IntMatrix::identity(n), v_inverse = IntMatrix::identity(n);
  smith_reduce(a, nullptr, &v, &v_inverse);

  std::vector<std::size_t> torsion_cols, free_cols;
  for (std::size_t j = 0; j < n; ++j) {
    Integer d = j < a.rows() ? a(j, j) : Integer(0);
    if (d == 1) continue;
    if (d == 0) {
      free_cols.push_back(j);
    } else {
      torsion_cols.push_back(j);
      s->torsion.push_back(d);
    }
  }
  s->free = free_cols.size();
  std::vector<std::size_t> coord_cols = torsion_cols;
  coord_cols.insert(coord_cols.end(), free_cols.begin(), free_cols.end());
  s->moduli = s->torsion;
  s->moduli.resize(coord_cols.size(), Integer(0));
  const std::size_t r = coord_cols.size();

  auto reduce = [&](std::vector<Integer>& x) {
    for (std::size_t k = 0; k < s->torsion.size(); ++k) x[k] = mod_floor(x[k], s->moduli[k]);
  };

  s->generator_coordinates.assign(generators_, std::vector<Integer>(r));
  for (std::size_t d = 0; d < n; ++d) {
    auto& q = s->generator_coordinates[alive[d]];
    for (std::size_t k = 0; k < r; ++k) q[k] = v(d, coord_cols[k]);
    reduce(q);
  }
  // Back substitution: a pivot row u*e_c + sum p_j e_j = 0 gives e_c = -u * sum p_j e_j.
  for (auto it = elim.pivots.rbegin(); it != elim.pivots.rend(); ++it) {
    const auto& [c, cols, vals] = *it;
    Integer u;
    std::vector<Integer> acc(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] == c) {
        u = vals[k];
        continue;
      }
      const auto& q = s->generator_coordinates[cols[k]];
      for (std::size_t t = 0; t < r; ++t)
        if (q[t] != 0) acc[t] += vals[k] * q[t];
    }
    for (auto& x : acc) x *= -u;
    reduce(acc);
    s->generator_coordinates[c] = std::move(acc);
  }

  for (std::size_t k = 0; k < r; ++k) {
    std::vector<std::pair<std::size_t, Integer>> terms;
    for (std::size_t d = 0; d < n; ++d)
      if (v_inverse(coord_cols[k], d) != 0) terms.emplace_back(alive[d], v_inverse(coord_cols[k], d));
    s->representatives.push_back(word_from_integers(generators_, terms));
  }
  structure_ = std::move(s);
}

std::vector<Integer> FpAbelianGroup::invariant_factors() const { return structure().torsion; }

std::size_t FpAbelianGroup::free_rank() const { return structure().free; }

Integer FpAbelianGroup::order() const {
  if (free_rank() > 0) throw Error(ErrorCode::InfiniteGroup, "group has positive free rank");
  Integer o = 1;
  for (const auto& d : structure().torsion) o *= d;
  return o;
}

std::size_t FpAbelianGroup::coordinate_count() const { return structure().moduli.size(); }

const std::vector<Integer>& FpAbelianGroup::coordinate_moduli() const { return structure().moduli; }

std::vector<Integer> FpAbelianGroup::normal_form(const GroupWord& w) const {
  if (w.size() != generators_) throw Error(ErrorCode::SizeMismatch, "word over a different generator set");
  const Structure& s = structure();
  std::vector<Integer> x(s.moduli.size());
  for (const auto& [i, c] : w.terms()) {
    const auto& q = s.generator_coordinates[i];
    for (std::size_t k = 0; k < q.size(); ++k)
      if (q[k] != 0) x[k] += q[k] * static_cast<long>(c);
  }
  for (std::size_t k = 0; k < s.torsion.size(); ++k) x[k] = mod_floor(x[k], s.moduli[k]);
  return x;
}

bool FpAbelianGroup::is_zero(const GroupWord& w) const {
  auto x = normal_form(w);
  return std::all_of(x.begin(), x.end(), [](const Integer& v) { return v == 0; });
}

const GroupWord& FpAbelianGroup::coordinate_generator(std::size_t i) const { return structure().representatives.at(i); }

GroupWord FpAbelianGroup::from_coordinates(const std::vector<Integer>& coordinates) const {
  const Structure& s = structure();
  if (coordinates.size() != s.moduli.size()) throw Error(ErrorCode::SizeMismatch, "coordinate vector has wrong length");
  GroupWord w(generators_);
  for (std::size_t k = 0; k < coordinates.size(); ++k) {
    Integer c = k < s.torsion.size() ? mod_floor(coordinates[k], s.moduli[k]) : coordinates[k];
    if (c != 0) w.add_scaled(s.representatives[k], to_int64(c));
  }
  return w;
}

// ---------------------------------------------------------------------------
// GroupHom

GroupHom GroupHom::make(GroupPtr source, GroupPtr target, std::vector<GroupWord> images) {
  if (images.size() != source->generator_count())
    throw Error(ErrorCode::SizeMismatch, "one image per source generator is required");
  for (const auto& w : images)
    if (w.size() != target->generator_count()) throw Error(ErrorCode::SizeMismatch, "image over wrong generator set");
  const std::size_t r = target->coordinate_count();
  std::vector<std::vector<Integer>> coords;
  coords.reserve(images.size());
  for (const auto& w : images) coords.push_back(target->normal_form(w));
  const auto& moduli = target->coordinate_moduli();
  const auto& relations = source->relations();
  for (std::size_t idx = 0; idx < relations.size(); ++idx) {
    std::vector<Integer> x(r);
    for (const auto& [i, c] : relations[idx].terms())
      for (std::size_t k = 0; k < r; ++k)
        if (coords[i][k] != 0) x[k] += coords[i][k] * static_cast<long>(c);
    for (std::size_t k = 0; k < r; ++k) {
      Integer v = moduli[k] == 0 ? x[k] : mod_floor(x[k], moduli[k]);
      if (v != 0)
        throw RelationNotPreserved(idx, "relation " + relations[idx].to_string() + " does not map to zero");
    }
  }
  return GroupHom(std::move(source), std::move(target), std::move(images));
}

GroupHom GroupHom::identity(GroupPtr group) {
  std::vector<GroupWord> images;
  for (std::size_t i = 0; i < group->generator_count(); ++i) images.push_back(group->generator(i));
  return GroupHom(group, group, std::move(images));
}

GroupHom GroupHom::zero(GroupPtr source, GroupPtr target) {
  std::vector<GroupWord> images(source->generator_count(), target->zero());
  return GroupHom(std::move(source), std::move(target), std::move(images));
}

GroupWord GroupHom::apply(const GroupWord& w) const {
  if (w.size() != source_->generator_count()) throw Error(ErrorCode::SizeMismatch, "word not in hom source");
  GroupWord out = target_->zero();
  for (const auto& [i, c] : w.terms()) out.add_scaled(images_[i], c);
  return out;
}

GroupHom GroupHom::then(const GroupHom& next) const {
  if (next.source_.get() != target_.get() &&
      !(next.source_->generator_count() == target_->generator_count() &&
        next.source_->relations() == target_->relations()))
    throw Error(ErrorCode::SizeMismatch, "composition of non-composable homs");
  std::vector<GroupWord> images;
  images.reserve(images_.size());
  for (const auto& w : images_) images.push_back(next.apply(w));
  return GroupHom(source_, next.target_, std::move(images));
}

bool GroupHom::equals(const GroupHom& other) const {
  if (images_.size() != other.images_.size()) return false;
  if (target_->generator_count() != other.target_->generator_count()) return false;
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (!target_->equal(images_[i], other.images_[i])) return false;
  return true;
}

std::vector<std::vector<Integer>> GroupHom::coordinate_matrix() const {
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < source_->coordinate_count(); ++i)
    rows.push_back(target_->normal_form(apply(source_->coordinate_generator(i))));
  return rows;
}

// ---------------------------------------------------------------------------
// Kernel and image solving

Kernel::Kernel(const GroupHom& h) {
  const FpAbelianGroup& src = *h.source();
  const FpAbelianGroup& dst = *h.target();
  const std::size_t rs = src.coordinate_count();
  const std::size_t rt = dst.coordinate_count();
  const auto& src_moduli = src.coordinate_moduli();
  const auto& dst_moduli = dst.coordinate_moduli();
  auto t = h.coordinate_matrix();

  // Left kernel of [T ; D_target] projected to the source coordinates spans the
  // preimage lattice L of zero in Z^rs.
  std::size_t dst_torsion = 0;
  for (const auto& d : dst_moduli)
    if (d != 0) ++dst_torsion;
  IntMatrix m(rs + dst_torsion, rt);
  for (std::size_t i = 0; i < rs; ++i)
    for (std::size_t j = 0; j < rt; ++j) m(i, j) = t[i][j];
  for (std::size_t j = 0, row = rs; j < rt; ++j)
    if (dst_moduli[j] != 0) m(row++, j) = dst_moduli[j];
  EchelonForm e = echelon_with_transform(m);
  Integer exponent = 1;
  for (const auto& d : src_moduli) exponent = d == 0 ? Integer(0) : Integer(lcm(exponent, d));
  LatticeBasis lattice = exponent > 0 ? LatticeBasis(rs, exponent) : LatticeBasis(rs);
  for (std::size_t i = e.pivot_cols.size(); i < m.rows(); ++i) {
    std::vector<Integer> v(rs);
    for (std::size_t j = 0; j < rs; ++j) v[j] = e.U(i, j);
    lattice.insert(std::move(v));
  }
  auto basis = lattice.basis();
  const std::size_t q = basis.size();

  // Relations of L / D_source in the basis of L.
  std::vector<GroupWord> relations;
  if (q > 0) {
    LatticeSolver in_basis(basis, std::vector<Integer>(rs, Integer(0)));
    for (std::size_t i = 0; i < rs; ++i) {
      if (src_moduli[i] == 0) continue;
      std::vector<Integer> target(rs);
      target[i] = src_moduli[i];
      auto c = in_basis.solve(target);
      if (!c) throw Error(ErrorCode::InvalidArgument, "source torsion relation outside kernel lattice");
      std::vector<std::pair<std::size_t, Integer>> terms;
      for (std::size_t k = 0; k < q; ++k) terms.emplace_back(k, (*c)[k]);
      relations.push_back(word_from_integers(q, terms));
    }
  }
  auto raw = FpAbelianGroup::make(q, std::move(relations));
  group_ = FpAbelianGroup::cyclic_sum(raw->invariant_factors(), raw->free_rank());

  std::vector<GroupWord> images;
  std::vector<std::vector<Integer>> image_coords;
  for (std::size_t k = 0; k < raw->coordinate_count(); ++k) {
    std::vector<Integer> x(rs);
    for (const auto& [b, c] : raw->coordinate_generator(k).terms())
      for (std::size_t j = 0; j < rs; ++j) x[j] += basis[b][j] * static_cast<long>(c);
    for (std::size_t j = 0; j < rs; ++j)
      if (src_moduli[j] != 0) x[j] = mod_floor(x[j], src_moduli[j]);
    images.push_back(src.from_coordinates(x));
    image_coords.push_back(std::move(x));
  }
  inclusion_ = GroupHom::make(group_, h.source(), std::move(images));
  solver_.emplace(image_coords, src_moduli);
}

std::optional<GroupWord> Kernel::lift(const GroupWord& source_element) const {
  auto x = inclusion_->target()->normal_form(source_element);
  auto c = solver_->solve(x);
  if (!c) return std::nullopt;
  const auto& moduli = group_->coordinate_moduli();
  std::vector<std::pair<std::size_t, Integer>> terms;
  for (std::size_t k = 0; k < c->size(); ++k)
    terms.emplace_back(k, moduli[k] == 0 ? (*c)[k] : mod_floor((*c)[k], moduli[k]));
  return word_from_integers(group_->generator_count(), terms);
}

ImageSolver::ImageSolver(const GroupHom& h)
    : source_(h.source()), target_(h.target()), solver_(h.coordinate_matrix(), h.target()->coordinate_moduli()) {}

std::optional<GroupWord> ImageSolver::preimage(const GroupWord& target_element) const {
  auto c = solver_.solve(target_->normal_form(target_element));
  if (!c) return std::nullopt;
  return source_->from_coordinates(*c);
}

// ---------------------------------------------------------------------------

bool is_isomorphic(const FpAbelianGroup& a, const FpAbelianGroup& b) {
  return a.invariant_factors() == b.invariant_factors() && a.free_rank() == b.free_rank();
}

GroupPtr direct_sum(const std::vector<GroupPtr>& parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p->generator_count();
  std::vector<GroupWord> relations;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (const auto& r : p->relations()) {
      std::vector<GroupWord::Term> terms;
      for (const auto& [i, c] : r.terms()) terms.emplace_back(i + offset, c);
      relations.emplace_back(total, std::move(terms));
    }
    offset += p->generator_count();
  }
  return FpAbelianGroup::make(total, std::move(relations));
}

bool mult_by_m_is_bijective(const FpAbelianGroup& g, const Integer& m) {
  if (g.free_rank() > 0) throw Error(ErrorCode::InfiniteGroup, "multiplication map on an infinite group");
  for (const auto& d : g.invariant_factors()) {
    Integer gcd;
    mpz_gcd(gcd.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t());
    if (gcd != 1) return false;
  }
  return true;
}

bool is_bijective(const GroupHom& h) {
  Kernel k(h);
  if (!k.group()->is_trivial()) return false;
  ImageSolver image(h);
  for (std::size_t i = 0; i < h.target()->coordinate_count(); ++i)
    if (!image.preimage(h.target()->coordinate_generator(i))) return false;
  return true;
}

std::string factors_to_string(const std::vector<Integer>& factors, std::size_t free_rank) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < factors.size(); ++i) out << (i ? ", " : "") << factors[i].get_str();
  out << ']';
  if (free_rank > 0) out << " + Z^" << free_rank;
  return out.str();
}

}  // namespace mtk
