#include "mtk/milnor.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mtk/errors.hpp"

namespace mtk {

namespace {

std::vector<std::int64_t> prime_factors(std::int64_t m) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      out.push_back(p);
      while (m % p == 0) m /= p;
    }
  if (m > 1) out.push_back(m);
  return out;
}

bool is_power_of(std::int64_t x, std::int64_t p) {
  while (x % p == 0) x /= p;
  return x == 1;
}

}  // namespace

UnitGroupData::UnitGroupData(std::shared_ptr<const Ring> ring) : ring_(std::move(ring)) {
  const Ring& r = *ring_;
  const std::size_t one = r.index_of(r.one());
  const auto& units = r.unit_indices();
  auto mul = [&](std::size_t x, std::size_t y) { return r.mul_index(x, y); };
  auto pow = [&](std::size_t x, std::int64_t e) {
    std::size_t acc = one;
    for (std::int64_t i = 0; i < e; ++i) acc = mul(acc, x);
    return acc;
  };

  std::vector<std::int64_t> order(r.size(), 0);
  for (std::size_t u : units) {
    std::int64_t k = 1;
    for (std::size_t p = u; p != one; p = mul(p, u)) ++k;
    order[u] = k;
  }

  // Parts: order prime to the characteristic, then one p-part per prime p | char.
  const auto wild = prime_factors(r.characteristic());
  std::vector<std::vector<std::size_t>> parts(1 + wild.size());
  for (std::size_t u : units) {
    if (u == one) continue;
    bool tame = std::all_of(wild.begin(), wild.end(), [&](std::int64_t p) { return order[u] % p != 0; });
    if (tame) {
      parts[0].push_back(u);
      continue;
    }
    for (std::size_t i = 0; i < wild.size(); ++i)
      if (is_power_of(order[u], wild[i])) parts[i + 1].push_back(u);
  }

  for (const auto& part : parts) {
    std::vector<char> in_h(r.size(), 0);
    std::vector<std::size_t> h{one};
    in_h[one] = 1;
    while (h.size() < part.size() + 1) {  // part lists non-identity elements
      // Element of maximal order modulo H, smallest index first.
      std::size_t best = one;
      std::int64_t best_e = 0;
      for (std::size_t y : part) {
        std::int64_t e = 1;
        for (std::size_t p = y; !in_h[p]; p = mul(p, y)) ++e;
        if (e > best_e) {
          best_e = e;
          best = y;
        }
      }
      // Smallest-index representative of the coset yH with y'^e = 1 spans a complement.
      std::size_t chosen = r.size();
      for (std::size_t c : h) {
        std::size_t cand = mul(best, c);
        if (cand < chosen && pow(cand, best_e) == one) chosen = cand;
      }
      if (chosen == r.size()) throw Error(ErrorCode::InvalidArgument, "unit group decomposition failed");
      basis_.push_back(chosen);
      orders_.push_back(best_e);
      std::vector<std::size_t> grown;
      grown.reserve(h.size() * static_cast<std::size_t>(best_e));
      for (std::size_t x : h) {
        std::size_t p = x;
        for (std::int64_t i = 0; i < best_e; ++i) {
          grown.push_back(p);
          in_h[p] = 1;
          p = mul(p, chosen);
        }
      }
      h = std::move(grown);
    }
  }

  // Discrete-log table by enumerating all exponent vectors.
  const std::size_t t = basis_.size();
  table_.assign(r.size() * t, -1);
  std::vector<char> seen(r.size(), 0);
  std::vector<std::int64_t> e(t, 0);
  std::vector<std::size_t> prefix(t + 1, one);  // prefix[i] = prod_{j<i} g_j^{e_j}
  std::size_t visited = 0;
  while (true) {
    for (std::size_t i = 0; i < t; ++i) prefix[i + 1] = mul(prefix[i], pow(basis_[i], e[i]));
    std::size_t u = prefix[t];
    if (seen[u]) throw Error(ErrorCode::InvalidArgument, "unit basis is not independent");
    seen[u] = 1;
    ++visited;
    std::copy(e.begin(), e.end(), table_.begin() + static_cast<std::ptrdiff_t>(u * t));
    std::size_t i = t;
    while (i > 0 && ++e[i - 1] == orders_[i - 1]) e[--i] = 0;
    if (i == 0) break;
  }
  if (visited != units.size()) throw Error(ErrorCode::InvalidArgument, "discrete-log table is not total");
}

std::vector<std::int64_t> UnitGroupData::exponents(std::size_t carrier_index) const {
  if (carrier_index >= ring_->size() || !ring_->is_unit_index(carrier_index))
    throw Error(ErrorCode::NotAUnit, "element is not a unit");
  const std::size_t t = basis_.size();
  auto first = table_.begin() + static_cast<std::ptrdiff_t>(carrier_index * t);
  return std::vector<std::int64_t>(first, first + static_cast<std::ptrdiff_t>(t));
}

RingElement UnitGroupData::decode(const std::vector<std::int64_t>& exponents) const {
  if (exponents.size() != basis_.size()) throw Error(ErrorCode::SizeMismatch, "exponent vector has wrong length");
  RingElement u = ring_->one();
  for (std::size_t i = 0; i < basis_.size(); ++i)
    u = ring_->mul(u, ring_->pow(ring_->element(basis_[i]), static_cast<std::uint64_t>(mod_floor(exponents[i], orders_[i]))));
  return u;
}

// ---------------------------------------------------------------------------
// KGroup

namespace {

// Adds prod_j vectors[j][i_j] * gen(i_1..i_n) over all index tuples with nonzero entries.
void expand_tensor(const std::vector<const std::vector<std::int64_t>*>& vectors, std::size_t t,
                   std::vector<GroupWord::Term>& out, std::int64_t scale = 1) {
  const std::size_t n = vectors.size();
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> nz(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < t; ++i)
      if ((*vectors[j])[i] != 0) nz[j].emplace_back(i, (*vectors[j])[i]);
    if (nz[j].empty()) return;
  }
  std::vector<std::size_t> pos(n, 0);
  while (true) {
    std::size_t index = 0;
    std::int64_t c = scale;
    for (std::size_t j = 0; j < n; ++j) {
      index = index * t + nz[j][pos[j]].first;
      c = checked_mul(c, nz[j][pos[j]].second);
    }
    out.emplace_back(index, c);
    std::size_t j = n;
    while (j > 0 && ++pos[j - 1] == nz[j - 1].size()) pos[--j] = 0;
    if (j == 0) break;
  }
}

}  // namespace

std::shared_ptr<const KGroup> KGroup::make(std::shared_ptr<const Ring> ring, std::size_t n,
                                           std::size_t generator_bound, SteinbergSlots slots) {
  std::shared_ptr<KGroup> k(new KGroup());
  k->ring_ = ring;
  k->n_ = n;
  k->units_ = std::make_shared<const UnitGroupData>(ring);
  const UnitGroupData& ud = *k->units_;
  const std::size_t t = ud.rank();
  if (n == 0) {
    k->group_ = FpAbelianGroup::make(1, {});
    return k;
  }
  std::size_t gens = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (t != 0 && gens > generator_bound / t)
      throw Error(ErrorCode::TensorTooLarge, "tensor power exceeds generator bound");
    gens *= t;
  }

  std::vector<GroupWord> relations;
  // Order relations: d_{i_j} * (i_1, ..., i_n) = 0.
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t j = n; j-- > 1;) stride[j - 1] = stride[j] * t;
  for (std::size_t g = 0; g < gens; ++g)
    for (std::size_t j = 0; j < n; ++j)
      relations.push_back(GroupWord::generator(gens, g, ud.orders()[(g / stride[j]) % t]));

  // Steinberg relations.
  const Ring& r = *ring;
  std::vector<std::vector<std::int64_t>> fillers;
  if (slots == SteinbergSlots::BasisOnly) {
    for (std::size_t i = 0; i < t; ++i) {
      std::vector<std::int64_t> e(t, 0);
      e[i] = 1;
      fillers.push_back(std::move(e));
    }
  } else {
    for (std::size_t u : r.unit_indices()) fillers.push_back(ud.exponents(u));
  }
  const RingElement one = r.one();
  if (n >= 2) {
    for (std::size_t u : r.unit_indices()) {
      const RingElement x = r.element(u);
      const std::size_t complement = r.index_of(r.sub(one, x));
      if (!r.is_unit_index(complement)) continue;
      ++k->steinberg_pairs_;
      const auto ex = ud.exponents(u);
      const auto ec = ud.exponents(complement);
      const std::size_t others = n - 2;
      std::size_t combos = 1;
      for (std::size_t i = 0; i < others; ++i) combos *= fillers.size();
      for (std::size_t j = 0; j + 1 < n; ++j)
        for (std::size_t c = 0; c < combos; ++c) {
          std::vector<const std::vector<std::int64_t>*> vecs(n);
          std::size_t rest = c;
          for (std::size_t slot = n; slot-- > 0;) {
            if (slot == j) {
              vecs[slot] = &ex;
            } else if (slot == j + 1) {
              vecs[slot] = &ec;
            } else {
              vecs[slot] = &fillers[rest % fillers.size()];
              rest /= fillers.size();
            }
          }
          std::vector<GroupWord::Term> terms;
          expand_tensor(vecs, t, terms);
          relations.emplace_back(gens, std::move(terms));
        }
    }
  }
  k->group_ = FpAbelianGroup::make(gens, std::move(relations));
  return k;
}

GroupWord KGroup::symbol(const std::vector<RingElement>& r) const {
  if (r.size() != n_) throw Error(ErrorCode::SizeMismatch, "symbol length does not match the degree");
  const std::size_t gens = group_->generator_count();
  if (n_ == 0) return GroupWord::generator(gens, 0);
  std::vector<std::vector<std::int64_t>> e;
  e.reserve(n_);
  for (const auto& x : r) {
    auto inv = ring_->try_invert(x);
    if (!inv) throw Error(ErrorCode::NotAUnit, ring_->element_to_string(x) + " is not a unit");
    e.push_back(units_->exponents(x));
  }
  std::vector<const std::vector<std::int64_t>*> vecs;
  for (const auto& v : e) vecs.push_back(&v);
  std::vector<GroupWord::Term> terms;
  expand_tensor(vecs, units_->rank(), terms);
  return GroupWord(gens, std::move(terms));
}

std::vector<std::size_t> KGroup::generator_units(std::size_t index) const {
  std::vector<std::size_t> out(n_);
  const std::size_t t = units_->rank();
  for (std::size_t j = n_; j-- > 0;) {
    out[j] = units_->basis()[index % t];
    index /= t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// TangentK

std::shared_ptr<const TangentK> TangentK::make(std::shared_ptr<const Ring> base, std::size_t degree,
                                               std::size_t generator_bound) {
  std::shared_ptr<TangentK> tk(new TangentK());
  tk->base_ = base;
  tk->dual_ = Ring::dual_of(base);
  tk->degree_ = degree;
  tk->dual_k_ = KGroup::make(tk->dual_, degree, generator_bound);
  tk->base_k_ = KGroup::make(base, degree, generator_bound);
  const Ring& dual = *tk->dual_;
  std::vector<GroupWord> images;
  const GroupPtr& g = tk->dual_k_->group();
  for (std::size_t i = 0; i < g->generator_count(); ++i) {
    std::vector<RingElement> pushed;
    for (std::size_t u : tk->dual_k_->generator_units(i)) pushed.push_back(dual_plain_part(dual, dual.element(u)));
    images.push_back(tk->base_k_->symbol(pushed));
  }
  tk->augmentation_ = GroupHom::make(g, tk->base_k_->group(), std::move(images));
  tk->kernel_.emplace(*tk->augmentation_);
  return tk;
}

GroupWord TangentK::symbol(const std::vector<RingElement>& dual_units) const {
  auto w = lift(dual_k_->symbol(dual_units));
  if (!w) throw Error(ErrorCode::InvalidArgument, "symbol does not lie in the tangent space");
  return *w;
}

GroupWord TangentK::special_symbol(const RingElement& s, const std::vector<RingElement>& r) const {
  if (r.size() + 1 != degree_) throw Error(ErrorCode::SizeMismatch, "special symbol has the wrong length");
  const Ring& b = *base_;
  const Ring& d = *dual_;
  RingElement prod = s;
  for (const auto& x : r) prod = b.mul(prod, x);
  std::vector<RingElement> entries{dual_compose(d, b.one(), prod)};
  for (const auto& x : r) entries.push_back(dual_compose(d, x, b.zero()));
  return symbol(entries);
}

bool TangentK::decomposition_holds() const {
  return is_isomorphic(*dual_k_->group(), *direct_sum({base_k_->group(), group()}));
}

GroupHom TangentK::scaling_action(const RingElement& a) const {
  const RingMap sigma = scaling_endo(dual_, a);
  const GroupPtr& g = dual_k_->group();
  std::vector<GroupWord> tensor_images;
  for (std::size_t i = 0; i < g->generator_count(); ++i) {
    std::vector<RingElement> moved;
    for (std::size_t u : dual_k_->generator_units(i)) moved.push_back(sigma(dual_->element(u)));
    tensor_images.push_back(dual_k_->symbol(moved));
  }
  std::vector<GroupWord> images;
  for (const auto& w : inclusion().images()) {
    GroupWord x = g->zero();
    for (const auto& [i, c] : w.terms()) x.add_scaled(tensor_images[i], c);
    auto lifted = lift(x);
    if (!lifted) throw Error(ErrorCode::InvalidArgument, "scaling does not preserve the tangent space");
    images.push_back(*lifted);
  }
  return GroupHom::make(group(), group(), std::move(images));
}

bool TangentK::special_symbols_generate() const {
  const GroupPtr& tk = group();
  const auto& moduli = tk->coordinate_moduli();
  const std::size_t dim = moduli.size();
  if (dim == 0) return true;
  LatticeBasis lattice(dim);
  for (std::size_t i = 0; i < dim; ++i)
    if (moduli[i] != 0) {
      std::vector<Integer> v(dim);
      v[i] = moduli[i];
      lattice.insert(std::move(v));
    }
  const Ring& b = *base_;
  const auto& units = b.unit_indices();
  const std::size_t m = degree_ - 1;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < m; ++i) combos *= units.size();
  for (std::size_t s = 0; s < b.size(); ++s)
    for (std::size_t c = 0; c < combos; ++c) {
      std::vector<RingElement> r(m);
      std::size_t rest = c;
      for (std::size_t i = m; i-- > 0;) {
        r[i] = b.element(units[rest % units.size()]);
        rest /= units.size();
      }
      lattice.insert(tk->normal_form(special_symbol(b.element(s), r)));
    }
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<Integer> e(dim);
    e[i] = 1;
    if (!lattice.contains(e)) return false;
  }
  return true;
}

}  // namespace mtk
