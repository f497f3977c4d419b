#include "mtk/differentials.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mtk/errors.hpp"
#include "mtk/stability.hpp"

namespace mtk {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Carrier-index arithmetic with dense tables for small rings.
class IndexArithmetic {
 public:
  explicit IndexArithmetic(const Ring& ring) : ring_(ring), n_(ring.size()) {
    if (n_ <= kTableLimit) {
      add_.resize(n_ * n_);
      mul_.resize(n_ * n_);
      for (std::size_t x = 0; x < n_; ++x)
        for (std::size_t y = x; y < n_; ++y) {
          add_[x * n_ + y] = add_[y * n_ + x] = static_cast<std::uint32_t>(ring.add_index(x, y));
          mul_[x * n_ + y] = mul_[y * n_ + x] = static_cast<std::uint32_t>(ring.mul_index(x, y));
        }
    }
  }

  std::size_t add(std::size_t x, std::size_t y) const {
    return add_.empty() ? ring_.add_index(x, y) : add_[x * n_ + y];
  }
  std::size_t mul(std::size_t x, std::size_t y) const {
    return mul_.empty() ? ring_.mul_index(x, y) : mul_[x * n_ + y];
  }

 private:
  static constexpr std::size_t kTableLimit = 512;
  const Ring& ring_;
  std::size_t n_;
  std::vector<std::uint32_t> add_;
  std::vector<std::uint32_t> mul_;
};

std::vector<std::vector<std::size_t>> increasing_subsets(std::size_t k, std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  if (n > k) return out;
  std::vector<std::size_t> cur(n);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = n;
    while (i > 0 && cur[i - 1] == k - n + (i - 1)) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < n; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Determinant over a commutative ring by permutation expansion (n is small).
RingElement determinant(const Ring& ring, const std::vector<std::vector<RingElement>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  RingElement total = ring.zero();
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    RingElement term = ring.one();
    for (std::size_t i = 0; i < n; ++i) term = ring.mul(term, m[i][perm[i]]);
    total = inversions % 2 ? ring.sub(total, term) : ring.add(total, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

void require_half(const Ring& dual) {
  if (!dual.is_dual()) throw Error(ErrorCode::NotDualRing, dual.spec().to_string() + " is not a dual-number ring");
  if (!dual.base()->has_half()) throw Error(ErrorCode::NoHalf, "2 is not a unit in " + dual.base()->spec().to_string());
}

}  // namespace

const char* omega_policy_name(OmegaPolicy policy) noexcept {
  switch (policy) {
    case OmegaPolicy::AllElements: return "all-elements";
    case OmegaPolicy::UnitsOnly: return "units-only";
    case OmegaPolicy::Compact: return "compact";
  }
  return "unknown";
}

std::shared_ptr<const OmegaGroup> OmegaGroup::make(std::shared_ptr<const Ring> ring, std::size_t n,
                                                   OmegaPolicy policy, std::size_t generator_bound) {
  std::shared_ptr<OmegaGroup> g(new OmegaGroup());
  g->ring_ = std::move(ring);
  g->n_ = n;
  g->policy_ = policy;
  if (policy == OmegaPolicy::Compact)
    g->build_compact();
  else
    g->build_tuple(generator_bound);
  return g;
}

std::size_t OmegaGroup::tuple_index(std::size_t s, const std::vector<std::size_t>& r) const {
  std::size_t idx = s;
  for (std::size_t v : r) {
    const std::size_t p = position_.at(v);
    if (p == kNone) throw Error(ErrorCode::NotAUnit, "slot entry is not a unit");
    idx = idx * alphabet_.size() + p;
  }
  return idx;
}

void OmegaGroup::build_tuple(std::size_t generator_bound) {
  const Ring& ring = *ring_;
  const std::size_t size = ring.size();
  if (policy_ == OmegaPolicy::AllElements) {
    alphabet_.resize(size);
    std::iota(alphabet_.begin(), alphabet_.end(), 0);
  } else {
    alphabet_ = ring.unit_indices();
  }
  position_.assign(size, kNone);
  for (std::size_t p = 0; p < alphabet_.size(); ++p) position_[alphabet_[p]] = p;

  const std::size_t m = alphabet_.size();
  std::size_t tuples = 1;
  for (std::size_t i = 0; i < n_; ++i) {
    if (tuples > generator_bound / m) throw Error(ErrorCode::CarrierTooLarge, "tuple presentation exceeds generator bound");
    tuples *= m;
  }
  if (tuples > generator_bound / size)
    throw Error(ErrorCode::CarrierTooLarge, "tuple presentation exceeds generator bound");
  const std::size_t gens = size * tuples;

  IndexArithmetic ar(ring);
  const std::size_t zero = ring.index_of(ring.zero());
  std::vector<GroupWord> relations;
  auto gen = [&](std::size_t s, std::size_t t) { return s * tuples + t; };
  auto relation = [&](std::initializer_list<std::pair<std::size_t, std::int64_t>> terms) {
    relations.emplace_back(gens, std::vector<GroupWord::Term>(terms.begin(), terms.end()));
  };

  // Slot values of tuple t, first slot most significant.
  std::vector<std::size_t> stride(n_, 1);
  for (std::size_t i = n_; i-- > 1;) stride[i - 1] = stride[i] * m;
  auto slot = [&](std::size_t t, std::size_t i) { return (t / stride[i]) % m; };
  auto with_slot = [&](std::size_t t, std::size_t i, std::size_t v) { return t - slot(t, i) * stride[i] + v * stride[i]; };

  // (a) additivity in the coefficient
  for (std::size_t s = 0; s < size; ++s)
    for (std::size_t s2 = s; s2 < size; ++s2) {
      const std::size_t sum = ar.add(s, s2);
      for (std::size_t t = 0; t < tuples; ++t) relation({{gen(sum, t), 1}, {gen(s, t), -1}, {gen(s2, t), -1}});
    }

  for (std::size_t s = 0; s < size; ++s)
    for (std::size_t t = 0; t < tuples; ++t)
      for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t v = slot(t, i);
        const std::size_t r = alphabet_[v];
        for (std::size_t w = v; w < m; ++w) {
          const std::size_t r2 = alphabet_[w];
          // (b) additivity in slot i; under UnitsOnly only when the sum is a unit or zero
          const std::size_t sum = ar.add(r, r2);
          if (position_[sum] != kNone)
            relation({{gen(s, with_slot(t, i, position_[sum])), 1}, {gen(s, t), -1}, {gen(s, with_slot(t, i, w)), -1}});
          else if (sum == zero)
            relation({{gen(s, t), 1}, {gen(s, with_slot(t, i, w)), 1}});
          // (c) Leibniz in slot i
          const std::size_t prod = ar.mul(r, r2);
          relation({{gen(s, with_slot(t, i, position_[prod])), 1},
                    {gen(ar.mul(s, r), with_slot(t, i, w)), -1},
                    {gen(ar.mul(s, r2), t), -1}});
        }
        // (d) alternating on adjacent slots
        if (i + 1 < n_) {
          const std::size_t v2 = slot(t, i + 1);
          if (v == v2) {
            relation({{gen(s, t), 1}});
          } else if (v < v2) {
            std::size_t swapped = with_slot(with_slot(t, i, v2), i + 1, v);
            relation({{gen(s, t), 1}, {gen(s, swapped), 1}});
          }
        }
      }
  group_ = FpAbelianGroup::make(gens, std::move(relations));
}

void OmegaGroup::build_compact() {
  const Ring& ring = *ring_;
  const std::size_t k = ring.variable_count();
  const std::size_t rank = ring.rank();
  subsets_ = increasing_subsets(k, n_);
  const std::size_t count = subsets_.size();
  const std::size_t gens = rank * count;
  auto subset_index = [&](const std::vector<std::size_t>& subset) {
    return static_cast<std::size_t>(std::lower_bound(subsets_.begin(), subsets_.end(), subset) - subsets_.begin());
  };
  std::vector<GroupWord> relations;
  for (std::size_t g = 0; g < gens; ++g) relations.push_back(GroupWord::generator(gens, g, ring.characteristic()));
  if (n_ > 0) {
    for (std::size_t j = 0; j < k; ++j) {
      const RingElement fprime = ring.modulus_derivative(j);
      for (const auto& rest : increasing_subsets(k, n_ - 1)) {
        if (std::find(rest.begin(), rest.end(), j) != rest.end()) continue;
        std::vector<std::size_t> full = rest;
        full.insert(std::upper_bound(full.begin(), full.end(), j), j);
        const std::size_t before = static_cast<std::size_t>(std::count_if(rest.begin(), rest.end(), [j](std::size_t x) { return x < j; }));
        const std::int64_t sign = before % 2 ? -1 : 1;
        const std::size_t idx = subset_index(full);
        for (std::size_t mu = 0; mu < rank; ++mu) {
          RingElement c = ring.mul(ring.monomial(mu), fprime);
          std::vector<GroupWord::Term> terms;
          for (std::size_t b = 0; b < rank; ++b)
            if (c[b] != 0) terms.emplace_back(b * count + idx, sign * c[b]);
          relations.emplace_back(gens, std::move(terms));
        }
      }
    }
  }
  group_ = FpAbelianGroup::make(gens, std::move(relations));
}

GroupWord OmegaGroup::encode(const RingElement& s, const std::vector<RingElement>& r) const {
  if (r.size() != n_) throw Error(ErrorCode::SizeMismatch, "form degree does not match the group");
  const Ring& ring = *ring_;
  const std::size_t gens = group_->generator_count();
  if (policy_ != OmegaPolicy::Compact) {
    std::vector<std::size_t> idx;
    idx.reserve(n_);
    for (const auto& x : r) idx.push_back(ring.index_of(x));
    return GroupWord::generator(gens, tuple_index(ring.index_of(s), idx));
  }
  const std::size_t count = subsets_.size();
  GroupWord w(gens);
  if (count == 0) return w;
  std::vector<std::vector<RingElement>> partials;
  partials.reserve(n_);
  for (const auto& x : r) partials.push_back(ring.partial_derivatives(x));
  std::vector<GroupWord::Term> terms;
  for (std::size_t idx = 0; idx < count; ++idx) {
    const auto& subset = subsets_[idx];
    std::vector<std::vector<RingElement>> m(n_, std::vector<RingElement>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t t = 0; t < n_; ++t) m[i][t] = partials[i][subset[t]];
    RingElement c = ring.mul(s, n_ == 0 ? ring.one() : determinant(ring, m));
    for (std::size_t b = 0; b < ring.rank(); ++b)
      if (c[b] != 0) terms.emplace_back(b * count + idx, c[b]);
  }
  return GroupWord(gens, std::move(terms));
}

FormTerm OmegaGroup::generator_form(std::size_t index) const {
  const Ring& ring = *ring_;
  FormTerm f;
  if (policy_ != OmegaPolicy::Compact) {
    const std::size_t m = alphabet_.size();
    std::vector<std::size_t> slots(n_);
    for (std::size_t i = n_; i-- > 0;) {
      slots[i] = alphabet_[index % m];
      index /= m;
    }
    f.s = ring.element(index);
    for (std::size_t v : slots) f.r.push_back(ring.element(v));
    return f;
  }
  const std::size_t count = subsets_.size();
  f.s = ring.monomial(index / count);
  for (std::size_t j : subsets_[index % count]) f.r.push_back(ring.variable(j));
  return f;
}

std::string OmegaGroup::generator_to_string(std::size_t index) const {
  const FormTerm f = generator_form(index);
  std::ostringstream out;
  out << ring_->element_to_string(f.s);
  for (std::size_t i = 0; i < f.r.size(); ++i) out << (i ? " ^ d(" : " d(") << ring_->element_to_string(f.r[i]) << ')';
  return out.str();
}

GroupHom encode_hom(const OmegaPtr& source, const OmegaPtr& target) {
  std::vector<GroupWord> images;
  images.reserve(source->generator_count());
  for (std::size_t g = 0; g < source->generator_count(); ++g) {
    FormTerm f = source->generator_form(g);
    images.push_back(target->encode(f.s, f.r) * f.coefficient);
  }
  return GroupHom::make(source->group(), target->group(), std::move(images));
}

PolicyComparison compare_policies(const std::shared_ptr<const Ring>& ring, std::size_t n, std::size_t generator_bound) {
  PolicyComparison out;
  if (!check_weak_stability(*ring, 2).holds) {
    out.skipped = true;
    return out;
  }
  auto units = OmegaGroup::make(ring, n, OmegaPolicy::UnitsOnly, generator_bound);
  auto all = OmegaGroup::make(ring, n, OmegaPolicy::AllElements, generator_bound);
  out.hom = encode_hom(units, all);
  out.isomorphism = is_bijective(*out.hom);
  return out;
}

DualExpansion expand_dual_form(const Ring& dual, const FormTerm& form) {
  const Ring& base = *dual.base();
  DualExpansion e;
  const RingElement s0 = dual_plain_part(dual, form.s);
  const RingElement s1 = dual_eps_part(dual, form.s);
  std::vector<RingElement> a, b;
  for (const auto& w : form.r) {
    a.push_back(dual_plain_part(dual, w));
    b.push_back(dual_eps_part(dual, w));
  }
  const std::size_t m = form.r.size();
  e.plain.push_back({form.coefficient, s0, a});
  e.eps.push_back({form.coefficient, s1, a});
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<RingElement> slots = a;
    slots[i] = b[i];
    e.eps.push_back({form.coefficient, s0, std::move(slots)});
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<RingElement> slots;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) slots.push_back(a[j]);
    const std::int64_t sign = i % 2 ? -1 : 1;
    e.deps.push_back({checked_mul(sign, form.coefficient), base.mul(s0, b[i]), std::move(slots)});
  }
  return e;
}

namespace {

enum class Component { Plain, Eps, Deps };

GroupHom project(const OmegaPtr& dual_omega, const OmegaPtr& target, Component which) {
  const Ring& dual = *dual_omega->ring();
  require_half(dual);
  if (!(target->ring()->spec() == dual.base()->spec()))
    throw Error(ErrorCode::SizeMismatch, "projection target is not over the base ring");
  const std::size_t m = dual_omega->degree();
  const std::size_t want = which == Component::Deps ? m - 1 : m;
  if ((which == Component::Deps && m == 0) || target->degree() != want)
    throw Error(ErrorCode::SizeMismatch, "projection target has the wrong degree");
  std::vector<GroupWord> images;
  images.reserve(dual_omega->generator_count());
  for (std::size_t g = 0; g < dual_omega->generator_count(); ++g) {
    DualExpansion e = expand_dual_form(dual, dual_omega->generator_form(g));
    const auto& terms = which == Component::Plain ? e.plain : which == Component::Eps ? e.eps : e.deps;
    GroupWord w = target->group()->zero();
    for (const auto& t : terms) w.add_scaled(target->encode(t.s, t.r), t.coefficient);
    images.push_back(std::move(w));
  }
  return GroupHom::make(dual_omega->group(), target->group(), std::move(images));
}

}  // namespace

GroupHom pi_plain(const OmegaPtr& dual_omega, const OmegaPtr& target) {
  return project(dual_omega, target, Component::Plain);
}

GroupHom pi_eps(const OmegaPtr& dual_omega, const OmegaPtr& target) {
  return project(dual_omega, target, Component::Eps);
}

GroupHom pi_deps(const OmegaPtr& dual_omega, const OmegaPtr& target) {
  return project(dual_omega, target, Component::Deps);
}

GroupWord dlog_word(const OmegaGroup& omega, const std::vector<RingElement>& units) {
  const Ring& ring = *omega.ring();
  RingElement s = ring.one();
  for (const auto& u : units) {
    auto inv = ring.try_invert(u);
    if (!inv) throw Error(ErrorCode::NotAUnit, ring.element_to_string(u) + " is not a unit");
    s = ring.mul(s, *inv);
  }
  return omega.encode(s, units);
}

}  // namespace mtk
