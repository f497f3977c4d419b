#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mtk/abelian.hpp"
#include "mtk/differentials.hpp"
#include "mtk/ring.hpp"

namespace mtk {

/// R^* as an abstract group: basis units g_1..g_t of orders d_1..d_t and a total
/// discrete-log table u -> (e_1..e_t) with u = prod g_i^{e_i}, 0 <= e_i < d_i.
/// The basis is the greedy maximal-order decomposition of the part of order prime
/// to the characteristic, followed by the p-parts for primes p dividing it, with
/// smallest carrier index preferred throughout.
class UnitGroupData {
 public:
  explicit UnitGroupData(std::shared_ptr<const Ring> ring);

  const std::shared_ptr<const Ring>& ring() const noexcept { return ring_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  const std::vector<std::size_t>& basis() const noexcept { return basis_; }
  const std::vector<std::int64_t>& orders() const noexcept { return orders_; }
  std::size_t order() const noexcept { return ring_->unit_indices().size(); }

  /// Exponent vector of the unit at a carrier index; Error{NotAUnit} otherwise.
  std::vector<std::int64_t> exponents(std::size_t carrier_index) const;
  std::vector<std::int64_t> exponents(const RingElement& u) const { return exponents(ring_->index_of(u)); }
  RingElement decode(const std::vector<std::int64_t>& exponents) const;

 private:
  std::shared_ptr<const Ring> ring_;
  std::vector<std::size_t> basis_;
  std::vector<std::int64_t> orders_;
  std::vector<std::int64_t> table_;  // carrier index * rank + i
};

/// Which units fill the slots not touched by a Steinberg pair.
enum class SteinbergSlots { BasisOnly, AllUnits };

/// K^M_n(R) presented on n-tuples of basis units (first slot most significant) with
/// order relations and Steinberg relations r (x) (1-r) in every adjacent slot pair.
class KGroup {
 public:
  /// Throws TensorTooLarge when t^n exceeds `generator_bound`.
  static std::shared_ptr<const KGroup> make(std::shared_ptr<const Ring> ring, std::size_t n,
                                            std::size_t generator_bound = kDefaultGeneratorBound,
                                            SteinbergSlots slots = SteinbergSlots::BasisOnly);

  const std::shared_ptr<const Ring>& ring() const noexcept { return ring_; }
  std::size_t degree() const noexcept { return n_; }
  const UnitGroupData& units() const noexcept { return *units_; }
  const GroupPtr& group() const noexcept { return group_; }

  /// {r_1, ..., r_n} by multilinear expansion. Throws NotAUnit / SizeMismatch.
  GroupWord symbol(const std::vector<RingElement>& r) const;
  /// Basis-unit carrier indices of generator `index`.
  std::vector<std::size_t> generator_units(std::size_t index) const;
  std::size_t steinberg_pair_count() const noexcept { return steinberg_pairs_; }

 private:
  KGroup() = default;

  std::shared_ptr<const Ring> ring_;
  std::size_t n_ = 0;
  std::shared_ptr<const UnitGroupData> units_;
  GroupPtr group_;
  std::size_t steinberg_pairs_ = 0;
};

using KGroupPtr = std::shared_ptr<const KGroup>;

/// TK^M_{n}(R) = ker(K^M_n(R[eps]) -> K^M_n(R)) for n = degree().
class TangentK {
 public:
  static std::shared_ptr<const TangentK> make(std::shared_ptr<const Ring> base, std::size_t degree,
                                              std::size_t generator_bound = kDefaultGeneratorBound);

  const std::shared_ptr<const Ring>& base() const noexcept { return base_; }
  const std::shared_ptr<const Ring>& dual() const noexcept { return dual_; }
  std::size_t degree() const noexcept { return degree_; }
  const KGroup& dual_k() const noexcept { return *dual_k_; }
  const KGroup& base_k() const noexcept { return *base_k_; }
  const KGroupPtr& dual_k_ptr() const noexcept { return dual_k_; }
  const KGroupPtr& base_k_ptr() const noexcept { return base_k_; }
  const GroupHom& augmentation() const noexcept { return *augmentation_; }
  const GroupPtr& group() const noexcept { return kernel_->group(); }
  const GroupHom& inclusion() const noexcept { return kernel_->inclusion(); }

  /// Kernel-side word of an element of K(R[eps]) lying in TK; nullopt otherwise.
  std::optional<GroupWord> lift(const GroupWord& dual_word) const { return kernel_->lift(dual_word); }
  /// TK word of a symbol of dual-ring units; InvalidArgument if it is not in TK.
  GroupWord symbol(const std::vector<RingElement>& dual_units) const;
  /// {1 + s r_1...r_m eps, r_1, ..., r_m} with s, r_i in the base ring (m = degree - 1).
  GroupWord special_symbol(const RingElement& s, const std::vector<RingElement>& r) const;

  /// K(R[eps]) and K(R) (+) TK have the same invariant factors.
  bool decomposition_holds() const;
  /// Endomorphism of TK induced by eps -> a*eps. Certified.
  GroupHom scaling_action(const RingElement& a) const;
  /// Whether the special symbols (s in R, r_i in R^*) generate TK.
  bool special_symbols_generate() const;

 private:
  TangentK() = default;

  std::shared_ptr<const Ring> base_;
  std::shared_ptr<const Ring> dual_;
  std::size_t degree_ = 0;
  KGroupPtr dual_k_;
  KGroupPtr base_k_;
  std::optional<GroupHom> augmentation_;
  std::optional<Kernel> kernel_;
};

using TangentKPtr = std::shared_ptr<const TangentK>;

}  // namespace mtk
