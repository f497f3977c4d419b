#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtk {

inline constexpr std::size_t kDefaultCarrierCap = 4096;

/// Carrier cap taken from MTK_CARRIER_CAP when set, kDefaultCarrierCap otherwise.
std::size_t default_carrier_cap();

/// Constructor tree of a finite commutative ring:
///   ZMod(m) | PolyQuot(base, var, monic integer polynomial) | Dual(base).
/// Dual(base) is PolyQuot(base, "eps", eps^2) with a marker so that the
/// augmentation and scaling maps know which variable is the dual one.
class RingSpec {
 public:
  enum class Kind { ZMod, PolyQuot, Dual };

  static RingSpec zmod(std::int64_t modulus);
  /// `polynomial` holds coefficients from degree 0 upward; it must be monic of degree >= 1.
  static RingSpec poly_quot(RingSpec base, std::string variable, std::vector<std::int64_t> polynomial);
  static RingSpec dual(RingSpec base);

  Kind kind() const noexcept { return kind_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  const RingSpec& base() const;
  const std::string& variable() const noexcept { return variable_; }
  const std::vector<std::int64_t>& polynomial() const noexcept { return polynomial_; }

  std::int64_t characteristic() const;
  /// Number of elements, saturating at SIZE_MAX.
  std::size_t carrier_size() const;

  /// Canonical text in the ring-spec grammar; parse_ring_spec(to_string()) == *this.
  std::string to_string() const;

  bool operator==(const RingSpec& other) const;

 private:
  RingSpec() = default;

  Kind kind_ = Kind::ZMod;
  std::int64_t modulus_ = 0;
  std::shared_ptr<const RingSpec> base_;
  std::string variable_;
  std::vector<std::int64_t> polynomial_;
};

/// Parses the grammar
///   spec := "zmod:" INT | "poly:" spec ":" NAME ":" POLY | "dual:" spec
/// Throws ParseError (with position) or Error{CarrierTooLarge}.
RingSpec parse_ring_spec(std::string_view text, std::size_t carrier_cap = default_carrier_cap());

/// Canonical coefficient vector in the monomial basis of the constructor tree.
class RingElement {
 public:
  RingElement() = default;
  explicit RingElement(std::vector<std::int64_t> coefficients) : coefficients_(std::move(coefficients)) {}

  std::span<const std::int64_t> coefficients() const noexcept { return coefficients_; }
  std::int64_t operator[](std::size_t i) const { return coefficients_[i]; }
  std::size_t rank() const noexcept { return coefficients_.size(); }

  bool operator==(const RingElement&) const = default;

 private:
  std::vector<std::int64_t> coefficients_;
};

/// A finite commutative unital ring (Z/m)[x_0,...,x_{k-1}]/(f_0(x_0),...,f_{k-1}(x_{k-1}))
/// with each f_j monic in its own variable. Elements are indexed 0..size()-1 by the
/// mixed-radix value of their coefficient vector (coefficient 0 least significant).
/// Immutable after construction; the unit table is built eagerly.
class Ring {
 public:
  static std::shared_ptr<const Ring> make(const RingSpec& spec, std::size_t carrier_cap = default_carrier_cap());
  /// R[eps] built on top of an existing ring object (shared as base()).
  static std::shared_ptr<const Ring> dual_of(std::shared_ptr<const Ring> base,
                                             std::size_t carrier_cap = default_carrier_cap());

  const RingSpec& spec() const noexcept { return spec_; }
  std::int64_t characteristic() const noexcept { return modulus_; }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t variable_count() const noexcept { return degrees_.size(); }
  const std::string& variable_name(std::size_t j) const { return names_.at(j); }
  std::size_t variable_degree(std::size_t j) const { return degrees_.at(j); }
  /// Exponent of variable j in basis monomial b.
  std::size_t monomial_exponent(std::size_t b, std::size_t j) const;
  bool is_dual() const noexcept { return spec_.kind() == RingSpec::Kind::Dual; }
  /// Ring one level down the constructor tree (nullptr for ZMod).
  const std::shared_ptr<const Ring>& base() const noexcept { return base_; }

  RingElement zero() const;
  RingElement one() const;
  RingElement from_integer(std::int64_t value) const;
  RingElement variable(std::size_t j) const;
  RingElement monomial(std::size_t basis_index) const;

  RingElement add(const RingElement& x, const RingElement& y) const;
  RingElement sub(const RingElement& x, const RingElement& y) const;
  RingElement neg(const RingElement& x) const;
  RingElement mul(const RingElement& x, const RingElement& y) const;
  RingElement scale(std::int64_t c, const RingElement& x) const;
  RingElement pow(const RingElement& x, std::uint64_t e) const;
  bool eq(const RingElement& x, const RingElement& y) const { return x == y; }

  RingElement element(std::size_t index) const;
  std::size_t index_of(const RingElement& x) const;
  /// Deterministic enumeration of the whole carrier in index order.
  std::vector<RingElement> enumerate_carrier() const;

  std::size_t add_index(std::size_t x, std::size_t y) const;
  std::size_t neg_index(std::size_t x) const;
  std::size_t sub_index(std::size_t x, std::size_t y) const;
  std::size_t mul_index(std::size_t x, std::size_t y) const;

  std::optional<RingElement> try_invert(const RingElement& x) const;
  bool is_unit(const RingElement& x) const { return is_unit_index(index_of(x)); }
  bool is_unit_index(std::size_t x) const { return inverse_[x] != kNoInverse; }
  std::optional<std::size_t> inverse_index(std::size_t x) const;
  /// Unit indices in increasing order.
  const std::vector<std::size_t>& unit_indices() const noexcept { return units_; }
  std::vector<RingElement> units() const;
  bool has_half() const;

  /// Formal partial derivatives of the canonical representative polynomial of x,
  /// one per variable. d(x) = sum_j result[j] dx_j in the free module on the dx_j.
  std::vector<RingElement> partial_derivatives(const RingElement& x) const;
  /// f_j'(x_j): the coefficient of dx_j in d(f_j).
  RingElement modulus_derivative(std::size_t j) const;

  std::string element_to_string(const RingElement& x) const;

 private:
  Ring() = default;
  void build(std::size_t carrier_cap);
  void build_units();

  static constexpr std::size_t kNoInverse = static_cast<std::size_t>(-1);

  RingSpec spec_ = RingSpec::zmod(2);
  std::shared_ptr<const Ring> base_;
  std::int64_t modulus_ = 2;
  std::size_t rank_ = 1;
  std::size_t size_ = 2;
  std::vector<std::size_t> degrees_;
  std::vector<std::size_t> strides_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::int64_t>> polynomials_;
  // products_[p * rank_ + q] = coefficient vector of monomial_p * monomial_q, sparse.
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> products_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> units_;
};

/// Structure-preserving map between rings given by a function on elements.
class RingMap {
 public:
  RingMap(std::shared_ptr<const Ring> source, std::shared_ptr<const Ring> target,
          std::function<RingElement(const RingElement&)> fn)
      : source_(std::move(source)), target_(std::move(target)), fn_(std::move(fn)) {}

  RingElement operator()(const RingElement& x) const { return fn_(x); }
  const std::shared_ptr<const Ring>& source() const noexcept { return source_; }
  const std::shared_ptr<const Ring>& target() const noexcept { return target_; }

 private:
  std::shared_ptr<const Ring> source_;
  std::shared_ptr<const Ring> target_;
  std::function<RingElement(const RingElement&)> fn_;
};

// Dual-number maps. The dual ring's elements split as a + b*eps with a, b in base();
// the coefficient vector is [a | b].
RingElement dual_plain_part(const Ring& dual, const RingElement& x);
RingElement dual_eps_part(const Ring& dual, const RingElement& x);
RingElement dual_compose(const Ring& dual, const RingElement& plain, const RingElement& eps);

/// eps -> 0. Throws Error{NotDualRing}.
RingMap augmentation_hom(const std::shared_ptr<const Ring>& dual);
/// base -> base[eps], the section of the augmentation.
RingMap base_inclusion(const std::shared_ptr<const Ring>& dual);
/// eps -> a*eps, identity on the base. Throws Error{NotDualRing}.
RingMap scaling_endo(const std::shared_ptr<const Ring>& dual, const RingElement& a);

}  // namespace mtk
