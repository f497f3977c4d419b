#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mtk/abelian.hpp"
#include "mtk/ring.hpp"

namespace mtk {

/// Upper bound on generator counts of tuple-indexed presentations.
inline constexpr std::size_t kDefaultGeneratorBound = 20000;

/// How the generators of Omega^n_R are indexed.
///  AllElements: tuples (s, r_1, ..., r_n) over the whole carrier.
///  UnitsOnly:   s over the carrier, r_i over R^*.
///  Compact:     mu * dx_I for basis monomials mu and increasing variable subsets I;
///               relations m * gen and mu * f_j'(x_j) dx_j ^ dx_{I'}.
enum class OmegaPolicy { AllElements, UnitsOnly, Compact };

const char* omega_policy_name(OmegaPolicy policy) noexcept;

/// One summand coef * s dr_1 ^ ... ^ dr_n.
struct FormTerm {
  std::int64_t coefficient = 1;
  RingElement s;
  std::vector<RingElement> r;
};

class OmegaGroup {
 public:
  /// Throws CarrierTooLarge when a tuple policy would exceed `generator_bound`.
  static std::shared_ptr<const OmegaGroup> make(std::shared_ptr<const Ring> ring, std::size_t n, OmegaPolicy policy,
                                                std::size_t generator_bound = kDefaultGeneratorBound);

  const std::shared_ptr<const Ring>& ring() const noexcept { return ring_; }
  std::size_t degree() const noexcept { return n_; }
  OmegaPolicy policy() const noexcept { return policy_; }
  const GroupPtr& group() const noexcept { return group_; }
  std::size_t generator_count() const { return group_->generator_count(); }

  /// Word for s dr_1 ^ ... ^ dr_n. Tuple policies need each r_i in the index set
  /// (NotAUnit for a non-unit slot under UnitsOnly); Compact accepts anything.
  GroupWord encode(const RingElement& s, const std::vector<RingElement>& r) const;
  /// The form s dr_1 ^ ... ^ dr_n a generator stands for.
  FormTerm generator_form(std::size_t index) const;
  std::string generator_to_string(std::size_t index) const;

  /// Tuple policies: generator index of (s, r) given carrier indices.
  std::size_t tuple_index(std::size_t s, const std::vector<std::size_t>& r) const;

 private:
  OmegaGroup() = default;
  void build_tuple(std::size_t generator_bound);
  void build_compact();

  std::shared_ptr<const Ring> ring_;
  std::size_t n_ = 0;
  OmegaPolicy policy_ = OmegaPolicy::Compact;
  GroupPtr group_;
  // Tuple policies: slot alphabet (carrier indices) and its inverse.
  std::vector<std::size_t> alphabet_;
  std::vector<std::size_t> position_;
  // Compact policy: increasing variable subsets of size n.
  std::vector<std::vector<std::size_t>> subsets_;
};

using OmegaPtr = std::shared_ptr<const OmegaGroup>;

/// Hom sending every generator of `source` to target.encode(its form). Certified.
GroupHom encode_hom(const OmegaPtr& source, const OmegaPtr& target);

struct PolicyComparison {
  bool skipped = false;  // ring not weakly 2-fold stable
  std::optional<GroupHom> hom;
  bool isomorphism = false;
};

/// Units-only -> all-elements comparison. Skipped (not thrown) when the ring is not
/// weakly 2-fold stable.
PolicyComparison compare_policies(const std::shared_ptr<const Ring>& ring, std::size_t n,
                                  std::size_t generator_bound = kDefaultGeneratorBound);

/// Components of Omega^{m}_{R[eps]} with respect to the decomposition
///   Omega^m_R (+) eps Omega^m_R (+) d(eps) ^ Omega^{m-1}_R.
/// `dual_omega` may use any policy; targets must be over the base ring with the
/// matching degree. All throw NoHalf when 2 is not a unit of the base.
GroupHom pi_plain(const OmegaPtr& dual_omega, const OmegaPtr& target);
GroupHom pi_eps(const OmegaPtr& dual_omega, const OmegaPtr& target);
GroupHom pi_deps(const OmegaPtr& dual_omega, const OmegaPtr& target);

/// Symbolic expansion of a single dual-ring form into its three components, each as
/// a list of base-ring terms. Used by the projections and by tests.
struct DualExpansion {
  std::vector<FormTerm> plain;
  std::vector<FormTerm> eps;
  std::vector<FormTerm> deps;
};
DualExpansion expand_dual_form(const Ring& dual, const FormTerm& form);

/// (u_1...u_m)^{-1} du_1 ^ ... ^ du_m. Throws NotAUnit.
GroupWord dlog_word(const OmegaGroup& omega, const std::vector<RingElement>& units);

}  // namespace mtk
