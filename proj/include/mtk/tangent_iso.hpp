#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mtk/abelian.hpp"
#include "mtk/differentials.hpp"
#include "mtk/milnor.hpp"
#include "mtk/ring.hpp"

namespace mtk {

enum class VerdictStatus { Pass, Fail, SkippedNotStable, NoHalf, Info };

const char* status_name(VerdictStatus status) noexcept;

struct LemmaVerdict {
  std::string id;
  std::string ring;
  VerdictStatus status = VerdictStatus::Pass;
  std::size_t cases = 0;
  std::size_t passed = 0;
  std::optional<std::string> counterexample;
  std::optional<std::string> note;

  /// A ring satisfying the hypotheses failed a guaranteed identity.
  bool red_flag() const noexcept { return status == VerdictStatus::Fail; }
};

/// Lazily computed objects shared by all checks on one ring.
class RingSession {
 public:
  explicit RingSession(std::shared_ptr<const Ring> ring, std::size_t generator_bound = kDefaultGeneratorBound);

  const std::shared_ptr<const Ring>& ring() const noexcept { return ring_; }
  const std::shared_ptr<const Ring>& dual() const noexcept { return dual_; }
  std::string name() const { return ring_->spec().to_string(); }
  std::size_t generator_bound() const noexcept { return generator_bound_; }

  bool has_half() const { return ring_->has_half(); }
  bool weakly_stable(int k);

  const TangentKPtr& tangent(std::size_t degree);
  /// Compact Omega^n over the base ring / over the dual ring.
  const OmegaPtr& omega(std::size_t n);
  const OmegaPtr& dual_omega(std::size_t n);

 private:
  std::shared_ptr<const Ring> ring_;
  std::shared_ptr<const Ring> dual_;
  std::size_t generator_bound_;
  std::map<int, bool> stability_;
  std::map<std::size_t, TangentKPtr> tangent_;
  std::map<std::size_t, OmegaPtr> omega_;
  std::map<std::size_t, OmegaPtr> dual_omega_;
};

/// dlog: K^M_m(S) -> Omega^m_S on the tensor generators. Certified, so construction
/// succeeding is the statement that dlog kills every Steinberg relation.
GroupHom dlog_hom(const KGroup& k, const OmegaPtr& omega);

/// B: TK^M_{n+1}(R) -> Omega^n_R. Throws NoHalf.
GroupHom build_B(RingSession& session, std::size_t n);
/// F: Omega^n_R -> TK^M_{n+1}(R) on the compact presentation, through sums of
/// special symbols. Throws NoHalf, SkippedNotStable (no unit decomposition of some
/// variable) or RelationNotPreserved.
GroupHom build_F(RingSession& session, std::size_t n);
/// F on the units-only tuple presentation (s, r_1..r_n) -> {1 + s r_1...r_n eps, r}.
GroupHom build_F_units(RingSession& session, std::size_t n);

struct TheoremVerdict {
  std::string ring;
  std::size_t n = 0;
  bool has_half = false;
  bool weak5 = false;
  std::vector<Integer> tk_factors;
  std::size_t tk_free = 0;
  std::vector<Integer> omega_factors;
  std::size_t omega_free = 0;
  bool b_well_defined = false;
  bool f_well_defined = false;
  std::optional<bool> f_units_well_defined;  // when the units-only presentation fits the bound
  bool bf_identity = false;
  bool fb_identity = false;
  bool factors_equal = false;
  bool iso = false;
  VerdictStatus status = VerdictStatus::Info;
  std::optional<std::string> note;
  double timing_ms = 0;

  /// Flattened verdict records ("theorem" plus one per component).
  std::vector<LemmaVerdict> records() const;
};

TheoremVerdict verify_theorem(RingSession& session, std::size_t n);

/// part in {1, 2, 3}.
LemmaVerdict verify_lemma_epseps(RingSession& session, int part);
/// N >= 2; exhaustive when `samples` is zero, otherwise seeded rejection sampling.
LemmaVerdict verify_lemma_cool(RingSession& session, std::size_t N, std::uint64_t seed, std::size_t samples);
/// {r, -r} = 0 and {r, s} + {s, r} = 0 in K_2^M(R).
std::vector<LemmaVerdict> verify_lemma_morrow(RingSession& session);
LemmaVerdict verify_divisibility(RingSession& session, std::size_t n);
LemmaVerdict verify_action(RingSession& session, std::size_t n);
/// B{1 + s r_1...r_n eps, r} = s dr_1 ^ ... ^ dr_n for all s in R, r_i in R^*.
LemmaVerdict verify_B_on_special_symbols(RingSession& session, std::size_t n);
/// Omega^{n+1}_{R[eps]} -> Omega^{n+1}_R (+) Omega^{n+1}_R (+) Omega^n_R is bijective.
LemmaVerdict verify_dual_decomposition(RingSession& session, std::size_t n);
/// K(R[eps]) = K(R) (+) TK by invariant factors.
LemmaVerdict verify_tangent_decomposition(RingSession& session, std::size_t n);
LemmaVerdict verify_special_symbol_generation(RingSession& session, std::size_t n);
/// Every Steinberg pair of R and of R[eps] has zero dlog in Omega^2.
LemmaVerdict verify_dlog_steinberg(RingSession& session);
/// Units-only, all-elements and compact presentations of Omega^n agree.
LemmaVerdict verify_omega_presentations(RingSession& session, std::size_t n);

}  // namespace mtk
