#include "mtk/tangent_iso.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "mtk/errors.hpp"
#include "mtk/stability.hpp"

namespace mtk {

const char* status_name(VerdictStatus status) noexcept {
  switch (status) {
    case VerdictStatus::Pass: return "PASS";
    case VerdictStatus::Fail: return "FAIL";
    case VerdictStatus::SkippedNotStable: return "SKIPPED_NOT_STABLE";
    case VerdictStatus::NoHalf: return "NO_HALF";
    case VerdictStatus::Info: return "INFO";
  }
  return "UNKNOWN";
}

RingSession::RingSession(std::shared_ptr<const Ring> ring, std::size_t generator_bound)
    : ring_(std::move(ring)), dual_(Ring::dual_of(ring_)), generator_bound_(generator_bound) {}

bool RingSession::weakly_stable(int k) {
  auto it = stability_.find(k);
  if (it != stability_.end()) return it->second;
  bool holds = check_weak_stability(*ring_, k).holds;
  stability_[k] = holds;
  return holds;
}

const TangentKPtr& RingSession::tangent(std::size_t degree) {
  auto& slot = tangent_[degree];
  if (!slot) slot = TangentK::make(ring_, degree, generator_bound_);
  return slot;
}

const OmegaPtr& RingSession::omega(std::size_t n) {
  auto& slot = omega_[n];
  if (!slot) slot = OmegaGroup::make(ring_, n, OmegaPolicy::Compact);
  return slot;
}

const OmegaPtr& RingSession::dual_omega(std::size_t n) {
  auto& slot = dual_omega_[n];
  if (!slot) slot = OmegaGroup::make(dual_, n, OmegaPolicy::Compact);
  return slot;
}

// ---------------------------------------------------------------------------

namespace {

std::string coordinates_string(const std::vector<Integer>& x) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? ", " : "") << x[i].get_str();
  out << ']';
  return out.str();
}

// Records cases of an identity; the first failing case becomes the counterexample.
class Tally {
 public:
  Tally(RingSession& session, std::string id) {
    verdict_.id = std::move(id);
    verdict_.ring = session.name();
  }

  void check(bool ok, const std::function<std::string()>& describe) {
    ++verdict_.cases;
    if (ok)
      ++verdict_.passed;
    else if (!verdict_.counterexample)
      verdict_.counterexample = describe();
  }

  /// Zero test in `group`; the counterexample carries the nonzero normal form.
  void check_zero(const FpAbelianGroup& group, const GroupWord& w, const std::function<std::string()>& describe) {
    auto nf = group.normal_form(w);
    bool ok = std::all_of(nf.begin(), nf.end(), [](const Integer& v) { return v == 0; });
    check(ok, [&] { return describe() + " -> " + coordinates_string(nf); });
  }

  LemmaVerdict finish(bool hypotheses_hold = true) {
    if (verdict_.passed == verdict_.cases)
      verdict_.status = VerdictStatus::Pass;
    else
      verdict_.status = hypotheses_hold ? VerdictStatus::Fail : VerdictStatus::Info;
    return verdict_;
  }

  LemmaVerdict skip(VerdictStatus status, std::string note) {
    verdict_.status = status;
    verdict_.note = std::move(note);
    return verdict_;
  }

 private:
  LemmaVerdict verdict_;
};

std::string elem(const Ring& ring, const RingElement& x) { return ring.element_to_string(x); }

std::string elems(const Ring& ring, const std::vector<RingElement>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + elem(ring, xs[i]);
  return out;
}

// All m-tuples of units of `ring`, first slot most significant.
std::vector<std::vector<RingElement>> unit_tuples(const Ring& ring, std::size_t m) {
  const auto& units = ring.unit_indices();
  std::vector<std::vector<RingElement>> out;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < m; ++i) combos *= units.size();
  out.reserve(combos);
  for (std::size_t c = 0; c < combos; ++c) {
    std::vector<RingElement> r(m);
    std::size_t rest = c;
    for (std::size_t i = m; i-- > 0;) {
      r[i] = ring.element(units[rest % units.size()]);
      rest /= units.size();
    }
    out.push_back(std::move(r));
  }
  return out;
}

GroupWord concatenate(const std::vector<GroupWord>& parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<GroupWord::Term> terms;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (const auto& [i, c] : p.terms()) terms.emplace_back(i + offset, c);
    offset += p.size();
  }
  return GroupWord(total, std::move(terms));
}

RingElement include(const Ring& dual, const RingElement& x) { return dual_compose(dual, x, dual.base()->zero()); }

RingElement one_plus_eps(const Ring& dual, const RingElement& r) { return dual_compose(dual, dual.base()->one(), r); }

// x as a sum of at most two units (x itself when it is a unit).
std::vector<RingElement> unit_split(const Ring& ring, const RingElement& x) {
  if (ring.is_unit(x)) return {x};
  for (std::size_t u : ring.unit_indices()) {
    RingElement v = ring.sub(x, ring.element(u));
    if (ring.is_unit(v)) return {ring.element(u), v};
  }
  throw Error(ErrorCode::SkippedNotStable, elem(ring, x) + " is not a sum of two units");
}

}  // namespace

GroupHom dlog_hom(const KGroup& k, const OmegaPtr& omega) {
  const Ring& ring = *k.ring();
  std::vector<GroupWord> images;
  for (std::size_t g = 0; g < k.group()->generator_count(); ++g) {
    std::vector<RingElement> units;
    for (std::size_t u : k.generator_units(g)) units.push_back(ring.element(u));
    images.push_back(dlog_word(*omega, units));
  }
  return GroupHom::make(k.group(), omega->group(), std::move(images));
}

GroupHom build_B(RingSession& session, std::size_t n) {
  if (!session.has_half()) throw Error(ErrorCode::NoHalf, "2 is not a unit in " + session.name());
  const TangentKPtr& tk = session.tangent(n + 1);
  const OmegaPtr& dual_omega = session.dual_omega(n + 1);
  const OmegaPtr& target = session.omega(n);
  GroupHom dlog = dlog_hom(tk->dual_k(), dual_omega);
  GroupHom deps = pi_deps(dual_omega, target);
  std::vector<GroupWord> images;
  for (const auto& w : tk->inclusion().images()) images.push_back(deps.apply(dlog.apply(w)));
  return GroupHom::make(tk->group(), target->group(), std::move(images));
}

GroupHom build_F(RingSession& session, std::size_t n) {
  if (!session.has_half()) throw Error(ErrorCode::NoHalf, "2 is not a unit in " + session.name());
  const Ring& ring = *session.ring();
  const TangentKPtr& tk = session.tangent(n + 1);
  const OmegaPtr& omega = session.omega(n);
  std::vector<GroupWord> images;
  for (std::size_t g = 0; g < omega->generator_count(); ++g) {
    FormTerm f = omega->generator_form(g);
    std::vector<std::vector<RingElement>> lifts;
    for (const auto& x : f.r) lifts.push_back(unit_split(ring, x));
    GroupWord image = tk->group()->zero();
    std::vector<std::size_t> pick(n, 0);
    while (true) {
      std::vector<RingElement> r;
      for (std::size_t i = 0; i < n; ++i) r.push_back(lifts[i][pick[i]]);
      image.add_scaled(tk->special_symbol(f.s, r), f.coefficient);
      std::size_t i = n;
      while (i > 0 && ++pick[i - 1] == lifts[i - 1].size()) pick[--i] = 0;
      if (i == 0) break;
    }
    images.push_back(std::move(image));
  }
  return GroupHom::make(omega->group(), tk->group(), std::move(images));
}

GroupHom build_F_units(RingSession& session, std::size_t n) {
  if (!session.has_half()) throw Error(ErrorCode::NoHalf, "2 is not a unit in " + session.name());
  const TangentKPtr& tk = session.tangent(n + 1);
  auto omega = OmegaGroup::make(session.ring(), n, OmegaPolicy::UnitsOnly, session.generator_bound());
  std::vector<GroupWord> images;
  for (std::size_t g = 0; g < omega->generator_count(); ++g) {
    FormTerm f = omega->generator_form(g);
    images.push_back(tk->special_symbol(f.s, f.r));
  }
  return GroupHom::make(omega->group(), tk->group(), std::move(images));
}

// ---------------------------------------------------------------------------
// Theorem

std::vector<LemmaVerdict> TheoremVerdict::records() const {
  std::vector<LemmaVerdict> out;
  auto component = [&](const std::string& id, bool value) {
    LemmaVerdict v;
    v.id = "theorem." + id;
    v.ring = ring;
    v.cases = 1;
    v.passed = value && status != VerdictStatus::NoHalf ? 1 : 0;
    if (status == VerdictStatus::NoHalf)
      v.status = VerdictStatus::NoHalf;
    else if (value)
      v.status = VerdictStatus::Pass;
    else
      v.status = status == VerdictStatus::Info ? VerdictStatus::Info : VerdictStatus::Fail;
    out.push_back(std::move(v));
  };
  LemmaVerdict head;
  head.id = "theorem";
  head.ring = ring;
  head.status = status;
  head.note = note;
  component("B_well_defined", b_well_defined);
  component("F_well_defined", f_well_defined);
  if (f_units_well_defined) component("F_units_well_defined", *f_units_well_defined);
  component("BF_identity", bf_identity);
  component("FB_identity", fb_identity);
  component("factors_equal", factors_equal);
  head.cases = out.size();
  for (const auto& v : out)
    if (v.passed) ++head.passed;
  if (status == VerdictStatus::Fail && !iso) head.counterexample = note;
  out.insert(out.begin(), head);
  return out;
}

TheoremVerdict verify_theorem(RingSession& session, std::size_t n) {
  const auto start = std::chrono::steady_clock::now();
  TheoremVerdict v;
  v.ring = session.name();
  v.n = n;
  v.has_half = session.has_half();
  v.weak5 = session.weakly_stable(5);
  const TangentKPtr& tk = session.tangent(n + 1);
  const OmegaPtr& omega = session.omega(n);
  v.tk_factors = tk->group()->invariant_factors();
  v.tk_free = tk->group()->free_rank();
  v.omega_factors = omega->group()->invariant_factors();
  v.omega_free = omega->group()->free_rank();
  v.factors_equal = is_isomorphic(*tk->group(), *omega->group());
  auto finish = [&] {
    v.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return v;
  };
  if (!v.has_half) {
    v.status = VerdictStatus::NoHalf;
    v.note = "2 is not a unit";
    return finish();
  }
  std::vector<std::string> notes;
  std::optional<GroupHom> b, f;
  try {
    b = build_B(session, n);
    v.b_well_defined = true;
  } catch (const RelationNotPreserved& e) {
    notes.push_back(std::string("B: ") + e.what());
  }
  try {
    f = build_F(session, n);
    v.f_well_defined = true;
  } catch (const RelationNotPreserved& e) {
    notes.push_back(std::string("F: ") + e.what());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SkippedNotStable) throw;
    notes.push_back(std::string("F: ") + e.what());
  }
  try {
    GroupHom fu = build_F_units(session, n);
    bool agrees = true;
    if (f) {
      auto units_omega = OmegaGroup::make(session.ring(), n, OmegaPolicy::UnitsOnly, session.generator_bound());
      agrees = encode_hom(units_omega, omega).then(*f).equals(fu);
      if (!agrees) notes.push_back("F on units-only generators disagrees with F on the compact presentation");
    }
    v.f_units_well_defined = agrees;
  } catch (const RelationNotPreserved& e) {
    v.f_units_well_defined = false;
    notes.push_back(std::string("F (units-only): ") + e.what());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CarrierTooLarge) throw;
  }
  if (b && f) {
    v.bf_identity = true;
    for (std::size_t g = 0; g < omega->generator_count() && v.bf_identity; ++g)
      if (!omega->group()->equal(b->apply(f->images()[g]), omega->group()->generator(g))) {
        v.bf_identity = false;
        notes.push_back("B(F(" + omega->generator_to_string(g) + ")) differs from the generator");
      }
    v.fb_identity = true;
    for (std::size_t g = 0; g < tk->group()->generator_count() && v.fb_identity; ++g)
      if (!tk->group()->equal(f->apply(b->images()[g]), tk->group()->generator(g))) {
        v.fb_identity = false;
        notes.push_back("F(B(t" + std::to_string(g) + ")) differs from the generator");
      }
  }
  v.iso = v.b_well_defined && v.f_well_defined && v.f_units_well_defined.value_or(true) && v.bf_identity &&
          v.fb_identity && v.factors_equal;
  if (!v.weak5) notes.insert(notes.begin(), "not weakly 5-fold stable; exploratory");
  if (!notes.empty()) {
    std::string joined;
    for (const auto& s : notes) joined += (joined.empty() ? "" : "; ") + s;
    v.note = joined;
  }
  v.status = v.weak5 ? (v.iso ? VerdictStatus::Pass : VerdictStatus::Fail) : VerdictStatus::Info;
  return finish();
}

// ---------------------------------------------------------------------------
// Lemmas

LemmaVerdict verify_lemma_epseps(RingSession& session, int part) {
  const char* ids[] = {"", "epseps.i", "epseps.ii", "epseps.iii"};
  if (part < 1 || part > 3) throw Error(ErrorCode::InvalidArgument, "epseps part must be 1, 2 or 3");
  Tally tally(session, ids[part]);
  const Ring& r = *session.ring();
  if (part == 3) {
    if (!session.has_half()) return tally.skip(VerdictStatus::NoHalf, "2 is not a unit");
    if (!session.weakly_stable(4)) return tally.skip(VerdictStatus::SkippedNotStable, "not weakly 4-fold stable");
  }
  const TangentKPtr& tk = session.tangent(2);
  const KGroup& k2 = tk->dual_k();
  const Ring& d = *tk->dual();
  const auto& group = *k2.group();
  if (part == 1) {
    for (std::size_t ai : r.unit_indices()) {
      const RingElement a = r.element(ai);
      const RingElement c = r.sub(r.one(), a);
      if (!r.is_unit(c)) continue;
      const RingElement ainv = *r.try_invert(a), cinv = *r.try_invert(c);
      for (std::size_t bi = 0; bi < r.size(); ++bi) {
        const RingElement b = r.element(bi);
        GroupWord w = k2.symbol({one_plus_eps(d, r.mul(b, ainv)), one_plus_eps(d, r.mul(b, cinv))}) * 2;
        tally.check_zero(group, w, [&] { return "a=" + elem(r, a) + ", b=" + elem(r, b); });
      }
    }
  } else {
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < r.size(); ++j) {
        const RingElement r1 = r.element(i), r2 = r.element(j);
        if (part == 2 && !(r.is_unit(r1) && r.is_unit(r2) && r.is_unit(r.add(r1, r2)))) continue;
        GroupWord w = k2.symbol({one_plus_eps(d, r1), one_plus_eps(d, r2)});
        if (part == 2) w = w * 2;
        tally.check_zero(group, w, [&] { return "r1=" + elem(r, r1) + ", r2=" + elem(r, r2); });
      }
  }
  return tally.finish();
}

LemmaVerdict verify_lemma_cool(RingSession& session, std::size_t N, std::uint64_t seed, std::size_t samples) {
  Tally tally(session, "cool.N" + std::to_string(N));
  if (N < 2) throw Error(ErrorCode::InvalidArgument, "N must be at least 2");
  if (!session.has_half()) return tally.skip(VerdictStatus::NoHalf, "2 is not a unit");
  if (!session.weakly_stable(4)) return tally.skip(VerdictStatus::SkippedNotStable, "not weakly 4-fold stable");
  const Ring& r = *session.ring();
  const TangentKPtr& tk = session.tangent(2);
  const KGroup& k2 = tk->dual_k();
  const Ring& d = *tk->dual();
  const auto& units = r.unit_indices();
  std::vector<GroupWord> word(r.size());
  for (std::size_t u : units) {
    const RingElement x = r.element(u);
    word[u] = k2.symbol({one_plus_eps(d, x), include(d, x)});
  }
  auto run_case = [&](const std::vector<std::size_t>& tuple) {
    GroupWord sum = k2.group()->zero();
    for (std::size_t u : tuple) sum += word[u];
    tally.check_zero(*k2.group(), sum, [&] {
      std::vector<RingElement> xs;
      for (std::size_t u : tuple) xs.push_back(r.element(u));
      return "r=(" + elems(r, xs) + ")";
    });
  };
  const std::size_t zero = r.index_of(r.zero());
  if (samples == 0) {
    std::vector<std::size_t> pos(N - 1, 0);
    while (!units.empty()) {
      std::vector<std::size_t> tuple;
      std::size_t sum = zero;
      for (std::size_t p : pos) {
        tuple.push_back(units[p]);
        sum = r.add_index(sum, units[p]);
      }
      const std::size_t last = r.neg_index(sum);
      if (r.is_unit_index(last)) {
        tuple.push_back(last);
        run_case(tuple);
      }
      std::size_t i = N - 1;
      while (i > 0 && ++pos[i - 1] == units.size()) pos[--i] = 0;
      if (i == 0) break;
    }
  } else {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(N), static_cast<std::uint32_t>(r.size())};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
    const std::size_t max_attempts = samples * r.size() * 64;
    std::size_t accepted = 0;
    for (std::size_t attempt = 0; attempt < max_attempts && accepted < samples; ++attempt) {
      std::vector<std::size_t> tuple(N);
      std::size_t sum = zero;
      for (auto& u : tuple) {
        u = units[pick(rng)];
        sum = r.add_index(sum, u);
      }
      if (sum != zero) continue;
      ++accepted;
      run_case(tuple);
    }
  }
  return tally.finish();
}

std::vector<LemmaVerdict> verify_lemma_morrow(RingSession& session) {
  Tally neg(session, "morrow.r_minus_r");
  Tally anti(session, "morrow.antisymmetry");
  if (!session.weakly_stable(5))
    return {neg.skip(VerdictStatus::SkippedNotStable, "not weakly 5-fold stable"),
            anti.skip(VerdictStatus::SkippedNotStable, "not weakly 5-fold stable")};
  const Ring& r = *session.ring();
  const KGroup& k2 = session.tangent(2)->base_k();
  const auto& units = r.unit_indices();
  for (std::size_t u : units) {
    const RingElement x = r.element(u);
    neg.check_zero(*k2.group(), k2.symbol({x, r.neg(x)}), [&] { return "r=" + elem(r, x); });
  }
  for (std::size_t u : units)
    for (std::size_t w : units) {
      const RingElement x = r.element(u), y = r.element(w);
      anti.check_zero(*k2.group(), k2.symbol({x, y}) + k2.symbol({y, x}),
                      [&] { return "r=" + elem(r, x) + ", s=" + elem(r, y); });
    }
  return {neg.finish(), anti.finish()};
}

LemmaVerdict verify_divisibility(RingSession& session, std::size_t n) {
  Tally tally(session, "divisibility.n" + std::to_string(n));
  if (!session.has_half()) return tally.skip(VerdictStatus::NoHalf, "2 is not a unit");
  const auto& group = *session.tangent(n + 1)->group();
  tally.check(mult_by_m_is_bijective(group, 2), [&] {
    return "invariant factors " + factors_to_string(group.invariant_factors(), group.free_rank());
  });
  return tally.finish();
}

LemmaVerdict verify_action(RingSession& session, std::size_t n) {
  Tally tally(session, "action.n" + std::to_string(n));
  if (!session.has_half()) return tally.skip(VerdictStatus::NoHalf, "2 is not a unit");
  if (!session.weakly_stable(5)) return tally.skip(VerdictStatus::SkippedNotStable, "not weakly 5-fold stable");
  const Ring& r = *session.ring();
  const TangentKPtr& tk = session.tangent(n + 1);
  const auto& group = *tk->group();
  std::vector<GroupHom> act;
  for (std::size_t a = 0; a < r.size(); ++a) act.push_back(tk->scaling_action(r.element(a)));
  const std::size_t one = r.index_of(r.one()), zero = r.index_of(r.zero());
  tally.check(act[one].equals(GroupHom::identity(tk->group())), [] { return std::string("a=1 is not the identity"); });
  tally.check(act[zero].equals(GroupHom::zero(tk->group(), tk->group())), [] { return std::string("a=0 is not zero"); });

  const auto tuples = unit_tuples(r, n);
  std::vector<std::vector<GroupWord>> special(r.size());
  for (std::size_t s = 0; s < r.size(); ++s)
    for (const auto& t : tuples) special[s].push_back(tk->special_symbol(r.element(s), t));
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t s = 0; s < r.size(); ++s) {
      const std::size_t as = r.mul_index(a, s);
      for (std::size_t t = 0; t < tuples.size(); ++t)
        tally.check(group.equal(act[a].apply(special[s][t]), special[as][t]), [&] {
          return "a=" + elem(r, r.element(a)) + ", s=" + elem(r, r.element(s)) + ", r=(" + elems(r, tuples[t]) + ")";
        });
    }
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < r.size(); ++b) {
      const GroupHom& sum = act[r.add_index(a, b)];
      const GroupHom& prod = act[r.mul_index(a, b)];
      bool distributive = true, multiplicative = true;
      for (std::size_t g = 0; g < group.generator_count(); ++g) {
        distributive = distributive && group.equal(sum.images()[g], act[a].images()[g] + act[b].images()[g]);
        multiplicative = multiplicative && group.equal(prod.images()[g], act[a].apply(act[b].images()[g]));
      }
      auto pair = [&] { return "a=" + elem(r, r.element(a)) + ", b=" + elem(r, r.element(b)); };
      tally.check(distributive, [&] { return "distributivity " + pair(); });
      tally.check(multiplicative, [&] { return "multiplicativity " + pair(); });
    }
  return tally.finish();
}

LemmaVerdict verify_B_on_special_symbols(RingSession& session, std::size_t n) {
  Tally tally(session, "B_on_special_symbols.n" + std::to_string(n));
  if (!session.has_half()) return tally.skip(VerdictStatus::NoHalf, "2 is not a unit");
  const Ring& r = *session.ring();
  const TangentKPtr& tk = session.tangent(n + 1);
  const OmegaPtr& omega = session.omega(n);
  GroupHom b = build_B(session, n);
  for (std::size_t s = 0; s < r.size(); ++s)
    for (const auto& t : unit_tuples(r, n)) {
      const RingElement x = r.element(s);
      GroupWord diff = b.apply(tk->special_symbol(x, t)) - omega->encode(x, t);
      tally.check_zero(*omega->group(), diff, [&] { return "s=" + elem(r, x) + ", r=(" + elems(r, t) + ")"; });
    }
  return tally.finish();
}

LemmaVerdict verify_dual_decomposition(RingSession& session, std::size_t n) {
  Tally tally(session, "dual_decomposition.n" + std::to_string(n));
  if (!session.has_half()) return tally.skip(VerdictStatus::NoHalf, "2 is not a unit");
  const OmegaPtr& source = session.dual_omega(n + 1);
  const OmegaPtr& top = session.omega(n + 1);
  const OmegaPtr& low = session.omega(n);
  GroupHom plain = pi_plain(source, top);
  GroupHom eps = pi_eps(source, top);
  GroupHom deps = pi_deps(source, low);
  GroupPtr sum = direct_sum({top->group(), top->group(), low->group()});
  std::vector<GroupWord> images;
  for (std::size_t g = 0; g < source->generator_count(); ++g)
    images.push_back(concatenate({plain.images()[g], eps.images()[g], deps.images()[g]}));
  GroupHom combined = GroupHom::make(source->group(), sum, std::move(images));
  tally.check(is_isomorphic(*source->group(), *sum), [&] {
    return "factors " + factors_to_string(source->group()->invariant_factors(), source->group()->free_rank()) +
           " vs " + factors_to_string(sum->invariant_factors(), sum->free_rank());
  });
  tally.check(is_bijective(combined), [] { return std::string("combined projection is not bijective"); });
  return tally.finish();
}

LemmaVerdict verify_tangent_decomposition(RingSession& session, std::size_t n) {
  Tally tally(session, "tangent_decomposition.n" + std::to_string(n));
  const TangentKPtr& tk = session.tangent(n + 1);
  tally.check(tk->decomposition_holds(), [&] {
    const auto& g = *tk->dual_k().group();
    return "K(R[eps]) has factors " + factors_to_string(g.invariant_factors(), g.free_rank());
  });
  return tally.finish();
}

LemmaVerdict verify_special_symbol_generation(RingSession& session, std::size_t n) {
  Tally tally(session, "special_symbols_generate.n" + std::to_string(n));
  if (!session.has_half()) return tally.skip(VerdictStatus::NoHalf, "2 is not a unit");
  if (!session.weakly_stable(5)) return tally.skip(VerdictStatus::SkippedNotStable, "not weakly 5-fold stable");
  tally.check(session.tangent(n + 1)->special_symbols_generate(),
              [] { return std::string("special symbols span a proper subgroup"); });
  return tally.finish();
}

LemmaVerdict verify_dlog_steinberg(RingSession& session) {
  Tally tally(session, "dlog_steinberg");
  for (const auto& ring : {session.ring(), session.dual()}) {
    const Ring& r = *ring;
    auto omega2 = ring == session.ring() ? session.omega(2) : session.dual_omega(2);
    for (std::size_t u : r.unit_indices()) {
      const RingElement x = r.element(u);
      const RingElement y = r.sub(r.one(), x);
      if (!r.is_unit(y)) continue;
      tally.check_zero(*omega2->group(), dlog_word(*omega2, {x, y}),
                       [&] { return r.spec().to_string() + ": r=" + elem(r, x); });
    }
  }
  return tally.finish();
}

LemmaVerdict verify_omega_presentations(RingSession& session, std::size_t n) {
  Tally tally(session, "omega_presentations.n" + std::to_string(n));
  const OmegaPtr& compact = session.omega(n);
  OmegaPtr all;
  try {
    all = OmegaGroup::make(session.ring(), n, OmegaPolicy::AllElements, session.generator_bound());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CarrierTooLarge) throw;
    return tally.skip(VerdictStatus::Info, "tuple presentation exceeds the generator bound");
  }
  tally.check(is_bijective(encode_hom(all, compact)), [] { return std::string("all-elements -> compact not bijective"); });
  PolicyComparison cmp = compare_policies(session.ring(), n, session.generator_bound());
  if (!cmp.skipped)
    tally.check(cmp.isomorphism, [] { return std::string("units-only -> all-elements not bijective"); });
  return tally.finish();
}

}  // namespace mtk
