#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mtk/errors.hpp"
#include "mtk/tangent_iso.hpp"
#include "oracles.hpp"

using namespace mtk;

namespace {

std::shared_ptr<const Ring> ring(const std::string& spec) { return Ring::make(parse_ring_spec(spec)); }

bool same_records(const std::vector<LemmaVerdict>& a, const std::vector<LemmaVerdict>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].id != b[i].id || a[i].status != b[i].status || a[i].cases != b[i].cases || a[i].passed != b[i].passed ||
        a[i].counterexample != b[i].counterexample)
      return false;
  return true;
}

}  // namespace

TEST_CASE("theorem on a field: both sides trivial") {
  RingSession s(ring("zmod:7"));
  auto v = verify_theorem(s, 1);
  CHECK(v.has_half);
  CHECK(v.weak5);
  CHECK(v.tk_factors.empty());
  CHECK(v.omega_factors.empty());
  CHECK(v.iso);
  CHECK(v.status == VerdictStatus::Pass);
}

TEST_CASE("theorem on F_7[t]/(t^2)") {
  RingSession s(ring("poly:zmod:7:t:t^2"));
  auto v = verify_theorem(s, 1);
  CHECK(v.b_well_defined);
  CHECK(v.f_well_defined);
  CHECK(v.bf_identity);
  CHECK(v.fb_identity);
  CHECK(v.factors_equal);
  CHECK(v.iso);
  CHECK(oracle::to_int64(v.tk_factors) == std::vector<std::int64_t>{7});
  CHECK(oracle::to_int64(v.omega_factors) == std::vector<std::int64_t>{7});
  for (const auto& r : v.records()) CHECK_FALSE(r.red_flag());
}

TEST_CASE("below the stability threshold the verdict is exploratory") {
  RingSession s(ring("zmod:5"));
  auto v = verify_theorem(s, 1);
  CHECK_FALSE(v.weak5);
  CHECK(v.status == VerdictStatus::Info);
  for (const auto& r : v.records()) CHECK_FALSE(r.red_flag());
  auto morrow = verify_lemma_morrow(s);
  for (const auto& m : morrow) CHECK(m.status == VerdictStatus::SkippedNotStable);
}

TEST_CASE("rings without one half") {
  RingSession s(ring("zmod:6"));
  auto v = verify_theorem(s, 1);
  CHECK(v.status == VerdictStatus::NoHalf);
  CHECK_THROWS_AS(build_B(s, 1), Error);
  CHECK(verify_lemma_cool(s, 2, 1, 0).status == VerdictStatus::NoHalf);
}

TEST_CASE("degree zero: B{1 + s eps} = s") {
  for (const char* spec : {"zmod:7", "zmod:49", "poly:zmod:7:t:t^2", "poly:zmod:3:x:x^2+1", "zmod:9"}) {
    CAPTURE(spec);
    RingSession s(ring(spec));
    auto b = build_B(s, 0);
    auto tk = s.tangent(1);
    auto om = s.omega(0);
    for (const auto& x : s.ring()->enumerate_carrier())
      CHECK(om->group()->equal(b.apply(tk->special_symbol(x, {})), om->encode(x, {})));
    CHECK(is_isomorphic(*tk->group(), *om->group()));
  }
}

TEST_CASE("F on s dt goes through a unit split") {
  RingSession s(ring("poly:zmod:7:t:t^2"));
  auto r = s.ring();
  auto f = build_F(s, 1);
  auto b = build_B(s, 1);
  auto tk = s.tangent(2);
  auto om = s.omega(1);
  auto t = r->variable(0);
  CHECK(tk->group()->is_zero(f.apply(om->group()->zero())));
  CHECK(om->group()->is_zero(b.apply(tk->group()->zero())));
  // t = u + v with u, v units: {1 + s t eps, t} is read as the sum of the two special symbols
  auto u = r->from_integer(1), v = r->sub(t, u);
  REQUIRE(r->is_unit(v));
  for (const auto& x : r->enumerate_carrier()) {
    auto image = f.apply(om->encode(x, {t}));
    auto expected = tk->special_symbol(x, {u}) + tk->special_symbol(x, {v});
    CHECK(tk->group()->equal(image, expected));
    CHECK(om->group()->equal(b.apply(image), om->encode(x, {t})));
  }
}

TEST_CASE("F vanishes where Omega does") {
  RingSession s(ring("zmod:7"));
  auto f = build_F(s, 1);
  auto om = s.omega(1);
  for (std::int64_t a = 1; a < 7; ++a)
    CHECK(s.tangent(2)->group()->is_zero(f.apply(om->encode(s.ring()->one(), {s.ring()->from_integer(a)}))));
}

TEST_CASE("lemma suites pass on fields") {
  for (const char* spec : {"zmod:7", "poly:zmod:3:x:x^2+1", "zmod:11"}) {
    CAPTURE(spec);
    RingSession s(ring(spec));
    std::vector<LemmaVerdict> all;
    for (int p = 1; p <= 3; ++p) all.push_back(verify_lemma_epseps(s, p));
    for (std::size_t N = 2; N <= 5; ++N) all.push_back(verify_lemma_cool(s, N, 42, N <= 3 ? 0 : 500));
    for (auto& m : verify_lemma_morrow(s)) all.push_back(m);
    for (const auto& v : all) {
      CAPTURE(v.id);
      CHECK(v.status == VerdictStatus::Pass);
      CHECK(v.cases > 0);
      CHECK(v.passed == v.cases);
    }
  }
}

TEST_CASE("module structure, decompositions and divisibility") {
  for (const char* spec : {"zmod:7", "poly:zmod:7:t:t^2", "zmod:49"})
    for (std::size_t n : {0u, 1u}) {
      CAPTURE(spec);
      CAPTURE(n);
      RingSession s(ring(spec));
      for (const auto& v : {verify_action(s, n), verify_divisibility(s, n), verify_B_on_special_symbols(s, n),
                            verify_dual_decomposition(s, n), verify_tangent_decomposition(s, n),
                            verify_special_symbol_generation(s, n), verify_omega_presentations(s, n)}) {
        CAPTURE(v.id);
        CHECK(v.status == VerdictStatus::Pass);
        CHECK(v.passed == v.cases);
      }
    }
}

TEST_CASE("verdicts are deterministic") {
  RingSession a(ring("poly:zmod:5:t:t^2")), b(ring("poly:zmod:5:t:t^2"));
  CHECK(same_records(verify_theorem(a, 1).records(), verify_theorem(b, 1).records()));
  CHECK(same_records({verify_lemma_cool(a, 4, 9, 200)}, {verify_lemma_cool(b, 4, 9, 200)}));
  CHECK(same_records({verify_lemma_cool(a, 5, 9, 200)}, {verify_lemma_cool(b, 5, 9, 200)}));
}

TEST_CASE("dlog on Steinberg pairs") {
  for (const char* spec : {"zmod:7", "zmod:9", "poly:zmod:5:t:t^2"}) {
    RingSession s(ring(spec));
    auto v = verify_dlog_steinberg(s);
    CHECK(v.status == VerdictStatus::Pass);
    CHECK(v.cases > 0);
  }
}
