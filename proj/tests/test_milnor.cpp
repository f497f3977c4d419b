#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "mtk/errors.hpp"
#include "mtk/milnor.hpp"
#include "mtk/ring.hpp"
#include "oracles.hpp"

using namespace mtk;

namespace {

std::shared_ptr<const Ring> ring(const std::string& spec) { return Ring::make(parse_ring_spec(spec)); }

std::vector<std::int64_t> factors(const GroupPtr& g) { return oracle::to_int64(g->invariant_factors()); }

// For a ring whose unit group is cyclic of order d with generator g found by search,
// K_2 is Z/d modulo the products log(r) * log(1 - r) over Steinberg pairs.
std::optional<std::vector<std::int64_t>> cyclic_k2_oracle(const Ring& r) {
  auto units = oracle::brute_units(r);
  const std::int64_t d = static_cast<std::int64_t>(units.size());
  std::size_t one = r.index_of(r.one());
  for (auto g : units) {
    std::vector<std::int64_t> log(r.size(), -1);
    std::size_t x = one;
    for (std::int64_t e = 0; e < d; ++e) {
      log[x] = e;
      x = r.mul_index(x, g);
    }
    if (std::count(log.begin(), log.end(), -1) != static_cast<std::ptrdiff_t>(r.size() - units.size())) continue;
    std::int64_t m = d;
    for (auto u : units) {
      auto v = r.sub_index(one, u);
      if (log[v] >= 0) m = std::gcd(m, log[u] * log[v] % d);
    }
    if (m == 1) return std::vector<std::int64_t>{};
    return std::vector<std::int64_t>{m};
  }
  return std::nullopt;  // not cyclic
}

}  // namespace

TEST_CASE("unit group bases") {
  UnitGroupData f7(ring("zmod:7"));
  CHECK(f7.basis() == std::vector<std::size_t>{3});
  CHECK(f7.orders() == std::vector<std::int64_t>{6});

  UnitGroupData d7(ring("dual:zmod:7"));
  CHECK(d7.orders() == std::vector<std::int64_t>{6, 7});

  UnitGroupData z2(ring("zmod:2"));
  CHECK(z2.rank() == 0);
  CHECK(z2.order() == 1);
}

TEST_CASE("discrete-log round trip and unit group structure") {
  for (const char* spec : {"zmod:7", "zmod:9", "zmod:12", "zmod:6", "dual:zmod:7", "poly:zmod:7:t:t^2", "poly:zmod:3:x:x^2+1",
                           "dual:zmod:9", "dual:poly:zmod:3:x:x^2+1", "zmod:49"}) {
    CAPTURE(spec);
    auto r = ring(spec);
    UnitGroupData units(r);
    for (auto u : r->unit_indices()) CHECK(units.decode(units.exponents(u)) == r->element(u));
    CHECK_THROWS_AS(units.exponents(r->index_of(r->zero())), Error);
    std::vector<Integer> orders(units.orders().begin(), units.orders().end());
    auto k1 = FpAbelianGroup::cyclic_sum(orders);
    CHECK(factors(k1) == oracle::brute_unit_group(*r));
    CHECK(factors(KGroup::make(r, 1)->group()) == oracle::brute_unit_group(*r));
  }
}

TEST_CASE("degree zero and one") {
  auto k0 = KGroup::make(ring("zmod:7"), 0);
  CHECK(k0->group()->free_rank() == 1);
  CHECK(k0->group()->invariant_factors().empty());
  CHECK(factors(KGroup::make(ring("zmod:7"), 1)->group()) == std::vector<std::int64_t>{6});
}

TEST_CASE("K_2 of rings with cyclic unit groups") {
  for (const char* spec : {"zmod:7", "zmod:11", "zmod:9", "zmod:49", "poly:zmod:3:x:x^2+1", "poly:zmod:7:t:t^2", "zmod:5",
                           "zmod:3", "zmod:25", "zmod:4"}) {
    CAPTURE(spec);
    auto r = ring(spec);
    auto expected = cyclic_k2_oracle(*r);
    REQUIRE(expected.has_value());
    CHECK(factors(KGroup::make(r, 2)->group()) == *expected);
  }
  CHECK(KGroup::make(ring("zmod:7"), 2)->group()->is_trivial());
}

TEST_CASE("symbols") {
  auto r = ring("poly:zmod:5:t:t^2");
  auto k = KGroup::make(r, 2);
  const auto& g = *k->group();
  auto units = r->units();
  for (std::size_t i = 0; i < units.size(); i += 3)
    for (std::size_t j = 0; j < units.size(); j += 2)
      for (std::size_t l = 0; l < units.size(); l += 5) {
        auto u = units[i], v = units[j], w = units[l];
        CHECK(g.equal(k->symbol({r->mul(u, v), w}), k->symbol({u, w}) + k->symbol({v, w})));
        CHECK(g.equal(k->symbol({w, r->mul(u, v)}), k->symbol({w, u}) + k->symbol({w, v})));
      }
  for (const auto& u : units) {
    CHECK(g.is_zero(k->symbol({u, r->one()})));
    auto v = r->sub(r->one(), u);
    if (r->is_unit(v)) CHECK(g.is_zero(k->symbol({u, v})));
  }
  auto f7 = ring("zmod:7");
  auto k7 = KGroup::make(f7, 2);
  CHECK(k7->group()->is_zero(k7->symbol({f7->from_integer(3), f7->from_integer(-3)})));
  CHECK_THROWS_AS(k7->symbol({f7->zero(), f7->one()}), Error);
  CHECK_THROWS_AS(k7->symbol({f7->one()}), Error);
}

TEST_CASE("Steinberg fillers: basis units suffice") {
  for (const char* spec : {"zmod:7", "zmod:11", "zmod:9", "poly:zmod:3:x:x^2+1", "poly:zmod:5:t:t^2", "zmod:49",
                           "poly:zmod:7:t:t^2", "dual:zmod:5"}) {
    auto r = ring(spec);
    REQUIRE(r->unit_indices().size() <= 50);
    for (std::size_t n : {3u, 4u}) {
      CAPTURE(spec);
      CAPTURE(n);
      auto basis = KGroup::make(r, n, kDefaultGeneratorBound, SteinbergSlots::BasisOnly);
      auto all = KGroup::make(r, n, kDefaultGeneratorBound, SteinbergSlots::AllUnits);
      CHECK(basis->steinberg_pair_count() <= all->steinberg_pair_count());
      CHECK(factors(basis->group()) == factors(all->group()));
    }
  }
}

TEST_CASE("tensor bound") {
  try {
    KGroup::make(ring("dual:poly:zmod:7:t:t^2"), 12);
    FAIL("expected TENSOR_TOO_LARGE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TensorTooLarge);
  }
}

TEST_CASE("tangent groups") {
  auto f7 = ring("zmod:7");
  auto tk1 = TangentK::make(f7, 1);
  CHECK(factors(tk1->group()) == std::vector<std::int64_t>{7});

  for (const char* spec : {"zmod:7", "zmod:9", "zmod:49", "poly:zmod:7:t:t^2", "poly:zmod:3:x:x^2+1", "zmod:5"}) {
    CAPTURE(spec);
    auto r = ring(spec);
    // degree one: 1 + R eps is isomorphic to (R, +)
    CHECK(factors(TangentK::make(r, 1)->group()) == oracle::brute_quotient_by_principal_ideal(*r, r->zero()));
    for (std::size_t d : {1u, 2u}) {
      auto tk = TangentK::make(r, d);
      CHECK(tk->decomposition_holds());
      for (auto f : factors(tk->group())) CHECK(f % 2 == 1);
      CHECK(mult_by_m_is_bijective(*tk->group(), 2));
      CHECK(tk->special_symbols_generate());
    }
  }
  auto f3 = TangentK::make(ring("zmod:3"), 2);
  CHECK(f3->group()->is_finite());
}

TEST_CASE("scaling action") {
  auto r = ring("zmod:7");
  auto tk = TangentK::make(r, 1);
  CHECK(tk->scaling_action(r->one()).equals(GroupHom::identity(tk->group())));
  CHECK(tk->scaling_action(r->zero()).equals(GroupHom::zero(tk->group(), tk->group())));
  auto two = tk->scaling_action(r->from_integer(2));
  for (std::int64_t s = 0; s < 7; ++s) {
    auto x = tk->special_symbol(r->from_integer(s), {});
    CHECK(tk->group()->equal(two.apply(x), tk->special_symbol(r->from_integer(2 * s), {})));
  }

  auto t = ring("poly:zmod:7:t:t^2");
  auto tk2 = TangentK::make(t, 2);
  for (std::size_t a = 0; a < t->size(); a += 6)
    for (std::size_t b = 0; b < t->size(); b += 9) {
      auto ha = tk2->scaling_action(t->element(a)), hb = tk2->scaling_action(t->element(b));
      CHECK(hb.then(ha).equals(tk2->scaling_action(t->mul(t->element(a), t->element(b)))));
    }
}

TEST_CASE("TK symbols reject elements outside the kernel") {
  auto r = ring("zmod:7");
  auto tk = TangentK::make(r, 1);
  auto dual = tk->dual();
  CHECK_THROWS_AS(tk->symbol({dual->from_integer(3)}), Error);
  CHECK_NOTHROW(tk->symbol({dual_compose(*dual, r->one(), r->from_integer(3))}));
}
