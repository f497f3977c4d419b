// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion; with an argument N
// runs only criterion N. Exit status is nonzero iff some criterion failed.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "mtk/errors.hpp"
#include "mtk/report.hpp"
#include "mtk/stability.hpp"
#include "oracles.hpp"

using namespace mtk;
using json = nlohmann::ordered_json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::shared_ptr<const Ring> ring(const std::string& spec) { return Ring::make(parse_ring_spec(spec)); }

std::string cli(const std::string& args, int& exit_code) {
  std::string cmd = std::string(MTK_CLI_PATH) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    exit_code = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string list(const std::vector<std::int64_t>& v) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ']';
  return out.str();
}

std::vector<std::int64_t> json_factors(const json& g) {
  std::vector<std::int64_t> out;
  for (const auto& f : g["factors"]) out.push_back(f.get<std::int64_t>());
  return out;
}

// Omega^1 of a monogenic ring (Z/m)[t]/(f) is R/(f'); of Z/m it is zero.
std::vector<std::int64_t> omega1_oracle(const Ring& r) {
  if (r.variable_count() == 0) return {};
  return oracle::brute_quotient_by_principal_ideal(r, r.modulus_derivative(0));
}

bool passed(const LemmaVerdict& v) { return v.status == VerdictStatus::Pass && v.passed == v.cases; }

std::string describe(const LemmaVerdict& v) {
  std::string s = v.ring + " " + v.id + " " + status_name(v.status) + " " + std::to_string(v.passed) + "/" +
                  std::to_string(v.cases);
  if (v.counterexample) s += " counterexample " + *v.counterexample;
  return s;
}

Outcome criterion1() {
  Outcome o;
  int code = 0;
  auto out = cli("verify --ring poly:zmod:7:t:t^2 --suite theorem --n 1 --format json", code);
  o.require(code == 0, "exit code " + std::to_string(code));
  if (!o.pass) return o;
  auto j = json::parse(out);
  const auto& r = j["results"][0];
  for (const char* id : {"theorem", "theorem.B_well_defined", "theorem.F_well_defined", "theorem.BF_identity",
                         "theorem.FB_identity", "theorem.factors_equal"}) {
    bool found = false;
    for (const auto& v : r["verdicts"])
      if (v["id"] == id) {
        found = true;
        o.require(v["status"] == "PASS", std::string(id) + " is " + v["status"].get<std::string>());
      }
    o.require(found, std::string("missing verdict ") + id);
  }
  auto expected = omega1_oracle(*ring("poly:zmod:7:t:t^2"));
  auto tk = json_factors(r["groups"]["TK"]), om = json_factors(r["groups"]["Omega"]);
  o.require(expected == std::vector<std::int64_t>{7}, "oracle gave " + list(expected));
  o.require(tk == expected, "TK factors " + list(tk));
  o.require(om == expected, "Omega factors " + list(om));
  if (o.pass) o.detail = "TK_2 = Omega^1 = " + list(tk) + ", B and F certified, BF = id, FB = id";
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (const char* spec : {"zmod:7", "poly:zmod:3:x:x^2+1", "zmod:11", "zmod:49"}) {
    RingSession s(ring(spec));
    auto v = verify_theorem(s, 1);
    auto expected = omega1_oracle(*s.ring());
    o.require(v.iso && v.status == VerdictStatus::Pass, std::string(spec) + " iso verdict false");
    o.require(oracle::to_int64(v.omega_factors) == expected, std::string(spec) + " Omega^1 " +
                                                                 list(oracle::to_int64(v.omega_factors)) + " vs " +
                                                                 list(expected));
    o.require(oracle::to_int64(v.tk_factors) == expected, std::string(spec) + " TK_2 " + list(oracle::to_int64(v.tk_factors)));
  }
  if (o.pass) o.detail = "F_7, F_9, F_11, Z/49: iso, both sides trivial and matching the R/(f') oracle";
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& spec : default_catalog()) {
    RingSession s(ring(spec));
    if (!s.has_half()) continue;
    auto additive = oracle::brute_quotient_by_principal_ideal(*s.ring(), s.ring()->zero());
    auto tk = s.tangent(1);
    auto om = s.omega(0);
    o.require(oracle::to_int64(tk->group()->invariant_factors()) == additive, spec + " TK_1 mismatch");
    o.require(oracle::to_int64(om->group()->invariant_factors()) == additive, spec + " Omega^0 mismatch");
    auto b = build_B(s, 0);
    for (const auto& x : s.ring()->enumerate_carrier()) {
      ++checked;
      o.require(om->group()->equal(b.apply(tk->special_symbol(x, {})), om->encode(x, {})),
                spec + " B{1+s eps} != s for s = " + s.ring()->element_to_string(x));
    }
  }
  if (o.pass) o.detail = "TK_1 = (R,+) = Omega^0 on the catalog; B{1+s eps} = s on " + std::to_string(checked) + " elements";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::size_t cases = 0;
  for (const char* spec : {"zmod:7", "poly:zmod:3:x:x^2+1", "zmod:11"}) {
    RingSession s(ring(spec));
    std::vector<LemmaVerdict> all;
    for (int p = 1; p <= 3; ++p) all.push_back(verify_lemma_epseps(s, p));
    for (std::size_t N = 2; N <= 5; ++N) all.push_back(verify_lemma_cool(s, N, 42, N <= 3 ? 0 : 500));
    for (auto& m : verify_lemma_morrow(s)) all.push_back(m);
    for (const auto& v : all) {
      cases += v.cases;
      o.require(passed(v) && v.cases > 0, describe(v));
    }
  }
  if (o.pass) o.detail = std::to_string(cases) + " cases on F_7, F_9, F_11, zero failures";
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (const auto& spec : default_catalog()) {
    RingSession s(ring(spec));
    if (!s.has_half()) continue;
    for (std::size_t n : {0u, 1u}) {
      for (const auto& f : s.tangent(n + 1)->group()->invariant_factors())
        o.require(f % 2 == 1, spec + " even invariant factor " + f.get_str());
      auto v = verify_divisibility(s, n);
      o.require(passed(v), describe(v));
    }
  }
  if (o.pass) o.detail = "all invariant factors of TK_1, TK_2 odd on the catalog";
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (const auto& spec : default_catalog()) {
    RingSession s(ring(spec));
    if (!s.has_half()) continue;
    for (std::size_t n : {0u, 1u}) {
      auto v = verify_dual_decomposition(s, n);
      o.require(passed(v), describe(v));
    }
  }
  if (o.pass) o.detail = "Omega^{n+1}(R[eps]) -> Omega^{n+1} + Omega^{n+1} + Omega^n bijective, n = 0, 1";
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::size_t pairs = 0;
  for (const auto& spec : default_catalog()) {
    RingSession s(ring(spec));
    auto v = verify_dlog_steinberg(s);
    pairs += v.cases;
    o.require(passed(v), describe(v));
  }
  if (o.pass) o.detail = std::to_string(pairs) + " Steinberg pairs over R and R[eps] map to 0";
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    auto a = oracle::random_matrix(rng, 8, 20);
    auto f = smith_normal_form(a);
    o.require(oracle::multiply(oracle::multiply(f.U, a), f.V) == f.S, "U A V != S for " + a.to_string());
    o.require(oracle::diagonal_with_divisibility(f.S), "S not in Smith form");
    o.require(abs(oracle::determinant(f.U)) == 1 && abs(oracle::determinant(f.V)) == 1, "transform not unimodular");
  }

  std::size_t slot_rings = 0;
  for (const auto& spec : default_catalog()) {
    auto r = ring(spec);
    if (r->unit_indices().size() > 50) continue;
    ++slot_rings;
    for (std::size_t n : {2u, 3u}) {
      auto basis = KGroup::make(r, n, kDefaultGeneratorBound, SteinbergSlots::BasisOnly);
      auto all = KGroup::make(r, n, kDefaultGeneratorBound, SteinbergSlots::AllUnits);
      o.require(basis->group()->invariant_factors() == all->group()->invariant_factors(),
                spec + " slot reduction changes K_" + std::to_string(n));
    }
  }

  // Seeded negative tests: random images from Z/4 + Z/6 to Z/3 + Z/4, checked by hand.
  std::mt19937_64 hom_rng(88);
  std::uniform_int_distribution<std::int64_t> entry(-6, 6);
  auto src = FpAbelianGroup::make(2, {GroupWord::from_dense({4, 0}), GroupWord::from_dense({0, 6})});
  auto dst = FpAbelianGroup::make(2, {GroupWord::from_dense({3, 0}), GroupWord::from_dense({0, 4})});
  std::size_t rejected = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::int64_t a = entry(hom_rng), b = entry(hom_rng), c = entry(hom_rng), d = entry(hom_rng);
    bool preserved = (4 * a) % 3 == 0 && (4 * b) % 4 == 0 && (6 * c) % 3 == 0 && (6 * d) % 4 == 0;
    bool threw = false;
    try {
      GroupHom::make(src, dst, {GroupWord::from_dense({a, b}), GroupWord::from_dense({c, d})});
    } catch (const RelationNotPreserved&) {
      threw = true;
    }
    rejected += threw;
    o.require(threw == !preserved, "certification disagrees with hand evaluation at trial " + std::to_string(trial));
  }
  if (o.pass)
    o.detail = "1000 SNF triples; slot reduction on " + std::to_string(slot_rings) + " rings (n = 2, 3); " +
               std::to_string(rejected) + "/500 negative homs rejected exactly";
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (const auto& spec : default_catalog()) {
    auto r = ring(spec);
    auto fields = oracle::residue_field_sizes(*r);
    o.require(!fields.empty(), spec + " is not semi-local in the oracle's sense");
    if (fields.empty()) continue;
    std::int64_t smallest = *std::min_element(fields.begin(), fields.end());
    for (int k = 2; k <= 6; ++k)
      o.require(check_weak_stability(*r, k).holds == (smallest >= k + 1), spec + " disagrees at k = " + std::to_string(k));
  }
  o.require(check_weak_stability(*ring("zmod:5"), 4).holds, "F_5 weak-4");
  o.require(!check_weak_stability(*ring("zmod:5"), 5).holds, "F_5 weak-5");
  o.require(check_weak_stability(*ring("zmod:7"), 6).holds, "F_7 weak-6");
  if (o.pass) o.detail = "catalog k = 2..6 matches residue-field sizes; F_5 weak-4 yes, weak-5 no; F_7 weak-6 yes";
  return o;
}

Outcome criterion10() {
  Outcome o;
  int c1 = 0, c2 = 0;
  auto a = cli("verify --catalog default --seed 42 --format json", c1);
  auto b = cli("verify --catalog default --seed 42 --format json --jobs 2", c2);
  o.require(c1 == 0 && c2 == 0, "exit codes " + std::to_string(c1) + ", " + std::to_string(c2));
  if (!o.pass) return o;
  auto sa = strip_timings(json::parse(a)).dump(2), sb = strip_timings(json::parse(b)).dump(2);
  o.require(sa == sb, "reports differ outside timing fields");
  if (o.pass) o.detail = "two catalog runs identical modulo timing_ms (" + std::to_string(sa.size()) + " bytes)";
  return o;
}

const std::array<std::pair<const char*, std::function<Outcome()>>, 10> kCriteria = {{
    {"theorem on F_7[t]/(t^2), n = 1", criterion1},
    {"theorem on trivial targets", criterion2},
    {"degree zero", criterion3},
    {"lemma suites", criterion4},
    {"unique 2-divisibility", criterion5},
    {"dual-number decomposition of Omega", criterion6},
    {"dlog factors through K_2", criterion7},
    {"infrastructure properties", criterion8},
    {"stability oracle agreement", criterion9},
    {"determinism", criterion10},
}};

}  // namespace

int main(int argc, char** argv) {
  std::size_t only = argc > 1 ? std::stoul(argv[1]) : 0;
  bool all_pass = true;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    if (only && only != i + 1) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = kCriteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu (%s): %s  %s  [%.1f s]\n", i + 1, kCriteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), seconds);
    std::fflush(stdout);
    all_pass &= o.pass;
  }
  return all_pass ? 0 : 1;
}
