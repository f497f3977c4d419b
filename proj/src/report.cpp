#include "mtk/report.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "mtk/errors.hpp"
#include "mtk/milnor.hpp"
#include "mtk/stability.hpp"

namespace mtk {

using json = nlohmann::ordered_json;

namespace {

constexpr int kMaxStabilityK = 6;

json integer_to_json(const Integer& x) {
  if (x.fits_slong_p()) return static_cast<std::int64_t>(x.get_si());
  return x.get_str();
}

Integer integer_from_json(const json& j) {
  if (j.is_string()) return Integer(j.get<std::string>());
  return Integer(static_cast<long>(j.get<std::int64_t>()));
}

json group_to_json(const GroupSummary& g) {
  json factors = json::array();
  for (const auto& f : g.factors) factors.push_back(integer_to_json(f));
  return json{{"factors", std::move(factors)}, {"free_rank", g.free_rank}};
}

GroupSummary group_from_json(const json& j) {
  GroupSummary g;
  for (const auto& f : j.at("factors")) g.factors.push_back(integer_from_json(f));
  g.free_rank = j.at("free_rank").get<std::size_t>();
  return g;
}

json stability_table(const std::map<int, bool>& table) {
  json out = json::object();
  for (auto [k, holds] : table) out[std::to_string(k)] = holds;
  return out;
}

std::map<int, bool> stability_from_json(const json& j) {
  std::map<int, bool> out;
  for (const auto& [k, v] : j.items()) out[std::stoi(k)] = v.get<bool>();
  return out;
}

VerdictStatus parse_status(const std::string& s) {
  for (auto st : {VerdictStatus::Pass, VerdictStatus::Fail, VerdictStatus::SkippedNotStable, VerdictStatus::NoHalf,
                  VerdictStatus::Info})
    if (s == status_name(st)) return st;
  throw Error(ErrorCode::InvalidArgument, "unknown verdict status '" + s + "'");
}

json verdict_to_json(const LemmaVerdict& v) {
  json j{{"id", v.id}, {"status", status_name(v.status)}, {"cases", v.cases}, {"passed", v.passed}};
  if (v.counterexample) j["counterexample"] = *v.counterexample;
  if (v.note) j["note"] = *v.note;
  return j;
}

LemmaVerdict verdict_from_json(const json& j, const std::string& ring) {
  LemmaVerdict v;
  v.id = j.at("id").get<std::string>();
  v.ring = ring;
  v.status = parse_status(j.at("status").get<std::string>());
  v.cases = j.at("cases").get<std::size_t>();
  v.passed = j.at("passed").get<std::size_t>();
  if (j.contains("counterexample")) v.counterexample = j["counterexample"].get<std::string>();
  if (j.contains("note")) v.note = j["note"].get<std::string>();
  return v;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::shared_ptr<const Ring> make_ring(const std::string& spec, std::size_t carrier_cap) {
  std::size_t cap = carrier_cap ? carrier_cap : default_carrier_cap();
  return Ring::make(parse_ring_spec(spec, cap), cap);
}

RingResult verify_one(const RunConfig& config, const std::string& spec, std::size_t n) {
  auto start = std::chrono::steady_clock::now();
  RingSession session(make_ring(spec, config.carrier_cap), config.generator_bound);
  RingResult result;
  result.ring = session.name();
  result.n = n;
  for (int k = 2; k <= kMaxStabilityK; ++k) result.weak_stability[k] = session.weakly_stable(k);

  const auto& tk = session.tangent(n + 1);
  result.groups["K"] = summarize(*tk->base_k().group());
  result.groups["TK"] = summarize(*tk->group());
  result.groups["Omega"] = summarize(*session.omega(n)->group());

  auto& out = result.verdicts;
  if (config.suite != Suite::Lemmas) {
    for (auto& v : verify_theorem(session, n).records()) out.push_back(std::move(v));
    out.push_back(verify_B_on_special_symbols(session, n));
    out.push_back(verify_tangent_decomposition(session, n));
    out.push_back(verify_dual_decomposition(session, n));
    out.push_back(verify_special_symbol_generation(session, n));
    out.push_back(verify_divisibility(session, n));
  }
  if (config.suite != Suite::Theorem) {
    for (int part = 1; part <= 3; ++part) out.push_back(verify_lemma_epseps(session, part));
    for (std::size_t N = 2; N <= 5; ++N)
      out.push_back(verify_lemma_cool(session, N, config.seed, N <= 3 ? 0 : config.samples));
    for (auto& v : verify_lemma_morrow(session)) out.push_back(std::move(v));
    out.push_back(verify_action(session, n));
    out.push_back(verify_dlog_steinberg(session));
    out.push_back(verify_omega_presentations(session, n));
  }
  result.timing_ms = elapsed_ms(start);
  return result;
}

}  // namespace

json RunConfig::to_json() const {
  json j{{"command", command}};
  if (catalog)
    j["catalog"] = *catalog;
  else if (!rings.empty())
    j["ring"] = rings.front();
  if (command == "compute") {
    j["target"] = target;
    if (target == "omega") j["policy"] = policy;
  }
  if (command != "ring-info") j["n"] = n;
  if (command == "verify") {
    j["suite"] = suite_name(suite);
    j["seed"] = seed;
    j["samples"] = samples;
    j["extended"] = extended;
  }
  j["generator_bound"] = generator_bound;
  j["carrier_cap"] = carrier_cap ? carrier_cap : default_carrier_cap();
  j["format"] = format == OutputFormat::Json ? "json" : "text";
  return j;
}

const char* suite_name(Suite suite) noexcept {
  switch (suite) {
    case Suite::Theorem: return "theorem";
    case Suite::Lemmas: return "lemmas";
    case Suite::All: return "all";
  }
  return "all";
}

Suite parse_suite(const std::string& text) {
  if (text == "theorem") return Suite::Theorem;
  if (text == "lemmas") return Suite::Lemmas;
  if (text == "all") return Suite::All;
  throw ParseError(0, "unknown suite '" + text + "'");
}

const std::vector<std::string>& default_catalog() {
  static const std::vector<std::string> catalog = {
      "zmod:7", "zmod:11", "zmod:49", "poly:zmod:3:x:x^2+1", "poly:zmod:7:t:t^2", "poly:zmod:5:t:t^2", "zmod:5", "zmod:9",
  };
  return catalog;
}

const std::vector<std::string>& extended_catalog() {
  static const std::vector<std::string> catalog = {"poly:zmod:7:t:t^2", "poly:zmod:3:x:x^2+1"};
  return catalog;
}

GroupSummary summarize(const FpAbelianGroup& group) {
  return GroupSummary{group.invariant_factors(), group.free_rank()};
}

RingResult ring_info(const std::string& spec, std::size_t carrier_cap) {
  auto start = std::chrono::steady_clock::now();
  auto ring = make_ring(spec, carrier_cap);
  RingResult result;
  result.ring = ring->spec().to_string();
  RingInfo info;
  info.size = ring->size();
  info.units = ring->unit_indices().size();
  UnitGroupData units(ring);
  std::vector<Integer> orders;
  for (auto d : units.orders()) orders.emplace_back(static_cast<long>(d));
  info.unit_group = summarize(*FpAbelianGroup::cyclic_sum(orders));
  info.characteristic = ring->characteristic();
  info.has_half = ring->has_half();
  result.info = info;
  for (int k = 2; k <= kMaxStabilityK; ++k) result.weak_stability[k] = check_weak_stability(*ring, k).holds;
  if (ring->size() <= kFullStabilityCarrierLimit) {
    std::map<int, bool> full;
    for (int k = 1; k <= kMaxStabilityK; ++k) full[k] = check_full_stability(*ring, k).holds;
    result.full_stability = full;
  }
  result.timing_ms = elapsed_ms(start);
  return result;
}

RingResult compute(const RunConfig& config, const std::string& spec) {
  auto start = std::chrono::steady_clock::now();
  auto ring = make_ring(spec, config.carrier_cap);
  RingResult result;
  result.ring = ring->spec().to_string();
  result.n = config.n;
  if (config.target == "kgroup") {
    result.groups["K"] = summarize(*KGroup::make(ring, config.n, config.generator_bound)->group());
  } else if (config.target == "tangent") {
    result.groups["TK"] = summarize(*TangentK::make(ring, config.n, config.generator_bound)->group());
  } else if (config.target == "omega") {
    OmegaPolicy policy = OmegaPolicy::Compact;
    if (config.policy == "all-elements")
      policy = OmegaPolicy::AllElements;
    else if (config.policy == "units-only")
      policy = OmegaPolicy::UnitsOnly;
    else if (config.policy != "compact")
      throw ParseError(0, "unknown omega policy '" + config.policy + "'");
    result.groups["Omega"] = summarize(*OmegaGroup::make(ring, config.n, policy, config.generator_bound)->group());
  } else {
    throw ParseError(0, "unknown target '" + config.target + "'");
  }
  result.timing_ms = elapsed_ms(start);
  return result;
}

Report run(const RunConfig& config) {
  Report report;
  report.config = config.to_json();

  std::vector<std::pair<std::string, std::size_t>> tasks;
  for (const auto& spec : config.rings) tasks.emplace_back(spec, config.n);
  if (config.command == "verify" && config.extended && config.catalog)
    for (const auto& spec : extended_catalog()) tasks.emplace_back(spec, 2);

  auto run_task = [&](const std::pair<std::string, std::size_t>& task) {
    if (config.command == "ring-info") return ring_info(task.first, config.carrier_cap);
    if (config.command == "compute") return compute(config, task.first);
    return verify_one(config, task.first, task.second);
  };

  std::vector<RingResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      try {
        results[i] = run_task(tasks[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  report.results = std::move(results);
  return report;
}

bool Report::has_red_flag() const {
  for (const auto& r : results)
    for (const auto& v : r.verdicts)
      if (v.red_flag()) return true;
  return false;
}

json Report::to_json() const {
  json results_json = json::array();
  for (const auto& r : results) {
    json j{{"ring", r.ring}};
    if (r.n) j["n"] = *r.n;
    if (r.info) {
      j["size"] = r.info->size;
      j["units"] = r.info->units;
      j["unit_group"] = group_to_json(r.info->unit_group);
      j["characteristic"] = r.info->characteristic;
      j["has_half"] = r.info->has_half;
    }
    json stability{{"weak", stability_table(r.weak_stability)}};
    stability["full"] = r.full_stability ? stability_table(*r.full_stability) : json(nullptr);
    j["stability"] = std::move(stability);
    json groups = json::object();
    for (const char* key : {"K", "TK", "Omega"}) {
      auto it = r.groups.find(key);
      if (it != r.groups.end()) groups[key] = group_to_json(it->second);
    }
    j["groups"] = std::move(groups);
    json verdicts = json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(verdict_to_json(v));
    j["verdicts"] = std::move(verdicts);
    j["timing_ms"] = r.timing_ms;
    results_json.push_back(std::move(j));
  }
  return json{{"version", version}, {"config", config}, {"results", std::move(results_json)}};
}

Report Report::from_json(const json& j) {
  Report report;
  report.version = j.at("version").get<std::string>();
  report.config = j.at("config");
  for (const auto& rj : j.at("results")) {
    RingResult r;
    r.ring = rj.at("ring").get<std::string>();
    if (rj.contains("n")) r.n = rj["n"].get<std::size_t>();
    if (rj.contains("size")) {
      RingInfo info;
      info.size = rj["size"].get<std::size_t>();
      info.units = rj.at("units").get<std::size_t>();
      info.unit_group = group_from_json(rj.at("unit_group"));
      info.characteristic = rj.at("characteristic").get<std::int64_t>();
      info.has_half = rj.at("has_half").get<bool>();
      r.info = info;
    }
    const auto& st = rj.at("stability");
    r.weak_stability = stability_from_json(st.at("weak"));
    if (!st.at("full").is_null()) r.full_stability = stability_from_json(st["full"]);
    for (const auto& [key, g] : rj.at("groups").items()) r.groups[key] = group_from_json(g);
    for (const auto& v : rj.at("verdicts")) r.verdicts.push_back(verdict_from_json(v, r.ring));
    r.timing_ms = rj.at("timing_ms").get<double>();
    report.results.push_back(std::move(r));
  }
  return report;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "mtk " << version << '\n';
  for (const auto& r : results) {
    out << '\n' << r.ring;
    if (r.n) out << "  (n = " << *r.n << ')';
    out << '\n';
    if (r.info) {
      out << "  size            " << r.info->size << '\n';
      out << "  units           " << r.info->units << '\n';
      out << "  unit group      " << factors_to_string(r.info->unit_group.factors, r.info->unit_group.free_rank) << '\n';
      out << "  characteristic  " << r.info->characteristic << '\n';
      out << "  has 1/2         " << (r.info->has_half ? "yes" : "no") << '\n';
    }
    if (!r.weak_stability.empty()) {
      out << "  weak stability ";
      for (auto [k, holds] : r.weak_stability) out << "  k=" << k << ':' << (holds ? 'y' : 'n');
      out << '\n';
    }
    if (r.full_stability) {
      out << "  full stability ";
      for (auto [k, holds] : *r.full_stability) out << "  k=" << k << ':' << (holds ? 'y' : 'n');
      out << '\n';
    } else if (r.info) {
      out << "  full stability   not computed (carrier above " << kFullStabilityCarrierLimit << ")\n";
    }
    for (const char* key : {"K", "TK", "Omega"}) {
      auto it = r.groups.find(key);
      if (it == r.groups.end()) continue;
      out << "  " << std::left << std::setw(6) << key << "  " << factors_to_string(it->second.factors, it->second.free_rank)
          << '\n';
    }
    for (const auto& v : r.verdicts) {
      out << "  " << std::left << std::setw(34) << v.id << ' ' << std::setw(18) << status_name(v.status) << ' ' << v.passed
          << '/' << v.cases;
      if (v.counterexample) out << "  counterexample: " << *v.counterexample;
      if (v.note) out << "  note: " << *v.note;
      out << '\n';
    }
    out << "  timing_ms " << std::fixed << std::setprecision(1) << r.timing_ms << '\n';
    out.unsetf(std::ios::fixed);
  }
  return out.str();
}

json strip_timings(json j) {
  if (j.is_object()) {
    j.erase("timing_ms");
    for (auto& [key, value] : j.items()) value = strip_timings(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = strip_timings(value);
  }
  return j;
}

}  // namespace mtk
