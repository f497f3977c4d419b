#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <memory>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "mtk/errors.hpp"
#include "mtk/report.hpp"

using namespace mtk;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(MTK_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

RunConfig verify_config(const std::string& spec, Suite suite, std::size_t n = 1) {
  RunConfig c;
  c.command = "verify";
  c.rings = {spec};
  c.suite = suite;
  c.n = n;
  return c;
}

// Minimal structural schema check of a report.
void check_schema(const json& j) {
  REQUIRE(j.is_object());
  CHECK(j.at("version").is_string());
  CHECK(j.at("config").is_object());
  REQUIRE(j.at("results").is_array());
  for (const auto& r : j["results"]) {
    CHECK(r.at("ring").is_string());
    CHECK(r.at("stability").at("weak").is_object());
    CHECK(r.at("groups").is_object());
    for (const auto& [name, g] : r["groups"].items()) {
      CHECK((name == "K" || name == "TK" || name == "Omega"));
      CHECK(g.at("factors").is_array());
      CHECK(g.at("free_rank").is_number_unsigned());
    }
    REQUIRE(r.at("verdicts").is_array());
    for (const auto& v : r["verdicts"]) {
      CHECK(v.at("id").is_string());
      CHECK(v.at("status").is_string());
      CHECK(v.at("cases").is_number_unsigned());
      CHECK(v.at("passed").is_number_unsigned());
      for (const auto& [key, value] : v.items())
        CHECK(std::set<std::string>{"id", "status", "cases", "passed", "counterexample", "note"}.count(key) == 1);
    }
    CHECK(r.at("timing_ms").is_number());
  }
}

}  // namespace

TEST_CASE("report JSON round-trips") {
  auto report = run(verify_config("poly:zmod:5:t:t^2", Suite::All));
  auto j = report.to_json();
  check_schema(j);
  auto back = Report::from_json(json::parse(j.dump()));
  CHECK(back.to_json() == j);
}

TEST_CASE("text and JSON carry the same verdicts") {
  auto report = run(verify_config("zmod:7", Suite::All));
  std::istringstream text(report.to_text());
  std::vector<std::pair<std::string, std::string>> from_text;
  std::string line;
  while (std::getline(text, line)) {
    std::istringstream words(line);
    std::string id, status;
    words >> id >> status;
    if (status == "PASS" || status == "FAIL" || status == "INFO" || status == "NO_HALF" || status == "SKIPPED_NOT_STABLE")
      from_text.emplace_back(id, status);
  }
  std::vector<std::pair<std::string, std::string>> from_json;
  auto j = report.to_json();
  for (const auto& v : j["results"][0]["verdicts"])
    from_json.emplace_back(v["id"].get<std::string>(), v["status"].get<std::string>());
  CHECK(from_text == from_json);
  CHECK_FALSE(from_json.empty());
}

TEST_CASE("timings are the only run-dependent content") {
  auto a = run(verify_config("poly:zmod:7:t:t^2", Suite::Theorem)).to_json();
  auto b = run(verify_config("poly:zmod:7:t:t^2", Suite::Theorem)).to_json();
  CHECK(strip_timings(a).dump() == strip_timings(b).dump());
  CHECK(strip_timings(a).dump().find("timing_ms") == std::string::npos);
}

TEST_CASE("red flags are exactly failing verdicts") {
  Report r;
  r.results.emplace_back();
  r.results[0].verdicts.push_back(LemmaVerdict{"x", "zmod:7", VerdictStatus::Info, 1, 0, std::nullopt, std::nullopt});
  r.results[0].verdicts.push_back(LemmaVerdict{"y", "zmod:7", VerdictStatus::SkippedNotStable, 0, 0, {}, {}});
  CHECK_FALSE(r.has_red_flag());
  r.results[0].verdicts.push_back(LemmaVerdict{"z", "zmod:7", VerdictStatus::Fail, 1, 0, std::string("case"), {}});
  CHECK(r.has_red_flag());
}

TEST_CASE("catalog order is preserved under concurrency") {
  RunConfig c;
  c.command = "ring-info";
  c.rings = default_catalog();
  c.jobs = 4;
  auto report = run(c);
  REQUIRE(report.results.size() == default_catalog().size());
  for (std::size_t i = 0; i < report.results.size(); ++i) CHECK(report.results[i].ring == default_catalog()[i]);
}

TEST_CASE("cli ring-info") {
  auto r = cli("ring-info --ring zmod:7 --format json");
  REQUIRE(r.exit_code == 0);
  REQUIRE_FALSE(r.out.empty());
  CHECK(r.out.back() == '\n');
  auto j = json::parse(r.out);
  check_schema(j);
  auto res = j["results"][0];
  CHECK(res["size"] == 7);
  CHECK(res["units"] == 6);
  CHECK(res["unit_group"]["factors"] == json::array({6}));
  CHECK(res["has_half"] == true);
  for (int k = 2; k <= 6; ++k) CHECK(res["stability"]["weak"][std::to_string(k)] == true);

  auto z4 = json::parse(cli("ring-info --ring zmod:4 --format json").out);
  CHECK(z4["results"][0]["has_half"] == false);

  auto t = json::parse(cli("ring-info --ring poly:zmod:7:t:t^2 --format json").out);
  CHECK(t["results"][0]["size"] == 49);
  CHECK(t["results"][0]["units"] == 42);
}

TEST_CASE("cli compute") {
  auto factors = [](const std::string& target, const char* key) {
    auto r = cli("compute --ring zmod:7 --n 1 --target " + target + " --format json");
    REQUIRE(r.exit_code == 0);
    return json::parse(r.out)["results"][0]["groups"][key]["factors"];
  };
  CHECK(factors("omega", "Omega") == json::array());
  CHECK(factors("kgroup", "K") == json::array({6}));
  CHECK(factors("tangent", "TK") == json::array({7}));
}

TEST_CASE("cli verify examples") {
  auto t = cli("verify --ring poly:zmod:7:t:t^2 --suite theorem --n 1 --format json");
  CHECK(t.exit_code == 0);
  auto tj = json::parse(t.out);
  check_schema(tj);
  CHECK(tj["results"][0]["verdicts"][0]["id"] == "theorem");
  CHECK(tj["results"][0]["verdicts"][0]["status"] == "PASS");

  auto l = cli("verify --ring zmod:5 --suite lemmas --format json");
  CHECK(l.exit_code == 0);
  auto lj = json::parse(l.out);
  for (const auto& v : lj["results"][0]["verdicts"])
    if (v["id"].get<std::string>().rfind("morrow", 0) == 0) CHECK(v["status"] == "SKIPPED_NOT_STABLE");

  auto z6 = cli("verify --ring zmod:6 --suite all --format json");
  CHECK(z6.exit_code == 0);
  CHECK(json::parse(z6.out)["results"][0]["verdicts"][0]["status"] == "NO_HALF");
}

TEST_CASE("cli exit codes") {
  CHECK(cli("ring-info --ring zmod:").exit_code == 2);
  CHECK(cli("ring-info --ring poly:zmod:7:t").exit_code == 2);
  CHECK(cli("compute --ring zmod:7 --n 1 --target nonsense").exit_code == 2);
  CHECK(cli("verify --n 1").exit_code == 2);
  CHECK(cli("frobnicate").exit_code == 2);
  CHECK(cli("ring-info --ring zmod:5000").exit_code == 3);
  CHECK(cli("ring-info --ring zmod:100 --carrier-cap 50").exit_code == 3);
  CHECK(cli("compute --ring dual:poly:zmod:7:t:t^2 --n 15 --target kgroup").exit_code == 3);
  CHECK(cli("--help").exit_code == 0);
}

TEST_CASE("cli output file matches stdout") {
  std::string path = "report_test_output.json";
  auto a = cli("verify --ring zmod:7 --suite theorem --format json --output " + path);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out.empty());
  std::FILE* f = std::fopen(path.c_str(), "rb");
  REQUIRE(f != nullptr);
  std::string body;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) body.append(buf, n);
  std::fclose(f);
  std::remove(path.c_str());
  auto b = cli("verify --ring zmod:7 --suite theorem --format json");
  CHECK(strip_timings(json::parse(body)) == strip_timings(json::parse(b.out)));
}
