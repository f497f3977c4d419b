#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mtk/errors.hpp"
#include "mtk/report.hpp"

namespace {

// Exit-code contract: 0 clean, 1 red flag, 2 parse error, 3 resource bound, 4 internal error.
constexpr int kExitRedFlag = 1;
constexpr int kExitParse = 2;
constexpr int kExitResource = 3;
constexpr int kExitInternal = 4;

void add_common(CLI::App* sub, mtk::RunConfig& config) {
  sub->add_option("--bound", config.generator_bound, "generator-count bound for tensor and tuple presentations");
  sub->add_option("--carrier-cap", config.carrier_cap, "largest ring carrier (default: $MTK_CARRIER_CAP or 4096)");
  sub->add_option("--format", config.format, "output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, mtk::OutputFormat>{{"text", mtk::OutputFormat::Text}, {"json", mtk::OutputFormat::Json}}));
  sub->add_option("--output", config.output, "write the report to PATH instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Milnor K-theory tangent space checker"};
  app.set_version_flag("--version", std::string(mtk::kToolVersion));
  app.require_subcommand(1);

  mtk::RunConfig config;
  std::string ring;
  std::string catalog;
  std::string suite = "all";

  auto* info = app.add_subcommand("ring-info", "carrier, units and stability table of a ring");
  info->add_option("--ring", ring, "ring spec, e.g. poly:zmod:7:t:t^2")->required();
  add_common(info, config);

  auto* compute = app.add_subcommand("compute", "invariant factors of K^M_n, TK^M_n or Omega^n");
  compute->add_option("--ring", ring, "ring spec")->required();
  compute->add_option("--n", config.n, "degree")->required();
  compute->add_option("--target", config.target, "group to compute")
      ->required()
      ->check(CLI::IsMember({"kgroup", "omega", "tangent"}));
  compute->add_option("--policy", config.policy, "Omega presentation")
      ->check(CLI::IsMember({"compact", "all-elements", "units-only"}));
  add_common(compute, config);

  auto* verify = app.add_subcommand("verify", "run the theorem and lemma suites");
  auto* ring_opt = verify->add_option("--ring", ring, "ring spec");
  auto* catalog_opt = verify->add_option("--catalog", catalog, "named ring catalog")->check(CLI::IsMember({"default"}));
  ring_opt->excludes(catalog_opt);
  verify->add_option("--n", config.n, "degree n: TK^M_{n+1} against Omega^n");
  verify->add_option("--suite", suite, "suite")->check(CLI::IsMember({"theorem", "lemmas", "all"}));
  verify->add_option("--seed", config.seed, "seed for sampled lemma checks");
  verify->add_option("--samples", config.samples, "samples per sampled lemma check");
  verify->add_flag("--extended", config.extended, "also run n = 2 on the extended catalog rings");
  verify->add_option("--jobs", config.jobs, "catalog entries processed concurrently")->check(CLI::PositiveNumber);
  add_common(verify, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (verify->parsed()) {
      config.command = "verify";
      if (!catalog.empty()) {
        config.catalog = catalog;
        config.rings = mtk::default_catalog();
      } else if (!ring.empty()) {
        config.rings = {ring};
      } else {
        std::cerr << "verify: one of --ring or --catalog is required\n";
        return kExitParse;
      }
      config.suite = mtk::parse_suite(suite);
    } else {
      config.command = info->parsed() ? "ring-info" : "compute";
      config.rings = {ring};
    }

    mtk::Report report = mtk::run(config);
    std::string body =
        config.format == mtk::OutputFormat::Json ? report.to_json().dump(2) + "\n" : report.to_text();
    if (config.output) {
      std::ofstream file(*config.output, std::ios::binary);
      if (!file) {
        std::cerr << "cannot open " << *config.output << " for writing\n";
        return kExitInternal;
      }
      file << body;
    } else {
      std::cout << body;
    }
    return report.has_red_flag() ? kExitRedFlag : 0;
  } catch (const mtk::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitParse;
  } catch (const mtk::Error& e) {
    std::cerr << e.what() << '\n';
    if (e.code() == mtk::ErrorCode::CarrierTooLarge || e.code() == mtk::ErrorCode::TensorTooLarge) return kExitResource;
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
