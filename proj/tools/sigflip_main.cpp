#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sigflip/cli.hpp"

namespace {

struct SubArgs {
  std::string positional;
  std::string config;
  std::string out;
  sigflip::CliOptions opts;
};

void add_common(CLI::App* sub, SubArgs& a) {
  sub->add_option("spec", a.positional, "config file path or gallery:NAME");
  sub->add_option("--config", a.config, "config file path");
  sub->add_option("--out", a.out, "write output here instead of stdout");
  sub->add_option("--seed", a.opts.seed, "override the config seed");
  sub->add_option("--threads", a.opts.threads,
                  "worker threads (0 = auto, capped by SIGFLIP_THREADS)");
  sub->add_flag("--timings", a.opts.timings,
                "include wall-clock timings in the report (breaks "
                "byte-reproducibility)");
}

int config_error(const std::string& message) {
  nlohmann::ordered_json err;
  err["error"]["category"] = "config";
  err["error"]["message"] = message;
  std::cerr << err.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "analysis of metrics that change signature type across a hypersurface"};
  app.name("sigflip");
  app.require_subcommand(1);

  SubArgs analyze_args, transform_args, decompose_args, verify_args;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "signature grid and hypersurface location report (JSON)");
  add_common(analyze, analyze_args);
  CLI::App* transform = app.add_subcommand(
      "transform", "sample the derived metric of a triple onto CSV");
  add_common(transform, transform_args);
  CLI::App* decompose = app.add_subcommand(
      "decompose", "recover f and g from a metric and a line field, to CSV");
  add_common(decompose, decompose_args);
  decompose->add_option(
      "--vector", decompose_args.opts.vector_spec,
      "comma-separated V components (expressions in the chart coords)");
  CLI::App* verify =
      app.add_subcommand("verify", "run the verdict suite on a triple (JSON)");
  add_common(verify, verify_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    return config_error(e.what());
  }

  auto spec_of = [&](const SubArgs& a, std::string& spec) -> bool {
    if (!a.positional.empty() && !a.config.empty() &&
        a.positional != a.config) {
      config_error("both a positional spec and --config were given");
      return false;
    }
    spec = a.positional.empty() ? a.config : a.positional;
    if (spec.empty()) {
      config_error("no config given: pass a path or gallery:NAME");
      return false;
    }
    return true;
  };

  std::string spec;
  if (app.got_subcommand(analyze)) {
    if (!spec_of(analyze_args, spec)) return 2;
    return sigflip::cmd_analyze(spec, analyze_args.out, analyze_args.opts);
  }
  if (app.got_subcommand(transform)) {
    if (!spec_of(transform_args, spec)) return 2;
    return sigflip::cmd_transform(spec, transform_args.out,
                                  transform_args.opts);
  }
  if (app.got_subcommand(decompose)) {
    if (!spec_of(decompose_args, spec)) return 2;
    return sigflip::cmd_decompose(spec, decompose_args.out,
                                  decompose_args.opts);
  }
  if (app.got_subcommand(verify)) {
    if (!spec_of(verify_args, spec)) return 2;
    return sigflip::cmd_verify(spec, verify_args.out, verify_args.opts);
  }
  return config_error("unknown subcommand");
}
