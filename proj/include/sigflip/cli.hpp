#pragma once

#include <optional>
#include <string>

#include "sigflip/config.hpp"

namespace sigflip {

struct CliOptions {
  std::optional<std::uint64_t> seed;       // overrides the config seed
  std::optional<std::string> vector_spec;  // decompose: comma-separated comps
  bool timings = false;  // wall-clock timings are opt-in: they break
                         // byte-reproducibility of reports
  int threads = 0;       // 0 = resolve_threads default (env-capped)
};

// Exit codes: 0 pass, 1 verdict failure, 2 config error, 3 analysis error.
// Each command catches its own errors, writes a one-line JSON error object
// to stderr, and returns the mapped code. out_path empty means stdout.
int cmd_analyze(const std::string& config_spec, const std::string& out_path,
                const CliOptions& opts = {});
int cmd_transform(const std::string& config_spec, const std::string& out_path,
                  const CliOptions& opts = {});
int cmd_decompose(const std::string& config_spec, const std::string& out_path,
                  const CliOptions& opts = {});
int cmd_verify(const std::string& config_spec, const std::string& out_path,
               const CliOptions& opts = {});

// Verdict structs aggregated by cmd_verify; exposed for tests.
struct VerifyVerdicts {
  bool biconditional = false;
  bool det_factorization_applicable = false;
  bool det_factorization = false;
  bool positivity = false;
  bool round_trip = false;
  bool frame_identities = false;
  bool rescaling = false;

  bool all_pass() const {
    return biconditional &&
           (!det_factorization_applicable || det_factorization) &&
           positivity && round_trip && frame_identities && rescaling;
  }
};

int exit_code_from(const VerifyVerdicts& v);

}  // namespace sigflip
