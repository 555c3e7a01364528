#pragma once

#include <iosfwd>

#include "fbsim/config.hpp"
#include "fbsim/moments.hpp"

namespace fbsim {

// Exit codes shared by the CLI: 0 ok, 1 parse error, 2 composition not
// completely positive (or passive budget missing), 3 numeric failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitNonCP = 2;
inline constexpr int kExitNumeric = 3;

int cmd_derive(const BuiltScenario& scenario, std::ostream& out);
int cmd_evolve(const BuiltScenario& scenario, std::ostream& info);
int cmd_steady(const BuiltScenario& scenario, std::ostream& out,
               int null_space_dim_cap = 36);

struct ScanArgs {
  double from = 0.5;
  double to = 1.5;
  int points = 11;
  double gamma_minus = 3.0;
  double gamma_plus = 1.0;
  int fock_dim = 0;  // 0 -> closed form only; > 0 adds a simulated column
  std::string out_path;
  int threads = 0;  // 0 -> FEEDBACKSIM_THREADS or hardware
};

int cmd_scan(const ScanArgs& args, std::ostream& out, std::ostream& info);

struct SeparabilityArgs {
  std::optional<double> g, gamma_a, gamma_b;       // bilinear form
  std::optional<double> g12, gamma_minus, gamma_plus;  // squeezing form
};

int cmd_separability(const SeparabilityArgs& args, std::ostream& out);

struct VerifyArgs {
  unsigned seed = 20240817;
  double corrupt_gain = 1.0;  // negative-control hook: scales the reduction-law
                              // gain inside the checked copy
};

int cmd_verify(const VerifyArgs& args, std::ostream& out);

/// Attempt to express the spec's dissipative part as nonnegative rates on
/// named generators (a_j, adag_j, x_j, y_j, n_j, sx/sy/sz_j); used by derive.
struct RecognizedDissipators {
  bool ok = false;
  std::vector<std::pair<std::string, double>> rates;  // (name, rate)
  double residual = 0.0;
};
RecognizedDissipators recognize_dissipators(const LindbladSpec& spec);

}  // namespace fbsim
