#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fbsim/feedback.hpp"

namespace fbsim {

/// Scenario-file parse error with 1-based line/column. CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line, int col)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

/// Parsed scenario file (see docs/config grammar in the README):
///   [space]     subsystem = <label> <qubit|fock> [dim]
///   [base]      hamiltonian = <expr> ; dissipator = <rate> <expr>
///   [[channel]] X = <expr>, Y = <expr>, meas_rate = <f>, gain = <f>,
///               mode = probe|passive        (keys inline and/or on lines)
///   [init]      state = vacuum | fock <n..> | coherent <re im ..> |
///               bloch <x y z ..>
///   [run]       t_final, dt, stride, out, observable = <name>: <expr> | builtin
struct ScenarioConfig {
  struct ChannelDecl {
    std::string x_expr, y_expr;
    double meas_rate = 0.0;
    double gain = 0.0;
    FeedbackChannel::Mode mode = FeedbackChannel::Mode::Probe;
    int line = 0;
  };
  struct DissipatorDecl {
    double rate = 0.0;
    std::string jump_expr;
    int line = 0;
  };
  struct ObservableDecl {
    std::string name;
    std::string expr;  // empty for builtins (name is the builtin)
    int line = 0;
  };

  SpaceSignature space;
  std::string hamiltonian_expr;  // empty -> zero
  std::vector<DissipatorDecl> dissipators;
  std::vector<ChannelDecl> channels;
  std::string init_state = "vacuum";  // raw state line
  double t_final = 1.0;
  double dt = 0.01;
  int stride = 1;
  std::string out_path;  // empty -> stdout
  std::vector<ObservableDecl> observables;
};

ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_string(const std::string& text);

/// Everything a command needs, evaluated on the declared space.
struct BuiltScenario {
  SpaceSignature space;
  LindbladSpec base;
  std::vector<FeedbackChannel> channels;
  DensityMatrix rho0;
  double t_final;
  double dt;
  int stride;
  std::string out_path;
  std::vector<Observable> observables;
};

BuiltScenario build_scenario(const ScenarioConfig& cfg);

}  // namespace fbsim
