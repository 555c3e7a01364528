#include "fbsim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fbsim/expr.hpp"
#include "fbsim/separability.hpp"
#include "fbsim/states.hpp"

namespace fbsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  std::string t = trim(s);
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw ConfigError("expected a number, got '" + t + "'", line, 1);
  return v;
}

int parse_int(const std::string& s, int line) {
  int v = 0;
  std::string t = trim(s);
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw ConfigError("expected an integer, got '" + t + "'", line, 1);
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

struct RawSpace {
  std::vector<Subsystem> subsystems;
};

class ConfigParser {
 public:
  ScenarioConfig parse(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno_;
      handle_line(line);
    }
    if (raw_space_.subsystems.empty())
      throw ConfigError("missing [space] section with at least one subsystem", 1, 1);
    cfg_.space = SpaceSignature(raw_space_.subsystems);
    return std::move(cfg_);
  }

 private:
  ScenarioConfig cfg_;
  RawSpace raw_space_;
  std::string section_;
  int lineno_ = 0;

  void handle_line(const std::string& raw) {
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) return;

    if (line.rfind("[[channel]]", 0) == 0) {
      section_ = "channel";
      cfg_.channels.push_back({});
      cfg_.channels.back().line = lineno_;
      std::string rest = trim(line.substr(std::string("[[channel]]").size()));
      if (!rest.empty()) handle_inline_pairs(rest);
      return;
    }
    if (line.front() == '[') {
      auto close = line.find(']');
      if (close == std::string::npos)
        throw ConfigError("unterminated section header", lineno_, 1);
      section_ = trim(line.substr(1, close - 1));
      if (section_ != "space" && section_ != "base" && section_ != "init" &&
          section_ != "run")
        throw ConfigError("unknown section [" + section_ + "]", lineno_, 1);
      return;
    }
    handle_key_value(line);
  }

  void handle_inline_pairs(const std::string& rest) {
    // [[channel]] X = "x_1", Y = "x_2", meas_rate = 0.5, ...
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t comma = rest.size();
      bool quoted = false;
      for (std::size_t i = pos; i < rest.size(); ++i) {
        if (rest[i] == '"') quoted = !quoted;
        if (rest[i] == ',' && !quoted) {
          comma = i;
          break;
        }
      }
      std::string piece = trim(rest.substr(pos, comma - pos));
      if (!piece.empty()) handle_key_value(piece);
      pos = comma + 1;
    }
  }

  void handle_key_value(const std::string& line) {
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value", lineno_, 1);
    std::string key = trim(line.substr(0, eq));
    std::string value = unquote(trim(line.substr(eq + 1)));

    if (section_ == "space") {
      if (key != "subsystem")
        throw ConfigError("unknown key '" + key + "' in [space]", lineno_, 1);
      auto parts = split_ws(value);
      if (parts.size() < 2)
        throw ConfigError("subsystem needs '<label> <qubit|fock> [dim]'", lineno_, 1);
      Subsystem sub;
      sub.label = parts[0];
      if (parts[1] == "qubit") {
        sub.kind = SubsystemKind::Qubit;
        sub.dim = 2;
      } else if (parts[1] == "fock") {
        sub.kind = SubsystemKind::Fock;
        if (parts.size() < 3)
          throw ConfigError("fock subsystem needs a dimension", lineno_, 1);
        sub.dim = parse_int(parts[2], lineno_);
      } else {
        throw ConfigError("subsystem kind must be qubit or fock", lineno_, 1);
      }
      raw_space_.subsystems.push_back(std::move(sub));
    } else if (section_ == "base") {
      if (key == "hamiltonian") {
        cfg_.hamiltonian_expr = value;
      } else if (key == "dissipator") {
        // "<rate> <expr>"
        std::string t = trim(value);
        auto sp = t.find_first_of(" \t");
        if (sp == std::string::npos)
          throw ConfigError("dissipator needs '<rate> <jump expr>'", lineno_, 1);
        ScenarioConfig::DissipatorDecl d;
        d.rate = parse_double(t.substr(0, sp), lineno_);
        d.jump_expr = trim(t.substr(sp + 1));
        d.line = lineno_;
        cfg_.dissipators.push_back(std::move(d));
      } else {
        throw ConfigError("unknown key '" + key + "' in [base]", lineno_, 1);
      }
    } else if (section_ == "channel") {
      if (cfg_.channels.empty())
        throw ConfigError("channel key outside [[channel]]", lineno_, 1);
      auto& ch = cfg_.channels.back();
      if (key == "X") ch.x_expr = value;
      else if (key == "Y") ch.y_expr = value;
      else if (key == "meas_rate") ch.meas_rate = parse_double(value, lineno_);
      else if (key == "gain") ch.gain = parse_double(value, lineno_);
      else if (key == "mode") {
        if (value == "probe") ch.mode = FeedbackChannel::Mode::Probe;
        else if (value == "passive") ch.mode = FeedbackChannel::Mode::Passive;
        else throw ConfigError("mode must be probe or passive", lineno_, 1);
      } else {
        throw ConfigError("unknown key '" + key + "' in [[channel]]", lineno_, 1);
      }
    } else if (section_ == "init") {
      if (key != "state")
        throw ConfigError("unknown key '" + key + "' in [init]", lineno_, 1);
      cfg_.init_state = value;
    } else if (section_ == "run") {
      if (key == "t_final") cfg_.t_final = parse_double(value, lineno_);
      else if (key == "dt") cfg_.dt = parse_double(value, lineno_);
      else if (key == "stride") cfg_.stride = parse_int(value, lineno_);
      else if (key == "out") cfg_.out_path = value;
      else if (key == "observable") {
        ScenarioConfig::ObservableDecl ob;
        ob.line = lineno_;
        auto colon = value.find(':');
        if (colon == std::string::npos) {
          ob.name = trim(value);  // builtin
        } else {
          ob.name = trim(value.substr(0, colon));
          ob.expr = trim(value.substr(colon + 1));
        }
        cfg_.observables.push_back(std::move(ob));
      } else {
        throw ConfigError("unknown key '" + key + "' in [run]", lineno_, 1);
      }
    } else {
      throw ConfigError("key '" + key + "' before any section header", lineno_, 1);
    }
  }
};

OperatorMatrix eval_or_rethrow(const std::string& text, const SpaceSignature& space,
                               int line) {
  try {
    return evaluate_expr(text, space);
  } catch (const ExprError& e) {
    throw ConfigError(std::string("in expression '") + text + "': " + e.what(), line,
                      static_cast<int>(e.offset()) + 1);
  } catch (const SpaceError& e) {
    throw ConfigError(std::string("in expression '") + text + "': " + e.what(), line, 1);
  }
}

OperatorMatrix builtin_observable(const std::string& name, const SpaceSignature& space) {
  if (name == "duan_minus") return duan_minus_op(space);
  if (name == "duan_plus") return duan_plus_op(space);
  if (name == "duan_sum")
    return {space, duan_minus_op(space).mat + duan_plus_op(space).mat};
  if (name == "trace") return identity_op(space);
  if (name == "top_pop") {
    // summed top-Fock-level projector across fock subsystems
    Matrix m = Matrix::Zero(space.total_dim(), space.total_dim());
    for (std::size_t s = 0; s < space.size(); ++s) {
      if (space.at(s).kind != SubsystemKind::Fock) continue;
      Matrix proj = Matrix::Zero(space.at(s).dim, space.at(s).dim);
      proj(space.at(s).dim - 1, space.at(s).dim - 1) = 1.0;
      m += embed(space, s, proj).mat;
    }
    return {space, std::move(m)};
  }
  throw SpaceError("unknown builtin observable '" + name + "'");
}

DensityMatrix build_initial_state(const std::string& decl, const SpaceSignature& space,
                                  int line) {
  auto parts = split_ws(decl);
  if (parts.empty()) throw ConfigError("empty state declaration", line, 1);
  const std::string& kind = parts[0];
  if (kind == "vacuum") return vacuum_state(space);
  if (kind == "fock") {
    std::vector<int> occ;
    for (std::size_t i = 1; i < parts.size(); ++i) occ.push_back(parse_int(parts[i], line));
    return fock_state(space, occ);
  }
  if (kind == "coherent") {
    if ((parts.size() - 1) % 2 != 0)
      throw ConfigError("coherent state needs 're im' pairs", line, 1);
    std::vector<Complex> alphas;
    for (std::size_t i = 1; i + 1 < parts.size(); i += 2)
      alphas.emplace_back(parse_double(parts[i], line), parse_double(parts[i + 1], line));
    return coherent_product_state(space, alphas);
  }
  if (kind == "bloch") {
    if ((parts.size() - 1) % 3 != 0)
      throw ConfigError("bloch state needs 'x y z' triples", line, 1);
    std::vector<std::array<double, 3>> vs;
    for (std::size_t i = 1; i + 2 < parts.size(); i += 3)
      vs.push_back({parse_double(parts[i], line), parse_double(parts[i + 1], line),
                    parse_double(parts[i + 2], line)});
    return bloch_product_state(space, vs);
  }
  throw ConfigError("unknown state kind '" + kind +
                        "' (vacuum | fock | coherent | bloch)",
                    line, 1);
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) { return ConfigParser{}.parse(in); }

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0, 0);
  return parse_config(in);
}

ScenarioConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

BuiltScenario build_scenario(const ScenarioConfig& cfg) {
  const SpaceSignature& space = cfg.space;

  OperatorMatrix h = cfg.hamiltonian_expr.empty()
                         ? zero_op(space)
                         : eval_or_rethrow(cfg.hamiltonian_expr, space, 0);
  std::vector<Dissipator> diss;
  for (const auto& d : cfg.dissipators) {
    if (d.rate < 0.0)
      throw ConfigError("dissipator rate must be >= 0", d.line, 1);
    diss.push_back({d.rate, eval_or_rethrow(d.jump_expr, space, d.line)});
  }

  std::vector<FeedbackChannel> channels;
  for (const auto& c : cfg.channels) {
    if (c.x_expr.empty() || c.y_expr.empty())
      throw ConfigError("[[channel]] needs both X and Y expressions", c.line, 1);
    FeedbackChannel ch{eval_or_rethrow(c.x_expr, space, c.line), c.meas_rate,
                       eval_or_rethrow(c.y_expr, space, c.line), c.gain, c.mode};
    try {
      ch.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), c.line, 1);
    }
    channels.push_back(std::move(ch));
  }

  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be > 0", 0, 0);
  if (cfg.stride < 1) throw ConfigError("stride must be >= 1", 0, 0);

  std::vector<Observable> obs;
  for (const auto& ob : cfg.observables) {
    if (!ob.expr.empty()) {
      obs.push_back({ob.name, eval_or_rethrow(ob.expr, space, ob.line)});
    } else {
      try {
        obs.push_back({ob.name, builtin_observable(ob.name, space)});
      } catch (const SpaceError& e) {
        throw ConfigError(e.what(), ob.line, 1);
      }
    }
  }

  LindbladSpec base(space, std::move(h), std::move(diss));
  DensityMatrix rho0 = build_initial_state(cfg.init_state, space, 0);
  return BuiltScenario{space,        std::move(base), std::move(channels),
                       std::move(rho0), cfg.t_final,     cfg.dt,
                       cfg.stride,   cfg.out_path,    std::move(obs)};
}

}  // namespace fbsim
