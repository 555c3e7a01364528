#include "fbsim/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "fbsim/csv.hpp"
#include "fbsim/oracle.hpp"
#include "fbsim/random.hpp"

namespace fbsim {

namespace {

LindbladSpec compose_scenario(const BuiltScenario& sc) {
  return compose_feedback(sc.base, sc.channels);
}

struct HamiltonianMatch {
  std::string text;
};

/// Project H onto a handful of named forms; fall back to a pattern summary.
HamiltonianMatch describe_hamiltonian(const SpaceSignature& space, const Matrix& h) {
  const double norm = h.norm();
  if (norm <= 1e-14) return {"H = 0"};

  auto try_match = [&](const Matrix& candidate, const std::string& name)
      -> std::optional<std::string> {
    const double c2 = candidate.squaredNorm();
    if (c2 <= 0.0) return std::nullopt;
    Complex coef = (candidate.adjoint() * h).trace() / c2;
    if ((h - coef * candidate).norm() <= 1e-10 * norm && std::abs(coef.imag()) <=
        1e-10 * std::abs(coef.real())) {
      std::ostringstream os;
      os << "H = " << format_float(coef.real()) << " * (" << name << ")";
      return os.str();
    }
    return std::nullopt;
  };

  std::vector<std::pair<Matrix, std::string>> candidates;
  std::vector<std::size_t> fock;
  for (std::size_t s = 0; s < space.size(); ++s)
    if (space.at(s).kind == SubsystemKind::Fock) fock.push_back(s);
  for (std::size_t i = 0; i < fock.size(); ++i)
    for (std::size_t j = i + 1; j < fock.size(); ++j) {
      const std::string& li = space.at(fock[i]).label;
      const std::string& lj = space.at(fock[j]).label;
      Matrix ai = build_generator(space, li, Generator::Annihilate).mat;
      Matrix aj = build_generator(space, lj, Generator::Annihilate).mat;
      candidates.push_back({ai * aj + (ai * aj).adjoint(),
                            "a_" + li + "*a_" + lj + " + adag_" + li + "*adag_" + lj});
      Matrix xi = build_generator(space, li, Generator::X).mat;
      Matrix xj = build_generator(space, lj, Generator::X).mat;
      candidates.push_back({xi * xj, "x_" + li + "*x_" + lj});
    }
  for (auto& [mat, name] : candidates)
    if (auto m = try_match(mat, name)) return {*m};

  std::ostringstream os;
  Eigen::Index nnz = 0;
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      if (std::abs(h(i, j)) > 1e-12 * norm) ++nnz;
  os << "H: " << nnz << " nonzeros, frobenius " << format_float(norm);
  return {os.str()};
}

std::vector<std::pair<std::string, Matrix>> candidate_family(
    const SpaceSignature& space, int family) {
  std::vector<std::pair<std::string, Matrix>> out;
  for (const auto& sub : space.subsystems()) {
    if (sub.kind == SubsystemKind::Fock) {
      auto add = [&](Generator g) {
        out.push_back({generator_name(g) + "_" + sub.label,
                       build_generator(space, sub.label, g).mat});
      };
      switch (family) {
        case 0: add(Generator::Annihilate); add(Generator::Create); break;
        case 1: add(Generator::X); add(Generator::Y); break;
        case 2:
          add(Generator::Annihilate); add(Generator::Create); add(Generator::Number);
          break;
        case 3: add(Generator::X); add(Generator::Y); add(Generator::Number); break;
      }
    } else {
      out.push_back({"sz_" + sub.label,
                     build_generator(space, sub.label, Generator::PauliZ).mat});
      out.push_back({"sx_" + sub.label,
                     build_generator(space, sub.label, Generator::PauliX).mat});
      out.push_back({"sy_" + sub.label,
                     build_generator(space, sub.label, Generator::PauliY).mat});
    }
  }
  return out;
}

}  // namespace

RecognizedDissipators recognize_dissipators(const LindbladSpec& spec) {
  RecognizedDissipators best;
  DissipativePart total(spec.space());
  total.add(spec);
  const double scale = std::max(1.0, total.max_abs_eigenvalue());
  if (total.hamiltonian_correction().norm() > 1e-10 * scale) return best;

  for (int family = 0; family < 4; ++family) {
    auto candidates = candidate_family(spec.space(), family);
    if (candidates.empty()) continue;

    // joint basis: total's span extended by the candidates
    std::vector<Matrix> joint = total.basis();
    auto coords_of = [&](const Matrix& op, bool extend) {
      const int d = spec.space().total_dim();
      Matrix t = op - (op.trace() / double(d)) * Matrix::Identity(d, d);
      Matrix r = t;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& e : joint) r -= (e.adjoint() * r).trace() * e;
      if (extend && r.norm() > 1e-12) joint.push_back(r / r.norm());
      Vector q(joint.size());
      for (std::size_t i = 0; i < joint.size(); ++i)
        q(i) = (joint[i].adjoint() * t).trace();
      return q;
    };
    for (const auto& [name, op] : candidates) coords_of(op, true);

    const int m = static_cast<int>(joint.size());
    const int nc = static_cast<int>(candidates.size());
    Matrix k_tot = Matrix::Zero(m, m);
    {
      const auto& kb = total.kossakowski();
      k_tot.topLeftCorner(kb.rows(), kb.cols()) = kb;
    }

    Eigen::MatrixXd a(2 * m * m, nc);
    Eigen::VectorXd b(2 * m * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        b(2 * (i * m + j)) = k_tot(i, j).real();
        b(2 * (i * m + j) + 1) = k_tot(i, j).imag();
      }
    for (int c = 0; c < nc; ++c) {
      Vector q = coords_of(candidates[c].second, false);
      Matrix v = q * q.adjoint();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          a(2 * (i * m + j), c) = v(i, j).real();
          a(2 * (i * m + j) + 1, c) = v(i, j).imag();
        }
    }

    Eigen::VectorXd r = a.colPivHouseholderQr().solve(b);
    double residual = (a * r - b).norm();
    if (residual > 1e-9 * scale) continue;
    bool nonneg = true;
    for (int c = 0; c < nc; ++c)
      if (r(c) < -1e-9 * scale) nonneg = false;
    if (!nonneg) continue;

    RecognizedDissipators rec;
    rec.ok = true;
    rec.residual = residual;
    for (int c = 0; c < nc; ++c)
      if (r(c) > 1e-9 * scale) rec.rates.push_back({candidates[c].first, r(c)});
    return rec;
  }
  return best;
}

int cmd_derive(const BuiltScenario& scenario, std::ostream& out) {
  LindbladSpec eff = compose_scenario(scenario);

  out << "space: " << eff.space().describe() << "\n";
  out << describe_hamiltonian(eff.space(), eff.hamiltonian().mat).text << "\n";

  RecognizedDissipators rec = recognize_dissipators(eff);
  if (rec.ok) {
    out << "dissipators (recognized):\n";
    for (const auto& [name, rate] : rec.rates)
      out << "  rate " << format_float(rate) << "  D[" << name << "]\n";
  } else {
    out << "dissipators (spectral form):\n";
    for (const auto& d : eff.dissipators())
      out << "  rate " << format_float(d.rate) << "  jump frobenius "
          << format_float(d.jump.mat.norm()) << "\n";
  }
  out << "dissipator count: " << eff.dissipators().size() << "\n";
  return kExitOk;
}

int cmd_evolve(const BuiltScenario& scenario, std::ostream& info) {
  LindbladSpec eff = compose_scenario(scenario);

  EvolveOptions opts;
  opts.observables = scenario.observables;
  opts.stride = scenario.stride;
  Trajectory traj = evolve(eff, scenario.rho0, scenario.t_final, scenario.dt, opts);

  std::vector<std::string> header{"t"};
  for (const auto& name : traj.names) header.push_back(name);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    for (const auto& col : traj.columns) row.push_back(col[i]);
    rows.push_back(std::move(row));
  }

  if (scenario.out_path.empty()) {
    write_csv(std::cout, header, rows);
  } else {
    std::ofstream f(scenario.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + scenario.out_path);
    write_csv(f, header, rows);
    info << "wrote " << rows.size() << " rows to " << scenario.out_path
         << " (truncation metric " << format_float(traj.truncation_metric) << ")\n";
  }
  return kExitOk;
}

int cmd_steady(const BuiltScenario& scenario, std::ostream& out, int null_space_dim_cap) {
  LindbladSpec eff = compose_scenario(scenario);

  SteadyStateOptions opts;
  opts.null_space_dim_cap = null_space_dim_cap;
  SteadyStateResult res = steady_state(eff, opts);

  out << "multiplicity=" << res.multiplicity << "\n";
  out << "residual=" << format_float(res.residual_norm) << "\n";
  if (!res.rho) {
    out << "degenerate=1\n";
    return kExitOk;
  }
  out << "degenerate=0\n";
  out << "truncation_metric=" << format_float(res.truncation_metric) << "\n";
  for (const auto& ob : scenario.observables)
    out << ob.name << "=" << format_float(expectation(*res.rho, ob.op).real()) << "\n";
  return kExitOk;
}

namespace {

int scan_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FEEDBACKSIM_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

int cmd_scan(const ScanArgs& args, std::ostream& out, std::ostream& info) {
  if (args.points < 1) throw ConfigError("scan needs points >= 1", 0, 0);
  SqueezingProblem base{0.0, args.gamma_minus, args.gamma_plus};
  base.g12 = args.from;
  base.validate();

  struct Row {
    double g = 0.0, vss = 0.0, duan = 0.0;
    bool entangled = false;
    double duan_sim = 0.0;
  };
  std::vector<Row> rows(args.points);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < args.points; i = next.fetch_add(1)) {
      double g = args.points == 1
                     ? args.from
                     : args.from + (args.to - args.from) * i / (args.points - 1.0);
      SqueezingProblem p{g, args.gamma_minus, args.gamma_plus};
      SqueezingVerdict v = squeezing_verdict(p);
      rows[i] = {g, v.v_ss, 2.0 * v.v_ss, v.entangled_steady, 0.0};
      if (args.fock_dim > 0) {
        LindbladSpec spec = noisy_squeezing_spec(p, args.fock_dim);
        SteadyStateOptions sopts;
        sopts.guess = thermal_product_state(
            spec.space(), p.gamma_plus / (p.gamma_minus - p.gamma_plus));
        sopts.residual_tol = 1e-8;
        SteadyStateResult res = steady_state(spec, sopts);
        rows[i].duan_sim = res.rho ? duan_witness(*res.rho) : 0.0;
      }
    }
  };

  int n_threads = std::min(scan_thread_count(args.threads), args.points);
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::string> header{"g_over_gamma_plus", "V_ss", "duan_sum", "entangled"};
  if (args.fock_dim > 0) header.push_back("duan_sum_sim");
  std::vector<std::vector<double>> table;
  for (const auto& r : rows) {
    std::vector<double> row{r.g / args.gamma_plus, r.vss, r.duan,
                            r.entangled ? 1.0 : 0.0};
    if (args.fock_dim > 0) row.push_back(r.duan_sim);
    table.push_back(std::move(row));
  }

  if (args.out_path.empty()) {
    write_csv(out, header, table);
  } else {
    std::ofstream f(args.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + args.out_path);
    write_csv(f, header, table);
    info << "wrote " << table.size() << " rows to " << args.out_path << "\n";
  }
  return kExitOk;
}

int cmd_separability(const SeparabilityArgs& args, std::ostream& out) {
  const bool bilinear = args.g.has_value();
  const bool squeezing = args.g12.has_value();
  if (bilinear == squeezing)
    throw ConfigError(
        "separability needs either --g/--gammaA/--gammaB or --g12/--gm/--gp", 0, 0);

  if (bilinear) {
    if (!args.gamma_a || !args.gamma_b)
      throw ConfigError("bilinear separability needs --gammaA and --gammaB", 0, 0);
    BilinearDephasingProblem p{*args.g, *args.gamma_a, *args.gamma_b};
    BilinearVerdict v = bilinear_verdict(p);
    out << "verdict=" << (v.separable ? "separable" : "entangling") << "\n";
    out << "g_max=" << format_float(std::sqrt(p.gamma_a * p.gamma_b)) << "\n";
    if (v.witness) {
      out << "meas_rate_A=" << format_float(v.witness->meas_rate_a) << "\n";
      out << "meas_rate_B=" << format_float(v.witness->meas_rate_b) << "\n";
      out << "gain_A_to_B=" << format_float(v.witness->gain_a_to_b) << "\n";
      out << "gain_B_to_A=" << format_float(v.witness->gain_b_to_a) << "\n";
    }
    return kExitOk;
  }

  if (!args.gamma_minus || !args.gamma_plus)
    throw ConfigError("squeezing separability needs --gm and --gp", 0, 0);
  SqueezingProblem p{*args.g12, *args.gamma_minus, *args.gamma_plus};
  SqueezingVerdict v = squeezing_verdict(p);
  out << "verdict=" << (v.separable_constructible ? "separable" : "entangling") << "\n";
  out << "V_ss=" << format_float(v.v_ss) << "\n";
  out << "duan_sum=" << format_float(2.0 * v.v_ss) << "\n";
  out << "entangled_steady=" << (v.entangled_steady ? 1 : 0) << "\n";
  return kExitOk;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  std::mt19937 rng(args.seed);
  int passed = 0, total = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    ++total;
    if (ok) ++passed;
    out << "check " << name << ": " << (ok ? "PASS" : "FAIL") << " (" << detail << ")\n";
  };

  {  // expanded vs compact superoperators on random channels
    double worst = 0.0;
    std::uniform_real_distribution<double> rate_dist(0.05, 2.0);
    std::uniform_real_distribution<double> gain_dist(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
      int d = 3 + trial % 4;
      SpaceSignature space = SpaceSignature::single_fock("s", d);
      FeedbackChannel ch{OperatorMatrix(space, random_hermitian(rng, d)),
                         rate_dist(rng),
                         OperatorMatrix(space, random_hermitian(rng, d)),
                         gain_dist(rng),
                         FeedbackChannel::Mode::Probe};
      Matrix exp_s = channel_generator(ch, DeltaForm::Expanded).superop();
      Matrix cmp_s = channel_generator(ch, DeltaForm::Compact).superop();
      worst = std::max(worst, (exp_s - cmp_s).norm() / exp_s.norm());
    }
    report("compact_expanded_equivalence", worst <= 1e-12,
           "max rel frobenius err " + format_float(worst) + " over 20 channels");
  }

  {  // discrete-map oracle vs channel generator (the gain hook corrupts the
     // checked copy; a scale != 1 must make this fail)
    double worst = 0.0;
    std::uniform_real_distribution<double> rate_dist(0.2, 1.0);
    std::uniform_real_distribution<double> gain_dist(-1.5, 1.5);
    for (int trial = 0; trial < 3; ++trial) {
      const int d = 4;
      SpaceSignature space = SpaceSignature::single_fock("s", d);
      FeedbackChannel ch{OperatorMatrix(space, random_hermitian(rng, d)),
                         rate_dist(rng),
                         OperatorMatrix(space, random_hermitian(rng, d)),
                         gain_dist(rng),
                         FeedbackChannel::Mode::Probe};
      DensityMatrix rho(space, random_density(rng, d));
      Matrix extrap = extrapolated_generator(ch, rho, 2e-3);
      FeedbackChannel checked = ch;
      checked.gain *= args.corrupt_gain;
      Matrix expected = channel_generator(checked, DeltaForm::Compact).apply(rho.mat);
      worst = std::max(worst, (extrap - expected).norm() / std::max(1.0, expected.norm()));
    }
    report("oracle_generator_match", worst <= 1e-6,
           "max normalized err " + format_float(worst) +
               (args.corrupt_gain != 1.0
                    ? " [gain constant scaled by " + format_float(args.corrupt_gain) + "]"
                    : ""));
  }

  {  // POVM resolution law: variance of the outcome on an X eigenstate
    const int d = 6;
    const double gamma = 0.8, dt = 0.01;
    SpaceSignature space = SpaceSignature::single_fock("s", d);
    OperatorMatrix x = build_generator(space, "s", Generator::X);
    Eigen::SelfAdjointEigenSolver<Matrix> es(x.mat);
    Vector psi = es.eigenvectors().col(2);
    DensityMatrix rho(space, psi * psi.adjoint());
    FeedbackChannel ch{x, gamma, x, 0.0, FeedbackChannel::Mode::Probe};
    PovmStats st = povm_outcome_stats(ch, rho, dt);
    const double expected = 1.0 / (4.0 * gamma * dt);
    double rel = std::abs(st.variance - expected) / expected;
    report("povm_variance", rel <= 1e-6,
           "measured " + format_float(st.variance) + ", expected 1/(4*gamma*dt) = " +
               format_float(expected) + ", rel err " + format_float(rel));
  }

  {  // two cross QND channels: doubled dephasing, coupling magnitude 2 gamma
    const double gamma = 1.0;
    SpaceSignature space = SpaceSignature::two_fock(3);
    OperatorMatrix xa = build_generator(space, "1", Generator::X);
    OperatorMatrix xb = build_generator(space, "2", Generator::X);
    LindbladSpec composed = compose_feedback(LindbladSpec::zero(space),
                                             qnd_cross_channels(xa, xb, gamma));
    DissipativePart got(space);
    got.add(composed);
    DissipativePart want(space);
    want.add(2.0 * gamma, xa.mat);
    want.add(2.0 * gamma, xb.mat);
    double dist = got.distance(want);
    Matrix h_expect = -2.0 * gamma * (xa.mat * xb.mat);
    double h_err = (composed.hamiltonian().mat - h_expect).norm();
    report("cross_composition", dist <= 1e-10 && h_err <= 1e-10,
           "dissipator distance " + format_float(dist) + ", |H - (-2 gamma X_A X_B)| = " +
               format_float(h_err));
  }

  {  // squeeze preset: 3k loss + k gain per mode, H = k(a1 a2 + a1+ a2+)
    const double kappa = 1.0;
    const int dim = 6;
    LindbladSpec preset = squeeze_feedback(kappa, dim);
    const SpaceSignature& space = preset.space();
    DissipativePart got(space);
    got.add(preset);
    DissipativePart want(space);
    for (const char* label : {"1", "2"}) {
      want.add(3.0 * kappa, build_generator(space, label, Generator::Annihilate).mat);
      want.add(kappa, build_generator(space, label, Generator::Create).mat);
    }
    double dist = got.distance(want);
    Matrix a1 = build_generator(space, "1", Generator::Annihilate).mat;
    Matrix a2 = build_generator(space, "2", Generator::Annihilate).mat;
    Matrix h_expect = kappa * (a1 * a2 + (a1 * a2).adjoint());
    double h_err = (preset.hamiltonian().mat - h_expect).norm();
    report("squeeze_preset_structure", dist <= 1e-12 && h_err <= 1e-12,
           "dissipator distance " + format_float(dist) + ", hamiltonian err " +
               format_float(h_err));
  }

  {  // bilinear witnesses recompose to the target generator
    std::uniform_real_distribution<double> rate_dist(0.1, 5.0);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      double ga = rate_dist(rng), gb = rate_dist(rng);
      std::uniform_real_distribution<double> g_dist(-std::sqrt(ga * gb),
                                                    std::sqrt(ga * gb));
      BilinearDephasingProblem p{g_dist(rng), ga, gb};
      BilinearVerdict v = bilinear_verdict(p);
      if (!v.witness) continue;
      SpaceSignature space = SpaceSignature::two_fock(3);
      OperatorMatrix xa = build_generator(space, "1", Generator::X);
      OperatorMatrix xb = build_generator(space, "2", Generator::X);
      LindbladSpec composed = compose_feedback(LindbladSpec::zero(space),
                                               v.witness->channels(xa, xb));
      DissipativePart got(space);
      got.add(composed);
      DissipativePart want(space);
      want.add(p.gamma_a, xa.mat);
      want.add(p.gamma_b, xb.mat);
      Matrix h_expect = p.g * (xa.mat * xb.mat);
      worst = std::max(worst, got.distance(want));
      worst = std::max(worst, (composed.hamiltonian().mat - h_expect).norm());
    }
    report("witness_recomposition", worst <= 1e-10,
           "max generator mismatch " + format_float(worst) + " over 5 problems");
  }

  out << "checks passed: " << passed << "/" << total << "\n";
  return passed == total ? kExitOk : kExitNumeric;
}

}  // namespace fbsim
