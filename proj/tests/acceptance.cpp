// Acceptance checks 1-8. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dbd/admm.hpp"
#include "dbd/experiment.hpp"
#include "dbd/io.hpp"
#include "dbd/jrc.hpp"
#include "dbd/metrics.hpp"
#include "dbd/regularizers.hpp"
#include "oracle.hpp"

using namespace dbd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool gradient_small(const std::function<double(const ComplexMatrix&)>& f, const ComplexMatrix& at, double& worst) {
  const double ratio = oracle::norm(oracle::fd_gradient(f, at)) / (1.0 + oracle::norm(at));
  worst = std::max(worst, ratio);
  return ratio <= 1e-5;
}

Outcome subproblem_optimality() {
  oracle::Gen g(1001);
  Outcome o;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nr = g.index(1, 8);
    const std::size_t nc = g.index(1, 8);
    const std::size_t nt = g.index(1, 8);
    const std::size_t t = g.index(1, 8);
    const double rho = g.uniform(0.1, 3.0);
    const double c = g.uniform(0.2, 3.0);

    const ComplexMatrix y = oracle::random(g, nr, t);
    const ComplexMatrix x = oracle::random(g, nt, t);
    const ComplexMatrix z1 = oracle::random(g, nr, nt);
    const ComplexMatrix mu1 = oracle::random(g, nr, nt);
    const ComplexMatrix ch = update_channel(y, x, z1, mu1, rho, c);
    o.pass &= gradient_small(
        [&](const ComplexMatrix& v) {
          return 0.5 * c * oracle::norm_sq(oracle::add(y, oracle::matmul(v, x), -1.0)) +
                 oracle::inner(mu1, oracle::add(v, z1, -1.0)) + 0.5 * rho * oracle::norm_sq(oracle::add(v, z1, -1.0));
        },
        ch, worst);

    const ComplexMatrix h = oracle::random(g, nr, nt);
    const ComplexMatrix z2 = oracle::random(g, nt, t);
    const ComplexMatrix mu2 = oracle::random(g, nt, t);
    const ComplexMatrix sig = update_signal(h, y, z2, mu2, rho, c);
    o.pass &= gradient_small(
        [&](const ComplexMatrix& v) {
          return 0.5 * c * oracle::norm_sq(oracle::add(y, oracle::matmul(h, v), -1.0)) +
                 oracle::inner(mu2, oracle::add(v, z2, -1.0)) + 0.5 * rho * oracle::norm_sq(oracle::add(v, z2, -1.0));
        },
        sig, worst);

    JrcInstance inst;
    inst.y_radar = y;
    inst.y_comm = oracle::random(g, nc, t);
    inst.h_comm = oracle::random(g, nc, nt);
    inst.lambda_radar = g.uniform(0.2, 2.0);
    inst.lambda_comm = g.uniform(0.2, 2.0);
    if (trial % 2) inst.g_nominal = oracle::random(g, nr, nt);
    const ComplexMatrix gj = update_g_jrc(inst, x, z1, mu1, rho);
    o.pass &= gradient_small(
        [&](const ComplexMatrix& v) {
          const ComplexMatrix full = inst.g_nominal ? oracle::add(*inst.g_nominal, v) : v;
          return 0.5 * inst.lambda_radar * oracle::norm_sq(oracle::add(y, oracle::matmul(full, x), -1.0)) +
                 oracle::inner(mu1, oracle::add(v, z1, -1.0)) + 0.5 * rho * oracle::norm_sq(oracle::add(v, z1, -1.0));
        },
        gj, worst);

    const ComplexMatrix xj = update_x_jrc(inst, h, z2, mu2, rho);
    o.pass &= gradient_small(
        [&](const ComplexMatrix& v) {
          return 0.5 * inst.lambda_radar * oracle::norm_sq(oracle::add(y, oracle::matmul(h, v), -1.0)) +
                 0.5 * inst.lambda_comm * oracle::norm_sq(oracle::add(inst.y_comm, oracle::matmul(inst.h_comm, v), -1.0)) +
                 oracle::inner(mu2, oracle::add(v, z2, -1.0)) + 0.5 * rho * oracle::norm_sq(oracle::add(v, z2, -1.0));
        },
        xj, worst);
  }
  o.detail = fmt("200 updates, worst |grad|/(1+|iterate|) = %.2e", worst);
  return o;
}

std::vector<RegularizerSpec> catalog() {
  return {RegularizerSpec::zero(), RegularizerSpec::squared_frobenius(1.0), RegularizerSpec::l1(1.0),
          RegularizerSpec::frobenius_ball(0.7), RegularizerSpec::power_ball(0.5)};
}

double scalar_objective(const RegularizerSpec& spec, cplx u, cplx v, double tau) {
  const double fit = 0.5 * std::norm(u - v);
  switch (spec.form.index()) {
    case 0: return fit;
    case 1: return tau * 0.5 * std::norm(u) + fit;
    case 2: return tau * std::abs(u) + fit;
    case 3: return std::abs(u) <= std::get<reg::FrobeniusBall>(spec.form).radius ? fit : INFINITY;
    default: return std::norm(u) <= std::get<reg::PowerBall>(spec.form).budget ? fit : INFINITY;
  }
}

Outcome prox_oracle() {
  oracle::Gen g(1002);
  Outcome o;
  double worst_dist = 0.0;
  int by_value = 0;
  int scalar_cases = 0;
  for (const RegularizerSpec& spec : catalog()) {
    for (int trial = 0; trial < 10; ++trial) {
      const cplx v(g.uniform(-2, 2), g.uniform(-2, 2));
      const double tau = g.uniform(0.05, 1.5);
      const cplx got = reg_prox(spec, ComplexMatrix::from_rows({{v}}), tau)(0, 0);
      auto f = [&](cplx u) { return scalar_objective(spec, u, v, tau); };
      const cplx ref = oracle::grid_argmin_refined(f, 0.0, 2.5, 1e-3);
      const double dist = std::abs(got - ref);
      ++scalar_cases;
      if (dist <= 5e-3) {
        worst_dist = std::max(worst_dist, dist);
      } else if (spec.indicator() && f(got) <= f(ref)) {
        ++by_value;  // feasible and no worse than every feasible grid point
      } else {
        o.pass = false;
        worst_dist = std::max(worst_dist, dist);
      }
    }
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t r = g.index(1, 4);
      const std::size_t c = g.index(1, 4);
      const ComplexMatrix v = oracle::random(g, r, c, g.uniform(0.1, 2.0));
      const ComplexMatrix w = oracle::random(g, r, c, g.uniform(0.1, 2.0));
      const double tau = g.uniform(0.01, 2.0);
      const ComplexMatrix u = reg_prox(spec, v, tau);
      auto objective = [&](const ComplexMatrix& m) {
        return tau * reg_eval(spec, m) + 0.5 * oracle::norm_sq(oracle::add(m, v, -1.0));
      };
      const double best = objective(u);
      for (int k = 0; k < 5; ++k) {
        ComplexMatrix p = oracle::add(u, oracle::random(g, r, c), 1e-3);
        if (spec.indicator()) p = reg_prox(spec, p, 1.0);
        o.pass &= best <= objective(p) + 1e-12;
      }
      const double lhs = oracle::norm(oracle::add(u, reg_prox(spec, w, tau), -1.0));
      o.pass &= lhs <= oracle::norm(oracle::add(v, w, -1.0)) + 1e-12;
    }
  }
  o.detail = "5 variants: " + std::to_string(scalar_cases) + " scalar cases (worst distance " + fmt("%.1e", worst_dist) +
             ", " + std::to_string(by_value) + " boundary cases matched by objective value), 500 matrix cases";
  return o;
}

Outcome fixed_points() {
  oracle::Gen g(1003);
  Outcome o;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix gt = oracle::random(g, 4, 8);
    const ComplexMatrix xt = oracle::random(g, 8, 16);
    const ComplexMatrix h = oracle::random(g, 2, 8);
    JrcInstance inst;
    inst.y_radar = oracle::matmul(gt, xt);
    inst.y_comm = oracle::matmul(h, xt);
    inst.h_comm = h;
    const double rho = g.uniform(0.5, 2.0);
    worst = std::max(worst, oracle::max_abs_diff(update_channel(inst.y_radar, xt, gt, ComplexMatrix(4, 8), rho, 2.0), gt));
    worst = std::max(worst, oracle::max_abs_diff(update_signal(gt, inst.y_radar, xt, ComplexMatrix(8, 16), rho, 2.0), xt));
    worst = std::max(worst, oracle::max_abs_diff(update_g_jrc(inst, xt, gt, ComplexMatrix(4, 8), rho), gt));
    worst = std::max(worst, oracle::max_abs_diff(update_x_jrc(inst, gt, xt, ComplexMatrix(8, 16), rho), xt));
  }
  o.pass = worst <= 1e-8;
  o.detail = fmt("80 updates, worst entry error %.2e", worst);
  return o;
}

struct ScenarioRuns {
  std::vector<double> channel_err, signal_err, power, sinr, se, mi, obj_ratio;
  int at_cap = 0;
  int n = 0;
};

ScenarioRuns scenario_runs(const RunConfig& rc) {
  ScenarioRuns p;
  for (std::uint64_t seed : rc.seeds) {
    const JrcInstance inst = make_instance(rc, seed);
    const JrcResult r = solve_jrc(inst, solver_config(rc, seed));
    ++p.n;
    p.at_cap += (r.stop == StopReason::MaxIter && r.trace.size() == 50) ? 1 : 0;
    p.channel_err.push_back(channel_error(r.g_est, inst.truth->g_true).absolute);
    p.signal_err.push_back(channel_error(r.x_est, inst.truth->x_true).absolute);
    p.power.push_back(tx_power(r.x_est));
    p.sinr.push_back(r.trace.back().sinr_db);
    p.se.push_back(r.trace.back().spectral_eff_bits);
    p.mi.push_back(r.trace.back().radar_mi_bits);
    p.obj_ratio.push_back(r.trace.back().objective / r.trace.front().objective);
  }
  return p;
}

Outcome scenario_reproduction(const ScenarioRuns& p) {
  Outcome o;
  const double ch = median(p.channel_err);
  const double sg = median(p.signal_err);
  const double pmax = *std::max_element(p.power.begin(), p.power.end());
  o.pass = p.n == 20 && ch <= 0.3 && sg <= 3.5 && pmax <= 10.0 && p.at_cap == p.n;
  o.detail = fmt("median channel error %.4f, median signal error %.4f, max Tr(XX^H) %.3f", ch, sg, pmax) + ", " +
             std::to_string(p.at_cap) + "/" + std::to_string(p.n) + " runs at the 50-iteration cap";
  return o;
}

Outcome metric_sanity(const ScenarioRuns& p) {
  Outcome o;
  int good = 0;
  for (int i = 0; i < p.n; ++i) good += (p.sinr[i] >= 30.0 && p.se[i] >= 8.0 && p.mi[i] >= 20.0) ? 1 : 0;
  const double ratio = median(p.obj_ratio);
  o.pass = good >= 15 && ratio <= 0.1;
  o.detail = std::to_string(good) + "/" + std::to_string(p.n) + " seeds meet SINR/SE/MI floors (median " +
             fmt("%.2f dB, %.2f bits, %.2f bits", median(p.sinr), median(p.se), median(p.mi)) +
             fmt("), median final/first objective %.4f", ratio);
  return o;
}

Outcome reduction_and_equivalence(const RunConfig& rc) {
  Outcome o;
  oracle::Gen g(1006);
  int bitwise = 0;
  for (int trial = 0; trial < 5; ++trial) {
    JrcInstance inst;
    inst.y_radar = oracle::random(g, 4, 16);
    inst.y_comm = oracle::random(g, 2, 16);
    inst.h_comm = oracle::random(g, 2, 8);
    inst.lambda_radar = g.uniform(0.5, 2.0);
    inst.lambda_comm = 0.0;
    inst.reg_channel = RegularizerSpec::zero();
    inst.reg_signal = RegularizerSpec::zero();
    const BlindProblem p{inst.y_radar, 8, inst.lambda_radar, RegularizerSpec::zero(), RegularizerSpec::zero(), 0.0};
    AdmmConfig cfg;
    cfg.init_seed = 50 + trial;
    cfg.tol = 1e-300;
    std::vector<AdmmState> sa;
    std::vector<AdmmState> sb;
    bool same = true;
    for (int k : {1, 10, 50}) {
      cfg.max_iter = k;
      const JrcResult a = solve_jrc(inst, cfg);
      const AdmmResult b = solve(p, cfg);
      same &= a.state == b.state && a.trace.size() == b.trace.size();
      for (std::size_t i = 0; same && i < a.trace.size(); ++i) {
        same &= a.trace[i].r1 == b.trace[i].r1 && a.trace[i].r2 == b.trace[i].r2 && a.trace[i].s1 == b.trace[i].s1 &&
                a.trace[i].s2 == b.trace[i].s2 && a.trace[i].objective == b.trace[i].objective;
      }
    }
    bitwise += same ? 1 : 0;
  }

  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    JrcInstance delta = make_instance(rc, seed);
    delta.reg_channel = RegularizerSpec::zero();
    JrcInstance full = delta;
    full.g_nominal.reset();
    const ComplexMatrix g0 = *delta.g_nominal;
    AdmmConfig cfg = solver_config(rc, seed);
    cfg.tol = 1e-300;
    AdmmState sd = jrc_initial_state(delta, cfg);
    AdmmState sf = sd;
    sf.channel = g0;
    sf.z1 = g0;
    cfg.max_iter = 1;
    for (int k = 0; k < 50; ++k) {
      sd = solve_jrc(delta, cfg, {}, sd).state;
      sf = solve_jrc(full, cfg, {}, sf).state;
      worst = std::max({worst, oracle::max_abs_diff(oracle::add(g0, sd.channel), sf.channel),
                        oracle::max_abs_diff(oracle::add(g0, sd.z1), sf.z1), oracle::max_abs_diff(sd.mu1, sf.mu1),
                        oracle::max_abs_diff(sd.signal, sf.signal), oracle::max_abs_diff(sd.z2, sf.z2),
                        oracle::max_abs_diff(sd.mu2, sf.mu2)});
    }
  }
  o.pass = bitwise == 5 && worst <= 1e-10;
  o.detail = std::to_string(bitwise) + "/5 reductions bit-identical, delta vs shifted full worst " +
             fmt("%.2e over 3 seeds x 50 iterations", worst);
  return o;
}

Outcome complexity() {
  Outcome o;
  BenchConfig cfg;
  const BenchReport r = bench(cfg);
  o.pass = r.slope >= 2.0 && r.slope <= 3.5;
  std::string pts;
  for (const BenchPoint& p : r.points) pts += " " + std::to_string(p.n) + ":" + fmt("%.2e", p.median_s);
  o.detail = fmt("slope %.3f, per-iteration seconds", r.slope) + pts;
  return o;
}

Outcome determinism(RunConfig rc) {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "dbd_acceptance_determinism";
  fs::remove_all(base);
  rc.seeds = {1, 7};
  std::ostringstream log;
  std::vector<std::string> traces[2];
  for (int pass = 0; pass < 2; ++pass) {
    rc.output_dir = base / std::to_string(pass);
    if (run(rc, log, true) != exit_code::ok) o.pass = false;
    for (std::uint64_t s : rc.seeds) traces[pass].push_back(io::read_file(rc.output_dir / ("trace_" + std::to_string(s) + ".csv")));
  }
  o.pass &= traces[0] == traces[1];
  o.detail = "2 seeds, traces " + std::string(traces[0] == traces[1] ? "byte-identical" : "differ");
  fs::remove_all(base);
  return o;
}

}  // namespace

int main() {
  const RunConfig mmwave = load_run_config(fs::path(DBD_SOURCE_DIR) / "configs" / "mmwave.json");
  bool all = true;
  auto report = [&](int id, double limit_s, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = seconds_since(t0);
    const bool in_time = limit_s <= 0.0 || dt < limit_s;
    const bool pass = o.pass && in_time;
    all &= pass;
    std::printf("criterion %d: %s (%s; %.2f s%s)\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), dt,
                in_time ? "" : ", over the time limit");
    std::fflush(stdout);
  };

  report(1, 10.0, subproblem_optimality);
  report(2, 30.0, prox_oracle);
  report(3, 1.0, fixed_points);
  ScenarioRuns runs;
  report(4, 60.0, [&] {
    runs = scenario_runs(mmwave);
    return scenario_reproduction(runs);
  });
  report(5, 0.0, [&] { return metric_sanity(runs); });
  report(6, 0.0, [&] { return reduction_and_equivalence(mmwave); });
  report(7, 300.0, complexity);
  report(8, 0.0, [&] { return determinism(mmwave); });
  return all ? 0 : 1;
}
