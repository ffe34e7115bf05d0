#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "dbd/admm.hpp"
#include "dbd/errors.hpp"
#include "dbd/jrc.hpp"
#include "dbd/matkit.hpp"
#include "dbd/metrics.hpp"
#include "dbd/sim.hpp"
#include "oracle.hpp"

using namespace dbd;

namespace {

struct Truth {
  ComplexMatrix g;
  ComplexMatrix x;
  ComplexMatrix h;
};

JrcInstance noiseless(oracle::Gen& g, std::size_t nr, std::size_t nc, std::size_t nt, std::size_t t, Truth& truth) {
  truth.g = oracle::random(g, nr, nt);
  truth.x = oracle::random(g, nt, t);
  truth.h = oracle::random(g, nc, nt);
  JrcInstance inst;
  inst.y_radar = oracle::matmul(truth.g, truth.x);
  inst.y_comm = oracle::matmul(truth.h, truth.x);
  inst.h_comm = truth.h;
  inst.reg_channel = RegularizerSpec::zero();
  inst.reg_signal = RegularizerSpec::zero();
  return inst;
}

JrcInstance random_instance(oracle::Gen& g, std::size_t nr, std::size_t nc, std::size_t nt, std::size_t t) {
  JrcInstance inst;
  inst.y_radar = oracle::random(g, nr, t);
  inst.y_comm = oracle::random(g, nc, t);
  inst.h_comm = oracle::random(g, nc, nt);
  inst.lambda_radar = g.uniform(0.2, 2.0);
  inst.lambda_comm = g.uniform(0.2, 2.0);
  return inst;
}

double g_subproblem(const JrcInstance& inst, const ComplexMatrix& x, const ComplexMatrix& z1,
                    const ComplexMatrix& mu1, double rho, const ComplexMatrix& channel) {
  const ComplexMatrix g = inst.g_nominal ? oracle::add(*inst.g_nominal, channel) : channel;
  return 0.5 * inst.lambda_radar * oracle::norm_sq(oracle::add(inst.y_radar, oracle::matmul(g, x), -1.0)) +
         oracle::inner(mu1, oracle::add(channel, z1, -1.0)) + 0.5 * rho * oracle::norm_sq(oracle::add(channel, z1, -1.0));
}

double x_subproblem(const JrcInstance& inst, const ComplexMatrix& g, const ComplexMatrix& z2,
                    const ComplexMatrix& mu2, double rho, const ComplexMatrix& x) {
  return 0.5 * inst.lambda_radar * oracle::norm_sq(oracle::add(inst.y_radar, oracle::matmul(g, x), -1.0)) +
         0.5 * inst.lambda_comm * oracle::norm_sq(oracle::add(inst.y_comm, oracle::matmul(inst.h_comm, x), -1.0)) +
         oracle::inner(mu2, oracle::add(x, z2, -1.0)) + 0.5 * rho * oracle::norm_sq(oracle::add(x, z2, -1.0));
}

JrcInstance mmwave_instance(std::uint64_t seed) {
  const RadarScene scene = random_scene(4, std::numbers::pi / 3.0, sub_seed(seed, SeedStream::Scene));
  SimConfig sc;
  sc.seed = seed;
  return build_instance(scene, sc);
}

}  // namespace

TEST_CASE("jrc_objective") {
  oracle::Gen g(60);
  Truth t;
  JrcInstance inst = noiseless(g, 4, 2, 8, 16, t);
  CHECK(jrc_objective(inst, t.g, t.x) <= 1e-20);
  CHECK(jrc_objective(inst, t.g, ComplexMatrix(8, 16)) ==
        doctest::Approx(0.5 * oracle::norm_sq(inst.y_radar) + 0.5 * oracle::norm_sq(inst.y_comm)).epsilon(1e-14));

  JrcInstance r = random_instance(g, 4, 2, 8, 16);
  r.reg_channel = RegularizerSpec::squared_frobenius(0.3);
  r.reg_signal = RegularizerSpec::l1(0.2);
  const ComplexMatrix gg = oracle::random(g, 4, 8);
  const ComplexMatrix xx = oracle::random(g, 8, 16);
  double l1 = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 16; ++j) l1 += std::abs(xx(i, j));
  const double expect = 0.5 * r.lambda_radar * oracle::norm_sq(oracle::add(r.y_radar, oracle::matmul(gg, xx), -1.0)) +
                        0.5 * r.lambda_comm * oracle::norm_sq(oracle::add(r.y_comm, oracle::matmul(r.h_comm, xx), -1.0)) +
                        0.3 * 0.5 * oracle::norm_sq(gg) + 0.2 * l1;
  CHECK(jrc_objective(r, gg, xx) == doctest::Approx(expect).epsilon(1e-10));

  // delta mode: the channel regularizer sees G - G0
  r.g_nominal = oracle::random(g, 4, 8);
  const double shifted = expect - 0.3 * 0.5 * oracle::norm_sq(gg) + 0.3 * 0.5 * oracle::norm_sq(oracle::add(gg, *r.g_nominal, -1.0));
  CHECK(jrc_objective(r, gg, xx) == doctest::Approx(shifted).epsilon(1e-10));
}

TEST_CASE("update_g_jrc") {
  oracle::Gen g(61);
  Truth t;
  JrcInstance inst = noiseless(g, 4, 2, 8, 16, t);
  CHECK(oracle::max_abs_diff(update_g_jrc(inst, t.x, t.g, ComplexMatrix(4, 8), 1.0), t.g) <= 1e-8);

  inst.g_nominal = t.g;
  CHECK(oracle::norm(update_g_jrc(inst, t.x, ComplexMatrix(4, 8), ComplexMatrix(4, 8), 1.0)) <= 1e-8);

  for (int trial = 0; trial < 10; ++trial) {
    JrcInstance r = random_instance(g, 3, 2, 4, 6);
    if (trial % 2) r.g_nominal = oracle::random(g, 3, 4);
    const ComplexMatrix x = oracle::random(g, 4, 6);
    const ComplexMatrix z1 = oracle::random(g, 3, 4);
    const ComplexMatrix mu1 = oracle::random(g, 3, 4);
    const double rho = g.uniform(0.2, 3.0);
    const ComplexMatrix out = update_g_jrc(r, x, z1, mu1, rho);
    const ComplexMatrix grad =
        oracle::fd_gradient([&](const ComplexMatrix& c) { return g_subproblem(r, x, z1, mu1, rho, c); }, out);
    CHECK(oracle::norm(grad) <= 1e-5 * (1.0 + oracle::norm(out)));
  }
}

TEST_CASE("update_x_jrc") {
  oracle::Gen g(62);
  Truth t;
  JrcInstance inst = noiseless(g, 4, 2, 8, 16, t);
  CHECK(oracle::max_abs_diff(update_x_jrc(inst, t.g, t.x, ComplexMatrix(8, 16), 1.0), t.x) <= 1e-8);

  for (int trial = 0; trial < 10; ++trial) {
    JrcInstance r = random_instance(g, 3, 2, 4, 6);
    const ComplexMatrix gg = oracle::random(g, 3, 4);
    const ComplexMatrix z2 = oracle::random(g, 4, 6);
    const ComplexMatrix mu2 = oracle::random(g, 4, 6);
    const double rho = g.uniform(0.2, 3.0);
    const ComplexMatrix out = update_x_jrc(r, gg, z2, mu2, rho);
    const ComplexMatrix grad =
        oracle::fd_gradient([&](const ComplexMatrix& x) { return x_subproblem(r, gg, z2, mu2, rho, x); }, out);
    CHECK(oracle::norm(grad) <= 1e-5 * (1.0 + oracle::norm(out)));

    r.lambda_radar = 0.0;
    const ComplexMatrix reduced = update_x_jrc(r, gg, z2, mu2, rho);
    CHECK(oracle::max_abs_diff(reduced, update_signal(r.h_comm, r.y_comm, z2, mu2, rho, r.lambda_comm)) <= 1e-12);
  }
}

TEST_CASE("jrc_lagrangian") {
  oracle::Gen g(63);
  JrcInstance r = random_instance(g, 3, 2, 4, 5);
  r.reg_channel = RegularizerSpec::squared_frobenius(0.4);
  r.reg_signal = RegularizerSpec::squared_frobenius(0.1);
  r.g_nominal = oracle::random(g, 3, 4);
  AdmmState s{oracle::random(g, 3, 4), oracle::random(g, 4, 5), oracle::random(g, 3, 4),
              oracle::random(g, 4, 5), oracle::random(g, 3, 4), oracle::random(g, 4, 5), 0};
  const double rho = 1.7;
  const ComplexMatrix full = oracle::add(*r.g_nominal, s.channel);
  const double expect =
      0.5 * r.lambda_radar * oracle::norm_sq(oracle::add(r.y_radar, oracle::matmul(full, s.signal), -1.0)) +
      0.5 * r.lambda_comm * oracle::norm_sq(oracle::add(r.y_comm, oracle::matmul(r.h_comm, s.signal), -1.0)) +
      0.4 * 0.5 * oracle::norm_sq(s.z1) + 0.1 * 0.5 * oracle::norm_sq(s.z2) +
      oracle::inner(s.mu1, oracle::add(s.channel, s.z1, -1.0)) + oracle::inner(s.mu2, oracle::add(s.signal, s.z2, -1.0)) +
      0.5 * rho * oracle::norm_sq(oracle::add(s.channel, s.z1, -1.0)) +
      0.5 * rho * oracle::norm_sq(oracle::add(s.signal, s.z2, -1.0));
  CHECK(jrc_lagrangian(r, s, rho) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("instance validation") {
  oracle::Gen g(64);
  JrcInstance r = random_instance(g, 3, 2, 4, 5);
  CHECK_NOTHROW(r.validate());
  JrcInstance bad = r;
  bad.y_comm = oracle::random(g, 2, 6);
  CHECK_THROWS_AS(bad.validate(), ShapeError);
  bad = r;
  bad.lambda_radar = 0.0;
  bad.lambda_comm = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = r;
  bad.lambda_comm = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = r;
  bad.g_nominal = oracle::random(g, 3, 5);
  CHECK_THROWS_AS(bad.validate(), ShapeError);
}

TEST_CASE("lambda_comm = 0 reproduces the generic solver bit for bit") {
  oracle::Gen g(65);
  for (int trial = 0; trial < 3; ++trial) {
    JrcInstance inst = random_instance(g, 4, 2, 3, 7);
    inst.lambda_comm = 0.0;
    inst.reg_channel = RegularizerSpec::zero();
    inst.reg_signal = RegularizerSpec::zero();
    const BlindProblem p{inst.y_radar, 3, inst.lambda_radar, RegularizerSpec::zero(), RegularizerSpec::zero(), 0.0};
    AdmmConfig cfg;
    cfg.tol = 1e-300;
    cfg.max_iter = 40;
    cfg.init_seed = 10 + trial;
    const JrcResult a = solve_jrc(inst, cfg);
    const AdmmResult b = solve(p, cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
      CHECK(a.trace[k].r1 == b.trace[k].r1);
      CHECK(a.trace[k].r2 == b.trace[k].r2);
      CHECK(a.trace[k].s1 == b.trace[k].s1);
      CHECK(a.trace[k].s2 == b.trace[k].s2);
      CHECK(a.trace[k].objective == b.trace[k].objective);
      CHECK(a.trace[k].tx_power == b.trace[k].tx_power);
    }
    CHECK(a.state == b.state);
  }
}

TEST_CASE("delta mode equals full mode shifted by the nominal channel") {
  for (std::uint64_t seed : {1, 2, 3}) {
    JrcInstance delta = mmwave_instance(seed);
    delta.reg_channel = RegularizerSpec::zero();
    JrcInstance full = delta;
    full.g_nominal.reset();
    const ComplexMatrix g0 = *delta.g_nominal;

    AdmmConfig cfg;
    cfg.tol = 1e-300;
    const AdmmState d0 = jrc_initial_state(delta, cfg);
    AdmmState f0 = d0;
    f0.channel = g0;
    f0.z1 = g0;

    std::vector<IterationRecord> td;
    std::vector<IterationRecord> tf;
    for (int k : {1, 2, 5, 20, 50}) {
      cfg.max_iter = k;
      const JrcResult a = solve_jrc(delta, cfg, {}, d0);
      const JrcResult b = solve_jrc(full, cfg, {}, f0);
      CHECK(oracle::max_abs_diff(oracle::add(g0, a.state.channel), b.state.channel) <= 1e-10);
      CHECK(oracle::max_abs_diff(oracle::add(g0, a.state.z1), b.state.z1) <= 1e-10);
      CHECK(oracle::max_abs_diff(a.state.mu1, b.state.mu1) <= 1e-10);
      CHECK(oracle::max_abs_diff(a.state.signal, b.state.signal) <= 1e-10);
      CHECK(oracle::max_abs_diff(a.state.z2, b.state.z2) <= 1e-10);
      CHECK(oracle::max_abs_diff(a.state.mu2, b.state.mu2) <= 1e-10);
      CHECK(oracle::max_abs_diff(a.g_est, b.g_est) <= 1e-10);
      td = a.trace;
      tf = b.trace;
    }
    REQUIRE(td.size() == tf.size());
    for (std::size_t k = 0; k < td.size(); ++k) {
      CHECK(std::abs(td[k].r1 - tf[k].r1) <= 1e-10);
      CHECK(std::abs(td[k].r2 - tf[k].r2) <= 1e-10);
      CHECK(std::abs(td[k].s1 - tf[k].s1) <= 1e-10);
      CHECK(std::abs(td[k].s2 - tf[k].s2) <= 1e-10);
      CHECK(std::abs(td[k].objective - tf[k].objective) <= 1e-10 * (1.0 + std::abs(tf[k].objective)));
    }
  }
}

TEST_CASE("power ball keeps every z2 iterate and the reported signal feasible") {
  for (std::uint64_t seed : {4, 5, 6}) {
    JrcInstance inst = mmwave_instance(seed);
    inst.reg_signal = RegularizerSpec::power_ball(1.0);
    AdmmConfig cfg;
    cfg.tol = 1e-300;
    AdmmState s = jrc_initial_state(inst, cfg);
    for (int k = 1; k <= 30; ++k) {
      cfg.max_iter = 1;
      const JrcResult r = solve_jrc(inst, cfg, {}, s);
      CHECK(oracle::norm_sq(r.state.z2) <= 1.0 + 1e-9);
      CHECK(tx_power(r.x_est) <= 1.0 + 1e-9);
      for (const IterationRecord& rec : r.trace) CHECK(std::isfinite(rec.objective));
      s = r.state;
    }
    CHECK(oracle::norm_sq(reported_signal(inst, oracle::scale(s.signal, 10.0))) <= 1.0 + 1e-9);
  }
}

TEST_CASE("mmwave scenario runs to the iteration cap within the power budget") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const JrcInstance inst = mmwave_instance(seed);
    AdmmConfig cfg;
    cfg.init_seed = sub_seed(seed, SeedStream::SolverInit);
    const JrcResult r = solve_jrc(inst, cfg);
    CHECK(r.stop == StopReason::MaxIter);
    CHECK(r.trace.size() == 50);
    CHECK(tx_power(r.x_est) <= 10.0);
    for (const IterationRecord& rec : r.trace) CHECK(std::isfinite(rec.objective));
    CHECK(oracle::norm(r.state.z1) <= 0.1 + 1e-12);
  }
}

// Noiseless delta-mode data with an 8-antenna comm receiver: H has full
// column rank, so the comm term pins down X. 500 iterations reach a 20-seed
// median relative error of about 1.4e-3.
TEST_CASE("comm anchor resolves the signal on noiseless data") {
  std::vector<double> rel;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RadarScene scene = random_scene(4, std::numbers::pi / 3.0, sub_seed(seed, SeedStream::Scene));
    SimConfig sc;
    sc.seed = seed;
    sc.noise_var = 0.0;
    sc.n_comm_rx = 8;
    sc.reg_signal = RegularizerSpec::zero();
    const JrcInstance inst = build_instance(scene, sc);
    AdmmConfig cfg;
    cfg.max_iter = 500;
    cfg.tol = 1e-300;
    cfg.init_seed = seed;
    const JrcResult r = solve_jrc(inst, cfg);
    rel.push_back(oracle::norm(oracle::add(r.x_est, inst.truth->x_true, -1.0)) / oracle::norm(inst.truth->x_true));
  }
  std::sort(rel.begin(), rel.end());
  CHECK((rel[9] + rel[10]) / 2.0 <= 1e-2);
}

TEST_CASE("a scene without targets yields a smaller channel and no comm penalty") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RadarScene scene = random_scene(4, std::numbers::pi / 3.0, sub_seed(seed, SeedStream::Scene));
    RadarScene empty = scene;
    empty.angles_rad.clear();
    empty.rcs.clear();
    SimConfig sc;
    sc.seed = seed;
    const JrcInstance a = build_instance(scene, sc);
    const JrcInstance b = build_instance(empty, sc);
    CHECK(oracle::norm(*b.g_nominal) == 0.0);
    AdmmConfig cfg;
    cfg.init_seed = seed;
    const JrcResult ra = solve_jrc(a, cfg);
    const JrcResult rb = solve_jrc(b, cfg);
    CHECK(oracle::norm(rb.g_est) <= oracle::norm(ra.g_est));

    const double se_a = spectral_efficiency(a.h_comm, ra.x_est, a.noise_var, a.t());
    const double se_b = spectral_efficiency(b.h_comm, rb.x_est, b.noise_var, b.t());
    CHECK(std::abs(10.0 * std::log10(se_b / se_a)) <= 1.0);
    CHECK(comm_sinr_db(b.y_comm, b.h_comm, rb.x_est) >= comm_sinr_db(a.y_comm, a.h_comm, ra.x_est) - 1.0);
  }
}
