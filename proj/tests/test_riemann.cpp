#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rarefan/riemann.hpp"

using namespace rarefan;

namespace {
const GasParams kAir{1.4, 1.0, 1.0};
const GasState kM2{2.0, 0.0, 1.0, 1.4};
const double kPbar = 0.5;
}  // namespace

TEST_CASE("trivial Riemann problem") {
  const RiemannSolution s = solve_riemann(kM2, kM2, kAir);
  CHECK(std::abs(s.s.a1) < 1e-12);
  CHECK(std::abs(s.s.a21) < 1e-12);
  CHECK(std::abs(s.s.a22) < 1e-12);
  CHECK(std::abs(s.s.a3) < 1e-12);
}

TEST_CASE("recovers forward-constructed single waves") {
  const GasState r3 = rarefaction_forward(kM2, 3, 0.05, kAir);
  const RiemannSolution s3 = solve_riemann(kM2, r3, kAir);
  CHECK(s3.s.a3 == doctest::Approx(0.05).epsilon(1e-8));
  CHECK(std::abs(s3.s.a1) < 1e-8);
  CHECK(std::abs(s3.s.a21) < 1e-8);
  CHECK(std::abs(s3.s.a22) < 1e-8);

  const GasState c = contact_forward(kM2, 0.01, -0.02);
  const RiemannSolution sc = solve_riemann(kM2, c, kAir);
  CHECK(sc.s.a21 == doctest::Approx(0.01).epsilon(1e-8));
  CHECK(sc.s.a22 == doctest::Approx(-0.02).epsilon(1e-8));
}

TEST_CASE("recovers a composite shock-contact-rarefaction chain") {
  WaveStrengths in{-0.03, 0.01, -0.02, 0.04};
  const GasState U_R = wave_chain(kM2, in, kAir);
  const RiemannSolution s = solve_riemann(kM2, U_R, kAir);
  CHECK(s.s.a1 == doctest::Approx(in.a1).epsilon(1e-7));
  CHECK(s.s.a21 == doctest::Approx(in.a21).epsilon(1e-7));
  CHECK(s.s.a22 == doctest::Approx(in.a22).epsilon(1e-7));
  CHECK(s.s.a3 == doctest::Approx(in.a3).epsilon(1e-7));
}

TEST_CASE("randomized round trips") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> aa(-0.05, 0.05);
  for (int i = 0; i < 200; ++i) {
    const WaveStrengths in{aa(rng), aa(rng), aa(rng), aa(rng)};
    const GasState U_R = wave_chain(kM2, in, kAir);
    const RiemannSolution s = solve_riemann(kM2, U_R, kAir);
    CHECK(std::abs(s.s.a1 - in.a1) < 1e-7);
    CHECK(std::abs(s.s.a21 - in.a21) < 1e-7);
    CHECK(std::abs(s.s.a22 - in.a22) < 1e-7);
    CHECK(std::abs(s.s.a3 - in.a3) < 1e-7);
  }
}

TEST_CASE("boundary Riemann solver") {
  // p already at the boundary value: nothing reflects
  const BackgroundSolution bg = background_solution(kM2, kPbar, kAir);
  const BoundaryReflection none = solve_boundary_riemann(bg.U_minus, kPbar, kAir);
  CHECK(std::abs(none.beta3) < 1e-12);
  CHECK(distance(none.U_m, bg.U_minus) < 1e-12);
  CHECK(none.k == doctest::Approx(bg.U_minus.v / bg.U_minus.u));

  // incoming 1-rarefaction reflects as a 3-shock and vice versa
  const GasState Ul_onb = bg.U_minus;  // boundary-adjacent left state, p = p_bar
  for (double a1 : {0.02, -0.02}) {
    const GasState U_r = wave_forward(Ul_onb, {WaveFamily::F1, a1}, kAir);
    const BoundaryReflection r = solve_boundary_riemann(U_r, kPbar, kAir);
    CHECK(r.U_m.p == doctest::Approx(kPbar).epsilon(1e-10));
    CHECK(r.k == doctest::Approx(r.U_m.v / r.U_m.u));
    if (a1 > 0) CHECK(r.beta3 < 0);  // rarefaction in, shock out
    if (a1 < 0) CHECK(r.beta3 > 0);
    // K_b1 positive: beta3 = -K_b1 alpha1
    CHECK(-r.beta3 / a1 > 0);
  }

  // the zero-strength limit of -beta3/alpha1 matches the eigen-ratio formula
  const double k_formula = boundary_reflection_coefficient(bg.U_minus, kAir);
  CHECK(k_formula > 0);
  const double h = 1e-6;
  const GasState U_rh = wave_forward(Ul_onb, {WaveFamily::F1, h}, kAir);
  const BoundaryReflection rh = solve_boundary_riemann(U_rh, kPbar, kAir);
  CHECK(-rh.beta3 / h == doctest::Approx(k_formula).epsilon(1e-3));
}

TEST_CASE("background solution against the closed-form oracle") {
  const BackgroundSolution bg = background_solution(kM2, kPbar, kAir);

  // oracle: isentropic Mach at p_bar, then the Prandtl-Meyer turning angle
  const double M_minus = oracle::isentropic_mach_at_pressure(2.0, kPbar / kM2.p, 1.4);
  const double turn = oracle::prandtl_meyer(M_minus, 1.4) - oracle::prandtl_meyer(2.0, 1.4);
  const double theta_minus = std::atan2(bg.U_minus.v, bg.U_minus.u);
  CHECK(std::abs(theta_minus) == doctest::Approx(turn).epsilon(1e-10));
  CHECK(theta_minus < 0);
  CHECK(bg.k_b == doctest::Approx(std::tan(theta_minus)).epsilon(1e-12));

  CHECK(bg.U_minus.p == doctest::Approx(kPbar).epsilon(1e-12));
  CHECK(is_supersonic(bg.U_minus, kAir));
  CHECK(bg.k1 == doctest::Approx(eigenvalue(kM2, kAir, 3)).epsilon(1e-14));
  CHECK(bg.k2 < bg.k1);
  CHECK(bg.S_bar == doctest::Approx(bg.k1 - bg.k2).epsilon(1e-14));
  CHECK(bg.p_star < kPbar);
}

TEST_CASE("background limits as p_bar -> p_plus") {
  const BackgroundSolution close = background_solution(kM2, kM2.p * (1 - 1e-7), kAir);
  CHECK(std::abs(std::atan2(close.U_minus.v, close.U_minus.u)) < 1e-6);
  CHECK(distance(close.U_minus, kM2) < 1e-5);
  CHECK(close.S_bar < 1e-6);
}

TEST_CASE("background rejects out-of-range pressures") {
  CHECK_THROWS_AS((void)background_solution(kM2, 1.5, kAir), SolverError);
  CHECK_THROWS_AS((void)background_solution(kM2, -0.1, kAir), SolverError);
}

TEST_CASE("fan self-similarity and monotone pressure") {
  const BackgroundSolution bg = background_solution(kM2, kPbar, kAir);
  double prev_p = -1;
  for (int i = 1; i <= 20; ++i) {
    const double xi = bg.k2 + (bg.k1 - bg.k2) * i / 21.0;
    const GasState U = bg.fan_state(xi);
    CHECK(eigenvalue(U, kAir, 3) == doctest::Approx(xi).epsilon(1e-8));
    CHECK(U.p > prev_p);  // pressure increases with xi (downward through the fan it drops)
    prev_p = U.p;
    // entropy and Bernoulli constants flat across the fan
    CHECK(entropy_A(U, kAir) == doctest::Approx(entropy_A(kM2, kAir)).epsilon(1e-10));
    CHECK(bernoulli(U, kAir) == doctest::Approx(bernoulli(kM2, kAir)).epsilon(1e-10));
  }
  // TV of pressure along the fan is p_plus - p_bar
  CHECK(bg.U_plus.p - bg.U_minus.p == doctest::Approx(kM2.p - kPbar).epsilon(1e-12));
}

TEST_CASE("split_rarefaction arithmetic and chaining") {
  auto fronts = split_rarefaction(kM2, 3, 0.25, 0.1, kAir);
  CHECK(fronts.size() == 3);
  for (const auto& f : fronts) CHECK(f.alpha == doctest::Approx(1.0 / 12.0).epsilon(1e-12));

  CHECK(split_rarefaction(kM2, 3, 0.05, 0.1, kAir).size() == 1);

  // chained endpoint equals the unsplit endpoint
  const GasState direct = rarefaction_forward(kM2, 3, 0.25, kAir);
  CHECK(distance(fronts.back().above, direct) < 1e-8);

  // slopes strictly increase front to front
  for (size_t i = 1; i < fronts.size(); ++i) CHECK(fronts[i].speed > fronts[i - 1].speed);
  // each front travels at lambda of its upper state
  for (const auto& f : fronts) {
    CHECK(f.speed == doctest::Approx(eigenvalue(f.above, kAir, 3)).epsilon(1e-12));
  }
}

TEST_CASE("accurate solver front emission") {
  // pure contact: one front at the middle-state flow slope
  const GasState c = contact_forward(kM2, 0.02, 0.01);
  auto fc = accurate_solver(kM2, c, 0.1, kAir);
  CHECK(fc.size() == 1);
  CHECK(fc[0].family == 2);
  CHECK(fc[0].speed == doctest::Approx(kM2.v / kM2.u).epsilon(1e-9));

  // pure 3-rarefaction of strength 3*delta: three fronts, increasing slopes
  const double delta = 0.03;
  const GasState r = rarefaction_forward(kM2, 3, 3 * delta, kAir);
  auto fr = accurate_solver(kM2, r, delta, kAir);
  CHECK(fr.size() == 3);
  for (size_t i = 1; i < fr.size(); ++i) CHECK(fr[i].speed > fr[i - 1].speed);

  // pure 1-shock: single front inside the Lax bracket
  const GasState s = shock_forward(kM2, 1, -0.04, kAir).state;
  auto fs = accurate_solver(kM2, s, delta, kAir);
  CHECK(fs.size() == 1);
  CHECK(fs[0].kind == FrontKind::Shock);
  CHECK(eigenvalue(s, kAir, 1) < fs[0].speed);
  CHECK(fs[0].speed < eigenvalue(kM2, kAir, 1));
}

TEST_CASE("simplified solver case a") {
  const double lam_hat = 1.0;
  // commuting same-family parameters: exact composition, zero non-physical strength
  const WaveParam a{WaveFamily::F3, 0.01};
  const WaveParam b{WaveFamily::F3, 0.02};
  const GasState U_M = wave_forward(kM2, b, kAir);
  const GasState U_R = wave_forward(U_M, a, kAir);
  const SimplifiedOutcome same = simplified_case_a(kM2, a, 3, b, 3, U_R, 0.1, lam_hat, kAir);
  CHECK(same.np_strength < 1e-9);

  // mixed families: eps = O(1) |alpha||beta|
  const WaveParam a1{WaveFamily::F1, 0.01};
  const WaveParam b3{WaveFamily::F3, 0.01};
  const GasState Um2 = wave_forward(kM2, b3, kAir);
  const GasState Ur2 = wave_forward(Um2, a1, kAir);
  const SimplifiedOutcome mix = simplified_case_a(kM2, a1, 1, b3, 3, Ur2, 0.1, lam_hat, kAir);
  CHECK(mix.np_strength > 0);
  CHECK(mix.np_strength < 50 * 0.01 * 0.01);  // O(1) scale
  CHECK(mix.fronts.back().family == 4);
  CHECK(mix.fronts.back().speed == lam_hat);
}

TEST_CASE("simplified solver case c") {
  const BackgroundSolution bg = background_solution(kM2, kPbar, kAir);
  // p(U_r) = p_bar: zero-strength ghost
  const SimplifiedOutcome none = simplified_case_c(bg.U_minus, kPbar, 1.0, kAir);
  CHECK(none.np_strength < 1e-12);

  const GasState U_r = wave_forward(bg.U_minus, {WaveFamily::F1, 0.01}, kAir);
  const SimplifiedOutcome out = simplified_case_c(U_r, kPbar, 1.0, kAir);
  CHECK(out.np_strength > 0);
  CHECK(out.fronts.size() == 1);
  CHECK(out.fronts[0].below.p == doctest::Approx(kPbar).epsilon(1e-9));
}

TEST_CASE("fan geometry separates the families") {
  const FanGeometry geo = fan_geometry(kM2, kPbar, 0.02, kAir);
  const BackgroundSolution bg = background_solution(kM2, kPbar, kAir);
  CHECK(geo.lambda_hat > eigenvalue(kM2, kAir, 3));
  CHECK(geo.lambda_hat > eigenvalue(bg.U_minus, kAir, 3));
  CHECK(geo.lambda1_star > eigenvalue(kM2, kAir, 1));
  CHECK(geo.lambda1_star < eigenvalue(bg.U_minus, kAir, 2));
  CHECK(geo.lambda3_star > eigenvalue(bg.U_minus, kAir, 2));
  CHECK(geo.lambda3_star < eigenvalue(bg.U_minus, kAir, 3));
}
