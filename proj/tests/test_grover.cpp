#include <doctest.h>

#include <cmath>
#include <random>

#include "hamoracle/grover.hpp"

using namespace hamoracle;

TEST_CASE("pwin_from_x examples and domain") {
  CHECK(grover::pwin_from_x(1.0 / 7.0, 7) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(grover::pwin_from_x(1.0, 4) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(grover::pwin_from_x(0.5, 5) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK_NOTHROW(grover::pwin_from_x(1.0 + 1e-13, 4));
  CHECK_THROWS_AS(grover::pwin_from_x(1.0 + 1e-9, 4), std::domain_error);
  CHECK_THROWS_AS(grover::pwin_from_x(-1e-9, 4), std::domain_error);
}

TEST_CASE("continuous_x examples") {
  CHECK(grover::continuous_x(0.0, 9).x == 1.0);
  CHECK(grover::continuous_x(grover::continuous_exact_time(4), 4).x == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(grover::continuous_x(0.25, 2).x == doctest::Approx(0.853553390593).epsilon(1e-11));
  CHECK_FALSE(grover::continuous_x(0.5 * grover::continuous_exact_time(16), 16).past_optimum);
  CHECK(grover::continuous_x(1.01 * grover::continuous_exact_time(16), 16).past_optimum);
}

TEST_CASE("continuous_exact_time examples") {
  CHECK(grover::continuous_exact_time(2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(grover::continuous_exact_time(4) == doctest::Approx(4.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-14));
  const double n = 1e6;
  CHECK(std::abs(grover::continuous_exact_time(1000000) - (std::sqrt(n) / 2.0 - 1.0 / kPi)) < 1e-3);
}

TEST_CASE("half-time gives x = 1/2 and pwin = 1/2 + sqrt(N-1)/N") {
  for (std::int64_t n : {2, 3, 10, 1000}) {
    const double nn = static_cast<double>(n);
    const double t_half = nn / (4.0 * std::sqrt(nn - 1.0));
    CHECK(std::abs(grover::continuous_x(t_half, n).x - 0.5) < 1e-12);
    CHECK(grover::pwin_from_x(0.5, n) == doctest::Approx(0.5 + std::sqrt(nn - 1.0) / nn).epsilon(1e-14));
  }
}

TEST_CASE("continuous x(t) strictly decreases on (0, T)") {
  for (std::int64_t n : {2, 5, 64}) {
    const double t_end = grover::continuous_exact_time(n);
    double prev = 1.0;
    for (int k = 1; k <= 1000; ++k) {
      const double x = grover::continuous_x(t_end * k / 1000.0, n).x;
      CHECK(x < prev);
      prev = x;
    }
  }
}

TEST_CASE("query_params match the oracle matrix elements") {
  for (std::int64_t n : {2, 5, 12})
    for (double delta : {1.0, 0.5, 0.1}) {
      const int ni = static_cast<int>(n);
      const grover::GroverQueryParams q = grover::query_params(n, delta);
      CHECK(std::norm(q.alpha) + std::norm(q.beta) == doctest::Approx(1.0).epsilon(1e-12));
      CMatrix o = CMatrix::Identity(ni, ni);
      o(0, 0) = std::exp(-kI * kPi * delta);
      const CVector plus = CVector::Constant(ni, 1.0 / std::sqrt(static_cast<double>(n)));
      CVector minus = CVector::Unit(ni, 0) - plus * plus(0);
      minus.normalize();
      CHECK(std::abs(q.alpha - plus.dot(o * plus)) < 1e-12);
      CHECK(std::abs(std::abs(q.beta) - std::abs(plus.dot(o * minus))) < 1e-12);
      const double nn = static_cast<double>(n);
      CHECK(std::abs(q.beta) == doctest::Approx(2.0 * std::sin(kPi * delta / 2.0) * std::sqrt(nn - 1.0) / nn));
    }
}

TEST_CASE("discrete_step_optimal examples and the small-delta limit") {
  CHECK(grover::discrete_step_optimal(1.0, 4, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  const double b = std::abs(grover::query_params(9, 0.3).beta);
  CHECK(grover::discrete_step_optimal(0.0, 9, 0.3) == doctest::Approx(b * b).epsilon(1e-14));
  const std::int64_t n = 10;
  const double x = 0.6;
  const double rate = -2.0 * kPi * std::sqrt(n - 1.0) / n * std::sqrt(x * (1.0 - x));
  for (double delta : {1e-3, 1e-4}) {
    const double fd = (grover::discrete_step_optimal(x, n, delta) - x) / delta;
    CHECK(std::abs(fd - rate) < 10.0 * delta);
  }
}

TEST_CASE("discrete_exact_time examples and convergence to the continuum") {
  CHECK(grover::discrete_exact_time(4, 1.0).time == doctest::Approx(1.0));
  CHECK(grover::discrete_exact_time(4, 1.0).queries == 1);
  CHECK(grover::discrete_exact_time(2, 1.0).time == doctest::Approx(1.0));
  CHECK_THROWS(grover::discrete_exact_time(4, 0.0));
  CHECK_THROWS(grover::discrete_exact_time(4, 1.5));
  for (std::int64_t n : {4, 16, 100})
    for (double delta : {1e-2, 1e-3})
      CHECK(std::abs(grover::discrete_exact_time(n, delta).time - grover::continuous_exact_time(n)) <= 2.0 * delta);
  const double ratio = grover::discrete_exact_time(1000000, 0.25).time / grover::discrete_exact_time(1000000, 1.0).time;
  CHECK(ratio == doctest::Approx(0.25 / std::sin(kPi / 8.0)).epsilon(0.01));
}

TEST_CASE("discrete_trajectory descends monotonically to 1/N") {
  for (std::int64_t n : {3, 8, 50})
    for (double delta : {1.0, 0.37, 0.1}) {
      const auto xs = grover::discrete_trajectory(n, delta);
      CHECK(xs.front() == 1.0);
      CHECK(xs.size() == static_cast<std::size_t>(grover::discrete_exact_time(n, delta).queries) + 1);
      for (std::size_t k = 1; k < xs.size(); ++k) CHECK(xs[k] <= xs[k - 1] + 1e-15);
      CHECK(xs.back() == doctest::Approx(1.0 / n).epsilon(1e-12));
    }
}

TEST_CASE("brute-force discrete simulation reproduces the optimal recursion") {
  for (int n = 2; n <= 8; ++n)
    for (double delta : {1.0, 0.5, 0.23}) {
      const core::AdaptiveRun run = grover::simulate_discrete_optimal(n, delta, false, kernels::Backend::serial);
      const auto xs = grover::discrete_trajectory(n, delta);
      REQUIRE(run.trajectory.size() == xs.size());
      const auto pr = grover::plus_projectors(n);
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double x = core::symmetrize_reduced(run.trajectory[k].rho, pr).weights[0];
        CHECK(std::abs(x - xs[k]) < 1e-10);
      }
      // Purifications of operators equal to 1e-16 can differ by sqrt(1e-16).
      CHECK(run.max_transfer_residual < 1e-7);
      const core::OracleProblem p = grover::make_problem(n, core::TimeModel::discrete, delta);
      CHECK(core::optimal_final_measurement(run.trajectory.back(), p).pwin == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("fg_comparison examples") {
  CHECK(grover::fg_comparison(2).ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const grover::FgComparison c4 = grover::fg_comparison(4);
  CHECK(c4.t_fg == doctest::Approx(1.0));
  CHECK(c4.t_optimal == doctest::Approx(0.769800358919501));
  CHECK(c4.gap == doctest::Approx(0.230199641080499));
  CHECK(std::abs(grover::fg_comparison(100).gap - 1.0 / kPi) < 0.1 / kPi);
  for (std::int64_t n = 2; n < 200; ++n) CHECK(grover::fg_comparison(n).gap > 0.0);
}

TEST_CASE("verify_unitary_realization") {
  const grover::RealizationCheck c4 = grover::verify_unitary_realization(4, 1e-4);
  CHECK(c4.max_x_deviation < 1e-6);
  CHECK(c4.max_final_overlap < 1e-6);
  CHECK(c4.max_deviation < 1e-6);
  const grover::RealizationCheck c2 = grover::verify_unitary_realization(2, 1e-4);
  CHECK(c2.max_u_mismatch < 1e-6);
  CHECK(c2.max_deviation < 1e-6);
  CHECK_THROWS(grover::verify_unitary_realization(65, 1e-3));
}

TEST_CASE("brute-force realized Hamiltonian tracks cos^2 within 1e-6") {
  for (int n : {2, 4, 8}) {
    const double t_end = grover::continuous_exact_time(n);
    const grover::SimulatedCurve c = grover::simulate_realized_hamiltonian(n, t_end, 1e-4);
    double worst = 0.0;
    for (std::size_t k = 0; k < c.t.size(); ++k)
      worst = std::max(worst, std::abs(c.x[k] - grover::continuous_x(c.t[k], n).x));
    CHECK(worst < 1e-6);
    CHECK(c.t.back() == doctest::Approx(t_end).epsilon(1e-14));
  }
  const grover::SimulatedCurve c2 = grover::simulate_realized_hamiltonian(2, 0.25, 1e-4);
  CHECK(std::abs(c2.x.back() - std::pow(std::cos(kPi / 8.0), 2)) < 1e-6);
}

TEST_CASE("query-velocity bound under random controls") {
  const int n = 4;
  const double nn = n;
  const core::OracleProblem p = grover::make_problem(n, core::TimeModel::continuous);
  std::mt19937_64 rng(99);
  const int dim_b = 2;
  const double dt = 1e-5;
  for (int trial = 0; trial < 5; ++trial) {
    core::PurifiedState st(p, dim_b, kernels::Backend::serial);
    double x = grover::x_of(st.alice_state());
    core::BobUnitary u = core::BobUnitary::dense(random_unitary(p.dim_m * dim_b, rng));
    const core::BobUnitary stay = core::BobUnitary::identity(p.dim_m * dim_b);
    for (int step = 0; step < 3000; ++step) {
      st.apply_bob(step % 300 == 0 ? u : stay);
      if (step % 300 == 0) u = core::BobUnitary::dense(random_unitary(p.dim_m * dim_b, rng));
      st.apply_oracle(dt);
      const double x1 = grover::x_of(st.alice_state());
      const double xm = std::clamp(0.5 * (x + x1), 0.0, 1.0);
      const double bound = 2.0 * kPi * std::sqrt(nn - 1.0) / nn * std::sqrt(xm * (1.0 - xm));
      CHECK(std::abs(x1 - x) / dt <= bound + 1e-3);
      x = x1;
    }
  }
}

TEST_CASE("make_problem validates and the realized schedule is unitary") {
  CHECK_NOTHROW(grover::make_problem(8, core::TimeModel::continuous));
  CHECK_THROWS(grover::make_problem(1, core::TimeModel::continuous));
  const core::FullControlSchedule s = grover::realized_hamiltonian_schedule(6, 1e-3, 50);
  CHECK(s.n_steps() == 50);
  CHECK(s.dim_b() == 1);
  CHECK(s.max_unitarity_error() < 1e-12);
}
