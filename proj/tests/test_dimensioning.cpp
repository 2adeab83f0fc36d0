#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rsd/dimensioning.hpp"

using namespace rsd;

TEST_CASE("plain scenario sample sizes") {
  CHECK(n_plain_exact(11, Probability{0.005}, Probability{1e-12}) == 10440);
  CHECK(n_plain_exact(8, Probability{0.005}, Probability{1e-12}) == 9197);
  CHECK(n_plain_closed_form(11, Probability{0.005}, Probability{1e-12}) == 15053);
  CHECK(n_plain_closed_form(8, Probability{0.005}, Probability{1e-12}) == 13853);
  // minimality: one less sample misses the target
  CHECK(beta_eps(10439, 11, Probability{0.005}).value() > 1e-12);
  CHECK(beta_eps(10440, 11, Probability{0.005}).value() <= 1e-12);
  // n = 1: (1 − ε)^N ≤ β
  CHECK(n_plain_exact(1, Probability{0.1}, Probability{0.01}) ==
        static_cast<std::int64_t>(std::ceil(std::log(0.01) / std::log(0.9))));
  CHECK_THROWS_AS(n_plain_exact(0, Probability{0.1}, Probability{0.01}), DomainError);
  CHECK_THROWS_AS(n_plain_exact(2, Probability{0.0}, Probability{0.01}), DomainError);
}

TEST_CASE("oracle sample size from the sufficient condition") {
  const Levels lv = Levels::make(0.005, 0.0035);
  CHECK(min_no_eq19(2000, 11, lv) == 62403);
  CHECK(min_no_eq19(1340, 8, lv) == 62273);
  CHECK_THROWS_AS(min_no_eq19(2000, 11, Levels::make(0.005, 0.005)), DomainError);
  // Huge N satisfies the condition with a single oracle sample.
  CHECK(min_no_eq19(10'000'000, 11, lv) == 1);
  // The sufficient condition alone does not reach the bar-β target.
  CHECK(bar_beta({11, 2000, 62403}, lv).value() == doctest::Approx(2.16e-8).epsilon(0.01));
}

TEST_CASE("tradeoff curve") {
  const auto c = tradeoff_curve(11, Probability{0.0035}, 11, 20000, 30);
  REQUIRE(c.size() >= 2);
  CHECK(c.front().N == 11);
  CHECK(c.back().N == 20000);
  for (std::size_t k = 1; k < c.size(); ++k) {
    CHECK(c[k].N > c[k - 1].N);
    CHECK(c[k].expected_repetitions_bound <= c[k - 1].expected_repetitions_bound);
  }
  const auto anchor = tradeoff_curve(11, Probability{0.0035}, 2000, 2000, 1);
  CHECK(anchor.at(0).expected_repetitions_bound == doctest::Approx(1.0 / (1.0 - static_cast<double>(oracle::binomial_lower_tail(2000, 11, 0.0035L)))).epsilon(1e-10));
  CHECK_THROWS_AS(tradeoff_curve(11, Probability{0.0035}, 5, 100, 3), DomainError);
  CHECK_THROWS_AS(tradeoff_curve(11, Probability{0.0035}, 100, 50, 3), DomainError);
}

TEST_CASE("iteration cap") {
  CHECK(iteration_cap_for(Probability{0.5}, Probability{0.25}) == 2);
  CHECK(iteration_cap_for(Probability{0.5}, Probability{0.2}) == 3);
  CHECK(iteration_cap_for(Probability{0.1}, Probability{0.5}) == 1);
  const std::int64_t k = iteration_cap_for(Probability{0.8974042539}, Probability{1e-12});
  CHECK(std::pow(0.8974042539, k) <= 1e-12);
  CHECK(std::pow(0.8974042539, k - 1) > 1e-12);
  CHECK_THROWS_AS(iteration_cap_for(Probability{1.0}, Probability{1e-3}), DimensioningError);
}

TEST_CASE("dimensioning route") {
  const auto r = dimension_rsd(11, Probability{0.005}, Probability{1e-12});
  CHECK(r.config.dims.N == 2008);
  CHECK(r.N_o_eq19 == 62380);
  // The sufficient condition alone leaves bar-β above target; N_o is raised.
  CHECK(r.bar_beta_at_eq19 > 1e-12);
  CHECK(r.raised_to_meet_target);
  CHECK(r.config.dims.N_o == 100945);
  CHECK(r.bad_exit_fs.value <= 1e-12);
  CHECK(bar_beta({11, 2008, 100944}, r.config.levels).value() > 1e-12);
  CHECK(r.config.iteration_cap == 254);
  CHECK(r.expected_reps_asymptotic <= 10.0);
  CHECK(r.config.levels.eps_prime.value() == doctest::Approx(0.0035).epsilon(1e-15));

  const auto at = dimension_rsd_at(8, 1340, Probability{0.005}, Probability{1e-12});
  CHECK(at.config.dims.N == 1340);
  CHECK(at.N_o_eq19 == 62273);
  CHECK(at.config.dims.N_o == 100699);

  CHECK_THROWS_AS(dimension_rsd(11, Probability{0.0}, Probability{1e-12}), DomainError);
  CHECK_THROWS_AS(dimension_rsd(11, Probability{1.0}, Probability{1e-12}), DomainError);
  CHECK_THROWS_AS(dimension_rsd(11, Probability{0.005}, Probability{1e-12}, 0.7, 1.0), DimensioningError);
  CHECK_THROWS_AS(dimension_rsd(11, Probability{0.005}, Probability{1e-12}, 1.0), DomainError);
}
