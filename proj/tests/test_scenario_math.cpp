#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "oracles.hpp"
#include "rsd/random.hpp"
#include "rsd/scenario_math.hpp"

using namespace rsd;

namespace {
std::int64_t floor_threshold(double eps_p, std::int64_t N_o) {
  return static_cast<std::int64_t>(std::floor(eps_p * static_cast<double>(N_o) + 1e-9));
}
}  // namespace

TEST_CASE("inputs are validated") {
  CHECK_THROWS_AS((DesignDims{0, 5, 5}.validate()), DomainError);
  CHECK_THROWS_AS((DesignDims{6, 5, 5}.validate()), DomainError);
  CHECK_THROWS_AS((DesignDims{1, 5, 0}.validate()), DomainError);
  CHECK_THROWS_AS(Levels::make(0.1, 0.2), DomainError);
  CHECK_THROWS_AS(Levels::make(0.1, 0.05, 0.0), DomainError);
  CHECK_THROWS_AS(Levels::make(0.1, 0.05, 1.0), DomainError);
  CHECK_NOTHROW(Levels::make(1.0, 0.3));
  CHECK_THROWS_AS(beta_eps(3, 4, Probability{0.1}), DomainError);
}

TEST_CASE("oracle threshold absorbs representation error") {
  CHECK(oracle_threshold(Probability{0.0035}, 62273) == 217);
  CHECK(oracle_threshold(Probability{0.3}, 10) == 3);  // 0.3·10 = 2.9999999999999996
  CHECK(oracle_threshold(Probability{0.0}, 10) == 0);
}

TEST_CASE("beta_eps and its complement") {
  CHECK(beta_eps(2000, 11, Probability{0.005}).value() == doctest::Approx(0.58304001214826).epsilon(1e-12));
  CHECK(beta_eps(10, 1, Probability{0.1}).value() == doctest::Approx(std::pow(0.9, 10)).epsilon(1e-14));
  CHECK(fv_lower_bound(10, 1, Probability{0.1}).value() == doctest::Approx(1 - std::pow(0.9, 10)).epsilon(1e-14));
  for (std::int64_t N : {5, 40, 150}) {
    for (std::int64_t n : {1, 3}) {
      CHECK(std::abs(beta_eps(N, n, Probability{0.07}).value() -
                     static_cast<double>(oracle::binomial_lower_tail(N, n, 0.07L))) < 1e-12);
    }
  }
}

TEST_CASE("H-functions at small sizes") {
  CHECK(h_one({2, 5, 4}, Probability{0.5}).value() == doctest::Approx(1.0 / 6).epsilon(1e-13));
  CHECK(h_one({2, 5, 4}, Probability{0.5}, ThresholdConvention::continuous).value() ==
        doctest::Approx(1.0 / 6).epsilon(1e-9));
  CHECK(h_eps({2, 5, 4}, Levels::make(0.3, 0.25)).value() == doctest::Approx(0.60613777642857143).epsilon(1e-12));
  // ε = 1: every Fbeta weight is 1
  CHECK(h_eps({3, 9, 12}, Levels::make(1.0, 0.2)).value() ==
        doctest::Approx(h_one({3, 9, 12}, Probability{0.2}).value()).epsilon(1e-13));
}

TEST_CASE("H-functions match the integral form on a 20-point grid") {
  const std::int64_t grid[20][3] = {{1, 1, 1},   {1, 5, 10},  {2, 5, 4},   {1, 50, 50}, {3, 10, 20},
                                    {5, 12, 7},  {2, 30, 40}, {7, 50, 25}, {4, 8, 50},  {10, 20, 30},
                                    {1, 2, 3},   {6, 40, 45}, {9, 9, 9},   {2, 44, 13}, {12, 48, 50},
                                    {3, 27, 35}, {1, 33, 17}, {8, 16, 24}, {5, 50, 1},  {15, 45, 48}};
  const double eps_ps[4] = {0.0, 0.1, 0.25, 0.45};
  int k = 0;
  for (const auto& g : grid) {
    const double ep = eps_ps[k % 4];
    const double e = std::min(1.0, ep + 0.1 + 0.05 * (k % 3));
    ++k;
    const DesignDims d{g[0], g[1], g[2]};
    const auto z = floor_threshold(ep, g[2]);
    CAPTURE(g[0]);
    CAPTURE(g[1]);
    CAPTURE(g[2]);
    CHECK(std::abs(h_one(d, Probability{ep}).value() - static_cast<double>(oracle::h_one(g[0], g[1], g[2], z))) < 1e-8);
    CHECK(std::abs(h_eps(d, Levels::make(e, ep)).value() -
                   static_cast<double>(oracle::h_eps(g[0], g[1], g[2], z, e))) < 1e-8);
  }
}

TEST_CASE("H-values at the design scale") {
  const auto fl = ThresholdConvention::floor;
  const auto co = ThresholdConvention::continuous;
  CHECK(h_one({11, 2000, 63000}, Probability{0.0035}, fl).value() == doctest::Approx(0.8974042539).epsilon(1e-9));
  CHECK(h_one({8, 1340, 62273}, Probability{0.0035}, fl).value() == doctest::Approx(0.8949989319).epsilon(1e-9));
  CHECK(h_one({11, 2000, 63000}, Probability{0.0035}, co).value() == doctest::Approx(0.8962631399).epsilon(1e-8));
  CHECK(h_one({8, 1340, 62273}, Probability{0.0035}, co).value() == doctest::Approx(0.8931178129).epsilon(1e-8));
}

TEST_CASE("bar_beta and BadExit bounds") {
  const Levels small = Levels::make(0.5, 0.3);
  CHECK(bar_beta({1, 5, 10}, small).value() == doctest::Approx(boost::math::ibetac(4.0, 12.0, 0.5)).epsilon(1e-13));
  CHECK(bar_beta({1, 5, 10}, small).value() == doctest::Approx(0.017578125).epsilon(1e-13));
  const BoundReport g = bad_exit_bound_general({1, 5, 10}, small);
  CHECK_FALSE(g.vacuous);
  CHECK(g.value == doctest::Approx(0.00634765625).epsilon(1e-13));
  const double exact = bad_exit_probability_fs({1, 5, 10}, small).value();
  CHECK(exact == doctest::Approx(static_cast<double>(oracle::bad_exit_fs(1, 5, 10, 3, 0.5L))).epsilon(1e-11));
  CHECK(exact <= bar_beta({1, 5, 10}, small).value());
  CHECK(h_eps({1, 5, 10}, small).value() - h_one({1, 5, 10}, Probability{0.3}).value() <= g.value);

  const Levels design = Levels::make(0.005, 0.0035);
  CHECK(bar_beta({11, 2000, 63000}, design).value() == doctest::Approx(1.85113724e-8).epsilon(1e-8));
  CHECK(bad_exit_bound_general({11, 2000, 63000}, design).value == doctest::Approx(6.025045211e-8).epsilon(1e-8));

  const BoundReport fs = bad_exit_bound_fs({1, 5, 10}, small);
  CHECK(fs.value == doctest::Approx(0.017578125).epsilon(1e-13));
  // A vacuous bound is reported, not hidden.
  const BoundReport vac = bad_exit_bound_general({1, 1, 1}, Levels::make(0.9, 0.0));
  CHECK(vac.vacuous == (vac.value >= 1.0));
}

TEST_CASE("bar-beta chain on a randomized grid") {
  RandomStream rng{derive_key(11, 2)};
  for (int k = 0; k < 120; ++k) {
    const auto n = static_cast<std::int64_t>(1 + rng() % 5);
    const auto N = n + static_cast<std::int64_t>(rng() % 40);
    const auto N_o = static_cast<std::int64_t>(1 + rng() % 60);
    const double ep = rng.uniform(0.0, 0.4);
    const double e = std::min(1.0, ep + rng.uniform(0.01, 0.4));
    const DesignDims d{n, N, N_o};
    const Levels lv = Levels::make(e, ep);
    const double h1 = h_one(d, lv.eps_prime).value();
    const double he = h_eps(d, lv).value();
    CHECK(he >= h1 - 1e-13);
    if (h1 < 1.0) {
      CHECK(1.0 - he >= (1.0 - bar_beta(d, lv).value()) * (1.0 - h1) - 1e-12);
      CHECK(bad_exit_probability_fs(d, lv).value() <= bar_beta(d, lv).value() + 1e-12);
    }
  }
}

TEST_CASE("runtime bounds") {
  const auto r = rvo_runtime_bounds({11, 2000, 63000}, Probability{0.0035}, 3, ThresholdConvention::continuous);
  CHECK(r.expected_bound == doctest::Approx(9.639775).epsilon(1e-6));
  CHECK(r.cdf_bound_at_k == doctest::Approx(1 - std::pow(0.8962631399, 3)).epsilon(1e-8));
  const auto d = dvo_runtime_bounds(10, 1, Probability{0.1}, 2);
  CHECK(d.expected_bound == doctest::Approx(1 / (1 - std::pow(0.9, 10))).epsilon(1e-13));
  CHECK(d.cdf_bound_at_k == doctest::Approx(1 - std::pow(0.9, 20)).epsilon(1e-13));
}

TEST_CASE("H tends to beta_eps' as N_o grows") {
  const double target = h_one_asymptotic(2000, 11, Probability{0.0035}).value();
  CHECK(target == doctest::Approx(beta_eps(2000, 11, Probability{0.0035}).value()).epsilon(1e-15));
  double prev = 1.0;
  for (std::int64_t N_o : {10000, 100000, 1000000}) {
    const double gap = std::abs(h_one({11, 2000, N_o}, Probability{0.0035}).value() - target);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-3);
}
