#include <doctest.h>

#include <cmath>
#include <vector>

#include "fcmp/error.hpp"
#include "fcmp/loss.hpp"
#include "fcmp/rng.hpp"
#include "support.hpp"

using namespace fcmp;

namespace {

using fcmp::testing::kind_of;

std::vector<LossFamily> expectile_families() {
  return {family::SquaredError{}, family::ExponentialBregman{0.7}, family::HomogeneousBregman{1.5},
          family::Qlike{}, family::HomogeneousPatton{-1.0}, family::HomogeneousPatton{3.0}};
}

std::vector<LossFamily> quantile_families() {
  return {family::LinLin{}, family::ScaledLinLin{}, family::HomogeneousPower{2.0},
          family::HomogeneousPower{-0.5}, family::LogPower{}};
}


}  // namespace

TEST_CASE("functional level rejects the boundary") {
  CHECK(kind_of([] { FunctionalLevel(0.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { FunctionalLevel(1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { FunctionalLevel(std::nan("")); }) == ErrorKind::InvalidArgument);
  CHECK(FunctionalLevel(0.25).value() == 0.25);
}

TEST_CASE("extremal expectile loss hand values") {
  CHECK(extremal_expectile_loss(0.0, FunctionalLevel(0.5), 1.0, -1.0) == doctest::Approx(0.5));
  CHECK(extremal_expectile_loss(3.0, FunctionalLevel(0.25), 1.0, 1.0) == 0.0);
  CHECK(extremal_expectile_loss(0.0, FunctionalLevel(0.25), -1.0, 1.0) == doctest::Approx(0.25));
  // jump at theta = x: right-continuous value and left limit
  CHECK(extremal_expectile_loss(1.0, FunctionalLevel(0.5), 1.0, -1.0) == 0.0);
  CHECK(extremal_expectile_loss_left(1.0, FunctionalLevel(0.5), 1.0, -1.0) == doctest::Approx(1.0));
  CHECK(kind_of([] { extremal_expectile_loss(0.0, FunctionalLevel(0.5), INFINITY, 0.0); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("extremal quantile loss hand values") {
  CHECK(extremal_quantile_loss(0.5, FunctionalLevel(0.05), 1.0, 0.0) == doctest::Approx(0.95));
  CHECK(extremal_quantile_loss(0.5, FunctionalLevel(0.05), 0.0, 1.0) == doctest::Approx(0.05));
  CHECK(extremal_quantile_loss(2.0, FunctionalLevel(0.3), 1.0, 0.0) == 0.0);
  // ties take the indicator value 0
  CHECK(extremal_quantile_loss(1.0, FunctionalLevel(0.3), 1.0, 0.0) == 0.0);
  CHECK(extremal_quantile_loss(0.0, FunctionalLevel(0.3), 1.0, 0.0) == doctest::Approx(0.7));
  CHECK(kind_of([] { extremal_quantile_loss(NAN, FunctionalLevel(0.5), 0.0, 0.0); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("consistent loss hand values") {
  CHECK(consistent_loss(LossSpec(family::SquaredError{}, FunctionalLevel(0.5)), 2.0, 0.0) == doctest::Approx(2.0));
  CHECK(consistent_loss(LossSpec(family::Qlike{}, FunctionalLevel(0.5)), 1.0, 2.0) ==
        doctest::Approx(0.5 * (2.0 - std::log(2.0) - 1.0)));
  CHECK(consistent_loss(LossSpec(family::Qlike{}, FunctionalLevel(0.5)), 1.0, 2.0) ==
        doctest::Approx(0.15342640972002736).epsilon(1e-12));
  CHECK(consistent_loss(LossSpec(family::LinLin{}, FunctionalLevel(0.05)), 1.0, 0.0) == doctest::Approx(0.95));
  CHECK(consistent_loss(LossSpec(family::ScaledLinLin{}, FunctionalLevel(0.05)), 1.0, 0.0) ==
        doctest::Approx(19.0));
  // exponential Bregman a = 1 at x = 1, y = 0: closed form 1, times 0.5
  CHECK(consistent_loss(LossSpec(family::ExponentialBregman{1.0}, FunctionalLevel(0.5)), 1.0, 0.0) ==
        doctest::Approx(0.5));
  // homogeneous Bregman b = 2 is the squared error
  CHECK(consistent_loss(LossSpec(family::HomogeneousBregman{2.0}, FunctionalLevel(0.3)), -0.4, 1.1) ==
        doctest::Approx(consistent_loss(LossSpec(family::SquaredError{}, FunctionalLevel(0.3)), -0.4, 1.1)));
  CHECK(consistent_loss(LossSpec(family::ExtremalQuantile{0.5}, FunctionalLevel(0.05)), 1.0, 0.0) ==
        doctest::Approx(0.95));
}

TEST_CASE("every family vanishes at a perfect forecast") {
  for (const auto& f : expectile_families())
    CHECK(consistent_loss(LossSpec(f, FunctionalLevel(0.3)), 1.7, 1.7) == 0.0);
  for (const auto& f : quantile_families())
    CHECK(consistent_loss(LossSpec(f, FunctionalLevel(0.3)), 1.7, 1.7) == 0.0);
  CHECK(consistent_loss(LossSpec(family::LogisticBregman{}, FunctionalLevel(0.3)), 1.0, 1.0) == 0.0);
}

TEST_CASE("domain and parameter errors") {
  const FunctionalLevel a(0.5);
  CHECK(kind_of([&] { consistent_loss(LossSpec(family::Qlike{}, a), -1.0, 1.0); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { consistent_loss(LossSpec(family::LogPower{}, a), 1.0, 0.0); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { consistent_loss(LossSpec(family::LogisticBregman{}, a), 0.5, 0.5); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { consistent_loss(LossSpec(family::LogisticBregman{}, a), 0.0, 1.0); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { consistent_loss(LossSpec(family::SquaredError{}, a), NAN, 1.0); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { LossSpec(family::ExponentialBregman{0.0}, a); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { LossSpec(family::HomogeneousBregman{1.0}, a); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { LossSpec(family::HomogeneousPatton{1.0}, a); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { LossSpec(family::HomogeneousPower{0.0}, a); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { LossSpec(family::LinLin{}, a, Functional::Expectile); }) == ErrorKind::Spec);
  CHECK(kind_of([&] { LossSpec(family::Qlike{}, a, Functional::Quantile); }) == ErrorKind::Spec);
  CHECK(functional_of(family::ExtremalExpectile{0.0}) == Functional::Expectile);
  CHECK(functional_of(family::HomogeneousPower{2.0}) == Functional::Quantile);
}

TEST_CASE("mixture reproduces the direct losses") {
  const FunctionalLevel half(0.5);
  SUBCASE("exponential Bregman desk value") {
    MixtureSpec m(family::ExponentialBregman{1.0}, -5.0, 5.0, 2001);
    CHECK(mixture_loss(m, half, 1.0, 0.0) == doctest::Approx(0.5).epsilon(2e-4));
  }
  SUBCASE("lin-lin is exact") {
    MixtureSpec m(family::LinLin{}, -5.0, 5.0, 11);
    for (double a : {0.01, 0.3, 0.9}) {
      CHECK(mixture_loss(m, FunctionalLevel(a), 0.123, -2.71) ==
            doctest::Approx((1.0 - a) * (0.123 + 2.71)).epsilon(1e-13));
      CHECK(mixture_loss(m, FunctionalLevel(a), -0.4, 3.3) == doctest::Approx(a * 3.7).epsilon(1e-13));
    }
  }
  SUBCASE("coincident arguments") {
    MixtureSpec m(family::SquaredError{}, -5.0, 5.0);
    CHECK(mixture_loss(m, half, 0.7, 0.7) == 0.0);
  }
  SUBCASE("random pairs for several families") {
    Rng rng(11);
    const std::vector<LossFamily> fams{family::SquaredError{}, family::ExponentialBregman{-1.0},
                                       family::HomogeneousBregman{1.5}, family::HomogeneousBregman{3.0}};
    for (const auto& f : fams) {
      MixtureSpec m(f, -6.0, 6.0, 2001);
      for (int i = 0; i < 50; ++i) {
        const double x = rng.normal(), y = rng.normal();
        const double direct = consistent_loss(LossSpec(f, half), x, y);
        CHECK(std::abs(mixture_loss(m, half, x, y) - direct) <= 1e-4 * (1.0 + direct));
      }
    }
  }
  SUBCASE("positive-domain families") {
    Rng rng(12);
    const std::vector<LossFamily> fams{family::Qlike{}, family::HomogeneousPatton{-1.0},
                                       family::HomogeneousPower{2.0}, family::HomogeneousPower{-0.5},
                                       family::LogPower{}};
    for (const auto& f : fams) {
      MixtureSpec m(f, 0.0, 6.0, 2001);
      for (int i = 0; i < 30; ++i) {
        const double x = 0.2 + 4.0 * rng.uniform(), y = 0.2 + 4.0 * rng.uniform();
        const double direct = consistent_loss(LossSpec(f, FunctionalLevel(0.2)), x, y);
        CHECK(std::abs(mixture_loss(m, FunctionalLevel(0.2), x, y) - direct) <= 1e-4 * (1.0 + direct));
      }
    }
  }
}

TEST_CASE("mixture errors and the literal point-mass variant") {
  const FunctionalLevel half(0.5);
  MixtureSpec narrow(family::SquaredError{}, -1.0, 1.0);
  CHECK(kind_of([&] { mixture_loss(narrow, half, 0.0, 2.0); }) == ErrorKind::Range);
  CHECK(kind_of([&] { MixtureSpec(family::LogisticBregman{}, 0.0, 1.0); }) == ErrorKind::Spec);
  CHECK(kind_of([&] { MixtureSpec(family::ExtremalExpectile{0.0}, 0.0, 1.0); }) == ErrorKind::Spec);
  CHECK(kind_of([&] { MixtureSpec(family::SquaredError{}, 1.0, 0.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { MixtureSpec(family::SquaredError{}, 0.0, 1.0, 2); }) == ErrorKind::InvalidArgument);
  MixtureSpec neg(family::SquaredError{}, -1.0, 1.0, 5, {PointMass{0.0, FixedWeight{-1.0}}});
  CHECK(kind_of([&] { mixture_loss(neg, half, -0.5, 0.5); }) == ErrorKind::Spec);

  // b = 2, x = -1, y = 1: direct loss 0.5 * 4 = 2. The extra mass 2|x| at zero
  // adds 2 * L_0(-1, 1) = 2 * 0.5 = 1, so the literal variant overshoots.
  const LossFamily hb = family::HomogeneousBregman{2.0};
  MixtureSpec plain(hb, -3.0, 3.0);
  MixtureSpec dirac(hb, -3.0, 3.0, 2001, {homogeneous_bregman_dirac(2.0)});
  CHECK(mixture_loss(plain, half, -1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(mixture_loss(dirac, half, -1.0, 1.0) == doctest::Approx(3.0).epsilon(1e-6));
  // Same sign arguments: L_0 vanishes and both agree.
  CHECK(mixture_loss(dirac, half, 0.5, 2.0) == doctest::Approx(mixture_loss(plain, half, 0.5, 2.0)));
  CHECK(MixtureSpec::auto_range(hb, {0.5, -2.0, 1.0}).lo() == -3.0);
  CHECK(MixtureSpec::auto_range(hb, {0.5, -2.0, 1.0}).hi() == 2.0);
}

TEST_CASE("random inputs satisfy the bounds") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double a = 0.01 + 0.98 * rng.uniform();
    const FunctionalLevel al(a);
    const double x = 3 * rng.normal(), y = 3 * rng.normal(), th = 3 * rng.normal();
    const double le = extremal_expectile_loss(th, al, x, y);
    const double lq = extremal_quantile_loss(th, al, x, y);
    CHECK(le >= 0.0);
    CHECK(le <= std::max(a, 1 - a) * std::abs(y - x) + 1e-12);
    CHECK(lq >= 0.0);
    CHECK(lq <= std::max(a, 1 - a));
  }
}

TEST_CASE("logistic loss at one half is half the log likelihood") {
  const LossSpec s(family::LogisticBregman{}, FunctionalLevel(0.5));
  for (int i = 1; i < 100; ++i) {
    const double x = i / 100.0;
    CHECK(consistent_loss(s, x, 1.0) == doctest::Approx(-0.5 * std::log(x)));
    CHECK(consistent_loss(s, x, 0.0) == doctest::Approx(-0.5 * std::log(1 - x)));
  }
}
