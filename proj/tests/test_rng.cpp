#include <doctest.h>

#include <cmath>

#include "fcmp/normal.hpp"
#include "fcmp/rng.hpp"
#include "support.hpp"

using namespace fcmp;
using fcmp::testing::kind_of;

TEST_CASE("streams are reproducible and distinct") {
  Rng a(7, {1, 2}), b(7, {1, 2}), c(7, {2, 1});
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CHECK(stream_seed(1, {0}) != stream_seed(1, {}));
}

TEST_CASE("distribution moments") {
  Rng rng(123);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sg = 0;
  std::uint64_t hits[7] = {};
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK_MESSAGE((u >= 0.0 && u < 1.0), "uniform out of range");
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sg += static_cast<double>(rng.geometric(0.25));
    ++hits[rng.below(7)];
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sg / n == doctest::Approx(4.0).epsilon(0.01));
  for (auto h : hits) CHECK(static_cast<double>(h) / n == doctest::Approx(1.0 / 7).epsilon(0.03));
  CHECK(rng.geometric(1.0) == 1);
  CHECK(kind_of([&] { rng.geometric(0.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { rng.below(0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("normal distribution helpers") {
  CHECK(norm_cdf(0.0) == 0.5);
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(norm_sf(1.0) == doctest::Approx(1 - norm_cdf(1.0)).epsilon(1e-14));
  CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(kind_of([] { norm_quantile(1.0); }) == ErrorKind::Domain);
}
