#include "fcmp/normal.hpp"

#include <boost/math/distributions/normal.hpp>

#include "fcmp/error.hpp"

namespace fcmp {

namespace {
const boost::math::normal_distribution<double> kStd(0.0, 1.0);
}

double norm_pdf(double x) { return boost::math::pdf(kStd, x); }

double norm_cdf(double x) { return boost::math::cdf(kStd, x); }

double norm_sf(double x) { return boost::math::cdf(boost::math::complement(kStd, x)); }

double norm_quantile(double p) {
  require(p > 0.0 && p < 1.0, ErrorKind::Domain, "norm_quantile: p must lie in (0,1)");
  return boost::math::quantile(kStd, p);
}

}  // namespace fcmp
