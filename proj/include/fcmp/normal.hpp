#pragma once

namespace fcmp {

double norm_pdf(double x);
double norm_cdf(double x);
// Upper tail 1 - Phi(x) without cancellation.
double norm_sf(double x);
double norm_quantile(double p);

}  // namespace fcmp
