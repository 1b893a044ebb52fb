#pragma once

namespace admitcast::dist {

double normal_cdf(double z);
double normal_sf(double z);
// Wichura's AS 241 (PPND16), accurate to about 1e-16.
double normal_quantile(double p);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);
// Upper tail of the chi-squared distribution with `df` degrees of freedom.
double chi_squared_sf(double x, double df);

}  // namespace admitcast::dist
