#pragma once

namespace depscreen {

// Regularized lower incomplete gamma P(a,x); series/continued-fraction split.
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a,b).
double inc_beta(double a, double b, double x);

// Two-sided p-value of a Student-t statistic with nu degrees of freedom.
double student_t_two_sided_p(double t, double nu);

// Standard normal CDF and quantile. The quantile is accurate to ~1e-14
// (rational approximation polished with one Halley step).
double normal_cdf(double x);
double normal_quantile(double p);

// Upper tail of the chi-square law with one degree of freedom.
double chi2_1_sf(double x);

}  // namespace depscreen
