#ifndef EVALSIM_SPECIAL_FUNCTIONS_HPP_
#define EVALSIM_SPECIAL_FUNCTIONS_HPP_

namespace evalsim {

double norm_pdf(double x);

// Standard normal CDF, absolute error below 1e-15.
double norm_cdf(double x);

// Standard normal quantile: rational approximation refined by one
// Halley step, absolute error below 1e-9 on (0,1).
double norm_quantile(double p);

double log_beta(double a, double b);
double log_choose(int n, int k);

// Regularized incomplete beta I_x(a,b) via the Lentz continued fraction.
double reg_incomplete_beta(double x, double a, double b);

// Regularized lower incomplete gamma P(s,x); Q(s,x) = 1 - P(s,x).
double reg_incomplete_gamma_p(double s, double x);
double reg_incomplete_gamma_q(double s, double x);

// Upper tail of the chi-squared distribution with df degrees of freedom.
double chi_squared_upper_tail(double statistic, double df);

}  // namespace evalsim

#endif  // EVALSIM_SPECIAL_FUNCTIONS_HPP_
