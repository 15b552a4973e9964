#pragma once

namespace plreg::special {

double gamma_fn(double a);             // Gamma(a), a > 0
double log_gamma(double a);            // log Gamma(a), a > 0
double beta_fn(double a, double b);    // B(a,b), a,b > 0
double erf_fn(double x);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Lower incomplete gamma G(a,x) = int_0^x t^{a-1} e^{-t} dt, and its log.
double lower_incomplete_gamma(double a, double x);
double log_lower_incomplete_gamma(double a, double x);

// Regularized incomplete beta I_x(a,b).
double inc_beta(double a, double b, double x);

// Modified Bessel function of the third kind K_s(z), s in {1,2}, evaluated
// through the integral int_0^inf cosh(s t) exp(-z cosh t) dt with a
// step-halving trapezoid rule (spectrally accurate for this integrand).
double bessel_k(int order, double z);
// Same integral at a fixed step size; exposed for the doubled-node
// self-convergence check in the tests.
double bessel_k_step(int order, double z, double h);

// h1(z) = int_1^inf sqrt(x^2-1)/x exp(-z x) dx.
double hyperbolic_h1(double z);

}  // namespace plreg::special
