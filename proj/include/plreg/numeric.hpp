#pragma once

#include <functional>

namespace plreg {

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 40);

// Integral of f over [a, inf), mapped onto (0,1] and integrated adaptively.
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double tol = 1e-12);

struct RootOptions {
    double xtol = 1e-10;
    double ftol = 1e-14;
    int max_iter = 200;
};

// Bracketed root of f on [lo, hi] (f(lo), f(hi) of opposite sign) by a
// secant step with bisection fallback.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 RootOptions opts = {});

double norm_pdf(double z);
double norm_cdf(double z);
// Standard normal quantile, accurate to ~1e-15 on (0,1).
double norm_quantile(double u);

}  // namespace plreg
