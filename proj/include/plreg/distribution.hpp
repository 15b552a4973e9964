#pragma once

#include <cstdint>
#include <vector>

#include "plreg/generators.hpp"

namespace plreg {

// Monotone map carrying (0,1) to the real line at skewness lambda:
// lambda > 0 : T(y) = log(y^lambda / (1 - y^lambda))
// lambda = 0 : T(y) = -log(-log y)   (the log-log limit)
// transform_d1 and transform_d2 are its first and second derivatives in y.
double transform_T(double y, double lambda);
double transform_T_d1(double y, double lambda);
double transform_T_d2(double y, double lambda);
double transform_T_inverse(double w, double lambda);

// PL(mu, sigma, lambda; r). lambda = 1 is the GJS subfamily; lambda = 0
// encodes the limiting log-log law. Immutable value type.
struct PowerLogitParams {
    double mu;
    double sigma;
    double lambda;
    GeneratorSpec generator;

    PowerLogitParams(double mu_, double sigma_, double lambda_,
                     GeneratorSpec gen);
};

double h_transform(double y, const PowerLogitParams& p);
double h_inverse(double z, const PowerLogitParams& p);

double pdf(double y, const PowerLogitParams& p);
double log_pdf(double y, const PowerLogitParams& p);
double cdf(double y, const PowerLogitParams& p);
double quantile(double u, const PowerLogitParams& p);
std::vector<double> sample(const PowerLogitParams& p, std::uint64_t seed,
                           std::size_t n);

// Helpers for responses observed on (a,b): map data into (0,1) before
// fitting and back for reporting.
double rescale_to_unit(double x, double a, double b);
double rescale_from_unit(double y, double a, double b);

}  // namespace plreg
