#include "plreg/distribution.hpp"

#include <cmath>

#include "plreg/errors.hpp"

namespace plreg {

namespace {

void check_unit_open(double y, const char* who) {
    if (!(y > 0.0 && y < 1.0))
        throw domain_error(std::string(who) + ": argument must lie strictly in (0,1)");
}

double log_sigmoid(double w) {
    if (w >= 0.0) return -std::log1p(std::exp(-w));
    return w - std::log1p(std::exp(w));
}

}  // namespace

double transform_T(double y, double lambda) {
    check_unit_open(y, "transform_T");
    const double ly = std::log(y);
    if (lambda == 0.0) return -std::log(-ly);
    // log(1 - y^lambda) evaluated via expm1 to survive lambda*log(y) near 0
    const double e = std::expm1(lambda * ly);  // y^lambda - 1, in (-1, 0)
    return lambda * ly - std::log(-e);
}

double transform_T_d1(double y, double lambda) {
    check_unit_open(y, "transform_T_d1");
    const double ly = std::log(y);
    if (lambda == 0.0) return 1.0 / (y * (-ly));
    const double e = std::expm1(lambda * ly);
    return lambda / (y * (-e));
}

double transform_T_d2(double y, double lambda) {
    check_unit_open(y, "transform_T_d2");
    const double ly = std::log(y);
    if (lambda == 0.0) return (1.0 + ly) / (y * y * ly * ly);
    const double e = std::expm1(lambda * ly);
    return lambda * (e + lambda * (1.0 + e)) / (y * y * e * e);
}

double transform_T_inverse(double w, double lambda) {
    if (lambda == 0.0) return std::exp(-std::exp(-w));
    return std::exp(log_sigmoid(w) / lambda);
}

PowerLogitParams::PowerLogitParams(double mu_, double sigma_, double lambda_,
                                   GeneratorSpec gen)
    : mu(mu_), sigma(sigma_), lambda(lambda_), generator(std::move(gen)) {
    if (!(mu > 0.0 && mu < 1.0))
        throw domain_error("PowerLogitParams: mu must lie in (0,1)");
    if (!(sigma > 0.0)) throw domain_error("PowerLogitParams: sigma must be positive");
    if (!(lambda >= 0.0))
        throw domain_error("PowerLogitParams: lambda must be nonnegative");
}

double h_transform(double y, const PowerLogitParams& p) {
    check_unit_open(y, "h_transform");
    return (transform_T(y, p.lambda) - transform_T(p.mu, p.lambda)) / p.sigma;
}

double h_inverse(double z, const PowerLogitParams& p) {
    const double w = transform_T(p.mu, p.lambda) + p.sigma * z;
    return transform_T_inverse(w, p.lambda);
}

double log_pdf(double y, const PowerLogitParams& p) {
    check_unit_open(y, "log_pdf");
    const double z = h_transform(y, p);
    const double ly = std::log(y);
    double base;
    if (p.lambda == 0.0) {
        base = -std::log(p.sigma) - ly - std::log(-ly);
    } else {
        const double e = std::expm1(p.lambda * ly);
        base = std::log(p.lambda) - std::log(p.sigma) - ly - std::log(-e);
    }
    return base + p.generator.log_r(z * z);
}

double pdf(double y, const PowerLogitParams& p) { return std::exp(log_pdf(y, p)); }

double cdf(double y, const PowerLogitParams& p) {
    check_unit_open(y, "cdf");
    return p.generator.cdf(h_transform(y, p));
}

double quantile(double u, const PowerLogitParams& p) {
    if (!(u > 0.0 && u < 1.0)) throw domain_error("quantile: u outside (0,1)");
    return h_inverse(p.generator.quantile(u), p);
}

std::vector<double> sample(const PowerLogitParams& p, std::uint64_t seed,
                           std::size_t n) {
    std::vector<double> z = p.generator.sample(seed, n);
    for (auto& v : z) v = h_inverse(v, p);
    return z;
}

double rescale_to_unit(double x, double a, double b) {
    if (!(a < b)) throw domain_error("rescale_to_unit: need a < b");
    return (x - a) / (b - a);
}

double rescale_from_unit(double y, double a, double b) {
    if (!(a < b)) throw domain_error("rescale_from_unit: need a < b");
    return a + (b - a) * y;
}

}  // namespace plreg
