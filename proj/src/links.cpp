#include "plreg/links.hpp"

#include <cmath>

#include "plreg/errors.hpp"
#include "plreg/numeric.hpp"

namespace plreg {

namespace {

void check_mu(double mu) {
    if (!(mu > 0.0 && mu < 1.0))
        throw domain_error("link: mu must lie strictly in (0,1)");
}

}  // namespace

const char* link_name(MedianLink link) {
    switch (link) {
        case MedianLink::logit: return "logit";
        case MedianLink::probit: return "probit";
        case MedianLink::loglog: return "loglog";
        case MedianLink::cloglog: return "cloglog";
    }
    return "?";
}

MedianLink link_from_name(const std::string& name) {
    if (name == "logit") return MedianLink::logit;
    if (name == "probit") return MedianLink::probit;
    if (name == "loglog") return MedianLink::loglog;
    if (name == "cloglog") return MedianLink::cloglog;
    throw usage_error("unknown median link '" + name + "'");
}

double link_apply(MedianLink link, double mu) {
    check_mu(mu);
    switch (link) {
        case MedianLink::logit: return std::log(mu / (1.0 - mu));
        case MedianLink::probit: return norm_quantile(mu);
        case MedianLink::loglog: return -std::log(-std::log(mu));
        case MedianLink::cloglog: return std::log(-std::log1p(-mu));
    }
    return 0.0;
}

double link_inverse(MedianLink link, double eta) {
    switch (link) {
        case MedianLink::logit:
            return eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta))
                              : std::exp(eta) / (1.0 + std::exp(eta));
        case MedianLink::probit: return norm_cdf(eta);
        case MedianLink::loglog: return std::exp(-std::exp(-eta));
        case MedianLink::cloglog: return -std::expm1(-std::exp(eta));
    }
    return 0.0;
}

double link_d1(MedianLink link, double mu) {
    check_mu(mu);
    switch (link) {
        case MedianLink::logit: return 1.0 / (mu * (1.0 - mu));
        case MedianLink::probit: return 1.0 / norm_pdf(norm_quantile(mu));
        case MedianLink::loglog: return 1.0 / (mu * (-std::log(mu)));
        case MedianLink::cloglog: {
            const double g = -std::log1p(-mu);
            return 1.0 / (g * (1.0 - mu));
        }
    }
    return 0.0;
}

double link_d2(MedianLink link, double mu) {
    check_mu(mu);
    switch (link) {
        case MedianLink::logit: {
            const double t = mu * (1.0 - mu);
            return (2.0 * mu - 1.0) / (t * t);
        }
        case MedianLink::probit: {
            const double q = norm_quantile(mu);
            const double f = norm_pdf(q);
            return q / (f * f);
        }
        case MedianLink::loglog: {
            const double g = -std::log(mu);
            return (1.0 - g) / (mu * mu * g * g);
        }
        case MedianLink::cloglog: {
            const double g = -std::log1p(-mu);
            const double om = 1.0 - mu;
            return (g - 1.0) / (g * g * om * om);
        }
    }
    return 0.0;
}

double dispersion_link_apply(double sigma) {
    if (!(sigma > 0.0)) throw domain_error("dispersion link: sigma must be positive");
    return std::log(sigma);
}

double dispersion_link_inverse(double eta) { return std::exp(eta); }

double dispersion_link_d1(double sigma) {
    if (!(sigma > 0.0)) throw domain_error("dispersion link: sigma must be positive");
    return 1.0 / sigma;
}

double dispersion_link_d2(double sigma) {
    if (!(sigma > 0.0)) throw domain_error("dispersion link: sigma must be positive");
    return -1.0 / (sigma * sigma);
}

}  // namespace plreg
