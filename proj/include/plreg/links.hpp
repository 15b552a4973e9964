#pragma once

#include <string>

namespace plreg {

enum class MedianLink { logit, probit, loglog, cloglog };

const char* link_name(MedianLink link);
MedianLink link_from_name(const std::string& name);

// d1(mu), its inverse, and the first/second derivatives of d1 in mu.
double link_apply(MedianLink link, double mu);
double link_inverse(MedianLink link, double eta);
double link_d1(MedianLink link, double mu);
double link_d2(MedianLink link, double mu);

// Dispersion submodel uses the log link throughout.
double dispersion_link_apply(double sigma);
double dispersion_link_inverse(double eta);
double dispersion_link_d1(double sigma);
double dispersion_link_d2(double sigma);

}  // namespace plreg
