#include <cmath>

#include "doctest.h"
#include "plreg/errors.hpp"
#include "plreg/links.hpp"

using namespace plreg;

TEST_CASE("link reference points") {
    CHECK(link_apply(MedianLink::logit, 0.5) == doctest::Approx(0.0));
    CHECK(link_apply(MedianLink::cloglog, 1.0 - std::exp(-1.0)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(link_apply(MedianLink::probit, 0.975) ==
          doctest::Approx(1.959963984540054).epsilon(1e-9));
}

TEST_CASE("inverse composes to the identity") {
    for (auto link : {MedianLink::logit, MedianLink::probit, MedianLink::loglog,
                      MedianLink::cloglog}) {
        for (double mu = 0.05; mu < 0.99; mu += 0.05) {
            INFO(link_name(link) << " mu=" << mu);
            CHECK(link_inverse(link, link_apply(link, mu)) ==
                  doctest::Approx(mu).epsilon(1e-12));
        }
    }
}

TEST_CASE("first and second derivatives match finite differences") {
    const double h = 1e-6;
    for (auto link : {MedianLink::logit, MedianLink::probit, MedianLink::loglog,
                      MedianLink::cloglog}) {
        for (double mu = 0.1; mu < 0.95; mu += 0.1) {
            const double d1 =
                (link_apply(link, mu + h) - link_apply(link, mu - h)) / (2 * h);
            const double d2 =
                (link_d1(link, mu + h) - link_d1(link, mu - h)) / (2 * h);
            INFO(link_name(link) << " mu=" << mu);
            CHECK(link_d1(link, mu) == doctest::Approx(d1).epsilon(1e-7));
            CHECK(link_d2(link, mu) == doctest::Approx(d2).epsilon(1e-6));
        }
    }
}

TEST_CASE("domain errors at the boundary") {
    CHECK_THROWS_AS(link_apply(MedianLink::logit, 0.0), domain_error);
    CHECK_THROWS_AS(link_apply(MedianLink::probit, 1.0), domain_error);
    CHECK_THROWS_AS(link_d1(MedianLink::loglog, -0.1), domain_error);
    CHECK_THROWS_AS(dispersion_link_apply(0.0), domain_error);
}

TEST_CASE("dispersion log link derivatives") {
    const double h = 1e-7;
    for (double s : {0.2, 1.0, 3.7}) {
        CHECK(dispersion_link_inverse(dispersion_link_apply(s)) ==
              doctest::Approx(s).epsilon(1e-13));
        const double d1 = (dispersion_link_apply(s + h) -
                           dispersion_link_apply(s - h)) / (2 * h);
        CHECK(dispersion_link_d1(s) == doctest::Approx(d1).epsilon(1e-7));
        const double d2 =
            (dispersion_link_d1(s + h) - dispersion_link_d1(s - h)) / (2 * h);
        CHECK(dispersion_link_d2(s) == doctest::Approx(d2).epsilon(1e-6));
    }
}

TEST_CASE("names round trip") {
    for (auto link : {MedianLink::logit, MedianLink::probit, MedianLink::loglog,
                      MedianLink::cloglog}) {
        CHECK(link_from_name(link_name(link)) == link);
    }
    CHECK_THROWS_AS(link_from_name("identity"), usage_error);
}
