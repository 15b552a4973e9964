#include <cmath>

#include "doctest.h"
#include "plreg/errors.hpp"
#include "plreg/generators.hpp"
#include "plreg/numeric.hpp"
#include "plreg/rng.hpp"
#include "test_util.hpp"

using namespace plreg;
using testutil::all_generators;

TEST_CASE("construction enforces the zeta domain") {
    CHECK_THROWS_AS(GeneratorSpec::make(GeneratorKind::student_t), domain_error);
    CHECK_THROWS_AS(GeneratorSpec::make(GeneratorKind::slash, -1.0), domain_error);
    CHECK_THROWS_AS(GeneratorSpec::make(GeneratorKind::normal, 2.0), domain_error);
    CHECK_NOTHROW(GeneratorSpec::make(GeneratorKind::hyperbolic, 0.7));
}

TEST_CASE("r at frozen reference points") {
    const auto normal = GeneratorSpec::make(GeneratorKind::normal);
    CHECK(normal.r_density(0.0) == doctest::Approx(0.3989422804).epsilon(1e-9));

    // slash at the removable singularity: 2 zeta / ((2 zeta + 1) sqrt(2 pi))
    const auto slash = GeneratorSpec::make(GeneratorKind::slash, 1.0);
    CHECK(slash.r_density(0.0) == doctest::Approx(0.2659615203).epsilon(1e-8));

    // student t, zeta = 4, u = 1: 4^2 B(1/2,2)^{-1} 5^{-5/2}
    const auto t4 = GeneratorSpec::make(GeneratorKind::student_t, 4.0);
    const double want = 16.0 * (3.0 / 4.0) * std::pow(5.0, -2.5);
    CHECK(t4.r_density(1.0) == doctest::Approx(want).epsilon(1e-12));

    // type I logistic at zero: c e^{-0} (1 + e^{-0})^{-2} = c / 4
    const auto l1 = GeneratorSpec::make(GeneratorKind::logistic_I);
    CHECK(l1.r_density(0.0) ==
          doctest::Approx(1.484300029 / 4.0).epsilon(1e-9));
}

TEST_CASE("density generator normalization: int u^{-1/2} r(u) du = 1") {
    for (const auto& gen : all_generators()) {
        const double mass =
            2.0 * (integrate([&](double z) { return gen.density(z); }, 0.0, 8.0,
                             1e-10) +
                   integrate_to_inf([&](double z) { return gen.density(z); }, 8.0,
                                    1e-10));
        INFO(gen.label());
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("weight function closed forms") {
    const auto normal = GeneratorSpec::make(GeneratorKind::normal);
    CHECK(normal.v_weight(3.7) == 1.0);
    const auto t5 = GeneratorSpec::make(GeneratorKind::student_t, 5.0);
    CHECK(t5.v_weight(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    const auto hyp2 = GeneratorSpec::make(GeneratorKind::hyperbolic, 2.0);
    CHECK(hyp2.v_weight(0.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("v matches -2 r'(z^2)/r(z^2) by finite differences of r") {
    for (const auto& gen : all_generators()) {
        for (double z : {-2.0, -0.5, 0.5, 2.0}) {
            const double u = z * z;
            const double h = 1e-7 * std::max(1.0, u);
            const double rp =
                (gen.r_density(u + h) - gen.r_density(u - h)) / (2.0 * h);
            const double want = -2.0 * rp / gen.r_density(u);
            INFO(gen.label() << " z=" << z);
            CHECK(gen.v_weight(z) == doctest::Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("v' matches finite differences of v") {
    for (const auto& gen : all_generators()) {
        for (double z : {-2.0, -0.5, 0.5, 2.0}) {
            const double h = 1e-6 * std::max(1.0, std::abs(z));
            const double want =
                (gen.v_weight(z + h) - gen.v_weight(z - h)) / (2.0 * h);
            INFO(gen.label() << " z=" << z);
            CHECK(gen.v_weight_prime(z) ==
                  doctest::Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("cdf symmetry and reference values") {
    for (const auto& gen : all_generators()) {
        INFO(gen.label());
        CHECK(gen.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
        for (double z : {0.3, 1.1, 2.7, 4.0}) {
            CHECK(gen.cdf(z) + gen.cdf(-z) ==
                  doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    const auto normal = GeneratorSpec::make(GeneratorKind::normal);
    CHECK(normal.cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-6));
    const auto l2 = GeneratorSpec::make(GeneratorKind::logistic_II);
    CHECK(l2.quantile(0.5) == 0.0);
}

TEST_CASE("quantile round trips through the cdf") {
    for (const auto& gen : all_generators()) {
        for (double z : {-4.0, -1.5, -0.2, 0.7, 2.4, 4.0}) {
            const double u = gen.cdf(z);
            // the sinh-normal cdf saturates to 1.0 in double precision well
            // inside |z| <= 4; inversion is only meaningful off saturation
            if (u <= 1e-15 || u >= 1.0 - 1e-15) continue;
            INFO(gen.label() << " z=" << z);
            CHECK(gen.quantile(u) == doctest::Approx(z).epsilon(1e-7));
        }
        CHECK_THROWS_AS(gen.quantile(0.0), domain_error);
        CHECK_THROWS_AS(gen.quantile(1.0), domain_error);
    }
}

TEST_CASE("student t with one degree of freedom is Cauchy") {
    const auto t1 = GeneratorSpec::make(GeneratorKind::student_t, 1.0);
    for (double z : {-3.0, -0.7, 0.4, 2.2}) {
        CHECK(t1.cdf(z) ==
              doctest::Approx(0.5 + std::atan(z) / M_PI).epsilon(1e-12));
    }
}

TEST_CASE("sampling: determinism, symmetry, KS distance") {
    for (const auto& gen : all_generators()) {
        INFO(gen.label());
        const auto a = gen.sample(1234, 2000);
        const auto b = gen.sample(1234, 2000);
        CHECK(a == b);
    }
    // full KS check on a representative subset (10k draws each)
    for (auto kind : {GeneratorKind::normal, GeneratorKind::student_t,
                      GeneratorKind::power_exponential, GeneratorKind::slash}) {
        const auto gen =
            generator_has_zeta(kind)
                ? GeneratorSpec::make(kind, kind == GeneratorKind::slash ? 1.4 : 5.0)
                : GeneratorSpec::make(kind);
        auto draws = gen.sample(77, 10000);
        std::vector<double> copy(draws.begin(), draws.end());
        std::sort(copy.begin(), copy.end());
        const double median = 0.5 * (copy[4999] + copy[5000]);
        INFO(gen.label());
        CHECK(std::abs(median) < 0.05);
        CHECK(testutil::ks_statistic(draws, [&](double z) { return gen.cdf(z); }) <
              0.02);
    }
}

TEST_CASE("Table-2 constants: closed forms") {
    const auto l2 = GeneratorSpec::make(GeneratorKind::logistic_II);
    CHECK(l2.constants().xi_r == doctest::Approx(M_PI * M_PI / 3.0));
    CHECK(l2.constants().d_r == doctest::Approx(1.0 / 3.0));

    const auto l1 = GeneratorSpec::make(GeneratorKind::logistic_I);
    CHECK(l1.constants().xi_r == doctest::Approx(0.79569));
    CHECK(l1.constants().d_r == doctest::Approx(1.47724));

    const auto t5 = GeneratorSpec::make(GeneratorKind::student_t, 5.0);
    CHECK(t5.constants().xi_r == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(t5.constants().d_r == doctest::Approx(0.75).epsilon(1e-14));

    CHECK_THROWS_AS(GeneratorSpec::make(GeneratorKind::student_t, 2.0).constants(),
                    domain_error);
    CHECK_THROWS_AS(GeneratorSpec::make(GeneratorKind::slash, 0.9).constants(),
                    domain_error);
    CHECK_THROWS_AS(
        GeneratorSpec::make(GeneratorKind::power_exponential, 0.4).constants(),
        domain_error);
}

TEST_CASE("Table-2 constants against Monte Carlo moments" *
          doctest::timeout(300)) {
    // xi_r vs the sample variance and d_r vs the sample mean of z^2 v(z)^2,
    // each within 3 standard errors of the Monte Carlo estimate. The slash
    // d_r and both sinh-normal entries are approximations; they get the same
    // check with a small extra allowance on top of the Monte Carlo band.
    struct Case {
        GeneratorSpec gen;
        std::size_t draws;
        double extra;  // absolute allowance for approximate table entries
    };
    const std::vector<Case> cases = {
        {GeneratorSpec::make(GeneratorKind::normal), 1000000, 0.0},
        {GeneratorSpec::make(GeneratorKind::student_t, 5.0), 1000000, 0.0},
        {GeneratorSpec::make(GeneratorKind::logistic_I), 1000000, 1e-4},
        {GeneratorSpec::make(GeneratorKind::logistic_II), 1000000, 0.0},
        {GeneratorSpec::make(GeneratorKind::power_exponential, 1.5), 200000, 0.0},
        {GeneratorSpec::make(GeneratorKind::slash, 2.5), 1000000, 0.02},
        {GeneratorSpec::make(GeneratorKind::hyperbolic, 1.2), 200000, 0.0},
        {GeneratorSpec::make(GeneratorKind::sinh_normal, 1.0), 1000000, 1e-3},
    };
    for (const auto& c : cases) {
        const auto draws = c.gen.sample(20240601, c.draws);
        const double n = static_cast<double>(draws.size());
        double s2 = 0.0, s4 = 0.0, m_d = 0.0, m_d2 = 0.0;
        for (double z : draws) {
            const double zz = z * z;
            s2 += zz;
            s4 += zz * zz;
            const double w = zz * c.gen.v_weight(z) * c.gen.v_weight(z);
            m_d += w;
            m_d2 += w * w;
        }
        s2 /= n; s4 /= n; m_d /= n; m_d2 /= n;
        const double se_var = std::sqrt(std::max(0.0, s4 - s2 * s2) / n);
        const double se_d = std::sqrt(std::max(0.0, m_d2 - m_d * m_d) / n);
        const auto k = c.gen.constants();
        INFO(c.gen.label() << " xi: mc=" << s2 << " table=" << k.xi_r);
        CHECK(std::abs(s2 - k.xi_r) < 3.0 * se_var + c.extra);
        INFO(c.gen.label() << " d_r: mc=" << m_d << " table=" << k.d_r);
        CHECK(std::abs(m_d - k.d_r) < 3.0 * se_d + c.extra);
    }
}

TEST_CASE("r_at_zero matches exp(log_r0)") {
    for (const auto& gen : all_generators()) {
        CHECK(gen.constants().r_at_zero ==
              doctest::Approx(gen.r_density(0.0)).epsilon(1e-12));
    }
}

TEST_CASE("default zeta grids exist for the parametric kinds") {
    for (auto kind : {GeneratorKind::student_t, GeneratorKind::power_exponential,
                      GeneratorKind::slash, GeneratorKind::hyperbolic,
                      GeneratorKind::sinh_normal}) {
        CHECK(!GeneratorSpec::default_zeta_grid(kind).empty());
    }
    CHECK_THROWS_AS(GeneratorSpec::default_zeta_grid(GeneratorKind::normal),
                    domain_error);
}
