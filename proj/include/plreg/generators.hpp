#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace plreg {

enum class GeneratorKind {
    normal,
    student_t,
    logistic_I,
    logistic_II,
    power_exponential,
    slash,
    hyperbolic,
    sinh_normal,
};

bool generator_has_zeta(GeneratorKind kind);
const char* generator_name(GeneratorKind kind);
GeneratorKind generator_from_name(const std::string& name);

struct GeneratorConstants {
    double xi_r;       // Var(Z)
    double d_r;        // E[Z^2 v^2(Z)]
    double r_at_zero;  // r(0)
};

// A density generator r for the standard symmetric family S(0,1;r): the
// density of Z is f(z) = r(z^2). Instances are immutable; normalizing
// constants are precomputed at construction and all members are safe to call
// concurrently.
class GeneratorSpec {
public:
    static GeneratorSpec make(GeneratorKind kind,
                              std::optional<double> zeta = std::nullopt);

    GeneratorKind kind() const { return kind_; }
    bool has_zeta() const { return generator_has_zeta(kind_); }
    double zeta() const;

    double r_density(double u) const;  // r(u), u >= 0
    double log_r(double u) const;
    double log_r0() const { return log_r0_; }

    double v_weight(double z) const;         // v(z) = -2 r'(z^2)/r(z^2)
    double v_weight_prime(double z) const;    // dv/dz

    double density(double z) const;  // f_Z(z) = r(z^2)
    double cdf(double z) const;      // R(z)
    double quantile(double u) const;  // R^{-1}(u), u in (0,1)

    // Upper tail P(Z > z) for z >= 0, computed without cancellation.
    double tail_prob(double z) const;

    GeneratorConstants constants() const;

    // i.i.d. draws by inversion, deterministic in the seed.
    std::vector<double> sample(std::uint64_t seed, std::size_t n) const;

    static std::vector<double> default_zeta_grid(GeneratorKind kind);

    std::string label() const;  // e.g. "student_t(5)"

private:
    GeneratorSpec() = default;

    bool closed_form_cdf() const;
    double quantile_bracketed(double u, double lo, double hi) const;

    GeneratorKind kind_ = GeneratorKind::normal;
    double zeta_ = 0.0;
    double log_norm_ = 0.0;  // log multiplicative constant of r
    double aux_ = 0.0;       // PE: 1/(2 p^zeta); hyperbolic: K_1(zeta)
    double log_r0_ = 0.0;
};

}  // namespace plreg
