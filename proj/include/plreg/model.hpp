#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "plreg/generators.hpp"
#include "plreg/links.hpp"

namespace plreg {

enum class Estimator { mle, pmle };

struct LambdaPolicy {
    enum class Kind { free, fixed, gjs, loglog };
    Kind kind = Kind::free;
    double value = 1.0;  // used by fixed

    static LambdaPolicy free() { return {Kind::free, 1.0}; }
    static LambdaPolicy fixed(double v) { return {Kind::fixed, v}; }
    static LambdaPolicy gjs() { return {Kind::gjs, 1.0}; }
    static LambdaPolicy loglog() { return {Kind::loglog, 0.0}; }

    bool is_free() const { return kind == Kind::free; }
    double fixed_value() const;
};

struct ZetaPolicy {
    enum class Kind { fixed, auto_grid };
    Kind kind = Kind::fixed;
    std::vector<double> grid;  // used by auto_grid; empty = generator default

    static ZetaPolicy fixed() { return {Kind::fixed, {}}; }
    static ZetaPolicy auto_grid(std::vector<double> g = {}) {
        return {Kind::auto_grid, std::move(g)};
    }
};

// Regression model layout: median submodel X beta under median_link, log
// dispersion submodel S tau, generator with fixed extra parameter, and the
// lambda treatment. Construction verifies ranks and p + q + 1 < n.
struct ModelSpec {
    Eigen::MatrixXd X;
    Eigen::MatrixXd S;
    MedianLink median_link = MedianLink::logit;
    GeneratorSpec generator = GeneratorSpec::make(GeneratorKind::normal);
    LambdaPolicy lambda = LambdaPolicy::free();
    Estimator estimator = Estimator::pmle;
    ZetaPolicy zeta = ZetaPolicy::fixed();

    ModelSpec() = default;
    ModelSpec(Eigen::MatrixXd X_, Eigen::MatrixXd S_, MedianLink link,
              GeneratorSpec gen, LambdaPolicy lambda_policy,
              Estimator est = Estimator::pmle,
              ZetaPolicy zeta_policy = ZetaPolicy::fixed());

    int n() const { return static_cast<int>(X.rows()); }
    int p() const { return static_cast<int>(X.cols()); }
    int q() const { return static_cast<int>(S.cols()); }

    ModelSpec with_generator(GeneratorSpec gen) const;
    ModelSpec with_lambda(LambdaPolicy pol) const;
};

// One point in parameter space.
struct Params {
    Eigen::VectorXd beta;
    Eigen::VectorXd tau;
    double lambda = 1.0;
};

}  // namespace plreg
