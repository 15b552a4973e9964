#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "plreg/distribution.hpp"
#include "plreg/likelihood.hpp"
#include "plreg/model.hpp"
#include "plreg/rng.hpp"

namespace testutil {

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)});
}

// Kolmogorov-Smirnov distance between a sample and a cdf.
inline double ks_statistic(std::vector<double> x,
                           const std::function<double(double)>& cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max(d, std::abs(f - (i + 1) / n));
        d = std::max(d, std::abs(f - i / n));
    }
    return d;
}

// Central finite difference of a scalar function of a packed vector.
inline Eigen::VectorXd fd_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h_scale = 1e-6) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = h_scale * std::max(1.0, std::abs(x[i]));
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

inline Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h_scale = 1e-6) {
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd J(f0.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = h_scale * std::max(1.0, std::abs(x[i]));
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        J.col(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return J;
}

struct Instance {
    plreg::ModelSpec model;
    Eigen::VectorXd y;
    plreg::Params theta;  // the point at which derivatives are checked
};

// A small random regression instance: data drawn from the model at a
// plausible truth, derivatives checked at a nearby (non-stationary) point.
inline Instance random_instance(const plreg::GeneratorSpec& gen, int n,
                                std::uint64_t seed, double lambda = 1.2,
                                plreg::MedianLink link = plreg::MedianLink::logit) {
    plreg::Rng rng(seed);
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(n, 2);
    Eigen::MatrixXd S = Eigen::MatrixXd::Ones(n, 2);
    for (int i = 0; i < n; ++i) {
        X(i, 1) = rng.uniform01();
        S(i, 1) = rng.uniform01();
    }
    const Eigen::Vector2d beta(0.4, 0.8);
    const Eigen::Vector2d tau(-0.9, 0.4);
    const std::vector<double> z = gen.sample(plreg::mix_seed(seed, 7), n);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double mu = plreg::link_inverse(link, X.row(i).dot(beta));
        const double sig = std::exp(S.row(i).dot(tau));
        const double w = plreg::transform_T(mu, lambda) + sig * z[i];
        y[i] = plreg::transform_T_inverse(w, lambda);
    }
    plreg::ModelSpec model(X, S, link, gen, plreg::LambdaPolicy::free());
    plreg::Params theta;
    theta.beta = beta + Eigen::Vector2d(0.15, -0.1);
    theta.tau = tau + Eigen::Vector2d(0.1, -0.08);
    theta.lambda = lambda * 0.9;
    return {std::move(model), std::move(y), std::move(theta)};
}

inline Eigen::VectorXd pack_theta(const plreg::Params& th) {
    Eigen::VectorXd x(th.beta.size() + th.tau.size() + 1);
    x << th.beta, th.tau, th.lambda;
    return x;
}

inline plreg::Params unpack_theta(const Eigen::VectorXd& x, int p, int q) {
    plreg::Params th;
    th.beta = x.head(p);
    th.tau = x.segment(p, q);
    th.lambda = x[p + q];
    return th;
}

inline std::vector<plreg::GeneratorSpec> all_generators() {
    using plreg::GeneratorKind;
    using plreg::GeneratorSpec;
    return {
        GeneratorSpec::make(GeneratorKind::normal),
        GeneratorSpec::make(GeneratorKind::student_t, 5.0),
        GeneratorSpec::make(GeneratorKind::logistic_I),
        GeneratorSpec::make(GeneratorKind::logistic_II),
        GeneratorSpec::make(GeneratorKind::power_exponential, 1.5),
        GeneratorSpec::make(GeneratorKind::slash, 1.4),
        GeneratorSpec::make(GeneratorKind::hyperbolic, 1.2),
        GeneratorSpec::make(GeneratorKind::sinh_normal, 1.0),
    };
}

}  // namespace testutil
