#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "plreg/model.hpp"

namespace plreg {

struct FitStats {
    double aic = 0.0;
    double pseudo_r2 = 0.0;
    double upsilon = 0.0;
};

struct FitResult {
    Eigen::VectorXd beta;
    Eigen::VectorXd tau;
    double lambda = 1.0;
    std::optional<double> zeta;

    double loglik = 0.0;
    // Observed information over the free parameters: (p+q+1)^2 when lambda
    // is free, (p+q)^2 when it is held fixed.
    Eigen::MatrixXd observed_info;
    Eigen::VectorXd std_errors;  // NaN entries when the information is singular
    bool se_valid = false;

    bool converged = false;
    int iterations = 0;
    FitStats fit_stats;
    int profile_rejected_lambdas = 0;  // grid points with J*_ll <= 0

    ModelSpec model;  // the specification this fit answers to

    bool lambda_free() const { return model.lambda.is_free(); }
    int n_free_params() const;
    Eigen::VectorXd estimates() const;  // [beta; tau; lambda?] over free params
    std::vector<std::string> param_names() const;
    Eigen::VectorXd fitted_mu(const void* = nullptr) const;  // medians at X
    Eigen::VectorXd fitted_sigma() const;
};

// Thrown when the optimizer exhausts its iterations; carries the best iterate.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, FitResult best)
        : std::runtime_error(what), best_iterate(std::move(best)) {}
    FitResult best_iterate;
};

// OLS-based starting point: beta from d1(y) on X, tau = (log sd logit y, 0...),
// lambda = 1.
Params initial_values(const ModelSpec& model, const Eigen::VectorXd& y);

// Profile machinery. The lambda search domain is (0, 50] on a log scale.
std::vector<double> lambda_profile_grid();

// l*_p(lambda) = l(beta_l, tau_l, lambda) + 0.5 log(J*_ll / n); -inf when the
// lambda information at the constrained optimum is not positive.
double penalized_profile_loglik(double lambda, const ModelSpec& model,
                                const Eigen::VectorXd& y);

FitResult fit_mle(const ModelSpec& model, const Eigen::VectorXd& y,
                  const std::optional<Params>& init = std::nullopt);
FitResult fit_pmle(const ModelSpec& model, const Eigen::VectorXd& y);

// Dispatch on model.estimator.
FitResult fit_model(const ModelSpec& model, const Eigen::VectorXd& y);

}  // namespace plreg
