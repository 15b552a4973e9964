#pragma once

#include <Eigen/Dense>

#include "plreg/model.hpp"

namespace plreg {

// Per-observation quantities shared by the score, the Hessian, the
// diagnostics, and the leverage formulas, all evaluated at one theta.
struct ObsQuantities {
    Eigen::VectorXd mu, sigma;        // fitted medians and dispersions
    Eigen::VectorXd z;                // standardized transforms
    Eigen::VectorXd v, vp;            // v(z), v'(z)
    Eigen::VectorXd t1, t2;           // 1/d1'(mu), 1/d2'(sigma)
    Eigen::VectorXd d1dd, d2dd;       // d1''(mu), d2''(sigma)
    Eigen::VectorXd mu_star;          // T'(mu)/sigma
    Eigen::VectorXd tmu_d2;           // T''(mu)
    Eigen::VectorXd y_star;           // T'(y)/sigma
    Eigen::VectorXd a_lam;            // sigma * dz/dlambda (lambda > 0 only)
    Eigen::VectorXd lambda_star;      // per-observation dl/dlambda
    Eigen::VectorXd loglik_i;         // per-observation log density
    double loglik = 0.0;
};

double loglik(const Params& theta, const ModelSpec& model,
              const Eigen::VectorXd& y);

ObsQuantities evaluate_obs(const Params& theta, const ModelSpec& model,
                           const Eigen::VectorXd& y);

// Score vector and the diagonal weights of the observed information, in the
// blockwise layout U_beta =X' W T1 mu*, U_tau = S' T2 sigma*,
// U_lambda = 1' lambda*.
struct ScoreAndWeights {
    Eigen::VectorXd u_beta;
    Eigen::VectorXd u_tau;
    double u_lambda = 0.0;  // defined only when lambda > 0

    ObsQuantities obs;
    Eigen::VectorXd w_diag;               // z v(z)
    Eigen::VectorXd w1, w2, w3, w4, w5, w6;  // Hessian weights

    Eigen::VectorXd packed(bool with_lambda) const;
};

ScoreAndWeights score(const Params& theta, const ModelSpec& model,
                      const Eigen::VectorXd& y);

// Observed information J (the negative Hessian of the log-likelihood).
// with_lambda=true requires lambda > 0 and appends the lambda row/column.
Eigen::MatrixXd observed_information(const Params& theta, const ModelSpec& model,
                                     const Eigen::VectorXd& y, bool with_lambda);

// Checks every y_i lies strictly inside (0,1); throws domain_error otherwise.
void check_response(const Eigen::VectorXd& y);

}  // namespace plreg
