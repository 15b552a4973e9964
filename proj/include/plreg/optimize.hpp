#pragma once

#include <Eigen/Dense>
#include <functional>

namespace plreg {

struct BfgsOptions {
    int max_iter = 300;
    double grad_tol = 1e-6;    // stop when max|grad| falls below this
    double f_reltol = 1e-10;   // ... or the relative decrease does
};

struct BfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    Eigen::VectorXd grad;
    int iterations = 0;
    bool converged = false;
};

// Objective evaluated at x; when grad != nullptr it must also be filled.
// Implementations signal an infeasible x by throwing or returning a
// non-finite value; the line search treats both as rejection.
using Objective =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

// Quasi-Newton (BFGS) minimization with Armijo backtracking.
BfgsResult minimize_bfgs(const Objective& obj, const Eigen::VectorXd& x0,
                         const BfgsOptions& opts = {});

}  // namespace plreg
