#include "plreg/optimize.hpp"

#include <cmath>
#include <limits>

#include "plreg/errors.hpp"

namespace plreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& obj, const Eigen::VectorXd& x,
                 Eigen::VectorXd* grad) {
    try {
        const double f = obj(x, grad);
        if (!std::isfinite(f)) return kInf;
        if (grad && !grad->allFinite()) return kInf;
        return f;
    } catch (const domain_error&) {
        return kInf;
    }
}

}  // namespace

BfgsResult minimize_bfgs(const Objective& obj, const Eigen::VectorXd& x0,
                         const BfgsOptions& opts) {
    const Eigen::Index n = x0.size();
    BfgsResult res;
    res.x = x0;
    res.grad.resize(n);

    double f = safe_eval(obj, res.x, &res.grad);
    if (!std::isfinite(f))
        throw domain_error("minimize_bfgs: infeasible starting point");
    res.f = f;

    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    H *= 1.0 / std::max(1.0, res.grad.lpNorm<Eigen::Infinity>());
    bool fresh_hessian = true;

    for (int it = 0; it < opts.max_iter; ++it) {
        res.iterations = it;
        if (res.grad.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
            res.converged = true;
            return res;
        }
        Eigen::VectorXd d = -(H * res.grad);
        double slope = res.grad.dot(d);
        if (slope >= 0.0) {  // not a descent direction; restart from gradient
            H = Eigen::MatrixXd::Identity(n, n) /
                std::max(1.0, res.grad.lpNorm<Eigen::Infinity>());
            fresh_hessian = true;
            d = -(H * res.grad);
            slope = res.grad.dot(d);
        }

        // Armijo backtracking
        double step = 1.0;
        double f_new = kInf;
        Eigen::VectorXd x_new;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = res.x + step * d;
            f_new = safe_eval(obj, x_new, nullptr);
            if (f_new <= res.f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!fresh_hessian) {
                // retry once along the raw gradient before giving up
                H = Eigen::MatrixXd::Identity(n, n) /
                    std::max(1.0, res.grad.lpNorm<Eigen::Infinity>());
                fresh_hessian = true;
                continue;
            }
            // line search exhausted at numerical resolution
            res.converged = res.grad.lpNorm<Eigen::Infinity>() <
                            std::max(1e-5, 10.0 * opts.grad_tol);
            return res;
        }

        Eigen::VectorXd grad_new(n);
        const double f_chk = safe_eval(obj, x_new, &grad_new);
        if (!std::isfinite(f_chk)) {
            res.converged = false;
            return res;
        }

        const Eigen::VectorXd s = x_new - res.x;
        const Eigen::VectorXd yv = grad_new - res.grad;
        const double rel_drop = (res.f - f_new) / std::max(1.0, std::abs(res.f));

        res.x = x_new;
        res.f = f_new;
        res.grad = grad_new;

        const double sy = s.dot(yv);
        if (sy > 1e-12 * s.norm() * yv.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            H = (I - rho * s * yv.transpose()) * H *
                    (I - rho * yv * s.transpose()) +
                rho * s * s.transpose();
            fresh_hessian = false;
        }

        if (rel_drop < opts.f_reltol &&
            res.grad.lpNorm<Eigen::Infinity>() < std::sqrt(opts.grad_tol)) {
            res.converged = true;
            return res;
        }
    }
    res.converged = res.grad.lpNorm<Eigen::Infinity>() < opts.grad_tol;
    return res;
}

}  // namespace plreg
