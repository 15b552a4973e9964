#include "plreg/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plreg/errors.hpp"
#include "plreg/inference.hpp"
#include "plreg/likelihood.hpp"
#include "plreg/optimize.hpp"

namespace plreg {

namespace {

constexpr double kLambdaMin = 1e-4;
constexpr double kLambdaMax = 50.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

Params unpack_bt(const Eigen::VectorXd& x, int p, int q, double lambda) {
    Params th;
    th.beta = x.head(p);
    th.tau = x.segment(p, q);
    th.lambda = lambda;
    return th;
}

struct InnerFit {
    Params theta;
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Maximize the log-likelihood over (beta, tau) at fixed lambda.
InnerFit fit_fixed_lambda(const ModelSpec& model, const Eigen::VectorXd& y,
                          double lambda, const Params& start,
                          double grad_tol = 1e-6) {
    const int p = model.p(), q = model.q();
    auto obj = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
        const Params th = unpack_bt(x, p, q, lambda);
        if (!grad) return -loglik(th, model, y);
        const ScoreAndWeights s = score(th, model, y);
        *grad = -s.packed(false);
        return -s.obs.loglik;
    };
    Eigen::VectorXd x0(p + q);
    x0 << start.beta, start.tau;
    BfgsOptions opts;
    opts.grad_tol = grad_tol;
    const BfgsResult r = minimize_bfgs(obj, x0, opts);
    InnerFit f;
    f.theta = unpack_bt(r.x, p, q, lambda);
    f.loglik = -r.f;
    f.converged = r.converged;
    f.iterations = r.iterations;
    return f;
}

// Joint maximization over (beta, tau, log lambda).
InnerFit fit_joint(const ModelSpec& model, const Eigen::VectorXd& y,
                   const Params& start) {
    const int p = model.p(), q = model.q();
    auto obj = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
        const double lambda = std::exp(x[p + q]);
        if (!(lambda >= kLambdaMin && lambda <= kLambdaMax))
            throw domain_error("lambda outside search domain");
        const Params th = unpack_bt(x, p, q, lambda);
        if (!grad) return -loglik(th, model, y);
        const ScoreAndWeights s = score(th, model, y);
        grad->resize(p + q + 1);
        grad->head(p + q) = -s.packed(false);
        (*grad)[p + q] = -s.u_lambda * lambda;  // chain rule for log lambda
        return -s.obs.loglik;
    };
    Eigen::VectorXd x0(p + q + 1);
    x0 << start.beta, start.tau,
        std::log(std::clamp(start.lambda, kLambdaMin, kLambdaMax));
    BfgsOptions opts;
    const BfgsResult r = minimize_bfgs(obj, x0, opts);
    InnerFit f;
    f.theta = unpack_bt(r.x, p, q, std::exp(r.x[p + q]));
    f.loglik = -r.f;
    f.converged = r.converged;
    f.iterations = r.iterations;
    return f;
}

struct ProfilePoint {
    double lambda = 0.0;
    double loglik = -kInf;     // profile log-likelihood l*(lambda)
    double penalized = -kInf;  // l*_p(lambda)
    double j_ll = 0.0;         // lambda-lambda observed information
    bool converged = false;
    Params theta;
};

ProfilePoint profile_point(const ModelSpec& model, const Eigen::VectorXd& y,
                           double lambda, const Params& start) {
    ProfilePoint pt;
    pt.lambda = lambda;
    try {
        InnerFit f = fit_fixed_lambda(model, y, lambda, start);
        pt.theta = f.theta;
        pt.loglik = f.loglik;
        pt.converged = f.converged;
        const ScoreAndWeights s = score(f.theta, model, y);
        pt.j_ll = s.w3.sum();
        pt.penalized = (pt.j_ll > 0.0)
                           ? pt.loglik + 0.5 * std::log(pt.j_ll / model.n())
                           : -kInf;
    } catch (const domain_error&) {
        pt.loglik = pt.penalized = -kInf;
        pt.converged = false;
    }
    return pt;
}

struct ProfileSweep {
    std::vector<ProfilePoint> points;
    int rejected = 0;  // points with nonpositive lambda information
};

// Warm-started sweep of the profile over the lambda grid.
ProfileSweep sweep_profile(const ModelSpec& model, const Eigen::VectorXd& y,
                           const Params& init) {
    ProfileSweep sw;
    Params start = init;
    for (double lam : lambda_profile_grid()) {
        ProfilePoint pt = profile_point(model, y, lam, start);
        if (std::isfinite(pt.loglik)) start = pt.theta;  // warm start next point
        if (std::isfinite(pt.loglik) && !(pt.j_ll > 0.0)) ++sw.rejected;
        sw.points.push_back(std::move(pt));
    }
    return sw;
}

// Golden-section refinement of a profile objective on [lo, hi] in log lambda.
double golden_refine(const ModelSpec& model, const Eigen::VectorXd& y,
                     const Params& warm, double lo, double hi, bool penalized) {
    auto value = [&](double lam) {
        const ProfilePoint pt = profile_point(model, y, lam, warm);
        return penalized ? pt.penalized : pt.loglik;
    };
    const double gr = 0.6180339887498949;
    double a = std::log(lo), b = std::log(hi);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = value(std::exp(x1)), f2 = value(std::exp(x2));
    for (int it = 0; it < 60 && (b - a) > 1e-6; ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = value(std::exp(x2));
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = value(std::exp(x1));
        }
    }
    return std::exp(0.5 * (a + b));
}

// Fit statistics shared by every estimator path.
void finalize(FitResult& fit, const ModelSpec& model, const Eigen::VectorXd& y) {
    Params th{fit.beta, fit.tau, fit.lambda};
    const bool with_lambda = model.lambda.is_free();
    fit.observed_info = observed_information(th, model, y, with_lambda);
    const int dim = static_cast<int>(fit.observed_info.rows());
    fit.std_errors = Eigen::VectorXd::Constant(
        dim, std::numeric_limits<double>::quiet_NaN());
    Eigen::LDLT<Eigen::MatrixXd> ldlt(fit.observed_info);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const Eigen::MatrixXd inv =
            ldlt.solve(Eigen::MatrixXd::Identity(dim, dim));
        bool ok = true;
        for (int i = 0; i < dim; ++i)
            if (!(inv(i, i) > 0.0)) ok = false;
        if (ok) {
            fit.std_errors = inv.diagonal().array().sqrt();
            fit.se_valid = true;
        }
    }

    const ObsQuantities o = evaluate_obs(th, model, y);
    fit.loglik = o.loglik;
    const int k = fit.n_free_params();
    fit.fit_stats.aic = -2.0 * fit.loglik + 2.0 * k;

    // pseudo R^2: squared correlation between d1(mu_hat) and d1(y)
    Eigen::VectorXd dmu(model.n()), dy(model.n());
    for (int i = 0; i < model.n(); ++i) {
        dmu[i] = link_apply(model.median_link, o.mu[i]);
        dy[i] = link_apply(model.median_link, y[i]);
    }
    const double mx = dmu.mean(), my = dy.mean();
    const double sxy = ((dmu.array() - mx) * (dy.array() - my)).sum();
    const double sxx = (dmu.array() - mx).square().sum();
    const double syy = (dy.array() - my).square().sum();
    fit.fit_stats.pseudo_r2 =
        (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;

    fit.fit_stats.upsilon = upsilon_statistic(o.z, model.generator);
    if (model.generator.has_zeta()) fit.zeta = model.generator.zeta();
}

FitResult make_result(const ModelSpec& model, const Eigen::VectorXd& y,
                      const InnerFit& inner, int rejected) {
    FitResult fit;
    fit.model = model;
    fit.beta = inner.theta.beta;
    fit.tau = inner.theta.tau;
    fit.lambda = inner.theta.lambda;
    fit.converged = inner.converged;
    fit.iterations = inner.iterations;
    fit.profile_rejected_lambdas = rejected;
    finalize(fit, model, y);
    return fit;
}

}  // namespace

double LambdaPolicy::fixed_value() const {
    switch (kind) {
        case Kind::free: throw domain_error("lambda policy is free");
        case Kind::fixed: return value;
        case Kind::gjs: return 1.0;
        case Kind::loglog: return 0.0;
    }
    return 1.0;
}

ModelSpec::ModelSpec(Eigen::MatrixXd X_, Eigen::MatrixXd S_, MedianLink link,
                     GeneratorSpec gen, LambdaPolicy lambda_policy,
                     Estimator est, ZetaPolicy zeta_policy)
    : X(std::move(X_)),
      S(std::move(S_)),
      median_link(link),
      generator(std::move(gen)),
      lambda(lambda_policy),
      estimator(est),
      zeta(std::move(zeta_policy)) {
    if (X.rows() != S.rows())
        throw domain_error("X and S must have the same number of rows");
    const int nn = n(), pp = p(), qq = q();
    if (pp + qq + 1 >= nn)
        throw domain_error("model requires p + q + 1 < n");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qrx(X);
    if (qrx.rank() < pp) throw domain_error("X is rank deficient");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qrs(S);
    if (qrs.rank() < qq) throw domain_error("S is rank deficient");
    if (lambda.kind == LambdaPolicy::Kind::fixed && !(lambda.value >= 0.0))
        throw domain_error("fixed lambda must be nonnegative");
}

ModelSpec ModelSpec::with_generator(GeneratorSpec gen) const {
    ModelSpec m = *this;
    m.generator = std::move(gen);
    return m;
}

ModelSpec ModelSpec::with_lambda(LambdaPolicy pol) const {
    ModelSpec m = *this;
    m.lambda = pol;
    return m;
}

int FitResult::n_free_params() const {
    return model.p() + model.q() + (lambda_free() ? 1 : 0);
}

Eigen::VectorXd FitResult::estimates() const {
    Eigen::VectorXd e(n_free_params());
    e.head(model.p()) = beta;
    e.segment(model.p(), model.q()) = tau;
    if (lambda_free()) e[model.p() + model.q()] = lambda;
    return e;
}

std::vector<std::string> FitResult::param_names() const {
    std::vector<std::string> names;
    for (int j = 0; j < model.p(); ++j) names.push_back("beta" + std::to_string(j + 1));
    for (int j = 0; j < model.q(); ++j) names.push_back("tau" + std::to_string(j + 1));
    if (lambda_free()) names.push_back("lambda");
    return names;
}

Eigen::VectorXd FitResult::fitted_mu(const void*) const {
    const Eigen::VectorXd eta = model.X * beta;
    Eigen::VectorXd mu(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        mu[i] = link_inverse(model.median_link, eta[i]);
    return mu;
}

Eigen::VectorXd FitResult::fitted_sigma() const {
    const Eigen::VectorXd eta = model.S * tau;
    return eta.array().exp();
}

Params initial_values(const ModelSpec& model, const Eigen::VectorXd& y) {
    check_response(y);
    const int n = model.n();
    Eigen::VectorXd upsilon(n), logit_y(n);
    for (int i = 0; i < n; ++i) {
        upsilon[i] = link_apply(model.median_link, y[i]);
        logit_y[i] = std::log(y[i] / (1.0 - y[i]));
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(model.X);
    if (qr.rank() < model.p()) throw domain_error("X'X is singular");
    Params th;
    th.beta = qr.solve(upsilon);
    const double mean = logit_y.mean();
    const double sd = std::sqrt((logit_y.array() - mean).square().sum() /
                                std::max(1, n - 1));
    th.tau = Eigen::VectorXd::Zero(model.q());
    th.tau[0] = std::log(std::max(sd, 1e-6));
    th.lambda = 1.0;
    return th;
}

std::vector<double> lambda_profile_grid() {
    // 40 log-spaced points on (0, 50]
    std::vector<double> g(40);
    const double lo = std::log(1e-3), hi = std::log(kLambdaMax);
    for (int i = 0; i < 40; ++i)
        g[i] = std::exp(lo + (hi - lo) * i / 39.0);
    return g;
}

double penalized_profile_loglik(double lambda, const ModelSpec& model,
                                const Eigen::VectorXd& y) {
    if (!(lambda > 0.0))
        throw domain_error("penalized profile requires lambda > 0");
    check_response(y);
    const Params init = initial_values(model, y);
    return profile_point(model, y, lambda, init).penalized;
}

FitResult fit_mle(const ModelSpec& model, const Eigen::VectorXd& y,
                  const std::optional<Params>& init) {
    check_response(y);
    const Params start = init ? *init : initial_values(model, y);

    if (!model.lambda.is_free()) {
        const double lam = model.lambda.fixed_value();
        InnerFit inner = fit_fixed_lambda(model, y, lam, start);
        FitResult fit = make_result(model, y, inner, 0);
        if (!inner.converged)
            throw convergence_error("fit_mle did not converge", fit);
        return fit;
    }

    // Joint quasi-Newton ascent, guarded by an unpenalized profile sweep:
    // the lambda direction can be nearly flat and the sweep gives a reliable
    // global picture of l*(lambda).
    InnerFit joint = fit_joint(model, y, start);

    const ProfileSweep sw = sweep_profile(model, y, start);
    int best = -1;
    for (std::size_t j = 0; j < sw.points.size(); ++j)
        if (best < 0 || sw.points[j].loglik > sw.points[best].loglik)
            best = static_cast<int>(j);
    InnerFit prof;
    prof.loglik = -kInf;
    if (best >= 0 && std::isfinite(sw.points[best].loglik)) {
        const auto& grid = sw.points;
        const double lo = (best > 0) ? grid[best - 1].lambda : kLambdaMin;
        const double hi = (best + 1 < static_cast<int>(grid.size()))
                              ? grid[best + 1].lambda
                              : kLambdaMax;
        const double lam_star = golden_refine(model, y, grid[best].theta, lo,
                                              hi, /*penalized=*/false);
        Params warm = grid[best].theta;
        warm.lambda = lam_star;
        prof = fit_joint(model, y, warm);
    }

    const InnerFit& winner = (prof.loglik > joint.loglik) ? prof : joint;
    FitResult fit = make_result(model, y, winner, sw.rejected);
    if (!winner.converged)
        throw convergence_error("fit_mle did not converge", fit);
    return fit;
}

FitResult fit_pmle(const ModelSpec& model, const Eigen::VectorXd& y) {
    check_response(y);
    if (!model.lambda.is_free()) return fit_mle(model, y);

    const Params init = initial_values(model, y);
    const ProfileSweep sw = sweep_profile(model, y, init);
    int best = -1;
    for (std::size_t j = 0; j < sw.points.size(); ++j)
        if (best < 0 || sw.points[j].penalized > sw.points[best].penalized)
            best = static_cast<int>(j);
    if (best < 0 || !std::isfinite(sw.points[best].penalized)) {
        FitResult fit;
        fit.model = model;
        throw convergence_error(
            "penalized profile is undefined on the whole lambda grid", fit);
    }
    const auto& grid = sw.points;
    const double lo = (best > 0) ? grid[best - 1].lambda : kLambdaMin;
    const double hi = (best + 1 < static_cast<int>(grid.size()))
                          ? grid[best + 1].lambda
                          : kLambdaMax;
    const double lam_tilde =
        golden_refine(model, y, grid[best].theta, lo, hi, /*penalized=*/true);

    // step (ii): maximize the log-likelihood at the selected lambda
    InnerFit inner = fit_fixed_lambda(model, y, lam_tilde, grid[best].theta);
    FitResult fit = make_result(model, y, inner, sw.rejected);
    if (!inner.converged)
        throw convergence_error("fit_pmle did not converge", fit);
    return fit;
}

FitResult fit_model(const ModelSpec& model, const Eigen::VectorXd& y) {
    return model.estimator == Estimator::pmle ? fit_pmle(model, y)
                                              : fit_mle(model, y);
}

}  // namespace plreg
