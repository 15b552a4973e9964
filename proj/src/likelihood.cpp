#include "plreg/likelihood.hpp"

#include <cmath>

#include "plreg/distribution.hpp"
#include "plreg/errors.hpp"

namespace plreg {

namespace {

void check_theta_shape(const Params& theta, const ModelSpec& model) {
    if (theta.beta.size() != model.p() || theta.tau.size() != model.q())
        throw domain_error("theta dimensions do not match the model");
    if (!(theta.lambda >= 0.0)) throw domain_error("lambda must be nonnegative");
}

}  // namespace

void check_response(const Eigen::VectorXd& y) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0 && y[i] < 1.0))
            throw domain_error(
                "response value at row " + std::to_string(i) +
                " lies on or outside the (0,1) boundary; boundary-inflated "
                "models are out of scope");
    }
}

ObsQuantities evaluate_obs(const Params& theta, const ModelSpec& model,
                           const Eigen::VectorXd& y) {
    check_theta_shape(theta, model);
    const int n = model.n();
    if (y.size() != n) throw domain_error("response length does not match X");
    const double lam = theta.lambda;

    ObsQuantities o;
    o.mu.resize(n); o.sigma.resize(n); o.z.resize(n);
    o.v.resize(n); o.vp.resize(n);
    o.t1.resize(n); o.t2.resize(n);
    o.d1dd.resize(n); o.d2dd.resize(n);
    o.mu_star.resize(n); o.tmu_d2.resize(n); o.y_star.resize(n);
    o.a_lam.resize(n); o.lambda_star.resize(n); o.loglik_i.resize(n);

    const Eigen::VectorXd eta1 = model.X * theta.beta;
    const Eigen::VectorXd eta2 = model.S * theta.tau;
    const GeneratorSpec& gen = model.generator;

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double mu = link_inverse(model.median_link, eta1[i]);
        if (!(mu > 0.0 && mu < 1.0) || !std::isfinite(mu))
            throw domain_error("fitted median outside (0,1)");
        const double sigma = dispersion_link_inverse(eta2[i]);
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw domain_error("fitted dispersion not positive");

        const double ty = transform_T(y[i], lam);
        const double tmu = transform_T(mu, lam);
        const double z = (ty - tmu) / sigma;
        if (!std::isfinite(z)) throw domain_error("nonfinite standardized transform");

        const double v = gen.v_weight(z);
        const double vp = gen.v_weight_prime(z);

        o.mu[i] = mu;
        o.sigma[i] = sigma;
        o.z[i] = z;
        o.v[i] = v;
        o.vp[i] = vp;
        o.t1[i] = 1.0 / link_d1(model.median_link, mu);
        o.t2[i] = sigma;  // 1/d2'(sigma) for the log link
        o.d1dd[i] = link_d2(model.median_link, mu);
        o.d2dd[i] = dispersion_link_d2(sigma);
        o.mu_star[i] = transform_T_d1(mu, lam) / sigma;
        o.tmu_d2[i] = transform_T_d2(mu, lam);
        o.y_star[i] = transform_T_d1(y[i], lam) / sigma;

        const double ly = std::log(y[i]);
        double base;
        if (lam == 0.0) {
            base = -std::log(sigma) - ly - std::log(-ly);
            o.a_lam[i] = 0.0;
            o.lambda_star[i] = 0.0;
        } else {
            const double ey = std::expm1(lam * ly);   // y^lam - 1
            const double lmu = std::log(mu);
            const double emu = std::expm1(lam * lmu);  // mu^lam - 1
            base = std::log(lam) - std::log(sigma) - ly - std::log(-ey);
            const double a = ly / (-ey) - lmu / (-emu);  // sigma * dz/dlambda
            o.a_lam[i] = a;
            o.lambda_star[i] = 1.0 / lam + (1.0 + ey) * ly / (-ey) -
                               z * v / sigma * a;
        }
        const double li = base + gen.log_r(z * z);
        if (!std::isfinite(li)) throw domain_error("nonfinite log density");
        o.loglik_i[i] = li;
        total += li;
    }
    o.loglik = total;
    return o;
}

double loglik(const Params& theta, const ModelSpec& model,
              const Eigen::VectorXd& y) {
    // cheaper single pass than evaluate_obs; used heavily by line searches
    check_theta_shape(theta, model);
    const int n = model.n();
    if (y.size() != n) throw domain_error("response length does not match X");
    const double lam = theta.lambda;
    const Eigen::VectorXd eta1 = model.X * theta.beta;
    const Eigen::VectorXd eta2 = model.S * theta.tau;
    const GeneratorSpec& gen = model.generator;

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double mu = link_inverse(model.median_link, eta1[i]);
        if (!(mu > 0.0 && mu < 1.0) || !std::isfinite(mu))
            throw domain_error("fitted median outside (0,1)");
        const double sigma = dispersion_link_inverse(eta2[i]);
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw domain_error("fitted dispersion not positive");
        const double z = (transform_T(y[i], lam) - transform_T(mu, lam)) / sigma;
        const double ly = std::log(y[i]);
        double base;
        if (lam == 0.0) {
            base = -std::log(sigma) - ly - std::log(-ly);
        } else {
            const double ey = std::expm1(lam * ly);
            base = std::log(lam) - std::log(sigma) - ly - std::log(-ey);
        }
        const double li = base + gen.log_r(z * z);
        if (!std::isfinite(li)) throw domain_error("nonfinite log density");
        total += li;
    }
    return total;
}

ScoreAndWeights score(const Params& theta, const ModelSpec& model,
                      const Eigen::VectorXd& y) {
    ScoreAndWeights s;
    s.obs = evaluate_obs(theta, model, y);
    const ObsQuantities& o = s.obs;
    const int n = model.n();
    const double lam = theta.lambda;

    s.w_diag.resize(n);
    s.w1.resize(n); s.w2.resize(n); s.w3.resize(n);
    s.w4.resize(n); s.w5.resize(n); s.w6.resize(n);

    Eigen::VectorXd beta_col(n), tau_col(n);
    for (int i = 0; i < n; ++i) {
        const double z = o.z[i], v = o.v[i], vp = o.vp[i];
        const double sig = o.sigma[i];
        const double ms = o.mu_star[i];
        const double zv = z * v;
        s.w_diag[i] = zv;
        beta_col[i] = zv * ms * o.t1[i];
        const double sigma_star = (z * z * v - 1.0) / sig;
        tau_col[i] = sigma_star * o.t2[i];

        const double vzvp = v + z * vp;
        // observed-information weights (negative second derivatives)
        s.w1[i] = (ms * ms * vzvp - zv * o.tmu_d2[i] / sig) * o.t1[i] +
                  ms * zv * o.d1dd[i] * o.t1[i] * o.t1[i];
        s.w2[i] = -(1.0 - z * z * (3.0 * v + z * vp)) / (sig * sig) * o.t2[i] +
                  sigma_star * o.d2dd[i] * o.t2[i] * o.t2[i];
        s.w4[i] = ms * z * (2.0 * v + z * vp) / sig;
        if (lam > 0.0) {
            const double ly = std::log(y[i]);
            const double lmu = std::log(o.mu[i]);
            const double ey = std::expm1(lam * ly);
            const double emu = std::expm1(lam * lmu);
            const double ry = (1.0 + ey) * ly * ly / (ey * ey);
            const double rmu = (1.0 + emu) * lmu * lmu / (emu * emu);
            const double a = o.a_lam[i];
            s.w3[i] = 1.0 / (lam * lam) - ry + vzvp * a * a / (sig * sig) +
                      zv / sig * (ry - rmu);
            const double bmu = 1.0 / lam + (1.0 + emu) * lmu / (-emu);
            s.w5[i] = -ms * (zv * bmu + a / sig * vzvp);
            s.w6[i] = -a / (sig * sig) * z * (2.0 * v + z * vp);
        } else {
            s.w3[i] = s.w5[i] = s.w6[i] = 0.0;
        }
    }
    s.u_beta = model.X.transpose() * beta_col;
    s.u_tau = model.S.transpose() * tau_col;
    s.u_lambda = (lam > 0.0) ? o.lambda_star.sum() : 0.0;
    return s;
}

Eigen::VectorXd ScoreAndWeights::packed(bool with_lambda) const {
    const Eigen::Index p = u_beta.size(), q = u_tau.size();
    Eigen::VectorXd u(p + q + (with_lambda ? 1 : 0));
    u.head(p) = u_beta;
    u.segment(p, q) = u_tau;
    if (with_lambda) u[p + q] = u_lambda;
    return u;
}

Eigen::MatrixXd observed_information(const Params& theta, const ModelSpec& model,
                                     const Eigen::VectorXd& y, bool with_lambda) {
    if (with_lambda && !(theta.lambda > 0.0))
        throw domain_error(
            "observed information in lambda is undefined at the log-log limit");
    const ScoreAndWeights s = score(theta, model, y);
    const ObsQuantities& o = s.obs;
    const int p = model.p(), q = model.q();
    const int dim = p + q + (with_lambda ? 1 : 0);
    Eigen::MatrixXd J(dim, dim);

    const Eigen::ArrayXd t1 = o.t1.array();
    const Eigen::ArrayXd t2 = o.t2.array();

    J.topLeftCorner(p, p) =
        model.X.transpose() * (s.w1.array() * t1).matrix().asDiagonal() * model.X;
    J.block(0, p, p, q) =
        model.X.transpose() *
        (s.w4.array() * t1 * t2).matrix().asDiagonal() * model.S;
    J.block(p, 0, q, p) = J.block(0, p, p, q).transpose();
    J.block(p, p, q, q) =
        model.S.transpose() * (s.w2.array() * t2).matrix().asDiagonal() * model.S;
    if (with_lambda) {
        J(p + q, p + q) = s.w3.sum();
        const Eigen::VectorXd jbl =
            model.X.transpose() * (s.w5.array() * t1).matrix();
        const Eigen::VectorXd jtl =
            model.S.transpose() * (s.w6.array() * t2).matrix();
        J.block(0, p + q, p, 1) = jbl;
        J.block(p + q, 0, 1, p) = jbl.transpose();
        J.block(p, p + q, q, 1) = jtl;
        J.block(p + q, p, 1, q) = jtl.transpose();
    }
    return J;
}

}  // namespace plreg
