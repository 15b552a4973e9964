#include "plreg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plreg/distribution.hpp"
#include "plreg/errors.hpp"
#include "plreg/likelihood.hpp"
#include "plreg/numeric.hpp"
#include "plreg/parallel.hpp"
#include "plreg/rng.hpp"

namespace plreg {

namespace {

constexpr double kQuantileClamp = 8.2;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Params fit_params(const FitResult& fit) {
    return Params{fit.beta, fit.tau, fit.lambda};
}

// Column j of X must be continuous for covariate perturbation.
void check_continuous(const Eigen::MatrixXd& M, int col, const char* which) {
    if (col < 0 || col >= M.cols())
        throw usage_error(std::string(which) + " column index out of range");
    std::vector<double> vals(M.col(col).data(), M.col(col).data() + M.rows());
    std::sort(vals.begin(), vals.end());
    const auto last = std::unique(vals.begin(), vals.end());
    if (std::distance(vals.begin(), last) <= 2)
        throw usage_error(std::string(which) + " column " + std::to_string(col) +
                          " is not continuous (at most two distinct values)");
}

double sample_sd(const Eigen::VectorXd& x) {
    const double m = x.mean();
    return std::sqrt((x.array() - m).square().sum() /
                     std::max<Eigen::Index>(1, x.size() - 1));
}

// Restricted observed information over (beta, tau) with lambda held at its
// estimate, as the influence analysis requires.
Eigen::MatrixXd restricted_info(const FitResult& fit, const Eigen::VectorXd& y) {
    return observed_information(fit_params(fit), fit.model, y,
                                /*with_lambda=*/false);
}

}  // namespace

const char* PerturbationScheme::name() const {
    switch (kind) {
        case Kind::case_weights: return "case_weights";
        case Kind::median_covariate: return "median_covariate";
        case Kind::dispersion_covariate: return "dispersion_covariate";
        case Kind::simultaneous: return "simultaneous";
    }
    return "?";
}

ResidualVector quantile_residual(const FitResult& fit, const Eigen::VectorXd& y) {
    const ObsQuantities o = evaluate_obs(fit_params(fit), fit.model, y);
    const int n = fit.model.n();
    ResidualVector r;
    r.value.resize(n);
    r.clamped.assign(n, false);
    for (int i = 0; i < n; ++i) {
        const double u = fit.model.generator.cdf(o.z[i]);
        if (u <= 0.0 || u >= 1.0) {
            r.value[i] = (u >= 1.0) ? kQuantileClamp : -kQuantileClamp;
            r.clamped[i] = true;
            continue;
        }
        double q = norm_quantile(u);
        if (std::abs(q) > kQuantileClamp) {
            q = std::copysign(kQuantileClamp, q);
            r.clamped[i] = true;
        }
        r.value[i] = q;
    }
    return r;
}

ResidualVector deviance_residual(const FitResult& fit, const Eigen::VectorXd& y) {
    const ObsQuantities o = evaluate_obs(fit_params(fit), fit.model, y);
    const GeneratorSpec& gen = fit.model.generator;
    const int n = fit.model.n();
    ResidualVector r;
    r.value.resize(n);
    r.clamped.assign(n, false);
    const double lr0 = gen.log_r0();
    for (int i = 0; i < n; ++i) {
        const double z = o.z[i];
        double gap = lr0 - gen.log_r(z * z);
        if (gap < 0.0) {  // numerical wobble just below r(0)
            gap = 0.0;
            r.clamped[i] = true;
        }
        r.value[i] = std::copysign(std::sqrt(2.0 * gap), z);
    }
    return r;
}

StandardizedResidual standardized_residual(const FitResult& fit,
                                           const Eigen::VectorXd& y) {
    const ModelSpec& model = fit.model;
    const ObsQuantities o = evaluate_obs(fit_params(fit), model, y);
    const GeneratorConstants gc = model.generator.constants();
    const int n = model.n(), p = model.p();

    // D = sigma mu* T1 X, row i scaled by T'(mu_i)
    Eigen::MatrixXd D(n, p);
    for (int i = 0; i < n; ++i)
        D.row(i) = (o.sigma[i] * o.mu_star[i] * o.t1[i]) * model.X.row(i);

    // H = Sigma^{-1/2} D (D' Sigma^{-1} D)^{-1} D' Sigma^{-1/2}; for constant
    // dispersion the sigma factors cancel and this is the plain projection.
    Eigen::MatrixXd Dw(n, p);
    for (int i = 0; i < n; ++i) Dw.row(i) = D.row(i) / o.sigma[i];
    const Eigen::MatrixXd M = Dw.transpose() * Dw;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    if (ldlt.info() != Eigen::Success)
        throw numerical_error("standardized_residual: D'D is singular");

    StandardizedResidual out;
    out.value.resize(n);
    out.hat_diag.resize(n);
    out.undefined.assign(n, false);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd di = Dw.row(i).transpose();
        out.hat_diag[i] = di.dot(ldlt.solve(di));
    }
    const double lam = fit.lambda;
    for (int i = 0; i < n; ++i) {
        const double ydag = transform_T(y[i], lam);
        const double mdag = transform_T(o.mu[i], lam);
        const double scale = 1.0 - out.hat_diag[i] / (gc.d_r * gc.xi_r);
        if (!(scale > 0.0)) {
            out.value[i] = kNaN;
            out.undefined[i] = true;
            continue;
        }
        out.value[i] = (ydag - mdag) / (o.sigma[i] * std::sqrt(gc.xi_r * scale));
    }
    return out;
}

Eigen::MatrixXd influence_delta(const FitResult& fit, const Eigen::VectorXd& y,
                                const PerturbationScheme& scheme) {
    const ModelSpec& model = fit.model;
    const ScoreAndWeights s = score(fit_params(fit), model, y);
    const ObsQuantities& o = s.obs;
    const int n = model.n(), p = model.p(), q = model.q();
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(p + q, n);

    const Eigen::ArrayXd zv = s.w_diag.array();
    const Eigen::ArrayXd t1 = o.t1.array();
    const Eigen::ArrayXd t2 = o.t2.array();
    const Eigen::ArrayXd mu_star = o.mu_star.array();
    const Eigen::ArrayXd sigma_star =
        ((o.z.array().square() * o.v.array()) - 1.0) / o.sigma.array();

    switch (scheme.kind) {
        case PerturbationScheme::Kind::case_weights: {
            // Delta_beta = X' W T1 D_beta, Delta_tau = S' T2 D_tau
            const Eigen::ArrayXd cb = zv * t1 * mu_star;
            const Eigen::ArrayXd ct = t2 * sigma_star;
            for (int i = 0; i < n; ++i) {
                delta.block(0, i, p, 1) = (cb[i] * model.X.row(i)).transpose();
                delta.block(p, i, q, 1) = (ct[i] * model.S.row(i)).transpose();
            }
            break;
        }
        case PerturbationScheme::Kind::median_covariate:
        case PerturbationScheme::Kind::dispersion_covariate:
        case PerturbationScheme::Kind::simultaneous: {
            const bool do_x = scheme.kind != PerturbationScheme::Kind::dispersion_covariate;
            const bool do_s = scheme.kind != PerturbationScheme::Kind::median_covariate;
            if (do_x) check_continuous(model.X, scheme.median_col, "median");
            if (do_s) check_continuous(model.S, scheme.dispersion_col, "dispersion");

            if (do_x) {
                const int j = scheme.median_col;
                const double sx = sample_sd(model.X.col(j));
                const double bj = fit.beta[j];
                const Eigen::ArrayXd w1t1 = s.w1.array() * t1;
                const Eigen::ArrayXd w4t1t2 = s.w4.array() * t1 * t2;
                for (int i = 0; i < n; ++i) {
                    delta.block(0, i, p, 1) +=
                        (-sx * bj * w1t1[i]) * model.X.row(i).transpose();
                    delta.block(p, i, q, 1) +=
                        (-sx * bj * w4t1t2[i]) * model.S.row(i).transpose();
                }
                // direct term: the perturbed column multiplies beta_j
                const Eigen::ArrayXd c = mu_star * zv * t1;
                for (int i = 0; i < n; ++i) delta(j, i) += sx * c[i];
            }
            if (do_s) {
                const int k = scheme.dispersion_col;
                const double ss = sample_sd(model.S.col(k));
                const double tk = fit.tau[k];
                const Eigen::ArrayXd w4t1t2 = s.w4.array() * t1 * t2;
                const Eigen::ArrayXd w2t2 = s.w2.array() * t2;
                for (int i = 0; i < n; ++i) {
                    delta.block(0, i, p, 1) +=
                        (-ss * tk * w4t1t2[i]) * model.X.row(i).transpose();
                    delta.block(p, i, q, 1) +=
                        (-ss * tk * w2t2[i]) * model.S.row(i).transpose();
                }
                const Eigen::ArrayXd c = sigma_star * t2;
                for (int i = 0; i < n; ++i) delta(p + k, i) += ss * c[i];
            }
            break;
        }
    }
    return delta;
}

InfluenceResult local_influence(const FitResult& fit, const Eigen::VectorXd& y,
                                const PerturbationScheme& scheme) {
    const Eigen::MatrixXd delta = influence_delta(fit, y, scheme);
    const Eigen::MatrixXd J = restricted_info(fit, y);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible())
        throw numerical_error("local_influence: restricted information is singular");
    const Eigen::MatrixXd JinvD = lu.solve(delta);
    Eigen::MatrixXd B = delta.transpose() * JinvD;  // = Delta' J^{-1} Delta
    B = 0.5 * (B + B.transpose());

    InfluenceResult out;
    const int n = static_cast<int>(y.size());
    out.c_i.resize(n);
    for (int i = 0; i < n; ++i) out.c_i[i] = 2.0 * std::abs(B(i, i));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B);
    if (eig.info() != Eigen::Success)
        throw numerical_error("local_influence: eigen decomposition failed");
    const Eigen::VectorXd evals = eig.eigenvalues();
    const int last = n - 1;
    const int pick = (std::abs(evals[0]) > std::abs(evals[last])) ? 0 : last;
    Eigen::VectorXd h = eig.eigenvectors().col(pick);
    h.normalize();
    for (int i = 0; i < n; ++i) {
        if (std::abs(h[i]) > 1e-12) {
            if (h[i] < 0.0) h = -h;
            break;
        }
    }
    out.hmax = h;
    return out;
}

Eigen::MatrixXd generalized_leverage_matrix(const FitResult& fit,
                                            const Eigen::VectorXd& y) {
    const ModelSpec& model = fit.model;
    const ScoreAndWeights s = score(fit_params(fit), model, y);
    const ObsQuantities& o = s.obs;
    const int n = model.n(), p = model.p(), q = model.q();
    const bool with_lambda = model.lambda.is_free() && fit.lambda > 0.0;
    const int dim = p + q + (with_lambda ? 1 : 0);

    // Ldot = d mu / d theta = [T1 X, 0, 0]
    Eigen::MatrixXd ldot = Eigen::MatrixXd::Zero(n, dim);
    for (int i = 0; i < n; ++i) ldot.row(i).head(p) = o.t1[i] * model.X.row(i);

    // Lddot = d^2 l / d theta d y'
    Eigen::MatrixXd lddot = Eigen::MatrixXd::Zero(dim, n);
    const double lam = fit.lambda;
    for (int i = 0; i < n; ++i) {
        const double z = o.z[i], v = o.v[i], vp = o.vp[i];
        const double wb = v + z * vp;
        const double wt = z * (2.0 * v + z * vp) / o.sigma[i];
        lddot.block(0, i, p, 1) =
            (o.t1[i] * o.mu_star[i] * o.y_star[i] * wb) *
            model.X.row(i).transpose();
        lddot.block(p, i, q, 1) =
            (o.t2[i] * o.y_star[i] * wt) * model.S.row(i).transpose();
        if (with_lambda) {
            const double ly = std::log(y[i]);
            const double ey = std::expm1(lam * ly);  // y^lam - 1
            const double ylam = 1.0 + ey;
            const double sig = o.sigma[i];
            const double wl =
                sig * ylam * (1.0 + lam * ly - ylam) / (lam * (-ey)) -
                o.a_lam[i] / sig * wb -
                z * v * (ylam * (lam * ly - 1.0) + 1.0) / (lam * (-ey));
            lddot(p + q, i) = o.y_star[i] * wl;
        }
    }

    const Eigen::MatrixXd J =
        observed_information(fit_params(fit), model, y, with_lambda);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible())
        throw numerical_error("generalized_leverage: information matrix is singular");
    return ldot * lu.solve(lddot);
}

Eigen::VectorXd generalized_leverage(const FitResult& fit,
                                     const Eigen::VectorXd& y) {
    return generalized_leverage_matrix(fit, y).diagonal();
}

namespace {

Eigen::VectorXd residual_of_kind(const FitResult& fit, const Eigen::VectorXd& y,
                                 ResidualKind kind) {
    switch (kind) {
        case ResidualKind::quantile: return quantile_residual(fit, y).value;
        case ResidualKind::deviance: return deviance_residual(fit, y).value;
        case ResidualKind::standardized:
            return standardized_residual(fit, y).value;
    }
    return {};
}

}  // namespace

EnvelopeBand simulated_envelope(const FitResult& fit, const Eigen::VectorXd& y,
                                ResidualKind kind, int n_sim, std::uint64_t seed,
                                bool parallel) {
    (void)y;  // bands depend on the data only through the fit
    if (n_sim < 2) throw domain_error("simulated_envelope: n_sim must be >= 2");
    const ModelSpec& model = fit.model;
    const int n = model.n();
    const Eigen::VectorXd mu = fit.fitted_mu();
    const Eigen::VectorXd sigma = fit.fitted_sigma();

    std::vector<std::optional<Eigen::VectorXd>> rows(n_sim);
    const Params warm{fit.beta, fit.tau, fit.lambda};
    parallel_for(n_sim, [&](std::ptrdiff_t b) {
        try {
            const std::vector<double> z =
                model.generator.sample(mix_seed(seed, b), n);
            Eigen::VectorXd yb(n);
            for (int i = 0; i < n; ++i) {
                const double w =
                    transform_T(mu[i], fit.lambda) + sigma[i] * z[i];
                yb[i] = transform_T_inverse(w, fit.lambda);
                if (!(yb[i] > 0.0 && yb[i] < 1.0))
                    throw domain_error("simulated response on boundary");
            }
            // refit with zeta fixed at the selected value, warm-started
            const FitResult refit = model.estimator == Estimator::pmle
                                        ? fit_pmle(model, yb)
                                        : fit_mle(model, yb, warm);
            Eigen::VectorXd r = residual_of_kind(refit, yb, kind);
            std::sort(r.data(), r.data() + r.size());
            rows[b] = std::move(r);
        } catch (const std::exception&) {
            // dropped and counted below
        }
    }, parallel);

    EnvelopeBand band;
    std::vector<const Eigen::VectorXd*> ok;
    for (const auto& r : rows)
        if (r) ok.push_back(&*r);
    band.used = static_cast<int>(ok.size());
    band.failures = n_sim - band.used;
    if (band.failures > n_sim / 5)
        throw numerical_error("simulated_envelope: more than 20% of refits failed");

    band.lower.resize(n);
    band.median.resize(n);
    band.upper.resize(n);
    std::vector<double> col(ok.size());
    auto quantile_at = [&](double prob) {
        const double pos = prob * (col.size() - 1);
        const std::size_t k = static_cast<std::size_t>(pos);
        const double frac = pos - k;
        if (k + 1 >= col.size()) return col.back();
        return col[k] * (1.0 - frac) + col[k + 1] * frac;
    };
    for (int i = 0; i < n; ++i) {
        for (std::size_t b = 0; b < ok.size(); ++b) col[b] = (*ok[b])[i];
        std::sort(col.begin(), col.end());
        band.lower[i] = quantile_at(0.025);
        band.median[i] = quantile_at(0.5);
        band.upper[i] = quantile_at(0.975);
    }
    return band;
}

DiagnosticsReport diagnostics_report(
    const FitResult& fit, const Eigen::VectorXd& y,
    const std::vector<PerturbationScheme>& schemes, int envelope_sims,
    ResidualKind envelope_kind, std::uint64_t seed) {
    DiagnosticsReport rep;
    auto rq = quantile_residual(fit, y);
    auto rd = deviance_residual(fit, y);
    auto rp = standardized_residual(fit, y);
    rep.r_q = std::move(rq.value);
    rep.q_clamped = std::move(rq.clamped);
    rep.r_d = std::move(rd.value);
    rep.d_clamped = std::move(rd.clamped);
    rep.r_p = std::move(rp.value);
    rep.p_undefined = std::move(rp.undefined);
    rep.hat_diag = std::move(rp.hat_diag);
    rep.gl_diag = generalized_leverage(fit, y);
    rep.schemes = schemes;
    for (const auto& sch : schemes)
        rep.influence.push_back(local_influence(fit, y, sch));
    if (envelope_sims > 0) {
        rep.envelope =
            simulated_envelope(fit, y, envelope_kind, envelope_sims, seed);
        rep.envelope_kind = envelope_kind;
    }
    rep.pseudo_r2 = fit.fit_stats.pseudo_r2;
    rep.upsilon = fit.fit_stats.upsilon;
    return rep;
}

}  // namespace plreg
