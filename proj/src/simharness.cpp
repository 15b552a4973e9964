#include "plreg/simharness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "plreg/diagnostics.hpp"
#include "plreg/distribution.hpp"
#include "plreg/errors.hpp"
#include "plreg/likelihood.hpp"
#include "plreg/parallel.hpp"
#include "plreg/rng.hpp"

namespace plreg {

namespace {

struct DesignMatrices {
    Eigen::MatrixXd X, S;
    Eigen::VectorXd mu, sigma;
};

DesignMatrices build_design(const SimDesign& d) {
    const int p = static_cast<int>(d.beta_true.size());
    const int q = static_cast<int>(d.tau_true.size());
    DesignMatrices m;
    m.X = Eigen::MatrixXd::Ones(d.n, p);
    m.S = Eigen::MatrixXd::Ones(d.n, q);
    Rng rng(mix_seed(d.seed, 0));  // covariates fixed for all the replicates
    for (int j = 1; j < p; ++j)
        for (int i = 0; i < d.n; ++i) m.X(i, j) = rng.uniform01();
    for (int j = 1; j < q; ++j)
        for (int i = 0; i < d.n; ++i) m.S(i, j) = rng.uniform01();
    const Eigen::VectorXd eta1 = m.X * d.beta_true;
    const Eigen::VectorXd eta2 = m.S * d.tau_true;
    m.mu.resize(d.n);
    m.sigma.resize(d.n);
    for (int i = 0; i < d.n; ++i) {
        m.mu[i] = link_inverse(d.median_link, eta1[i]);
        m.sigma[i] = std::exp(eta2[i]);
    }
    return m;
}

Eigen::VectorXd draw_response(const SimDesign& d, const DesignMatrices& m,
                              std::uint64_t rep_seed) {
    const std::vector<double> z = d.generator.sample(rep_seed, d.n);
    Eigen::VectorXd y(d.n);
    for (int i = 0; i < d.n; ++i) {
        const double w =
            transform_T(m.mu[i], d.lambda_true) + m.sigma[i] * z[i];
        y[i] = transform_T_inverse(w, d.lambda_true);
        if (!(y[i] > 0.0 && y[i] < 1.0))
            throw domain_error("simulated response on the boundary");
    }
    return y;
}

std::vector<CellStats> summarize(const std::vector<Eigen::VectorXd>& diffs,
                                 int dim) {
    std::vector<CellStats> cells(dim);
    const double m = static_cast<double>(diffs.size());
    if (diffs.empty()) return cells;
    for (int j = 0; j < dim; ++j) {
        double mean = 0.0, meansq = 0.0;
        for (const auto& d : diffs) {
            mean += d[j];
            meansq += d[j] * d[j];
        }
        mean /= m;
        meansq /= m;
        cells[j].bias = mean;
        cells[j].rmse = std::sqrt(meansq);
        cells[j].variance = meansq - mean * mean;
    }
    return cells;
}

}  // namespace

bool SimReport::same_statistics(const SimReport& other) const {
    if (param_names != other.param_names || replicates != other.replicates ||
        mle_failures != other.mle_failures ||
        pmle_failures != other.pmle_failures)
        return false;
    auto same = [](const std::vector<CellStats>& a,
                   const std::vector<CellStats>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].bias != b[i].bias || a[i].rmse != b[i].rmse ||
                a[i].variance != b[i].variance)
                return false;
        return true;
    };
    return same(mle, other.mle) && same(pmle, other.pmle);
}

SimReport run_design(const SimDesign& design, bool parallel) {
    if (design.replicates < 1)
        throw domain_error("run_design: replicates must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const DesignMatrices m = build_design(design);
    const int p = static_cast<int>(design.beta_true.size());
    const int q = static_cast<int>(design.tau_true.size());
    const int dim = p + q + 1;

    Eigen::VectorXd truth(dim);
    truth << design.beta_true, design.tau_true, design.lambda_true;

    const ModelSpec model_mle(m.X, m.S, design.median_link, design.generator,
                              LambdaPolicy::free(), Estimator::mle);
    const ModelSpec model_pmle = [&] {
        ModelSpec mm = model_mle;
        mm.estimator = Estimator::pmle;
        return mm;
    }();

    std::vector<std::optional<Eigen::VectorXd>> mle_diffs(design.replicates);
    std::vector<std::optional<Eigen::VectorXd>> pmle_diffs(design.replicates);

    parallel_for(design.replicates, [&](std::ptrdiff_t r) {
        Eigen::VectorXd y;
        try {
            y = draw_response(design, m, mix_seed(design.seed, r + 1));
        } catch (const std::exception&) {
            return;  // counted as failure for both estimators
        }
        if (design.run_mle) {
            try {
                const FitResult f = fit_mle(model_mle, y);
                Eigen::VectorXd est(dim);
                est << f.beta, f.tau, f.lambda;
                mle_diffs[r] = est - truth;
            } catch (const std::exception&) {}
        }
        if (design.run_pmle) {
            try {
                const FitResult f = fit_pmle(model_pmle, y);
                Eigen::VectorXd est(dim);
                est << f.beta, f.tau, f.lambda;
                pmle_diffs[r] = est - truth;
            } catch (const std::exception&) {}
        }
    }, parallel);

    SimReport rep;
    rep.replicates = design.replicates;
    for (int j = 0; j < p; ++j) rep.param_names.push_back("beta" + std::to_string(j + 1));
    for (int j = 0; j < q; ++j) rep.param_names.push_back("tau" + std::to_string(j + 1));
    rep.param_names.push_back("lambda");

    // deterministic reduction in replicate order
    std::vector<Eigen::VectorXd> ok_mle, ok_pmle;
    for (const auto& d : mle_diffs)
        if (d) ok_mle.push_back(*d);
    for (const auto& d : pmle_diffs)
        if (d) ok_pmle.push_back(*d);
    if (design.run_mle) {
        rep.mle = summarize(ok_mle, dim);
        rep.mle_failures = design.replicates - static_cast<int>(ok_mle.size());
    }
    if (design.run_pmle) {
        rep.pmle = summarize(ok_pmle, dim);
        rep.pmle_failures = design.replicates - static_cast<int>(ok_pmle.size());
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rep;
}

namespace {

int rank_of_case(const Eigen::VectorXd& values, int index0) {
    // 1-based rank of index0 when values are sorted decreasingly
    int rank = 1;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (i != index0 && values[i] > values[index0]) ++rank;
    return rank;
}

ContaminationRun::ModelSummary contamination_fit(const ModelSpec& model,
                                                 const Eigen::VectorXd& y_clean,
                                                 const Eigen::VectorXd& y_cont) {
    ContaminationRun::ModelSummary s;
    const FitResult clean = fit_pmle(model, y_clean);
    const FitResult cont = fit_pmle(model, y_cont);
    s.beta_clean = clean.beta;
    s.beta_contaminated = cont.beta;

    const Eigen::VectorXd mu_clean = clean.fitted_mu();
    const Eigen::VectorXd mu_cont = cont.fitted_mu();
    // shift of the fitted median curve over the uncontaminated cases
    double acc = 0.0;
    const int n_ok = static_cast<int>(y_clean.size()) - 2;
    for (int i = 0; i < n_ok; ++i) {
        const double d = mu_clean[i] - mu_cont[i];
        acc += d * d;
    }
    s.line_shift_rms = std::sqrt(acc / n_ok);

    const Eigen::VectorXd gl = generalized_leverage(cont, y_cont);
    Eigen::Index imax;
    gl.maxCoeff(&imax);
    s.top_gl_observation = static_cast<int>(imax) + 1;
    s.gl_rank_case40 = rank_of_case(gl, static_cast<int>(y_cont.size()) - 1);

    const Eigen::VectorXd rp =
        standardized_residual(cont, y_cont).value.array().abs();
    s.abs_rp_rank_case40 = rank_of_case(rp, static_cast<int>(y_cont.size()) - 1);
    const Eigen::VectorXd rq = quantile_residual(cont, y_cont).value.array().abs();
    s.abs_rq_rank_case39 = rank_of_case(rq, static_cast<int>(y_cont.size()) - 2);
    return s;
}

}  // namespace

ContaminationRun run_contamination(std::uint64_t seed) {
    const int n = 40;
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(n, 2);
    Rng rng(mix_seed(seed, 0));
    for (int i = 0; i < n - 2; ++i) X(i, 1) = rng.uniform01();
    X(n - 2, 1) = 0.8;
    X(n - 1, 1) = 1.2;
    const Eigen::MatrixXd S = Eigen::MatrixXd::Ones(n, 1);

    const double lambda_true = 0.5;
    const double sigma = std::exp(-1.5);
    const GeneratorSpec normal = GeneratorSpec::make(GeneratorKind::normal);
    const std::vector<double> z = normal.sample(mix_seed(seed, 1), n);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double eta = 3.5 - 3.5 * X(i, 1);
        const double mu = link_inverse(MedianLink::logit, eta);
        const double w = transform_T(mu, lambda_true) + sigma * z[i];
        y[i] = transform_T_inverse(w, lambda_true);
    }
    Eigen::VectorXd y_cont = y;
    y_cont[n - 2] = 0.9;
    y_cont[n - 1] = y.maxCoeff();

    ContaminationRun out;
    const ModelSpec m_n(X, S, MedianLink::logit, normal, LambdaPolicy::free(),
                        Estimator::pmle);
    const ModelSpec m_t(X, S, MedianLink::logit,
                        GeneratorSpec::make(GeneratorKind::student_t, 5.0),
                        LambdaPolicy::free(), Estimator::pmle);
    out.pl_normal = contamination_fit(m_n, y, y_cont);
    out.pl_t5 = contamination_fit(m_t, y, y_cont);
    return out;
}

}  // namespace plreg
