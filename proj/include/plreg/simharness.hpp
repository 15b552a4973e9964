#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "plreg/fit.hpp"
#include "plreg/model.hpp"

namespace plreg {

// One Monte Carlo bias/RMSE experiment: covariates are drawn once from
// U(0,1) and kept fixed for all the replicates; each replicate draws a fresh
// response from the true model and fits with the requested estimators.
struct SimDesign {
    GeneratorSpec generator = GeneratorSpec::make(GeneratorKind::normal);
    Eigen::VectorXd beta_true;   // intercept + (p-1) uniform covariates
    Eigen::VectorXd tau_true;    // intercept + (q-1) uniform covariates
    double lambda_true = 1.0;
    MedianLink median_link = MedianLink::logit;
    int n = 40;
    int replicates = 500;
    std::uint64_t seed = 1;
    bool run_mle = true;
    bool run_pmle = true;
};

struct CellStats {
    double bias = 0.0;
    double rmse = 0.0;
    double variance = 0.0;
};

struct SimReport {
    std::vector<std::string> param_names;  // beta..., tau..., lambda
    std::vector<CellStats> mle;
    std::vector<CellStats> pmle;
    int mle_failures = 0;
    int pmle_failures = 0;
    int replicates = 0;
    double wall_seconds = 0.0;  // excluded from file output and comparisons

    bool same_statistics(const SimReport& other) const;
};

// Deterministic in (design, seed) and identical between the parallel and the
// serial execution paths.
SimReport run_design(const SimDesign& design, bool parallel = true);

// Fixed design of the contamination experiment: n = 40, logit median
// 3.5 - 3.5 x, log sigma = -1.5, lambda = 0.5, x_39 = 0.8, x_40 = 1.2 and
// the last two responses replaced by 0.9 and max(y).
struct ContaminationRun {
    struct ModelSummary {
        Eigen::VectorXd beta_clean, beta_contaminated;
        double line_shift_rms = 0.0;  // RMS change of the fitted median curve
        int top_gl_observation = 0;       // 1-based index of max GL_ii
        int gl_rank_case40 = 0;           // 1-based rank of case 40 by GL_ii
        int abs_rp_rank_case40 = 0;       // rank of case 40 by |r^p|
        int abs_rq_rank_case39 = 0;       // rank of case 39 by |r^q|
    };
    ModelSummary pl_normal;
    ModelSummary pl_t5;
};

ContaminationRun run_contamination(std::uint64_t seed);

}  // namespace plreg
