#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "plreg/fit.hpp"

namespace plreg {

// Perturbation schemes of the local influence analysis. Covariate indices
// are 0-based columns of X (median) and S (dispersion).
struct PerturbationScheme {
    enum class Kind { case_weights, median_covariate, dispersion_covariate,
                      simultaneous };
    Kind kind = Kind::case_weights;
    int median_col = -1;
    int dispersion_col = -1;

    static PerturbationScheme case_weights() { return {}; }
    static PerturbationScheme median_covariate(int j) {
        return {Kind::median_covariate, j, -1};
    }
    static PerturbationScheme dispersion_covariate(int k) {
        return {Kind::dispersion_covariate, -1, k};
    }
    static PerturbationScheme simultaneous(int j, int k) {
        return {Kind::simultaneous, j, k};
    }
    const char* name() const;
};

struct ResidualVector {
    Eigen::VectorXd value;
    std::vector<bool> clamped;  // per-observation saturation/undefined flag
};

ResidualVector quantile_residual(const FitResult& fit, const Eigen::VectorXd& y);
ResidualVector deviance_residual(const FitResult& fit, const Eigen::VectorXd& y);

struct StandardizedResidual {
    Eigen::VectorXd value;          // NaN where undefined
    Eigen::VectorXd hat_diag;       // diagonal of H
    std::vector<bool> undefined;    // 1 - h/(d_r xi_r) <= 0
};

StandardizedResidual standardized_residual(const FitResult& fit,
                                           const Eigen::VectorXd& y);

struct InfluenceResult {
    Eigen::VectorXd hmax;  // unit norm, first nonzero entry positive
    Eigen::VectorXd c_i;   // total local influence per observation
};

// Delta matrix (p+q) x n of the chosen scheme; exposed for the
// finite-difference oracle in the tests.
Eigen::MatrixXd influence_delta(const FitResult& fit, const Eigen::VectorXd& y,
                                const PerturbationScheme& scheme);

InfluenceResult local_influence(const FitResult& fit, const Eigen::VectorXd& y,
                                const PerturbationScheme& scheme);

// Diagonal of the generalized leverage matrix GL = Ldot J^{-1} Lddot.
Eigen::VectorXd generalized_leverage(const FitResult& fit,
                                     const Eigen::VectorXd& y);
// Full matrix; used by the finite-difference oracle.
Eigen::MatrixXd generalized_leverage_matrix(const FitResult& fit,
                                            const Eigen::VectorXd& y);

enum class ResidualKind { quantile, deviance, standardized };

struct EnvelopeBand {
    Eigen::VectorXd lower, median, upper;  // per rank
    int failures = 0;
    int used = 0;
};

EnvelopeBand simulated_envelope(const FitResult& fit, const Eigen::VectorXd& y,
                                ResidualKind kind, int n_sim, std::uint64_t seed,
                                bool parallel = true);

struct DiagnosticsReport {
    Eigen::VectorXd r_q, r_d, r_p;
    std::vector<bool> q_clamped, d_clamped, p_undefined;
    Eigen::VectorXd gl_diag;
    Eigen::VectorXd hat_diag;
    std::vector<PerturbationScheme> schemes;
    std::vector<InfluenceResult> influence;  // one per scheme
    std::optional<EnvelopeBand> envelope;
    ResidualKind envelope_kind = ResidualKind::quantile;
    double pseudo_r2 = 0.0;
    double upsilon = 0.0;
};

DiagnosticsReport diagnostics_report(
    const FitResult& fit, const Eigen::VectorXd& y,
    const std::vector<PerturbationScheme>& schemes, int envelope_sims,
    ResidualKind envelope_kind, std::uint64_t seed);

}  // namespace plreg
