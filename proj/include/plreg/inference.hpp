#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "plreg/fit.hpp"
#include "plreg/model.hpp"

namespace plreg {

// Expected values of standard normal order statistics for a sample of size n.
// Exact quadrature up to n = 200, Blom's approximation
// Phi^{-1}((i - 3/8)/(n + 1/4)) beyond (absolute error under 1e-3 there).
Eigen::VectorXd expected_normal_order_stats(int n);

// Upsilon = n^{-1} sum |Phi^{-1}(R(z_(i))) - E[N_(i)]| over ordered fitted z.
double upsilon_statistic(const Eigen::VectorXd& z, const GeneratorSpec& gen);

struct WaldRow {
    double estimate;
    double std_error;
    double z;
    double p_value;
};

struct ConfidenceInterval {
    double lo;
    double hi;
};

std::vector<WaldRow> wald_tests(const FitResult& fit);
std::vector<ConfidenceInterval> confidence_intervals(const FitResult& fit,
                                                     double level);

struct LrTest {
    double statistic;
    int df;
    double p_value;
};

// Likelihood ratio test of a reduced model nested in a full model.
LrTest lr_test(const FitResult& full, const FitResult& reduced);

struct ZetaSelection {
    double zeta_hat = 0.0;
    std::vector<std::pair<double, double>> upsilon_per_zeta;
    FitResult best_fit;
};

// Fits the model at every zeta in the grid (generator defaults when empty)
// and returns the Upsilon minimizer; ties break toward smaller zeta.
ZetaSelection select_zeta(const ModelSpec& model, const Eigen::VectorXd& y,
                          std::vector<double> grid = {});

}  // namespace plreg
