#include "plreg/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plreg/errors.hpp"
#include "plreg/likelihood.hpp"
#include "plreg/numeric.hpp"
#include "plreg/parallel.hpp"
#include "plreg/special.hpp"

namespace plreg {

namespace {

// Saturation bound for normal quantiles of probabilities representable in
// double precision; shared with the quantile residual clamp.
constexpr double kQuantileClamp = 8.2;

double order_stat_mean(int n, int i) {
    // E[Z_(i)] = n C(n-1, i-1) int z phi(z) Phi(z)^{i-1} (1-Phi(z))^{n-i} dz
    const double logc = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(i)) -
                        std::lgamma(static_cast<double>(n - i + 1));
    auto f = [&](double z) {
        const double lphi = std::log(norm_pdf(z));
        const double cdf = norm_cdf(z);
        if (cdf <= 0.0 || cdf >= 1.0) return 0.0;
        const double lw = logc + lphi + (i - 1) * std::log(cdf) +
                          (n - i) * std::log1p(-cdf);
        return z * std::exp(lw);
    };
    return integrate(f, -9.0, 9.0, 1e-11);
}

}  // namespace

Eigen::VectorXd expected_normal_order_stats(int n) {
    if (n < 1) throw domain_error("expected_normal_order_stats: n must be >= 1");
    Eigen::VectorXd v(n);
    if (n <= 200) {
        for (int i = 1; 2 * i <= n + 1; ++i) {
            const double e = (2 * i == n + 1) ? 0.0 : order_stat_mean(n, i);
            v[i - 1] = e;
            v[n - i] = -e;
        }
    } else {
        for (int i = 1; i <= n; ++i)
            v[i - 1] = norm_quantile((i - 0.375) / (n + 0.25));
    }
    return v;
}

double upsilon_statistic(const Eigen::VectorXd& z, const GeneratorSpec& gen) {
    const int n = static_cast<int>(z.size());
    if (n < 1) throw domain_error("upsilon_statistic: empty sample");
    std::vector<double> zs(z.data(), z.data() + n);
    std::sort(zs.begin(), zs.end());
    const Eigen::VectorXd eo = expected_normal_order_stats(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = gen.cdf(zs[i]);
        double q;
        if (u <= 0.0) q = -kQuantileClamp;
        else if (u >= 1.0) q = kQuantileClamp;
        else q = std::clamp(norm_quantile(u), -kQuantileClamp, kQuantileClamp);
        acc += std::abs(q - eo[i]);
    }
    return acc / n;
}

std::vector<WaldRow> wald_tests(const FitResult& fit) {
    if (!fit.se_valid)
        throw numerical_error("wald_tests: standard errors unavailable");
    const Eigen::VectorXd est = fit.estimates();
    std::vector<WaldRow> rows(est.size());
    for (Eigen::Index i = 0; i < est.size(); ++i) {
        const double se = fit.std_errors[i];
        const double z = est[i] / se;
        rows[i] = {est[i], se, z, 2.0 * norm_cdf(-std::abs(z))};
    }
    return rows;
}

std::vector<ConfidenceInterval> confidence_intervals(const FitResult& fit,
                                                     double level) {
    if (!(level >= 0.0 && level < 1.0))
        throw domain_error("confidence level must lie in [0,1)");
    if (!fit.se_valid)
        throw numerical_error("confidence_intervals: standard errors unavailable");
    const double zq = (level == 0.0) ? 0.0 : norm_quantile(0.5 + 0.5 * level);
    const Eigen::VectorXd est = fit.estimates();
    std::vector<ConfidenceInterval> ci(est.size());
    for (Eigen::Index i = 0; i < est.size(); ++i) {
        const double half = zq * fit.std_errors[i];
        ci[i] = {est[i] - half, est[i] + half};
    }
    return ci;
}

LrTest lr_test(const FitResult& full, const FitResult& reduced) {
    if (full.model.n() != reduced.model.n())
        throw usage_error("lr_test: fits use different data sizes");
    const int df = full.n_free_params() - reduced.n_free_params();
    if (df <= 0)
        throw usage_error("lr_test: models are not nested (no dropped parameters)");
    const double stat = std::max(0.0, 2.0 * (full.loglik - reduced.loglik));
    // chi-square upper tail
    const double p = special::gamma_q(0.5 * df, 0.5 * stat);
    return {stat, df, p};
}

ZetaSelection select_zeta(const ModelSpec& model, const Eigen::VectorXd& y,
                          std::vector<double> grid) {
    if (!model.generator.has_zeta())
        throw usage_error(std::string(generator_name(model.generator.kind())) +
                          " has no extra parameter to select");
    if (grid.empty())
        grid = GeneratorSpec::default_zeta_grid(model.generator.kind());
    if (grid.empty()) throw usage_error("select_zeta: empty grid");
    std::sort(grid.begin(), grid.end());

    const int m = static_cast<int>(grid.size());
    std::vector<std::optional<FitResult>> fits(m);
    std::vector<double> ups(m, std::numeric_limits<double>::infinity());
    parallel_for(m, [&](std::ptrdiff_t j) {
        try {
            const ModelSpec mj = model.with_generator(
                GeneratorSpec::make(model.generator.kind(), grid[j]));
            FitResult f = fit_model(mj, y);
            ups[j] = f.fit_stats.upsilon;
            fits[j] = std::move(f);
        } catch (const std::exception&) {
            // unusable zeta; leave upsilon at +inf
        }
    });

    int best = -1;
    for (int j = 0; j < m; ++j) {
        if (!fits[j]) continue;
        if (best < 0 || ups[j] < ups[best]) best = j;  // ties keep smaller zeta
    }
    if (best < 0)
        throw numerical_error("select_zeta: every candidate zeta failed to fit");

    ZetaSelection sel;
    sel.zeta_hat = grid[best];
    sel.best_fit = std::move(*fits[best]);
    for (int j = 0; j < m; ++j)
        sel.upsilon_per_zeta.emplace_back(
            grid[j], std::isfinite(ups[j])
                         ? ups[j]
                         : std::numeric_limits<double>::quiet_NaN());
    return sel;
}

}  // namespace plreg
