#include <cmath>

#include "doctest.h"
#include "plreg/distribution.hpp"
#include "plreg/errors.hpp"
#include "plreg/likelihood.hpp"
#include "test_util.hpp"

using namespace plreg;
using testutil::all_generators;
using testutil::random_instance;

TEST_CASE("single-observation log-likelihood equals the log density") {
    // n = 4 model evaluated per observation: exp of each term is the pdf
    const auto gen = GeneratorSpec::make(GeneratorKind::student_t, 5.0);
    auto inst = random_instance(gen, 8, 11);
    const ObsQuantities o = evaluate_obs(inst.theta, inst.model, inst.y);
    for (int i = 0; i < 8; ++i) {
        PowerLogitParams p(o.mu[i], o.sigma[i], inst.theta.lambda, gen);
        CHECK(o.loglik_i[i] ==
              doctest::Approx(log_pdf(inst.y[i], p)).epsilon(1e-12));
    }
}

TEST_CASE("log-likelihood is invariant to reordering observations") {
    const auto gen = GeneratorSpec::make(GeneratorKind::logistic_II);
    auto inst = random_instance(gen, 12, 5);
    const double base = loglik(inst.theta, inst.model, inst.y);
    // reverse all rows
    ModelSpec rev = inst.model;
    rev.X = inst.model.X.colwise().reverse().eval();
    rev.S = inst.model.S.colwise().reverse().eval();
    const Eigen::VectorXd yr = inst.y.reverse();
    CHECK(loglik(inst.theta, rev, yr) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("boundary responses are rejected") {
    Eigen::VectorXd y(3);
    y << 0.2, 1.0, 0.5;
    CHECK_THROWS_AS(check_response(y), domain_error);
}

TEST_CASE("PL-N weight matrix W reduces to diag(z)") {
    const auto gen = GeneratorSpec::make(GeneratorKind::normal);
    auto inst = random_instance(gen, 10, 3);
    const ScoreAndWeights s = score(inst.theta, inst.model, inst.y);
    for (int i = 0; i < 10; ++i)
        CHECK(s.w_diag[i] == doctest::Approx(s.obs.z[i]).epsilon(1e-14));
}

TEST_CASE("score matches finite differences of the log-likelihood") {
    for (const auto& gen : all_generators()) {
        auto inst = random_instance(gen, 20, 31);
        const int p = inst.model.p(), q = inst.model.q();
        auto f = [&](const Eigen::VectorXd& x) {
            return loglik(testutil::unpack_theta(x, p, q), inst.model, inst.y);
        };
        const Eigen::VectorXd x0 = testutil::pack_theta(inst.theta);
        const Eigen::VectorXd g_fd = testutil::fd_gradient(f, x0);
        const ScoreAndWeights s = score(inst.theta, inst.model, inst.y);
        const Eigen::VectorXd g = s.packed(true);
        for (int i = 0; i < g.size(); ++i) {
            INFO(gen.label() << " component " << i << " analytic=" << g[i]
                             << " fd=" << g_fd[i]);
            CHECK(testutil::rel_err(g[i], g_fd[i]) < 1e-5);
        }
    }
}

TEST_CASE("score at the log-log limit matches finite differences") {
    const auto gen = GeneratorSpec::make(GeneratorKind::normal);
    auto inst = random_instance(gen, 20, 13, /*lambda=*/0.0);
    inst.theta.lambda = 0.0;
    const int p = inst.model.p(), q = inst.model.q();
    auto f = [&](const Eigen::VectorXd& x) {
        Params th;
        th.beta = x.head(p);
        th.tau = x.segment(p, q);
        th.lambda = 0.0;
        return loglik(th, inst.model, inst.y);
    };
    Eigen::VectorXd x0(p + q);
    x0 << inst.theta.beta, inst.theta.tau;
    const Eigen::VectorXd g_fd = testutil::fd_gradient(f, x0);
    const ScoreAndWeights s = score(inst.theta, inst.model, inst.y);
    const Eigen::VectorXd g = s.packed(false);
    for (int i = 0; i < g.size(); ++i)
        CHECK(testutil::rel_err(g[i], g_fd[i]) < 1e-5);
}

TEST_CASE("observed information matches finite differences of the score") {
    for (const auto& gen : all_generators()) {
        auto inst = random_instance(gen, 15, 47);
        const int p = inst.model.p(), q = inst.model.q();
        auto grad = [&](const Eigen::VectorXd& x) {
            const ScoreAndWeights s =
                score(testutil::unpack_theta(x, p, q), inst.model, inst.y);
            return s.packed(true);
        };
        const Eigen::VectorXd x0 = testutil::pack_theta(inst.theta);
        const Eigen::MatrixXd Jfd = -testutil::fd_jacobian(grad, x0, 1e-6);
        const Eigen::MatrixXd J =
            observed_information(inst.theta, inst.model, inst.y, true);
        CHECK((J - J.transpose()).norm() == 0.0);
        for (int r = 0; r < J.rows(); ++r) {
            for (int c = 0; c < J.cols(); ++c) {
                INFO(gen.label() << " J(" << r << "," << c << ") analytic="
                                 << J(r, c) << " fd=" << Jfd(r, c));
                CHECK(testutil::rel_err(J(r, c), Jfd(r, c)) < 1e-4);
            }
        }
    }
}

TEST_CASE("restricted information at lambda = 0 matches finite differences") {
    const auto gen = GeneratorSpec::make(GeneratorKind::student_t, 5.0);
    auto inst = random_instance(gen, 15, 21, /*lambda=*/0.0);
    inst.theta.lambda = 0.0;
    const int p = inst.model.p(), q = inst.model.q();
    auto grad = [&](const Eigen::VectorXd& x) {
        Params th;
        th.beta = x.head(p);
        th.tau = x.segment(p, q);
        th.lambda = 0.0;
        return score(th, inst.model, inst.y).packed(false);
    };
    Eigen::VectorXd x0(p + q);
    x0 << inst.theta.beta, inst.theta.tau;
    const Eigen::MatrixXd Jfd = -testutil::fd_jacobian(grad, x0, 1e-6);
    const Eigen::MatrixXd J =
        observed_information(inst.theta, inst.model, inst.y, false);
    for (int r = 0; r < J.rows(); ++r)
        for (int c = 0; c < J.cols(); ++c)
            CHECK(testutil::rel_err(J(r, c), Jfd(r, c)) < 1e-4);
    CHECK_THROWS_AS(observed_information(inst.theta, inst.model, inst.y, true),
                    domain_error);
}

TEST_CASE("model construction validates shapes and ranks") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(10, 2);
    X.col(1) = Eigen::VectorXd::LinSpaced(10, 0.0, 1.0);
    Eigen::MatrixXd S = Eigen::MatrixXd::Ones(10, 1);
    const auto gen = GeneratorSpec::make(GeneratorKind::normal);
    CHECK_NOTHROW(ModelSpec(X, S, MedianLink::logit, gen, LambdaPolicy::free()));

    Eigen::MatrixXd Xbad = Eigen::MatrixXd::Ones(10, 2);  // duplicated column
    CHECK_THROWS_AS(
        ModelSpec(Xbad, S, MedianLink::logit, gen, LambdaPolicy::free()),
        domain_error);

    Eigen::MatrixXd Xsmall = Eigen::MatrixXd::Ones(3, 2);
    Xsmall(1, 1) = 0.4;
    Xsmall(2, 1) = 0.9;
    Eigen::MatrixXd Ssmall = Eigen::MatrixXd::Ones(3, 1);
    CHECK_THROWS_AS(ModelSpec(Xsmall, Ssmall, MedianLink::logit, gen,
                              LambdaPolicy::free()),
                    domain_error);  // p + q + 1 >= n
}
