#include "doctest.h"

#include <cmath>

#include "oracle.hpp"
#include "sailfit/error.hpp"
#include "sailfit/ingest.hpp"
#include "sailfit/linalg.hpp"
#include "sailfit/linear_model.hpp"
#include "sailfit/metrics.hpp"
#include "sailfit/rng.hpp"
#include "util.hpp"

using namespace sailfit;

TEST_CASE("two points interpolate exactly: intercept 1, slope 2") {
    FeatureMatrix X = testutil::feature_matrix({{0}, {1}});
    LinearModel m = fit_ols(X, {1, 3});
    CHECK(m.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.coefficients.at("f0") == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("a duplicated column is reported rank deficient") {
    FeatureMatrix X = testutil::feature_matrix({{1, 1}, {2, 2}, {3, 3}, {4, 4}},
                                               {"a", "a_copy"});
    try {
        fit_ols(X, {1, 2, 3, 4});
        FAIL("expected RankDeficient");
    } catch (const Error& e) {
        CHECK(e.kind() == Err::RankDeficient);
        CHECK(std::string(e.what()).find("a_copy") != std::string::npos);
    }
}

TEST_CASE("n < p+1 is rejected") {
    FeatureMatrix X = testutil::feature_matrix({{1, 2}, {3, 4}});
    CHECK_THROWS_AS(fit_ols(X, {1, 2}), Error);
}

TEST_CASE("residuals of an OLS fit are orthogonal to the design and sum to zero") {
    Records recs = generate_synthetic(testutil::technical_spec(3, 300, 15000.0));
    DesignMatrix d = build_design_matrix(recs, technical_feature_names(),
                                         RegionScheme::ThreeRegion, true, false);
    LinearModel m = fit_ols(d.X, d.y);
    TargetVector yhat = predict(m, d.X);

    double ynorm = 0;
    for (double v : d.y) ynorm += v * v;
    ynorm = std::sqrt(ynorm);

    double sum_r = 0;
    for (std::size_t i = 0; i < d.y.size(); ++i) sum_r += d.y[i] - yhat[i];
    CHECK(std::fabs(sum_r) <= 1e-8 * static_cast<double>(d.y.size()));

    for (std::size_t j = 0; j < d.X.values.cols; ++j) {
        double dot = 0;
        for (std::size_t i = 0; i < d.X.values.rows; ++i)
            dot += d.X.values(i, j) * (d.y[i] - yhat[i]);
        CHECK(std::fabs(dot) <= 1e-6 * ynorm);
    }
}

TEST_CASE("ols matches the pseudo-inverse oracle on a well-posed problem") {
    Records recs = generate_synthetic(testutil::technical_spec(8, 120, 5000.0));
    DesignMatrix d = build_design_matrix(recs, {"length_ft", "draft_ft", "hull"},
                                         RegionScheme::ThreeRegion, true, false);
    LinearModel m = fit_ols(d.X, d.y);
    std::vector<double> ref = oracle::pinv_least_squares(d.X.values, d.y);
    CHECK(m.coefficients.at("length_ft") == doctest::Approx(ref[0]).epsilon(1e-7));
    CHECK(m.coefficients.at("draft_ft") == doctest::Approx(ref[1]).epsilon(1e-7));
    CHECK(m.coefficients.at("hull") == doctest::Approx(ref[2]).epsilon(1e-7));
    CHECK(m.intercept == doctest::Approx(ref[3]).epsilon(1e-7));
}

TEST_CASE("loss_l2 with lambda 0 is the prediction mse") {
    FeatureMatrix X = testutil::feature_matrix({{0.5}, {1.5}, {-1.0}});
    TargetVector y = {2, 4, 1};
    LinearModel m = fit_ols(X, y);
    CHECK(loss_l2(X, y, m, 0.0) == doctest::Approx(mse(y, predict(m, X))).epsilon(1e-14));
}

TEST_CASE("all-zero coefficients reduce loss_l2 to the intercept-only mse") {
    FeatureMatrix X = testutil::feature_matrix({{1.0}, {2.0}});
    TargetVector y = {5, 7};
    LinearModel m;
    m.schema = X.schema;
    m.coefficients["f0"] = 0.0;
    m.intercept = 3.0;
    TargetVector constant_pred = {3, 3};
    CHECK(loss_l2(X, y, m, 0.5) == doctest::Approx(mse(y, constant_pred)).epsilon(1e-14));
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(42);
    std::size_t n = 40, p = 4;
    Matrix X(n, p);
    TargetVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) X(i, j) = rng.uniform(-2, 2);
        y[i] = rng.uniform(-10, 10);
    }
    const double lambda = 0.3;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> theta(p + 1);
        for (double& t : theta) t = rng.uniform(-2, 2);

        std::vector<double> beta(theta.begin(), theta.begin() + static_cast<long>(p));
        std::vector<double> analytic(p);
        double analytic_b = 0;
        linear_gradient(X, y, beta, theta[p], lambda, analytic, analytic_b);

        auto loss_at = [&](const std::vector<double>& th) {
            std::vector<double> b(th.begin(), th.begin() + static_cast<long>(p));
            return linear_loss(X, y, b, th[p], lambda);
        };
        std::vector<double> fd = oracle::fd_gradient(loss_at, theta, 1e-5);
        for (std::size_t j = 0; j < p; ++j)
            CHECK(std::fabs(analytic[j] - fd[j]) <=
                  1e-4 * std::max({std::fabs(fd[j]), std::fabs(analytic[j]), 1e-6}));
        CHECK(std::fabs(analytic_b - fd[p]) <=
              1e-4 * std::max({std::fabs(fd[p]), std::fabs(analytic_b), 1e-6}));
    }
}

TEST_CASE("gd on y=2x recovers the slope") {
    // x standardized by construction: mean 0, variance 1
    FeatureMatrix X = testutil::feature_matrix({{-1}, {1}});
    TargetVector y = {-2, 2};
    GDConfig cfg;
    auto [m, trace] = fit_gd(X, y, cfg);
    CHECK(std::fabs(m.coefficients.at("f0") - 2.0) <= 1e-4);
    CHECK(std::fabs(m.intercept) <= 1e-4);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
}

TEST_CASE("one gd step from zero matches the hand computation") {
    // grad_beta = -(2/2)(x1*y1 + x2*y2) = -4; grad_b = -(2/2)(y1+y2) = -4
    // alpha 0.1 -> beta 0.4, intercept 0.4
    FeatureMatrix X = testutil::feature_matrix({{-1}, {1}});
    TargetVector y = {0, 4};
    GDConfig cfg;
    cfg.learning_rate = 0.1;
    cfg.max_iters = 1;
    auto [m, trace] = fit_gd(X, y, cfg);
    CHECK(m.coefficients.at("f0") == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(m.intercept == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(trace.size() == 2);
}

TEST_CASE("huge lambda shrinks penalized coefficients toward zero, matching closed-form ridge") {
    Records recs = generate_synthetic(testutil::technical_spec(12, 200));
    DesignMatrix d = build_design_matrix(recs, {"length_ft", "beam_ft", "draft_ft"},
                                         RegionScheme::ThreeRegion, true, true);
    GDConfig cfg;
    cfg.l2_lambda = 1e6;
    cfg.learning_rate = 1e-7;  // the penalty Hessian is 2*lambda; stability needs alpha < 1/lambda
    cfg.max_iters = 5000;
    auto [m, trace] = fit_gd(d.X, d.y, cfg);
    for (const auto& [name, c] : m.coefficients) {
        (void)name;
        CHECK(std::fabs(c) < 1e-2);
    }
    // closed-form ridge: (X'X + n*lambda I)^-1 X'y
    LsqSolution ridge = solve_normal_equations(
        d.X.values, d.y, cfg.l2_lambda * static_cast<double>(d.X.values.rows));
    std::vector<double> beta = m.coefficient_vector();
    for (std::size_t j = 0; j < beta.size(); ++j)
        CHECK(beta[j] == doctest::Approx(ridge.beta[j]).epsilon(1e-3));
}

TEST_CASE("gd with lambda 0 converges to the ols solution on standardized data") {
    Records recs = generate_synthetic(testutil::technical_spec(19, 400));
    DesignMatrix d = build_design_matrix(recs, technical_feature_names(),
                                         RegionScheme::ThreeRegion, true, true);
    LinearModel ols = fit_ols(d.X, d.y);
    GDConfig cfg;
    cfg.max_iters = 200000;
    cfg.tol = 1e-16 * mse(d.y, TargetVector(d.y.size(), 0.0));
    auto [gd, trace] = fit_gd(d.X, d.y, cfg);
    for (const auto& [name, c] : ols.coefficients) {
        double rel = std::fabs(gd.coefficients.at(name) - c) / std::max(1.0, std::fabs(c));
        CHECK(rel <= 1e-3);
    }
    CHECK(std::fabs(gd.intercept - ols.intercept) / std::fabs(ols.intercept) <= 1e-3);
}

TEST_CASE("unstandardized large-magnitude features are rejected by fit_gd") {
    FeatureMatrix X = testutil::feature_matrix({{20000}, {30000}});
    CHECK_THROWS_AS(fit_gd(X, {1, 2}, GDConfig{}), Error);
}

TEST_CASE("gd reports divergence when the loss overflows past all halvings") {
    FeatureMatrix X = testutil::feature_matrix({{-1}, {1}});
    GDConfig cfg;
    cfg.learning_rate = 1e300;
    cfg.max_iters = 50;
    CHECK_THROWS_AS(fit_gd(X, {0, 4}, cfg), Error);
}

TEST_CASE("predict handles the trivial cases and applies standardization") {
    FeatureMatrix X = testutil::feature_matrix({{0}, {3}}, {"c1"});
    LinearModel m;
    m.schema = X.schema;
    m.coefficients["c1"] = 2.0;
    m.intercept = 1.0;
    TargetVector yhat = predict(m, X);
    CHECK(yhat[0] == 1.0);  // all-zero row -> intercept
    CHECK(yhat[1] == 7.0);  // 1 + 2*3

    // with standardization stored: raw inputs are z-scored first
    m.standardization = Standardization{{{"c1", 3.0, 2.0}}};
    TargetVector z = predict(m, X);
    CHECK(z[0] == doctest::Approx(1.0 + 2.0 * (0 - 3.0) / 2.0));
    CHECK(z[1] == doctest::Approx(1.0 + 2.0 * (3 - 3.0) / 2.0));
}

TEST_CASE("predict is linear in the feature row") {
    Records recs = generate_synthetic(testutil::technical_spec(23, 50));
    DesignMatrix d = build_design_matrix(recs, {"length_ft", "beam_ft"},
                                         RegionScheme::ThreeRegion, true, false);
    LinearModel m = fit_ols(d.X, d.y);
    FeatureMatrix u = testutil::feature_matrix({{30, 10}}, {"length_ft", "beam_ft"});
    FeatureMatrix v = testutil::feature_matrix({{5, 2}}, {"length_ft", "beam_ft"});
    FeatureMatrix uv = testutil::feature_matrix({{35, 12}}, {"length_ft", "beam_ft"});
    double lhs = predict(m, uv)[0];
    double rhs = predict(m, u)[0] + predict(m, v)[0] - m.intercept;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("adding a constant to targets shifts only the intercept") {
    Records recs = generate_synthetic(testutil::technical_spec(29, 150, 2000.0));
    DesignMatrix d = build_design_matrix(recs, {"length_ft", "draft_ft"},
                                         RegionScheme::ThreeRegion, true, false);
    LinearModel base = fit_ols(d.X, d.y);
    TargetVector shifted = d.y;
    for (double& v : shifted) v += 12345.0;
    LinearModel moved = fit_ols(d.X, shifted);
    CHECK(moved.intercept - base.intercept == doctest::Approx(12345.0).epsilon(1e-8));
    for (const auto& [name, c] : base.coefficients)
        CHECK(moved.coefficients.at(name) == doctest::Approx(c).epsilon(1e-8));
}

TEST_CASE("predict rejects a mismatched schema") {
    FeatureMatrix X = testutil::feature_matrix({{1}}, {"a"});
    FeatureMatrix other = testutil::feature_matrix({{1}}, {"b"});
    LinearModel m;
    m.schema = X.schema;
    m.coefficients["a"] = 1.0;
    CHECK_THROWS_AS(predict(m, other), Error);
}

TEST_CASE("model serialization round-trips exactly") {
    Records recs = generate_synthetic(testutil::technical_spec(31, 80));
    DesignMatrix d = build_design_matrix(recs, technical_feature_names(),
                                         RegionScheme::ThreeRegion, true, true);
    LinearModel m = fit_ols(d.X, d.y);
    LinearModel back = load_linear_model(save_linear_model(m));
    CHECK(back.schema == m.schema);
    CHECK(back.intercept == m.intercept);
    CHECK(back.coefficients == m.coefficients);
    REQUIRE(back.standardization.has_value());
    CHECK(*back.standardization == *m.standardization);
    CHECK(save_linear_model(back) == save_linear_model(m));
}
