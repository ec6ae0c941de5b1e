#include "oracle/reference.hpp"
#include "support.hpp"

#include <netinfer/error.hpp>
#include <netinfer/feature_select.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace netinfer;

TEST_SUITE("feature_select") {

TEST_CASE("linear importance equals squared primal weights") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 10; ++t) {
        const Matrix X = test::random_matrix(rng, 12, 4);
        const Vector y = X.col(1) * 2.0 - X.col(3) + 0.1 * test::random_vector(rng, 12);
        const SvrModel m = fit_svr(X, y, KernelSpec::linear(), {.C = 10.0, .tol = 1e-9});
        const Vector got = importance_scores(m);
        const Vector want = oracle::linear_importance(m);
        for (Eigen::Index j = 0; j < 4; ++j) CHECK(got(j) == doctest::Approx(want(j)).epsilon(1e-8));
    }
}

TEST_CASE("strong signals rank first") {
    std::mt19937_64 rng(37);
    const Matrix X = test::random_matrix(rng, 20, 5);
    const Vector y = 3.0 * X.col(2) - 1.5 * X.col(0);
    for (const KernelSpec& k : {KernelSpec::linear(), KernelSpec::rbf(0.2)}) {
        const Ranking r = rank_features(X, y, k, {.C = 10.0});
        CHECK(r.order[0] == 2);
        CHECK(r.order[1] == 0);
    }
}

TEST_CASE("ranking is stable on ties") {
    Vector s(5);
    s << 1.0, 3.0, 1.0, 3.0, 0.0;
    const Ranking r = rank_by_scores(s);
    CHECK(r.order == std::vector<std::size_t>{1, 3, 0, 2, 4});
}

TEST_CASE("select_kopt returns the smallest 1-based argmin") {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> a{3.0, 1.0, 1.0, 2.0};
    CHECK(select_kopt(a) == 2);
    const std::vector<double> b{inf, inf, 0.5};
    CHECK(select_kopt(b) == 3);
    const std::vector<double> c{0.1};
    CHECK(select_kopt(c) == 1);
    const std::vector<double> bad{1.0, NAN};
    CHECK_THROWS_AS(select_kopt(bad), InvalidInput);
    CHECK_THROWS_AS(select_kopt(std::vector<double>{}), InvalidInput);
}

TEST_CASE("prefix loocv matches refitting on feature subsets") {
    std::mt19937_64 rng(41);
    const Matrix X = test::random_matrix(rng, 8, 3);
    const Vector y = X.col(0) - X.col(2) + 0.2 * test::random_vector(rng, 8);
    const SvrParams params{.C = 2.0, .epsilon = 0.1, .tol = 1e-10};
    for (const KernelSpec& k : {KernelSpec::linear(), KernelSpec::rbf(0.5), KernelSpec::sigmoid(0.2),
                                KernelSpec::polynomial(0.4, 2)}) {
        const Ranking r = rank_features(X, y, k, params);
        const Vector fast = prefix_loocv_errors(X, y, r, k, params);
        const auto slow = oracle::prefix_loocv_by_refit(X, y, r.order, k, params);
        for (std::size_t i = 0; i < slow.size(); ++i)
            CHECK(fast(static_cast<Eigen::Index>(i)) == doctest::Approx(slow[i]).epsilon(1e-7));
    }
}

TEST_CASE("prefixes beyond max_prefix are not fitted") {
    std::mt19937_64 rng(43);
    const Matrix X = test::random_matrix(rng, 8, 4);
    const Vector y = test::random_vector(rng, 8);
    const Ranking r = rank_by_scores(Vector::LinSpaced(4, 4.0, 1.0));
    const Vector e = prefix_loocv_errors(X, y, r, KernelSpec::linear(), {}, 2);
    CHECK(std::isfinite(e(0)));
    CHECK(std::isfinite(e(1)));
    CHECK(std::isinf(e(2)));
    CHECK(std::isinf(e(3)));
}

TEST_CASE("intercept-only loocv closed form") {
    Vector y(4);
    y << 1.0, 2.0, 3.0, 6.0;
    // Held-out residuals: 1-11/3, 2-10/3, 3-3, 6-2.
    const double want = (std::pow(1.0 - 11.0 / 3.0, 2) + std::pow(2.0 - 10.0 / 3.0, 2) + 0.0 + 16.0) / 4.0;
    CHECK(intercept_only_loocv(y) == doctest::Approx(want));
    CHECK(intercept_only_loocv(Vector::Constant(5, 2.0)) == 0.0);
}

}
