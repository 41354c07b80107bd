#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ggme/evidence.hpp"
#include "ggme/io.hpp"
#include "ggme/samplers.hpp"

using namespace ggme;

namespace {

Matrix toy_data(int n, int p, int seed) {
    RngStream rng(seed, 0);
    Matrix y(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) y(i, j) = sample_normal(rng);
    return y;
}

} // namespace

TEST_CASE("posterior mean matches Wishart conjugacy, p=1") {
    // prior W_1(v, a) = Gamma(a/2, 1/(2v)); posterior Gamma((a+n)/2, (1/v + s)/2)
    Matrix y = toy_data(8, 1, 2);
    double s = y.squaredNorm();
    double a = 3.0, v = 0.5;
    Matrix vmat(1, 1);
    vmat << v;
    RngStream rng(9, 0);
    auto draws = posterior_omega_draws(y, WishartPrior{a, vmat}, 50000, 500, rng);
    double mean = 0.0;
    for (const auto& d : draws) mean += d(0, 0);
    mean /= (double)draws.size();
    double want = (a + 8.0) / (1.0 / v + s);
    CHECK(mean == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("posterior mean matches Wishart conjugacy, p=2") {
    Matrix y = toy_data(12, 2, 5);
    Matrix s = y.transpose() * y;
    double a = 4.0;
    RngStream rng(1, 0);
    auto draws = posterior_omega_draws(y, WishartPrior{a, Matrix::Identity(2, 2)}, 50000, 500,
                                       rng);
    Matrix mean = Matrix::Zero(2, 2);
    for (const auto& d : draws) mean += d;
    mean /= (double)draws.size();
    Matrix want = (a + 12.0) * spd_inverse(Matrix::Identity(2, 2) + s);
    CHECK((mean - want).cwiseAbs().maxCoeff() < 0.05 * want.cwiseAbs().maxCoeff());
}

TEST_CASE("posterior draws keep exact zeros on an empty G-Wishart graph") {
    Matrix y = toy_data(10, 3, 3);
    Graph g = Graph::complete(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) g.set_edge(i, j, false);
    RngStream rng(6, 0);
    auto draws = posterior_omega_draws(y, GWishartPrior{1.0, Matrix::Identity(3, 3), g}, 500,
                                       100, rng);
    for (const auto& d : draws) {
        CHECK(d(0, 1) == 0.0);
        CHECK(d(0, 2) == 0.0);
        CHECK(d(1, 2) == 0.0);
        CHECK(spd_check(d).ok);
    }
}

TEST_CASE("run_chib_step base case equals the exact gamma ordinate") {
    Matrix s(1, 1);
    s << 3.7;
    StepPrior sp;
    sp.kind = PriorKind::wishart;
    sp.gamma_shape = 4.0;
    sp.f = Matrix::Zero(1, 1);
    RngStream rng(11, 0);
    auto out = run_chib_step(s, 6, sp, 2000, 200, rng);
    CHECK(out.se_iv == 0.0);
    CHECK(out.log_iv ==
          doctest::Approx(gamma_logpdf(out.omega_jj_star, 4.0, 0.5 * (3.7 + 1.0))).epsilon(1e-12));
}

TEST_CASE("run_chib_step is stable when the chain doubles") {
    Matrix y = toy_data(15, 3, 8);
    Matrix s = y.transpose() * y;
    StepPrior sp;
    sp.kind = PriorKind::wishart;
    sp.gamma_shape = 0.5 * (15 + 5.0 - 3 - 1) + 1.0; // n=15, alpha=5, p=3
    sp.f = Matrix::Zero(3, 3);
    RngStream r1(21, 0), r2(22, 0);
    auto a = run_chib_step(s, 15, sp, 4000, 500, r1);
    auto b = run_chib_step(s, 15, sp, 8000, 500, r2);
    double se = std::sqrt(a.se_iv * a.se_iv + b.se_iv * b.se_iv);
    CHECK(std::abs(a.log_iv - b.log_iv) < 4.0 * se + 0.02);
}

TEST_CASE("run_chib_step is deterministic in the seed") {
    Matrix y = toy_data(10, 3, 4);
    Matrix s = y.transpose() * y;
    StepPrior sp;
    sp.kind = PriorKind::bgl;
    sp.lambda = 1.0;
    sp.gamma_shape = 0.5 * 10 + 1.0;
    sp.f = Matrix::Zero(3, 3);
    RngStream r1(33, 7), r2(33, 7);
    auto a = run_chib_step(s, 10, sp, 800, 100, r1);
    auto b = run_chib_step(s, 10, sp, 800, 100, r2);
    CHECK(a.log_iv == b.log_iv);
    CHECK(a.omega_jj_star == b.omega_jj_star);
    CHECK(a.beta_star == b.beta_star);
}

TEST_CASE("run_chib_step only sees the data through the scatter") {
    // two data sets with identical S give identical results
    Matrix y = toy_data(9, 2, 13);
    Matrix s = y.transpose() * y;
    Matrix y2 = -y; // same scatter
    Matrix s2 = y2.transpose() * y2;
    CHECK((s - s2).cwiseAbs().maxCoeff() == 0.0);
    StepPrior sp;
    sp.kind = PriorKind::ghs;
    sp.lambda = 2.0;
    sp.gamma_shape = 0.5 * 9 + 1.0;
    sp.f = Matrix::Zero(2, 2);
    RngStream r1(40, 0), r2(40, 0);
    auto a = run_chib_step(s, 9, sp, 500, 100, r1);
    auto b = run_chib_step(s2, 9, sp, 500, 100, r2);
    CHECK(a.log_iv == b.log_iv);
}

TEST_CASE("batch_se_log_mean_exp") {
    // constant input: zero spread
    std::vector<double> c(400, -1.3);
    CHECK(batch_se_log_mean_exp(c) == doctest::Approx(0.0));
    // too short to form batches: reported as zero
    std::vector<double> tiny(10, 0.0);
    CHECK(batch_se_log_mean_exp(tiny) == 0.0);
    // iid normal logs: se should shrink like 1/sqrt(n)
    RngStream rng(2, 0);
    std::vector<double> a(1000), b(16000);
    for (auto& x : a) x = sample_normal(rng);
    for (auto& x : b) x = sample_normal(rng);
    double sa = batch_se_log_mean_exp(a), sb = batch_se_log_mean_exp(b);
    CHECK(sa > 0.0);
    CHECK(sb < sa);
}
