#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ggme/oracle.hpp"
#include "ggme/linalg.hpp"
#include "ggme/rng.hpp"

using namespace ggme;

TEST_CASE("wishart marginal pinned by 1-dim quadrature") {
    // p=1: f(y) = int prod N(y_i; 0, 1/w) Gamma(w; a/2, 1/(2v)) dw
    double s = 2.4, v = 0.7, alpha = 3.0;
    int n = 6;
    auto lpost = [&](double w) {
        double ll = 0.5 * n * (std::log(w) - kLogTwoPi) - 0.5 * w * s;
        return ll + gamma_logpdf(w, 0.5 * alpha, 0.5 / v);
    };
    // normalize by the posterior mode so the quadrature sees an O(1) peak
    double wm = (0.5 * n + 0.5 * alpha - 1.0) / (0.5 * s + 0.5 / v);
    double l0 = lpost(wm);
    double z = integrate([&](double w) { return std::exp(lpost(w) - l0); }, wm * 1e-3,
                         wm * 60.0, 1e-12);
    Matrix sm(1, 1), vm(1, 1);
    sm << s;
    vm << v;
    CHECK(wishart_log_marginal_exact(sm, vm, alpha, n) ==
          doctest::Approx(std::log(z) + l0).epsilon(1e-8));
}

TEST_CASE("wishart marginal agrees with prior-mean Monte Carlo, p=2") {
    // f(y) = E_prior[ likelihood ], Omega ~ W_2(V, alpha)
    Matrix v(2, 2);
    v << 0.6, 0.15, 0.15, 0.8;
    double alpha = 5.0;
    int n = 4;
    RngStream rng(3, 0);
    Matrix l = spd_chol(v);
    Matrix y(n, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 2; ++j) y(i, j) = sample_normal(rng);
    Matrix s = y.transpose() * y;

    const long m = 400000;
    std::vector<double> logs(m);
    for (long it = 0; it < m; ++it) {
        // Bartlett draw from W_2(V, alpha)
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = std::sqrt(sample_gamma(rng, 0.5 * alpha, 0.5));
        a(1, 1) = std::sqrt(sample_gamma(rng, 0.5 * (alpha - 1.0), 0.5));
        a(1, 0) = sample_normal(rng);
        Matrix la = l * a;
        Matrix om = la * la.transpose();
        logs[it] = 0.5 * n * (spd_logdet(om) - 2.0 * kLogTwoPi) -
                   0.5 * (om * s).trace();
    }
    double mc = log_mean_exp(logs);
    double exact = wishart_log_marginal_exact(s, v, alpha, n);
    CHECK(std::abs(mc - exact) < 0.05);
}

TEST_CASE("bgl oracle symmetry and self-consistency") {
    Matrix s(2, 2);
    s << 3.0, -1.2, -1.2, 5.5;
    double lambda = 1.0;
    int n = 5;
    RngStream r1(1, 0), r2(2, 0), r3(3, 0);
    auto a = bgl_log_marginal_p2(s, lambda, n, 100000, r1);
    // swapping the two coordinates changes nothing
    Matrix sw(2, 2);
    sw << 5.5, -1.2, -1.2, 3.0;
    auto b = bgl_log_marginal_p2(sw, lambda, n, 100000, r2);
    CHECK(std::abs(a.value - b.value) < 4.0 * std::hypot(a.mc_se, b.mc_se) + 0.005);
    // more draws agree within the combined error
    auto c = bgl_log_marginal_p2(s, lambda, n, 1000000, r3);
    CHECK(std::abs(a.value - c.value) < 4.0 * std::hypot(a.mc_se, c.mc_se) + 0.005);
    CHECK(c.mc_se < a.mc_se);
    // sign of s12 is irrelevant
    Matrix sp = s;
    sp(0, 1) = sp(1, 0) = 1.2;
    RngStream r4(1, 0);
    auto d = bgl_log_marginal_p2(sp, lambda, n, 100000, r4);
    CHECK(d.value == doctest::Approx(a.value));
}

TEST_CASE("bgl oracle is continuous in s12 near lambda") {
    // the per-pair absolute value kink must not create a jump
    double lambda = 1.5;
    int n = 4;
    auto at = [&](double s12) {
        Matrix s(2, 2);
        s << 2.0, s12, s12, 3.0;
        RngStream r(9, 0);
        return bgl_log_marginal_p2(s, lambda, n, 200000, r).value;
    };
    double lo = at(lambda - 1e-4), hi = at(lambda + 1e-4);
    CHECK(std::abs(hi - lo) < 0.02);
}

TEST_CASE("ghs oracle symmetry and stability") {
    Matrix s(2, 2);
    s << 2.2, 0.9, 0.9, 4.0;
    double lambda = 1.0;
    int n = 5;
    RngStream r1(4, 0), r2(5, 0);
    auto a = ghs_log_marginal_p2(s, lambda, n, 20000, 1e-8, r1);
    Matrix sw(2, 2);
    sw << 4.0, 0.9, 0.9, 2.2;
    auto b = ghs_log_marginal_p2(sw, lambda, n, 20000, 1e-8, r2);
    CHECK(std::abs(a.value - b.value) < 4.0 * std::hypot(a.mc_se, b.mc_se) + 0.01);
    // negating s12 changes nothing
    Matrix sn = s;
    sn(0, 1) = sn(1, 0) = -0.9;
    RngStream r3(4, 0);
    auto c = ghs_log_marginal_p2(sn, lambda, n, 20000, 1e-8, r3);
    CHECK(c.value == doctest::Approx(a.value));
    // more draws agree
    RngStream r4(6, 0);
    auto d = ghs_log_marginal_p2(s, lambda, n, 80000, 1e-8, r4);
    CHECK(std::abs(a.value - d.value) < 4.0 * std::hypot(a.mc_se, d.mc_se) + 0.01);
}

TEST_CASE("normalizing constants") {
    CHECK(c_bgl_constant() == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    RngStream rng(0, 0);
    double c = c_ghs_constant(2000000, rng);
    CHECK(c == doctest::Approx(kCGhs).epsilon(0.01));
    CHECK(c > 0.6);
    CHECK(c < 0.7);
}

TEST_CASE("gwishart complete-graph oracle equals the mapped Wishart") {
    Matrix s(3, 3);
    s << 4.0, 1.0, 0.5, 1.0, 3.0, -0.2, 0.5, -0.2, 5.0;
    Matrix v_gw = 3.0 * Matrix::Identity(3, 3);
    double alpha_gw = 2.0;
    int n = 7;
    double got = gwishart_complete_oracle(s, v_gw, alpha_gw, n);
    double want = wishart_log_marginal_exact(s, spd_inverse(v_gw), 2.0 * alpha_gw + 3 + 1, n);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("gwishart oracle pinned by 1-dim quadrature") {
    // p=1 complete graph: prior w^a exp(-v w / 2) = Gamma(a+1, v/2)
    double s = 3.1, v = 2.0, a = 1.5;
    int n = 5;
    auto lpost = [&](double w) {
        double ll = 0.5 * n * (std::log(w) - kLogTwoPi) - 0.5 * w * s;
        return ll + gamma_logpdf(w, a + 1.0, 0.5 * v);
    };
    double wm = (0.5 * n + a) / (0.5 * s + 0.5 * v);
    double l0 = lpost(wm);
    double z = integrate([&](double w) { return std::exp(lpost(w) - l0); }, wm * 1e-3,
                         wm * 60.0, 1e-12);
    Matrix sm(1, 1), vm(1, 1);
    sm << s;
    vm << v;
    CHECK(gwishart_complete_oracle(sm, vm, a, n) ==
          doctest::Approx(std::log(z) + l0).epsilon(1e-8));
}
