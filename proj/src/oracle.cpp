#include "ggme/oracle.hpp"

#include "ggme/samplers.hpp"

namespace ggme {

namespace {
// iid delta-method se of log_mean_exp
double se_of_log_mean(const std::vector<double>& logs) {
    double m = log_mean_exp(logs);
    if (!std::isfinite(m)) return std::numeric_limits<double>::infinity();
    double sw2 = 0.0;
    for (double v : logs) {
        double w = std::exp(v - m);
        sw2 += (w - 1.0) * (w - 1.0);
    }
    double n = (double)logs.size();
    return std::sqrt(sw2 / (n - 1.0) / n);
}
} // namespace

double wishart_log_marginal_exact(const Matrix& s, const Matrix& v, double alpha, int n) {
    const int p = (int)s.rows();
    if (v.rows() != p || s.cols() != p) throw DimensionError("wishart_log_marginal_exact: dims");
    Matrix l = spd_chol(v);
    Matrix inner = Matrix::Identity(p, p) + l.transpose() * s * l; // |I + V^{1/2} S V^{1/2}|
    double logdet_v = 0.0;
    for (int i = 0; i < p; ++i) logdet_v += 2.0 * std::log(l(i, i));
    return -0.5 * n * p * std::log(M_PI) + lmgamma(p, 0.5 * (alpha + n)) -
           lmgamma(p, 0.5 * alpha) - 0.5 * (alpha + n) * spd_logdet(symmetrize(inner)) +
           0.5 * n * logdet_v;
}

OracleResult bgl_log_marginal_p2(const Matrix& s, double lambda, int n,
                                 long mc_draws, RngStream& rng) {
    if (s.rows() != 2 || s.cols() != 2) throw DimensionError("bgl_log_marginal_p2: need 2x2 scatter");
    const double s11 = s(0, 0), s22 = s(1, 1), a12 = std::abs(s(0, 1));
    const double r = (lambda + s11) * (lambda + s22) - (lambda - a12) * (lambda - a12);
    if (!(r > 0.0)) throw DomainError("bgl_log_marginal_p2: nonpositive gamma rate");

    const double shape = 0.5 * (n + 3);
    std::vector<double> logs((std::size_t)mc_draws);
    for (long i = 0; i < mc_draws; ++i) {
        double t = sample_gamma(rng, shape, 0.5 * r);
        double rt = std::sqrt(t);
        double z1 = lambda * rt * (a12 / lambda - 1.0);
        double z2 = -lambda * rt * (a12 / lambda + 1.0);
        logs[(std::size_t)i] =
            log_sum_exp(normal_logcdf(z1), 2.0 * lambda * a12 * t + normal_logcdf(z2));
    }
    OracleResult out;
    out.value = -std::log(c_bgl_constant()) + 3.0 * std::log(lambda) +
                std::lgamma(0.5 * n + 1.0) + std::lgamma(shape) -
                (n - 0.5) * std::log(M_PI) - shape * std::log(r) + log_mean_exp(logs);
    out.mc_se = se_of_log_mean(logs);
    return out;
}

OracleResult ghs_log_marginal_p2(const Matrix& s, double lambda, int n,
                                 long mc_draws, double quad_tol, RngStream& rng) {
    if (s.rows() != 2 || s.cols() != 2) throw DimensionError("ghs_log_marginal_p2: need 2x2 scatter");
    if (!(quad_tol > 0.0)) throw DomainError("ghs_log_marginal_p2: quad_tol must be positive");
    const double s11 = s(0, 0), s22 = s(1, 1), s12 = s(0, 1);

    auto log_f_of_t = [&](double t) {
        // F(t) = int_0^{t/(lambda+s11)} exp(m s12^2/2) m^{-1/2} (...)^{-1} dm,
        // with m = u^2 killing the endpoint singularity; scaled by the peak
        // exponent so the quadrature runs on O(1) values.
        const double upper_m = t / (lambda + s11);
        const double u_hi = std::sqrt(upper_m);
        const double emax = 0.5 * upper_m * s12 * s12;
        auto g = [&](double u) {
            double m = u * u;
            double denom = m + (t - m * (lambda + s11)) / (lambda * lambda * t);
            return 2.0 * std::exp(0.5 * m * s12 * s12 - emax) / denom;
        };
        double scale = std::max({1.0, g(0.0), g(0.5 * u_hi), g(u_hi)});
        double val = integrate(g, 0.0, u_hi, quad_tol * scale * std::max(u_hi, 1e-12));
        if (!(val > 0.0) || !std::isfinite(val))
            throw QuadratureFailure("ghs_log_marginal_p2: inner integral failed");
        return emax + std::log(val);
    };

    const double shape = 0.5 * n + 1.0;
    std::vector<double> logs((std::size_t)mc_draws);
    for (long i = 0; i < mc_draws; ++i) {
        double t = sample_gamma(rng, shape, 0.5 * (lambda + s22));
        logs[(std::size_t)i] = log_f_of_t(t);
    }
    OracleResult out;
    out.value = -std::log(kCGhs) + std::log(lambda) + 2.0 * std::lgamma(shape) -
                (n + 1.0) * std::log(M_PI) -
                shape * std::log((lambda + s11) * (lambda + s22)) + log_mean_exp(logs);
    out.mc_se = se_of_log_mean(logs);
    return out;
}

double c_bgl_constant() {
    // int sqrt(x) Gamma(1/2, x) dx with x = u^2; Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))
    auto f = [](double u) { return 2.0 * std::sqrt(M_PI) * u * u * std::erfc(u); };
    return integrate(f, 0.0, 10.0, 1e-12);
}

double c_ghs_constant(long mc_draws, RngStream& rng) {
    double acc = 0.0;
    for (long i = 0; i < mc_draws; ++i) {
        double tau = sample_half_cauchy(rng);
        double m = sample_exponential(rng, 0.5);
        acc += std::sqrt(m / (m + tau * tau));
    }
    return acc / (double)mc_draws;
}

double gwishart_complete_oracle(const Matrix& s, const Matrix& v_gw, double alpha_gw, int n) {
    const int p = (int)s.rows();
    return wishart_log_marginal_exact(s, spd_inverse(v_gw), gwishart_wishart_df(alpha_gw, p), n);
}

} // namespace ggme
