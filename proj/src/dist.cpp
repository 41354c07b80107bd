#include "ggme/dist.hpp"

#include <algorithm>

namespace ggme {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfLogTwoPi = 0.5 * kLogTwoPi;
} // namespace

double log_sum_exp(std::span<const double> xs) {
    if (xs.empty()) return -kInf;
    double m = -kInf;
    for (double x : xs) m = std::max(m, x);
    if (m == -kInf) return -kInf;
    if (std::isinf(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

double log_mean_exp(std::span<const double> xs) {
    if (xs.empty()) return -kInf;
    return log_sum_exp(xs) - std::log((double)xs.size());
}

double lmgamma(int p, double a) {
    if (p < 1) throw DomainError("lmgamma: p must be >= 1");
    if (!(a > 0.5 * (p - 1))) throw DomainError("lmgamma: argument must exceed (p-1)/2");
    double s = 0.25 * p * (p - 1) * std::log(M_PI);
    for (int i = 1; i <= p; ++i) s += std::lgamma(a + 0.5 * (1 - i));
    return s;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

double normal_logcdf(double z) {
    if (z > -26.0) {
        double c = normal_cdf(z);
        if (z > 8.0) return -normal_cdf(-z); // log(1-eps) ~ -eps
        return std::log(c);
    }
    // Mills-ratio asymptotic series; relative truncation error < 1e-13 here.
    double r = 1.0 / (z * z);
    double series = 1.0 + r * (-1.0 + r * (3.0 + r * (-15.0 + r * (105.0 - 945.0 * r))));
    return -0.5 * z * z - kHalfLogTwoPi - std::log(-z) + std::log(series);
}

namespace {

double log_cosh(double z) {
    z = std::abs(z);
    if (z > 20.0) return z - M_LN2;
    return std::log(std::cosh(z));
}

// Exponent of the integral representation K_nu(x) = int_0^inf exp(phi(t)) dt,
// phi(t) = -x cosh t + log cosh(nu t).
struct BesselPhi {
    double nu, x;
    double operator()(double t) const { return -x * std::cosh(t) + log_cosh(nu * t); }
    double deriv(double t) const { return -x * std::sinh(t) + nu * std::tanh(nu * t); }
};

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

double log_bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw DomainError("log_bessel_k: x must be positive");
    nu = std::abs(nu); // K_{-nu} = K_nu
    BesselPhi phi{nu, x};

    // Peak of the integrand: t* = 0 when nu^2 <= x, else interior.
    double tstar = 0.0;
    if (nu * nu > x) {
        double lo = 0.0, hi = std::asinh(nu / x);
        while (phi.deriv(hi) > 0.0) { lo = hi; hi *= 2.0; }
        for (int it = 0; it < 200 && (hi - lo) > 1e-14 * (1.0 + hi); ++it) {
            double mid = 0.5 * (lo + hi);
            (phi.deriv(mid) > 0.0 ? lo : hi) = mid;
        }
        tstar = 0.5 * (lo + hi);
    }
    double fmax = phi(tstar);

    // Upper limit: walk until the scaled integrand is negligible.
    double hi = tstar + 1.0;
    while (phi(hi) - fmax > -60.0) hi = tstar + 2.0 * (hi - tstar);

    auto g = [&](double t) { return std::exp(phi(t) - fmax); };
    // Split at the peak so the adaptive rule sees both flanks.
    double val = integrate(g, 0.0, tstar, 1e-13) + integrate(g, tstar, hi, 1e-13);
    return fmax + std::log(val);
}

double bessel_k(double nu, double x) { return std::exp(log_bessel_k(nu, x)); }

// ---------- log densities ----------

double normal_logpdf(double x, double mean, double var) {
    if (!(var > 0.0)) throw DomainError("normal_logpdf: variance must be positive");
    double z = x - mean;
    return -0.5 * (kLogTwoPi + std::log(var)) - 0.5 * z * z / var;
}

double mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov) {
    const auto d = x.size();
    if (mean.size() != d || cov.rows() != d || cov.cols() != d)
        throw DimensionError("mvn_logpdf: inconsistent dimensions");
    if (d == 0) return 0.0;
    Matrix l = spd_chol(cov);
    Vector z = l.triangularView<Eigen::Lower>().solve(x - mean);
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) logdet += std::log(l(i, i));
    return -0.5 * d * kLogTwoPi - logdet - 0.5 * z.squaredNorm();
}

double gamma_logpdf(double x, double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("gamma_logpdf: bad parameters");
    if (!(x > 0.0)) return -kInf;
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double inverse_gamma_logpdf(double x, double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) throw DomainError("inverse_gamma_logpdf: bad parameters");
    if (!(x > 0.0)) return -kInf;
    return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double shifted_trunc_gamma_logpdf(double x, double shift, double shape, double rate) {
    if (!(x > shift)) return -kInf;
    return gamma_logpdf(x - shift, shape, rate);
}

double gig_logpdf(double x, double a, double b, double q, bool allow_gamma_limit) {
    if (!(a > 0.0) || b < 0.0) throw DomainError("gig_logpdf: require a > 0, b >= 0");
    if (b < 1e-300) {
        if (!allow_gamma_limit || !(q > 0.0))
            throw DegenerateGig("gig_logpdf: b ~ 0 outside the gamma limit");
        return gamma_logpdf(x, q, 0.5 * a);
    }
    if (!(x > 0.0)) return -kInf;
    return 0.5 * q * (std::log(a) - std::log(b)) - M_LN2 -
           log_bessel_k(q, std::sqrt(a * b)) + (q - 1.0) * std::log(x) -
           0.5 * (a * x + b / x);
}

// ---------- samplers ----------

double sample_normal(RngStream& rng) {
    // Polar Box-Muller, no cached spare: one stream draw pattern per call.
    for (;;) {
        double u = 2.0 * rng.uniform() - 1.0;
        double v = 2.0 * rng.uniform() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

double sample_exponential(RngStream& rng, double rate) {
    if (!(rate > 0.0)) throw DomainError("sample_exponential: rate must be positive");
    return -std::log(rng.uniform()) / rate;
}

double sample_gamma(RngStream& rng, double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("sample_gamma: bad parameters");
    if (shape < 1.0) {
        double g = sample_gamma(rng, shape + 1.0, 1.0);
        return g * std::pow(rng.uniform(), 1.0 / shape) / rate;
    }
    // Marsaglia-Tsang
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = sample_normal(rng);
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = rng.uniform();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

double sample_inverse_gamma(RngStream& rng, double shape, double scale) {
    return scale / sample_gamma(rng, shape, 1.0);
}

double sample_half_cauchy(RngStream& rng) {
    return std::tan(0.5 * M_PI * rng.uniform());
}

double sample_inverse_gaussian(RngStream& rng, double mu, double lambda) {
    if (!(mu > 0.0) || !(lambda > 0.0)) throw DomainError("sample_inverse_gaussian: bad parameters");
    double nu = sample_normal(rng);
    double y = nu * nu;
    double x = mu + 0.5 * mu * mu * y / lambda -
               0.5 * (mu / lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    if (!(x > 0.0)) x = std::numeric_limits<double>::min();
    return rng.uniform() <= mu / (mu + x) ? x : mu * mu / x;
}

Vector sample_mvn_chol(RngStream& rng, const Vector& mean, const Matrix& chol_lower) {
    Vector z(mean.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = sample_normal(rng);
    return mean + chol_lower.triangularView<Eigen::Lower>() * z;
}

Vector sample_mvn(RngStream& rng, const Vector& mean, const Matrix& cov) {
    return sample_mvn_chol(rng, mean, spd_chol(cov));
}

} // namespace ggme
