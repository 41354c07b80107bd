#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "ggme/linalg.hpp"
#include "ggme/rng.hpp"

namespace ggme {

inline constexpr double kLogTwoPi = 1.8378770664093454836;

// ---------- stable reductions ----------

double log_sum_exp(std::span<const double> xs);
double log_mean_exp(std::span<const double> xs);
inline double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// ---------- special functions ----------

// log of the multivariate gamma function Gamma_p(a); requires a > (p-1)/2.
double lmgamma(int p, double a);

// Standard normal CDF, accurate into the deep lower tail.
double normal_cdf(double z);
// log Phi(z); asymptotic expansion below z ~ -26 where erfc underflows.
double normal_logcdf(double z);

// log K_nu(x) for nu >= 0, x > 0 (modified Bessel, second kind).
// Works where K itself over/underflows (small x & large order, x up to ~700).
double log_bessel_k(double nu, double x);
// Linear-scale value; may overflow to +inf for tiny x and large order.
double bessel_k(double nu, double x);

// Adaptive Simpson quadrature of f on [a,b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-11);

// ---------- log densities ----------

double normal_logpdf(double x, double mean, double var);
// MVN with covariance cov (SPD).
double mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov);
// Gamma in shape/rate form.
double gamma_logpdf(double x, double shape, double rate);
double inverse_gamma_logpdf(double x, double shape, double scale);
// Density of shift + Gamma(shape, rate) at x; -inf for x <= shift.
double shifted_trunc_gamma_logpdf(double x, double shift, double shape, double rate);
// Generalized inverse Gaussian with kernel x^{q-1} exp(-(a x + b / x) / 2).
// b < 1e-300 degenerates to Gamma(q, a/2) when allow_gamma_limit, else throws.
double gig_logpdf(double x, double a, double b, double q, bool allow_gamma_limit = true);

// ---------- samplers ----------

double sample_normal(RngStream& rng);
double sample_exponential(RngStream& rng, double rate);
// Marsaglia-Tsang squeeze for shape >= 1, power boost below.
double sample_gamma(RngStream& rng, double shape, double rate);
double sample_inverse_gamma(RngStream& rng, double shape, double scale);
double sample_half_cauchy(RngStream& rng);
// Michael-Schucany-Haas; mean mu, shape lambda.
double sample_inverse_gaussian(RngStream& rng, double mu, double lambda);
// mean + chol(cov) z.
Vector sample_mvn(RngStream& rng, const Vector& mean, const Matrix& cov);
// Same but with the Cholesky factor already in hand.
Vector sample_mvn_chol(RngStream& rng, const Vector& mean, const Matrix& chol_lower);

} // namespace ggme
