#include "ggme/baseline.hpp"

#include <cmath>

#include "ggme/errors.hpp"

namespace ggme {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Bartlett: Omega = L A A' L' with V = L L', A_ii^2 ~ chi2(alpha - i).
Matrix sample_wishart(const Matrix& v, double alpha, int p, RngStream& rng) {
    Matrix l = v.size() == 0 ? Matrix::Identity(p, p) : spd_chol(v);
    Matrix a = Matrix::Zero(p, p);
    for (int i = 0; i < p; ++i) {
        a(i, i) = std::sqrt(sample_gamma(rng, (alpha - i) / 2.0, 0.5));
        for (int k = 0; k < i; ++k) a(i, k) = sample_normal(rng);
    }
    Matrix la = l * a;
    return la * la.transpose();
}

} // namespace

PriorSampler::PriorSampler(const PriorSpec& prior, int p, long reject_cap)
    : prior_(prior), p_(p), reject_cap_(reject_cap) {
    if (p < 1) throw DimensionError("prior sampler: dimension must be positive");
    if (const auto* gw = std::get_if<GWishartPrior>(&prior_))
        chain_.emplace(*gw);
}

std::optional<Matrix> PriorSampler::draw(RngStream& rng) {
    if (const auto* w = std::get_if<WishartPrior>(&prior_))
        return sample_wishart(w->v, w->alpha, p_, rng);
    if (chain_) {
        // warm the Gibbs chain once, then one sweep per draw
        const int warm = chain_warm_ ? 1 : 200;
        chain_warm_ = true;
        for (int i = 0; i < warm; ++i) chain_->sweep(rng);
        return chain_->state();
    }
    // BGL / GHS: element-wise draws with SPD rejection
    double lambda = 0.0;
    bool ghs = false;
    if (const auto* b = std::get_if<BglPrior>(&prior_)) lambda = b->lambda;
    if (const auto* h = std::get_if<GhsPrior>(&prior_)) { lambda = h->lambda; ghs = true; }
    for (long trial = 0; trial < reject_cap_; ++trial) {
        Matrix om(p_, p_);
        for (int j = 0; j < p_; ++j) {
            om(j, j) = sample_exponential(rng, lambda / 2.0);
            for (int i = 0; i < j; ++i) {
                double x;
                if (ghs) {
                    double c = sample_half_cauchy(rng);
                    x = sample_normal(rng) * c / lambda;
                } else {
                    double e = sample_exponential(rng, lambda);
                    x = rng.uniform() < 0.5 ? -e : e;
                }
                om(i, j) = om(j, i) = x;
            }
        }
        if (spd_check(om).ok) return om;
    }
    return std::nullopt;
}

BaselineResult harmonic_mean(std::span<const double> loglik_draws) {
    BaselineResult r;
    r.method = "harmonic_mean";
    r.draws_used = static_cast<long>(loglik_draws.size());
    if (loglik_draws.empty()) { r.failed = true; return r; }
    std::vector<double> neg(loglik_draws.size());
    for (size_t i = 0; i < neg.size(); ++i) neg[i] = -loglik_draws[i];
    r.log_marginal = -log_mean_exp(neg);
    r.se = batch_se_log_mean_exp(neg);
    r.failed = !std::isfinite(r.log_marginal);
    return r;
}

BaselineResult harmonic_mean_evidence(const Matrix& y, const PriorSpec& prior,
                                      int m, int burnin, RngStream& rng) {
    auto draws = posterior_omega_draws(y, prior, m, burnin, rng);
    std::vector<double> ll(draws.size());
    for (size_t i = 0; i < draws.size(); ++i) ll[i] = gaussian_loglik(y, draws[i]);
    return harmonic_mean(ll);
}

BaselineResult ais(const Matrix& y, const PriorSpec& prior, int m, RngStream& rng) {
    BaselineResult r;
    r.method = "ais";
    const int p = static_cast<int>(y.cols());
    const int n_temp = 100; // t = 0.01, ..., 1.00
    PriorSampler ps(prior, p);
    std::vector<double> logw;
    logw.reserve(m);
    for (int run = 0; run < m; ++run) {
        auto om0 = ps.draw(rng);
        if (!om0) { logw.push_back(kNegInf); continue; }
        Matrix om = *om0;
        double ll = gaussian_loglik(y, om);
        double w = 0.0;
        for (int k = 1; k <= n_temp; ++k) {
            const double t = k / static_cast<double>(n_temp);
            w += (1.0 / n_temp) * ll;
            // one independence Metropolis step with a prior proposal
            auto cand = ps.draw(rng);
            if (cand) {
                double llc = gaussian_loglik(y, *cand);
                if (std::log(rng.uniform()) < t * (llc - ll)) { om = *cand; ll = llc; }
            }
            ++r.draws_used;
        }
        logw.push_back(w);
    }
    r.log_marginal = log_mean_exp(logw);
    r.se = batch_se_log_mean_exp(logw, std::min<int>(20, m));
    // the estimate is the average of the linear-scale weights; once that
    // average underflows double precision the method has genuinely failed
    if (r.log_marginal < std::log(std::numeric_limits<double>::min()))
        r.log_marginal = kNegInf;
    r.failed = !std::isfinite(r.log_marginal);
    if (r.failed) { r.log_marginal = kNegInf; r.se = 0.0; }
    return r;
}

BaselineResult nested_sampling(const Matrix& y, const PriorSpec& prior, int m, RngStream& rng) {
    BaselineResult r;
    r.method = "nested_sampling";
    const int p = static_cast<int>(y.cols());
    const double ll_floor = std::log(std::numeric_limits<double>::min());
    PriorSampler ps(prior, p, 1000);
    std::vector<Matrix> live;
    std::vector<double> ll(m, kNegInf);
    live.reserve(m);
    // fill the live set, dropping below-machine-precision likelihoods
    long tries = 0;
    while (static_cast<int>(live.size()) < m && tries < 1000000) {
        ++tries;
        auto om = ps.draw(rng);
        if (!om) continue;
        double l = gaussian_loglik(y, *om);
        if (l < ll_floor) continue;
        ll[live.size()] = l;
        live.push_back(std::move(*om));
        ++r.draws_used;
    }
    if (static_cast<int>(live.size()) < m) { r.failed = true; return r; }
    const double logr = std::log(m / (m + 1.0));
    std::vector<double> terms;
    int done = 0;
    for (int i = 1; i <= m; ++i) {
        int worst = 0;
        for (int j = 1; j < m; ++j)
            if (ll[j] < ll[worst]) worst = j;
        // shell weight X_{i-1} - X_i with X_i = (m/(m+1))^i
        const double logw = (i - 1) * logr + std::log(1.0 / (m + 1.0));
        terms.push_back(ll[worst] + logw);
        // constrained replacement by prior rejection
        bool replaced = false;
        for (long t = 0; t < 200000; ++t) {
            auto om = ps.draw(rng);
            if (!om) continue;
            double l = gaussian_loglik(y, *om);
            ++r.draws_used;
            if (l > ll[worst] && l >= ll_floor) {
                live[worst] = std::move(*om);
                ll[worst] = l;
                replaced = true;
                break;
            }
        }
        done = i;
        if (!replaced) break;
    }
    // remaining live-point mass
    terms.push_back(log_mean_exp(ll) + done * logr);
    r.log_marginal = log_sum_exp(terms);
    if (std::isfinite(r.log_marginal)) {
        // information-based error bar: se ~ sqrt(H / m) in log evidence
        double h = 0.0;
        for (size_t i = 0; i + 1 < terms.size(); ++i) {
            double frac = std::exp(terms[i] - r.log_marginal);
            // terms[i] = ll_i + logw_i; recover ll_i from the shell weight
            double ll_i = terms[i] - ((double)i * logr + std::log(1.0 / (m + 1.0)));
            h += frac * (ll_i - r.log_marginal);
        }
        // the remaining live-point mass carries information too; without it
        // short runs (where that mass dominates) report a near-zero H
        h += std::exp(terms.back() - r.log_marginal) * (log_mean_exp(ll) - r.log_marginal);
        r.se = std::sqrt(std::max(h, 0.0) / m);
    }
    r.failed = !std::isfinite(r.log_marginal);
    if (r.failed) { r.log_marginal = kNegInf; r.se = 0.0; }
    return r;
}

} // namespace ggme
