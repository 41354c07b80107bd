#pragma once

#include <optional>
#include <string>

#include "ggme/evidence.hpp"

namespace ggme {

struct BaselineResult {
    std::string method;
    double log_marginal = -std::numeric_limits<double>::infinity();
    double se = 0.0;
    long draws_used = 0;
    bool failed = false; // -inf style failure; still a valid report
};

// Draws from the prior; BGL/GHS use element-wise draws with SPD rejection
// (nullopt when the rejection cap is hit), G-Wishart runs a Gibbs chain.
class PriorSampler {
  public:
    PriorSampler(const PriorSpec& prior, int p, long reject_cap = 1000000);
    std::optional<Matrix> draw(RngStream& rng);

  private:
    PriorSpec prior_; // held by value so callers can pass temporaries
    int p_;
    long reject_cap_;
    std::optional<GWishartChain> chain_;
    bool chain_warm_ = false;
};

// log f = -log_mean_exp(-l_i) over posterior log likelihoods.
BaselineResult harmonic_mean(std::span<const double> loglik_draws);
BaselineResult harmonic_mean_evidence(const Matrix& y, const PriorSpec& prior,
                                      int m, int burnin, RngStream& rng);

// Annealed importance sampling: geometric path over 101 temperatures
// t = 0, 0.01, ..., 1 with one prior-proposal independence-Metropolis step
// per temperature; m independent runs.
BaselineResult ais(const Matrix& y, const PriorSpec& prior, int m, RngStream& rng);

// Nested sampling with m live points, m shrinkage iterations (ratio m/(m+1))
// and constrained prior-rejection replacement.
BaselineResult nested_sampling(const Matrix& y, const PriorSpec& prior, int m, RngStream& rng);

} // namespace ggme
