#pragma once

#include "ggme/prior.hpp"

namespace ggme {

enum class PriorKind { wishart, bgl, ghs, gwishart };

// Everything a telescoping step needs to know about the prior, already
// reduced to the current working block of dimension d.
struct StepPrior {
    PriorKind kind = PriorKind::wishart;
    double lambda = 0.0;      // BGL / GHS
    double gw_alpha = 0.0;    // G-Wishart |Omega|^alpha exponent
    double gamma_shape = 0.0; // conditional gamma shape (constant across columns)
    Matrix v;                 // G-Wishart: leading d x d block of V
    const Graph* graph = nullptr; // G-Wishart: graph in working (permuted) order
    // Accumulated rank-one contributions of already-fixed columns, leading
    // d x d block; zero for Wishart (the reduced prior is again Wishart).
    Matrix f;
};

struct ChibStepSummary {
    Vector beta_star;     // length d-1, reduced ("tilde") coordinates
    double omega_jj_star = 0.0;
    double log_iv = 0.0;  // log f(beta* | y) + log f(omega*_jj | beta*, y)
    double se_iv = 0.0;   // batch-means MC standard error
};

// One telescoping step: unrestricted chain for the Gaussian Chib factor and
// theta*, then the restricted chain for the shifted-gamma factor.
ChibStepSummary run_chib_step(const Matrix& s_block, int n_obs, const StepPrior& prior,
                              int m, int burnin, RngStream& rng);

// Full-model posterior draws of Omega (unrestricted chain only), for the
// harmonic-mean baseline and diagnostics.
std::vector<Matrix> posterior_omega_draws(const Matrix& y, const PriorSpec& prior,
                                          int m, int burnin, RngStream& rng);

// Batch-means standard error of log_mean_exp(logs) over n_batch batches.
double batch_se_log_mean_exp(std::span<const double> logs, int n_batch = 20);

} // namespace ggme
