#pragma once

#include <variant>

#include "ggme/dist.hpp"
#include "ggme/graph.hpp"
#include "ggme/linalg.hpp"

namespace ggme {

// Omega ~ W_p(V, alpha), density ∝ |Omega|^{(alpha-p-1)/2} exp(-tr(V^{-1} Omega)/2).
struct WishartPrior {
    double alpha = 3.0;
    Matrix v; // scale matrix; empty means identity
};

// Off-diagonals double-exponential(lambda), diagonals Exp(lambda/2), PD-truncated.
struct BglPrior {
    double lambda = 1.0;
};

// Off-diagonals horseshoe with global scale 1/lambda, diagonals Exp(lambda/2).
struct GhsPrior {
    double lambda = 1.0;
};

// Density ∝ |Omega|^alpha exp(-tr(V Omega)/2) on the cone M+(G).
// Note the exponent convention: alpha is the *raw* power of |Omega|.
struct GWishartPrior {
    double alpha = 1.0;
    Matrix v;
    Graph g;
};

using PriorSpec = std::variant<WishartPrior, BglPrior, GhsPrior, GWishartPrior>;

// |Omega|^a exp(-tr(V Omega)/2) on the complete graph is W_p(V^{-1}, 2a+p+1).
double gwishart_wishart_df(double alpha_gw, int p);

// ---------- conditional prior factors (term III building blocks) ----------

// Wishart(I, step_alpha) step: log N(beta | 0, omega_jj I) + log Gamma(omega_jj | step_alpha/2, 1/2).
double wishart_term_iii(const Vector& beta, double omega_jj, double step_alpha);

// Joint BGL prior log density at Omega, up to its lambda-free normalizing constant.
double bgl_prior_logdensity(const Matrix& omega, double lambda);

// Joint GHS prior log density (up to constant); off-diagonal horseshoe marginals
// approximated by Monte Carlo over the half-Cauchy scale.
double ghs_prior_logdensity(const Matrix& omega, double lambda, int mc_draws, RngStream& rng,
                            double* mc_se = nullptr);

// One telescoping step of the G-Wishart conditional prior at the reduced
// column (beta_tilde, omega_jj). v_block is the leading j x j block of V in
// the working order, free/pinned partition the first j-1 indices, and
// beta_tilde holds the full j-1 off-diagonal values (pinned entries included).
// Covers the top step (pinned values all zero -> gamma), middle steps
// (normal x GIG) and the base step j=1 (pure gamma).
double gwishart_term_iii_step(const Vector& beta_tilde, double omega_jj,
                              const Matrix& v_block, double alpha,
                              const std::vector<int>& free_idx,
                              const std::vector<int>& pinned_idx);

// ---------- latent scale updates (BGL/GHS) ----------

// Per-pair mixing state. `var(i,j)` is the conditional prior variance of
// omega_ij used by the Gibbs column updates.
struct MixingLatents {
    Matrix var; // symmetric, diagonal unused
    Matrix nu;  // GHS auxiliary; unused for BGL
};

MixingLatents init_latents(int p);
// BGL: 1/tau_ij | omega ~ InvGaussian(sqrt(lambda^2/omega^2), lambda^2); the
// omega=0 limit falls back to the Exp(lambda^2/2) prior refresh.
void update_latents_bgl(MixingLatents& lat, const Matrix& omega, double lambda, RngStream& rng);
// GHS cascade: tau2 | nu, omega ~ IG(1, 1/nu + lambda^2 omega^2 / 2),
// nu | tau2 ~ IG(1, 1 + 1/tau2); var = tau2 / lambda^2.
void update_latents_ghs(MixingLatents& lat, const Matrix& omega, double lambda, RngStream& rng);

// ---------- G-Wishart prior sampler (column-wise Gibbs) ----------

class GWishartChain {
  public:
    GWishartChain(const GWishartPrior& prior);
    void sweep(RngStream& rng);
    const Matrix& state() const { return w_; }

  private:
    GWishartPrior prior_;
    Matrix w_;
};

} // namespace ggme
