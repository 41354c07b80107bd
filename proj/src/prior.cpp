#include "ggme/prior.hpp"

namespace ggme {

double gwishart_wishart_df(double alpha_gw, int p) { return 2.0 * alpha_gw + p + 1; }

double wishart_term_iii(const Vector& beta, double omega_jj, double step_alpha) {
    if (!(omega_jj > 0.0)) throw DomainError("wishart_term_iii: omega_jj must be positive");
    double out = gamma_logpdf(omega_jj, 0.5 * step_alpha, 0.5);
    const auto d = beta.size();
    if (d > 0)
        out += -0.5 * d * (kLogTwoPi + std::log(omega_jj)) - 0.5 * beta.squaredNorm() / omega_jj;
    return out;
}

double bgl_prior_logdensity(const Matrix& omega, double lambda) {
    const auto p = omega.rows();
    if (!spd_check(omega).ok) throw NotPositiveDefinite("bgl_prior_logdensity: Omega not SPD");
    double off_abs = 0.0;
    double diag = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        diag += omega(i, i);
        for (Eigen::Index j = i + 1; j < p; ++j) off_abs += std::abs(omega(i, j));
    }
    // off-diagonals are DE(lambda) with density (lambda/2) e^{-lambda|w|}
    return 0.5 * p * (p - 1) * std::log(0.5 * lambda) - lambda * off_abs +
           p * std::log(0.5 * lambda) - 0.5 * lambda * diag;
}

double ghs_prior_logdensity(const Matrix& omega, double lambda, int mc_draws, RngStream& rng,
                            double* mc_se) {
    const auto p = omega.rows();
    if (!spd_check(omega).ok) throw NotPositiveDefinite("ghs_prior_logdensity: Omega not SPD");
    if (mc_draws < 1) throw DomainError("ghs_prior_logdensity: mc_draws must be positive");
    double out = 0.0, var_acc = 0.0;
    std::vector<double> terms(mc_draws);
    for (Eigen::Index i = 0; i < p; ++i) {
        out += std::log(0.5 * lambda) - 0.5 * lambda * omega(i, i);
        for (Eigen::Index j = i + 1; j < p; ++j) {
            // omega_ij | tau ~ N(0, tau) with lambda sqrt(tau) ~ C+(0,1).
            for (int k = 0; k < mc_draws; ++k) {
                double c = sample_half_cauchy(rng);
                double var = c * c / (lambda * lambda);
                terms[k] = normal_logpdf(omega(i, j), 0.0, var);
            }
            double lme = log_mean_exp(terms);
            out += lme;
            if (mc_se) {
                // delta-method se of the log of an iid mean
                double sw = 0.0, sw2 = 0.0;
                for (double t : terms) {
                    double w = std::exp(t - lme);
                    sw += w;
                    sw2 += w * w;
                }
                double mw = sw / mc_draws;
                double vw = (sw2 - mc_draws * mw * mw) / (mc_draws - 1.0);
                var_acc += vw / (mc_draws * mw * mw);
            }
        }
    }
    if (mc_se) *mc_se = std::sqrt(var_acc);
    return out;
}

double gwishart_term_iii_step(const Vector& beta_tilde, double omega_jj,
                              const Matrix& v_block, double alpha,
                              const std::vector<int>& free_idx,
                              const std::vector<int>& pinned_idx) {
    if (!(omega_jj > 0.0)) throw DomainError("gwishart_term_iii_step: omega_jj must be positive");
    const int j = (int)v_block.rows();
    if ((int)beta_tilde.size() != j - 1 ||
        (int)(free_idx.size() + pinned_idx.size()) != j - 1)
        throw DimensionError("gwishart_term_iii_step: inconsistent dimensions");

    const double v_jj = v_block(j - 1, j - 1);
    double out = 0.0;
    // Effective gamma/GIG parameters after completing the square in the free
    // coordinates; reduces to (v_jj, |pinned|^2-form) when V has no coupling.
    double a = v_jj;
    double b = 0.0;

    if (!pinned_idx.empty()) {
        Vector pin = subvector(beta_tilde, pinned_idx);
        Matrix v_pp = submatrix(v_block, pinned_idx);
        b = pin.dot(v_pp * pin);
        if (!free_idx.empty()) {
            Matrix v_ff = submatrix(v_block, free_idx);
            Matrix v_fp((Eigen::Index)free_idx.size(), (Eigen::Index)pinned_idx.size());
            for (std::size_t r = 0; r < free_idx.size(); ++r)
                for (std::size_t c = 0; c < pinned_idx.size(); ++c)
                    v_fp((Eigen::Index)r, (Eigen::Index)c) = v_block(free_idx[r], pinned_idx[c]);
            Matrix l = spd_chol(v_ff);
            Matrix w = l.triangularView<Eigen::Lower>().solve(v_fp); // L^{-1} V_fp
            b = std::max(b - (w * pin).squaredNorm(), 0.0);
        }
    }

    if (!free_idx.empty()) {
        Vector fr = subvector(beta_tilde, free_idx);
        Matrix v_ff = submatrix(v_block, free_idx);
        Vector v_f((Eigen::Index)free_idx.size());
        for (std::size_t r = 0; r < free_idx.size(); ++r) v_f((Eigen::Index)r) = v_block(free_idx[r], j - 1);
        // zeta = v_f + V_fp * pinned / omega_jj
        Vector zeta = v_f;
        if (!pinned_idx.empty()) {
            Vector pin = subvector(beta_tilde, pinned_idx);
            for (std::size_t r = 0; r < free_idx.size(); ++r) {
                double s = 0.0;
                for (std::size_t c = 0; c < pinned_idx.size(); ++c)
                    s += v_block(free_idx[r], pinned_idx[c]) * pin((Eigen::Index)c);
                zeta((Eigen::Index)r) += s / omega_jj;
            }
        }
        Matrix u = spd_inverse(v_ff / omega_jj);
        out += mvn_logpdf(fr, -(u * zeta), u);
        // Schur correction to the gamma/GIG rate from the free-coordinate
        // completion; vanishes when the V column over free indices is zero.
        Matrix l = spd_chol(v_ff);
        a -= l.triangularView<Eigen::Lower>().solve(v_f).squaredNorm();
        if (!(a > 0.0)) throw DomainError("gwishart_term_iii_step: nonpositive rate (V not SPD?)");
    }

    const double q = alpha + 0.5 * (double)free_idx.size() + 1.0;
    out += gig_logpdf(omega_jj, a, b, q, /*allow_gamma_limit=*/true);
    return out;
}

MixingLatents init_latents(int p) {
    MixingLatents lat;
    lat.var = Matrix::Ones(p, p);
    lat.nu = Matrix::Ones(p, p);
    return lat;
}

void update_latents_bgl(MixingLatents& lat, const Matrix& omega, double lambda, RngStream& rng) {
    const auto p = omega.rows();
    const double l2 = lambda * lambda;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            double w = std::abs(omega(i, j));
            double tau;
            if (w < 1e-12) {
                tau = sample_exponential(rng, 0.5 * l2); // prior refresh at the omega=0 limit
            } else {
                double inv = sample_inverse_gaussian(rng, lambda / w, l2);
                tau = 1.0 / inv;
            }
            lat.var(i, j) = lat.var(j, i) = tau;
        }
    }
}

void update_latents_ghs(MixingLatents& lat, const Matrix& omega, double lambda, RngStream& rng) {
    const auto p = omega.rows();
    const double l2 = lambda * lambda;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            double w = omega(i, j);
            double tau2_prev = lat.var(i, j) * l2;
            double nu = sample_inverse_gamma(rng, 1.0, 1.0 + 1.0 / tau2_prev);
            double tau2 = sample_inverse_gamma(rng, 1.0, 1.0 / nu + 0.5 * l2 * w * w);
            lat.nu(i, j) = lat.nu(j, i) = nu;
            lat.var(i, j) = lat.var(j, i) = tau2 / l2;
        }
    }
}

GWishartChain::GWishartChain(const GWishartPrior& prior) : prior_(prior) {
    const int p = prior_.g.size();
    if (prior_.v.rows() != p || prior_.v.cols() != p)
        throw DimensionError("GWishartChain: V and graph dimensions differ");
    w_ = Matrix::Identity(p, p);
}

void GWishartChain::sweep(RngStream& rng) {
    const int p = prior_.g.size();
    for (int j = 0; j < p; ++j) {
        Matrix w_minus = drop_index(w_, j);
        Matrix w_minus_inv = spd_inverse(w_minus);
        auto nb = prior_.g.neighbors(j, p);
        // neighbor positions inside the (p-1)-dim complement
        std::vector<int> nb_pos;
        for (int i : nb) nb_pos.push_back(i < j ? i : i - 1);

        Vector col = Vector::Zero(p - 1);
        if (!nb_pos.empty()) {
            Matrix c = spd_inverse(prior_.v(j, j) * submatrix(w_minus_inv, nb_pos));
            Vector v_nb((Eigen::Index)nb.size());
            for (std::size_t r = 0; r < nb.size(); ++r) v_nb((Eigen::Index)r) = prior_.v(nb[r], j);
            Vector draw = sample_mvn(rng, -(c * v_nb), c);
            for (std::size_t r = 0; r < nb_pos.size(); ++r) col(nb_pos[r]) = draw((Eigen::Index)r);
        }
        double gamma = sample_gamma(rng, prior_.alpha + 1.0, 0.5 * prior_.v(j, j));
        double w_jj = gamma + col.dot(w_minus_inv * col);

        for (int i = 0, ii = 0; i < p; ++i) {
            if (i == j) continue;
            w_(i, j) = w_(j, i) = col(ii++);
        }
        w_(j, j) = w_jj;
    }
}

} // namespace ggme
