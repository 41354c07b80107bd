#include "ggme/samplers.hpp"

#include <numeric>

namespace ggme {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Full conditional of the target column recorded for the Chib evaluation.
struct ColRecord {
    Vector mean;  // free coordinates
    Matrix chol;  // lower Cholesky factor of the conditional covariance
};

int comp_pos(int i, int k) { return i < k ? i : i - 1; } // index within the k-complement

// Column-wise Gibbs on a working block of dimension d. The same machinery
// drives the unrestricted chain (all columns free) and the restricted chain
// (the step's target column held fixed, handled by the caller).
struct BlockChain {
    const StepPrior* pr;
    const Matrix* s; // scatter, at least d x d
    int d = 0;
    Matrix om;       // working (reduced-coordinate) matrix
    Matrix f_eff;    // effective fixed contribution, d x d
    MixingLatents lat;

    double col_rate_const(int k) const {
        switch (pr->kind) {
            case PriorKind::wishart: return 1.0;
            case PriorKind::bgl:
            case PriorKind::ghs: return pr->lambda;
            case PriorKind::gwishart: return pr->v(k, k);
        }
        return 1.0;
    }

    void setup(const StepPrior& prior, const Matrix& scatter, int dim) {
        pr = &prior;
        s = &scatter;
        d = dim;
        f_eff = prior.f.rows() >= dim ? Matrix(prior.f.topLeftCorner(dim, dim))
                                      : Matrix::Zero(dim, dim);
        om = Matrix::Identity(dim, dim);
        pin_entries();
        ensure_spd();
        lat = init_latents(dim);
    }

    // G-Wishart: reduced-coordinate values at non-edges are pinned at -F.
    void pin_entries() {
        if (pr->kind != PriorKind::gwishart) return;
        for (int i = 0; i < d; ++i)
            for (int k = i + 1; k < d; ++k)
                if (!pr->graph->has_edge(i, k)) om(i, k) = om(k, i) = -f_eff(i, k);
    }

    void ensure_spd() {
        for (int tries = 0; tries < 80; ++tries) {
            if (spd_check(om).ok) return;
            om.diagonal() *= 2.0;
        }
        throw NotPositiveDefinite("BlockChain: could not find SPD initial state");
    }

    void refresh_latents(RngStream& rng) {
        if (pr->kind == PriorKind::bgl)
            update_latents_bgl(lat, om + f_eff, pr->lambda, rng);
        else if (pr->kind == PriorKind::ghs)
            update_latents_ghs(lat, om + f_eff, pr->lambda, rng);
    }

    void update_column(int k, RngStream& rng, ColRecord* rec) {
        const double s_kk = (*s)(k, k);
        const double rate = 0.5 * (s_kk + col_rate_const(k));
        double gamma = sample_gamma(rng, pr->gamma_shape, rate);

        if (d == 1) {
            om(0, 0) = gamma;
            return;
        }

        Matrix om_minus = drop_index(om, k);
        Matrix inv = spd_inverse(om_minus);
        Vector s_col(d - 1);
        for (int i = 0; i < d; ++i)
            if (i != k) s_col(comp_pos(i, k)) = (*s)(i, k);

        Vector beta(d - 1);
        Vector mean;
        Matrix chol;

        switch (pr->kind) {
            case PriorKind::wishart: {
                Matrix c = om_minus / (s_kk + 1.0);
                chol = spd_chol(c);
                mean = -(c * s_col);
                beta = sample_mvn_chol(rng, mean, chol);
                break;
            }
            case PriorKind::bgl:
            case PriorKind::ghs: {
                Matrix cinv = (s_kk + pr->lambda) * inv;
                Vector rhs = s_col;
                for (int i = 0; i < d; ++i) {
                    if (i == k) continue;
                    int pos = comp_pos(i, k);
                    double tau = lat.var(i, k);
                    cinv(pos, pos) += 1.0 / tau;
                    rhs(pos) += f_eff(i, k) / tau;
                }
                Matrix c = spd_inverse(cinv);
                chol = spd_chol(c);
                mean = -(c * rhs);
                beta = sample_mvn_chol(rng, mean, chol);
                break;
            }
            case PriorKind::gwishart: {
                std::vector<int> free_pos, pin_pos;
                for (int i = 0; i < d; ++i) {
                    if (i == k) continue;
                    (pr->graph->has_edge(i, k) ? free_pos : pin_pos).push_back(comp_pos(i, k));
                }
                // pinned reduced-coordinate values
                for (int i = 0; i < d; ++i)
                    if (i != k && !pr->graph->has_edge(i, k)) beta(comp_pos(i, k)) = -f_eff(i, k);
                if (!free_pos.empty()) {
                    const double w = s_kk + pr->v(k, k);
                    Matrix c = spd_inverse(w * submatrix(inv, free_pos));
                    Vector rhs((Eigen::Index)free_pos.size());
                    for (std::size_t r = 0; r < free_pos.size(); ++r) {
                        int i = free_pos[r] < k ? free_pos[r] : free_pos[r] + 1;
                        double acc = (*s)(i, k) + pr->v(i, k);
                        for (int ppos : pin_pos) acc += w * inv(free_pos[r], ppos) * beta(ppos);
                        rhs((Eigen::Index)r) = acc;
                    }
                    chol = spd_chol(c);
                    mean = -(c * rhs);
                    Vector draw = sample_mvn_chol(rng, mean, chol);
                    for (std::size_t r = 0; r < free_pos.size(); ++r)
                        beta(free_pos[r]) = draw((Eigen::Index)r);
                }
                break;
            }
        }

        const double om_kk = gamma + beta.dot(inv * beta);
        for (int i = 0; i < d; ++i)
            if (i != k) om(i, k) = om(k, i) = beta(comp_pos(i, k));
        om(k, k) = om_kk;

        if (rec) {
            rec->mean = mean.size() ? mean : Vector(0);
            rec->chol = std::move(chol);
        }
    }
};

double eval_mvn_chol(const Vector& x, const Vector& mean, const Matrix& chol) {
    const auto d = x.size();
    if (d == 0) return 0.0;
    Vector z = chol.triangularView<Eigen::Lower>().solve(x - mean);
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) logdet += std::log(chol(i, i));
    return -0.5 * d * kLogTwoPi - logdet - 0.5 * z.squaredNorm();
}

} // namespace

double batch_se_log_mean_exp(std::span<const double> logs, int n_batch) {
    const int n = (int)logs.size();
    if (n < 2 * n_batch) return 0.0;
    double mx = -kInf;
    for (double v : logs) mx = std::max(mx, v);
    if (!std::isfinite(mx)) return 0.0;
    double total = 0.0;
    std::vector<double> bm(n_batch, 0.0);
    const int bs = n / n_batch;
    for (int b = 0; b < n_batch; ++b) {
        double acc = 0.0;
        for (int i = b * bs; i < (b + 1) * bs; ++i) acc += std::exp(logs[i] - mx);
        bm[b] = acc / bs;
        total += acc;
    }
    double mean_w = total / (n_batch * bs);
    if (!(mean_w > 0.0)) return kInf;
    double var = 0.0;
    for (double v : bm) var += (v - mean_w) * (v - mean_w);
    var /= (n_batch - 1);
    return std::sqrt(var / n_batch) / mean_w;
}

ChibStepSummary run_chib_step(const Matrix& s_block, int n_obs, const StepPrior& prior,
                              int m, int burnin, RngStream& rng) {
    const int d = (int)s_block.rows();
    if (m < 1 || burnin < 0) throw DomainError("run_chib_step: bad chain sizes");

    ChibStepSummary out;

    // ---- unrestricted chain: theta* and the Gaussian Chib factor ----
    BlockChain ch;
    ch.setup(prior, s_block, d);

    std::vector<ColRecord> recs((std::size_t)m);
    Vector beta_sum = Vector::Zero(std::max(d - 1, 0));
    std::vector<double> omjj((std::size_t)m);

    for (int it = 0; it < burnin + m; ++it) {
        ch.refresh_latents(rng);
        for (int k = 0; k < d; ++k) {
            bool record = (k == d - 1) && it >= burnin;
            ch.update_column(k, rng, record ? &recs[(std::size_t)(it - burnin)] : nullptr);
        }
        if (it >= burnin) {
            if (d > 1) beta_sum += ch.om.col(d - 1).head(d - 1);
            omjj[(std::size_t)(it - burnin)] = ch.om(d - 1, d - 1);
        }
    }

    out.beta_star = d > 1 ? Vector(beta_sum / m) : Vector(0);
    out.omega_jj_star = std::accumulate(omjj.begin(), omjj.end(), 0.0) / m;

    const double rate_j = 0.5 * (s_block(d - 1, d - 1) + ch.col_rate_const(d - 1));

    if (d == 1) {
        // Conjugate base case: the conditional posterior is an exact gamma.
        out.log_iv = gamma_logpdf(out.omega_jj_star, prior.gamma_shape, rate_j);
        out.se_iv = 0.0;
        return out;
    }

    double log_iv1 = 0.0, se1 = 0.0;
    std::vector<int> free_pos_j;
    if (prior.kind == PriorKind::gwishart) {
        for (int i : prior.graph->neighbors(d - 1, d)) free_pos_j.push_back(i);
    } else {
        free_pos_j.resize((std::size_t)(d - 1));
        std::iota(free_pos_j.begin(), free_pos_j.end(), 0);
    }
    if (!free_pos_j.empty()) {
        Vector beta_free((Eigen::Index)free_pos_j.size());
        for (std::size_t r = 0; r < free_pos_j.size(); ++r) beta_free((Eigen::Index)r) = out.beta_star(free_pos_j[r]);
        std::vector<double> logs((std::size_t)m);
        for (int i = 0; i < m; ++i)
            logs[(std::size_t)i] = eval_mvn_chol(beta_free, recs[(std::size_t)i].mean, recs[(std::size_t)i].chol);
        log_iv1 = log_mean_exp(logs);
        se1 = batch_se_log_mean_exp(logs);
    }
    recs.clear();
    recs.shrink_to_fit();

    // ---- restricted chain: target column pinned at beta*, gamma factor ----
    const int dr = d - 1;
    StepPrior rprior = prior; // same prior data; f is swapped per iteration
    BlockChain rch;
    double om_jj = out.omega_jj_star;
    Matrix f_base = prior.f.rows() >= d ? Matrix(prior.f.topLeftCorner(dr, dr))
                                        : Matrix::Zero(dr, dr);
    Matrix gamma_blk = out.beta_star * out.beta_star.transpose() / om_jj;
    rprior.f = f_base + gamma_blk;
    Matrix s_r = s_block.topLeftCorner(dr, dr);
    rch.setup(rprior, s_r, dr);

    std::vector<double> logs2((std::size_t)m);
    for (int it = 0; it < burnin + m; ++it) {
        rch.f_eff = f_base + out.beta_star * out.beta_star.transpose() / om_jj;
        rch.pin_entries();
        rch.refresh_latents(rng);
        for (int k = 0; k < dr; ++k) rch.update_column(k, rng, nullptr);

        // reconstitute the true leading block and redraw the corner
        Matrix om_plus = rch.om + out.beta_star * out.beta_star.transpose() / om_jj;
        double shift = dr > 0 ? out.beta_star.dot(spd_inverse(om_plus) * out.beta_star) : 0.0;
        double g = sample_gamma(rng, prior.gamma_shape, rate_j);
        om_jj = g + shift;
        // state back to reduced coordinates under the new corner value
        rch.om = om_plus - out.beta_star * out.beta_star.transpose() / om_jj;
        if (it >= burnin)
            logs2[(std::size_t)(it - burnin)] =
                shifted_trunc_gamma_logpdf(out.omega_jj_star, shift, prior.gamma_shape, rate_j);
    }
    double log_iv2 = log_mean_exp(logs2);
    if (!std::isfinite(log_iv2))
        throw EstimatorFailure(
            "run_chib_step: restricted-chain gamma density vanished at every draw "
            "(omega*_jj below the truncation shift); chain is inconsistent with theta*");
    double se2 = batch_se_log_mean_exp(logs2);

    out.log_iv = log_iv1 + log_iv2;
    out.se_iv = std::sqrt(se1 * se1 + se2 * se2);
    return out;
}

std::vector<Matrix> posterior_omega_draws(const Matrix& y, const PriorSpec& prior,
                                          int m, int burnin, RngStream& rng) {
    const int n = (int)y.rows();
    const int p = (int)y.cols();
    StepPrior sp;
    Matrix x = y;
    Matrix map_back; // Wishart V != I: draws come back in the original scale

    if (auto* w = std::get_if<WishartPrior>(&prior)) {
        sp.kind = PriorKind::wishart;
        sp.gamma_shape = 0.5 * (n + w->alpha - p - 1) + 1.0;
        if (!(w->alpha > p - 1)) throw DomainError("posterior_omega_draws: need alpha > p-1");
        if (w->v.size() > 0 && !w->v.isIdentity(1e-14)) {
            Matrix l = spd_chol(w->v);
            x = y * l;
            map_back = l;
        }
    } else if (auto* b = std::get_if<BglPrior>(&prior)) {
        sp.kind = PriorKind::bgl;
        sp.lambda = b->lambda;
        sp.gamma_shape = 0.5 * n + 1.0;
    } else if (auto* h = std::get_if<GhsPrior>(&prior)) {
        sp.kind = PriorKind::ghs;
        sp.lambda = h->lambda;
        sp.gamma_shape = 0.5 * n + 1.0;
    } else {
        auto& g = std::get<GWishartPrior>(prior);
        sp.kind = PriorKind::gwishart;
        sp.gw_alpha = g.alpha;
        sp.gamma_shape = g.alpha + 0.5 * n + 1.0;
        sp.v = g.v;
        sp.graph = &g.g;
    }
    sp.f = Matrix::Zero(p, p);

    Matrix s = x.transpose() * x;
    BlockChain ch;
    ch.setup(sp, s, p);
    std::vector<Matrix> draws;
    draws.reserve((std::size_t)m);
    for (int it = 0; it < burnin + m; ++it) {
        ch.refresh_latents(rng);
        for (int k = 0; k < p; ++k) ch.update_column(k, rng, nullptr);
        if (it >= burnin) {
            if (map_back.size() > 0)
                draws.push_back(symmetrize(map_back * ch.om * map_back.transpose()));
            else
                draws.push_back(ch.om);
        }
    }
    return draws;
}

} // namespace ggme
