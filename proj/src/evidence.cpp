#include "ggme/evidence.hpp"

#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ggme {

namespace {

Matrix center_columns(const Matrix& y) {
    Matrix x = y;
    Vector mu = x.colwise().mean();
    x.rowwise() -= mu.transpose();
    return x;
}

struct WorkingPrior {
    PriorKind kind;
    double lambda = 0.0;
    double alpha = 0.0;   // Wishart df or G-Wishart exponent
    Matrix v;             // G-Wishart V (working order)
    Graph graph;          // G-Wishart graph (working order)
    double correction = 0.0; // Wishart V-standardization constant
    bool includes_constant = true;
};

// Standardizes Wishart data to V = I and permutes everything into working order.
WorkingPrior make_working(const PriorSpec& prior, Matrix& x, const std::vector<int>& perm) {
    const int n = (int)x.rows();
    const int p = (int)x.cols();
    WorkingPrior wp;
    if (auto* w = std::get_if<WishartPrior>(&prior)) {
        wp.kind = PriorKind::wishart;
        wp.alpha = w->alpha;
        if (!(w->alpha > p - 1)) throw DomainError("wishart prior: need alpha > p-1");
        if (w->v.size() > 0 && !w->v.isIdentity(1e-14)) {
            if (w->v.rows() != p) throw DimensionError("wishart prior: V dimension mismatch");
            Matrix l = spd_chol(w->v);
            x = x * l; // precision of x rows is ~ W(I, alpha); Jacobian |V|^{n/2}
            for (Eigen::Index i = 0; i < p; ++i) wp.correction += std::log(l(i, i));
            wp.correction *= n;
        }
    } else if (auto* b = std::get_if<BglPrior>(&prior)) {
        wp.kind = PriorKind::bgl;
        wp.lambda = b->lambda;
        wp.includes_constant = false;
        if (!(b->lambda > 0.0)) throw DomainError("bgl prior: lambda must be positive");
    } else if (auto* h = std::get_if<GhsPrior>(&prior)) {
        wp.kind = PriorKind::ghs;
        wp.lambda = h->lambda;
        wp.includes_constant = false;
        if (!(h->lambda > 0.0)) throw DomainError("ghs prior: lambda must be positive");
    } else {
        auto& g = std::get<GWishartPrior>(prior);
        wp.kind = PriorKind::gwishart;
        wp.alpha = g.alpha;
        if (g.g.size() != p || g.v.rows() != p) throw DimensionError("gwishart prior: dimension mismatch");
        if (!(g.alpha > -1.0)) throw DomainError("gwishart prior: need alpha > -1");
        wp.v = Matrix(p, p);
        wp.graph = Graph(p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                wp.v(i, j) = g.v(perm[(std::size_t)i], perm[(std::size_t)j]);
                if (i < j && g.g.has_edge(perm[(std::size_t)i], perm[(std::size_t)j]))
                    wp.graph.set_edge(i, j);
            }
    }
    // apply the column permutation to the data
    Matrix xp(x.rows(), p);
    for (int j = 0; j < p; ++j) xp.col(j) = x.col(perm[(std::size_t)j]);
    x = xp;
    return wp;
}

std::vector<int> identity_perm(int p) {
    std::vector<int> perm((std::size_t)p);
    std::iota(perm.begin(), perm.end(), 0);
    return perm;
}

EvidenceBreakdown run_telescoping(const Matrix& x, const WorkingPrior& wp,
                                  const RunConfig& cfg, RngStream& rng) {
    const int n = (int)x.rows();
    const int p = (int)x.cols();
    Matrix s = x.transpose() * x;

    EvidenceBreakdown out;
    out.terms_i.assign((std::size_t)p, 0.0);
    out.terms_iii.assign((std::size_t)p, 0.0);
    out.terms_iv.assign((std::size_t)p, 0.0);
    out.includes_constant = wp.includes_constant;

    std::vector<Vector> betas((std::size_t)p);
    std::vector<double> diags((std::size_t)p, 0.0);
    std::vector<double> iv_se((std::size_t)p, 0.0);

    Matrix f = Matrix::Zero(p, p);
    for (int j = p; j >= 1; --j) {
        StepPrior sp;
        sp.kind = wp.kind;
        sp.lambda = wp.lambda;
        sp.f = f.topLeftCorner(j, j);
        switch (wp.kind) {
            case PriorKind::wishart:
                sp.gamma_shape = 0.5 * (n + wp.alpha - p - 1) + 1.0;
                break;
            case PriorKind::bgl:
            case PriorKind::ghs:
                sp.gamma_shape = 0.5 * n + 1.0;
                break;
            case PriorKind::gwishart:
                sp.gw_alpha = wp.alpha;
                sp.gamma_shape = wp.alpha + 0.5 * n + 1.0;
                sp.v = wp.v.topLeftCorner(j, j);
                sp.graph = &wp.graph;
                break;
        }
        auto res = run_chib_step(s.topLeftCorner(j, j), n, sp, cfg.m, cfg.burnin, rng);
        betas[(std::size_t)(j - 1)] = res.beta_star;
        diags[(std::size_t)(j - 1)] = res.omega_jj_star;
        out.terms_iv[(std::size_t)(j - 1)] = res.log_iv;
        iv_se[(std::size_t)(j - 1)] = res.se_iv;
        if (j > 1)
            f.topLeftCorner(j - 1, j - 1) +=
                res.beta_star * res.beta_star.transpose() / res.omega_jj_star;
    }

    // term I: chain-rule partial likelihoods at the reduced-coordinate point
    for (int j = 1; j <= p; ++j) {
        const double om_jj = diags[(std::size_t)(j - 1)];
        const double var = 1.0 / om_jj;
        double acc = 0.0;
        if (j == 1) {
            for (int t = 0; t < n; ++t) acc += normal_logpdf(x(t, 0), 0.0, var);
        } else {
            Vector mu = -(x.leftCols(j - 1) * betas[(std::size_t)(j - 1)]) / om_jj;
            for (int t = 0; t < n; ++t) acc += normal_logpdf(x(t, j - 1), mu(t), var);
        }
        out.terms_i[(std::size_t)(j - 1)] = acc;
    }
    // Jacobian of the Wishart V-standardization belongs to the likelihood part.
    out.terms_i[0] += wp.correction;

    out.omega_star = reconstruct_omega(betas, diags);

    // term III
    double se_iii = 0.0;
    switch (wp.kind) {
        case PriorKind::wishart:
            for (int j = 1; j <= p; ++j)
                out.terms_iii[(std::size_t)(j - 1)] = wishart_term_iii(
                    betas[(std::size_t)(j - 1)], diags[(std::size_t)(j - 1)], wp.alpha - (p - j));
            break;
        case PriorKind::gwishart:
            for (int j = 1; j <= p; ++j) {
                auto free_idx = wp.graph.neighbors(j - 1, j - 1);
                auto pinned_idx = wp.graph.non_neighbors(j - 1, j - 1);
                out.terms_iii[(std::size_t)(j - 1)] = gwishart_term_iii_step(
                    betas[(std::size_t)(j - 1)], diags[(std::size_t)(j - 1)],
                    wp.v.topLeftCorner(j, j), wp.alpha, free_idx, pinned_idx);
            }
            break;
        case PriorKind::bgl:
            out.terms_iii[0] = bgl_prior_logdensity(out.omega_star, wp.lambda);
            out.joint_iii = true;
            break;
        case PriorKind::ghs:
            out.terms_iii[0] =
                ghs_prior_logdensity(out.omega_star, wp.lambda, cfg.prior_mc, rng, &se_iii);
            out.joint_iii = true;
            break;
    }

    out.log_marginal = std::accumulate(out.terms_i.begin(), out.terms_i.end(), 0.0) +
                       std::accumulate(out.terms_iii.begin(), out.terms_iii.end(), 0.0) -
                       std::accumulate(out.terms_iv.begin(), out.terms_iv.end(), 0.0);
    double var = se_iii * se_iii;
    for (double s_j : iv_se) var += s_j * s_j;
    out.se = std::sqrt(var);
    return out;
}

} // namespace

Matrix reconstruct_omega(const std::vector<Vector>& betas, const std::vector<double>& diags) {
    const int p = (int)diags.size();
    Matrix om(1, 1);
    om(0, 0) = diags[0];
    for (int j = 2; j <= p; ++j) {
        const Vector& b = betas[(std::size_t)(j - 1)];
        const double d = diags[(std::size_t)(j - 1)];
        Matrix up(j, j);
        up.topLeftCorner(j - 1, j - 1) = om + b * b.transpose() / d;
        up.col(j - 1).head(j - 1) = b;
        up.row(j - 1).head(j - 1) = b.transpose();
        up(j - 1, j - 1) = d;
        om = std::move(up);
    }
    return om;
}

double gaussian_loglik(const Matrix& y, const Matrix& omega) {
    const int n = (int)y.rows();
    const int p = (int)y.cols();
    double logdet = spd_logdet(omega);
    Matrix s = y.transpose() * y;
    return 0.5 * n * logdet - 0.5 * n * p * kLogTwoPi - 0.5 * (s * omega).trace();
}

EvidenceBreakdown estimate_log_evidence(const Matrix& y, const PriorSpec& prior,
                                        const RunConfig& cfg, RngStream& rng) {
    if (y.rows() < 1 || y.cols() < 1) throw DimensionError("estimate_log_evidence: empty data");
    Matrix x = cfg.center ? center_columns(y) : y;
    auto perm = identity_perm((int)y.cols());
    WorkingPrior wp = make_working(prior, x, perm);
    return run_telescoping(x, wp, cfg, rng);
}

EvidenceEstimate estimate_with_permutations(const Matrix& y, const PriorSpec& prior,
                                            const RunConfig& cfg) {
    if (cfg.n_perm < 1) throw DomainError("estimate_with_permutations: n_perm must be >= 1");
    const int p = (int)y.cols();
    const int r_total = cfg.n_perm;
    Matrix base = cfg.center ? center_columns(y) : y;

    // Fixed permutations up front so scheduling cannot change them.
    std::vector<std::vector<int>> perms((std::size_t)r_total, identity_perm(p));
    for (int r = 1; r < r_total; ++r) {
        RngStream shuffle_rng(cfg.seed, 0x100000u + (std::uint64_t)r);
        auto& perm = perms[(std::size_t)r];
        for (int i = p - 1; i > 0; --i) {
            int k = (int)(shuffle_rng.next_u64() % (std::uint64_t)(i + 1));
            std::swap(perm[(std::size_t)i], perm[(std::size_t)k]);
        }
    }

    std::vector<double> vals((std::size_t)r_total, 0.0), ses((std::size_t)r_total, 0.0);
    std::exception_ptr err;

#pragma omp parallel for schedule(dynamic) num_threads(std::max(cfg.workers, 1))
    for (int r = 0; r < r_total; ++r) {
        try {
            Matrix x = base;
            RngStream rng(cfg.seed, (std::uint64_t)r + 1);
            WorkingPrior wp = make_working(prior, x, perms[(std::size_t)r]);
            RunConfig local = cfg;
            local.center = false;
            auto bd = run_telescoping(x, wp, local, rng);
            vals[(std::size_t)r] = bd.log_marginal;
            ses[(std::size_t)r] = bd.se;
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    EvidenceEstimate est;
    est.per_perm = vals;
    est.per_perm_se = ses;
    est.perms = perms;
    est.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / r_total;
    double var = 0.0, se2 = 0.0;
    for (int r = 0; r < r_total; ++r) {
        var += (vals[(std::size_t)r] - est.mean) * (vals[(std::size_t)r] - est.mean);
        se2 += ses[(std::size_t)r] * ses[(std::size_t)r];
    }
    est.sd = r_total > 1 ? std::sqrt(var / (r_total - 1)) : 0.0;
    est.pooled_se = std::sqrt(se2) / r_total;
    est.cv = est.mean != 0.0 ? std::abs(est.sd / est.mean) : 0.0;
    return est;
}

} // namespace ggme
