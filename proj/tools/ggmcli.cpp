// command line front end: simulate | evidence | sweep | bf | predict |
// sample-gwishart | baselines | oracle
//
// exit codes: 0 ok, 2 bad config/input, 3 numeric failure (JSON error report)

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ggme/baseline.hpp"
#include "ggme/errors.hpp"
#include "ggme/evidence.hpp"
#include "ggme/io.hpp"
#include "ggme/oracle.hpp"

using nlohmann::json;
using namespace ggme;

namespace {

struct Cli {
    std::string prior = "wishart";
    double lambda = 1.0;
    double alpha = -1.0;
    std::string v_csv, graph_csv, data, out;
    std::string train, test, omega_csv, report_a, report_b;
    int m = -1, burnin = -1, perms = 25, workers = 1;
    int n = 100, p = 5;
    std::uint64_t seed = 0;
    bool center = false;
    bool v_tridiag = false;
    std::vector<double> grid;
};

Graph graph_from_matrix(const Matrix& a) {
    std::vector<std::vector<int>> adj(a.rows(), std::vector<int>(a.cols()));
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) adj[i][j] = static_cast<int>(a(i, j));
    return Graph::from_adjacency(adj);
}

Matrix tridiag_v(int p, double alpha) {
    Matrix v = Matrix::Zero(p, p);
    for (int i = 0; i < p; ++i) {
        v(i, i) = 1.0 / alpha;
        if (i + 1 < p) v(i, i + 1) = v(i + 1, i) = 0.25 / alpha;
    }
    return v;
}

PriorSpec make_prior(const Cli& c, int p) {
    if (c.prior == "bgl") return BglPrior{c.lambda};
    if (c.prior == "ghs") return GhsPrior{c.lambda};
    Matrix v;
    if (!c.v_csv.empty()) v = read_csv_matrix(c.v_csv);
    else if (c.v_tridiag) v = tridiag_v(p, c.alpha > 0 ? c.alpha : p + 2.0);
    else v = Matrix::Identity(p, p);
    if (v.rows() != p || v.cols() != p) throw DimensionError("scale matrix is not p x p");
    if (c.prior == "wishart") {
        double a = c.alpha > 0 ? c.alpha : p + 2.0;
        return WishartPrior{a, v};
    }
    if (c.prior == "gwishart") {
        if (c.graph_csv.empty()) throw DomainError("gwishart needs --graph-csv");
        Graph g = graph_from_matrix(read_csv_matrix(c.graph_csv));
        double a = c.alpha > 0 ? c.alpha : 1.0;
        return GWishartPrior{a, v, g};
    }
    throw DomainError("unknown prior '" + c.prior + "'");
}

RunConfig make_run_config(const Cli& c) {
    RunConfig cfg;
    const bool gw = c.prior == "gwishart";
    cfg.m = c.m > 0 ? c.m : (gw ? 10000 : 5000);
    cfg.burnin = c.burnin >= 0 ? c.burnin : (gw ? 2000 : 1000);
    cfg.n_perm = c.perms;
    cfg.seed = c.seed;
    cfg.workers = c.workers;
    cfg.center = c.center;
    if (cfg.m < 1 || cfg.n_perm < 1) throw DomainError("m and perms must be >= 1");
    return cfg;
}

json config_echo(const Cli& c, const RunConfig& cfg) {
    json j;
    j["prior"] = c.prior;
    if (c.prior == "bgl" || c.prior == "ghs") j["lambda"] = c.lambda;
    else j["alpha"] = c.alpha;
    j["m"] = cfg.m;
    j["burnin"] = cfg.burnin;
    j["perms"] = cfg.n_perm;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["center"] = cfg.center;
    if (!c.data.empty()) j["data"] = c.data;
    if (!c.v_csv.empty()) j["v_csv"] = c.v_csv;
    if (!c.graph_csv.empty()) j["graph_csv"] = c.graph_csv;
    return j;
}

json base_report(const Cli& c, const RunConfig& cfg) {
    json j;
    j["schema"] = 1;
    j["version"] = kArtifactVersion;
    json cfgj = config_echo(c, cfg);
    j["config"] = cfgj;
    j["config_hash"] = string_hash(cfgj.dump());
    return j;
}

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out);
        if (!f) throw IoError("cannot write " + out);
        f << j.dump(2) << "\n";
    }
}

Matrix load_data(const Cli& c) {
    if (c.data.empty()) throw DomainError("--data is required");
    Matrix y = read_csv_matrix(c.data);
    if (y.rows() < 2) throw DomainError("need at least 2 rows of data");
    return y;
}

json estimate_json(const EvidenceEstimate& est) {
    json j;
    j["mean"] = est.mean;
    j["sd"] = est.sd;
    j["pooled_se"] = est.pooled_se;
    j["cv"] = est.cv;
    j["per_perm"] = est.per_perm;
    j["per_perm_se"] = est.per_perm_se;
    return j;
}

int cmd_simulate(const Cli& c) {
    if (c.out.empty()) throw DomainError("simulate needs --out prefix");
    RunConfig cfg = make_run_config(c);
    PriorSpec prior = make_prior(c, c.p);
    RngStream rng(c.seed, 1);
    PriorSampler ps(prior, c.p);
    auto om = ps.draw(rng);
    if (!om) throw EstimatorFailure("prior rejection cap hit while drawing omega0");
    Matrix sigma = spd_inverse(*om);
    Matrix l = spd_chol(sigma);
    Matrix y(c.n, c.p);
    for (int i = 0; i < c.n; ++i) {
        Vector z(c.p);
        for (int j = 0; j < c.p; ++j) z[j] = sample_normal(rng);
        y.row(i) = (l * z).transpose();
    }
    write_csv_matrix(c.out + "_y.csv", y);
    write_csv_matrix(c.out + "_omega.csv", *om);
    json j = base_report(c, cfg);
    j["n"] = c.n;
    j["p"] = c.p;
    j["y_path"] = c.out + "_y.csv";
    j["omega_path"] = c.out + "_omega.csv";
    j["data_hash"] = matrix_hash(y);
    if (const auto* w = std::get_if<WishartPrior>(&prior)) {
        std::vector<double> vd(c.p);
        for (int i = 0; i < c.p; ++i) vd[i] = w->v(i, i);
        j["v_diag"] = vd;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_evidence(const Cli& c) {
    Matrix y = load_data(c);
    RunConfig cfg = make_run_config(c);
    PriorSpec prior = make_prior(c, static_cast<int>(y.cols()));
    auto t0 = std::chrono::steady_clock::now();
    EvidenceEstimate est = estimate_with_permutations(y, prior, cfg);
    // replicate 1 breakdown (identity permutation, same stream)
    RngStream rng(cfg.seed, 1);
    EvidenceBreakdown bd = estimate_log_evidence(y, prior, cfg, rng);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json j = base_report(c, cfg);
    j["data_hash"] = matrix_hash(y);
    j["estimate"] = estimate_json(est);
    j["includes_constant"] = bd.includes_constant;
    j["wall_time_s"] = wall;
    json b;
    b["terms_i"] = bd.terms_i;
    b["terms_iii"] = bd.terms_iii;
    b["terms_iv"] = bd.terms_iv;
    b["log_marginal"] = bd.log_marginal;
    b["se"] = bd.se;
    j["breakdown"] = b;
    emit(j, c.out);
    return 0;
}

int cmd_sweep(const Cli& c) {
    if (c.prior != "bgl" && c.prior != "ghs") throw DomainError("sweep needs --prior bgl|ghs");
    if (c.grid.empty()) throw DomainError("sweep needs --lambda-grid");
    Matrix y = load_data(c);
    RunConfig cfg = make_run_config(c);
    json rows = json::array();
    double best = -std::numeric_limits<double>::infinity();
    double lam_max = c.grid.front();
    std::vector<double> means, ses;
    for (double lam : c.grid) {
        PriorSpec prior = c.prior == "bgl" ? PriorSpec(BglPrior{lam}) : PriorSpec(GhsPrior{lam});
        EvidenceEstimate est = estimate_with_permutations(y, prior, cfg);
        rows.push_back({{"lambda", lam}, {"mean", est.mean}, {"sd", est.sd},
                        {"pooled_se", est.pooled_se}});
        means.push_back(est.mean);
        ses.push_back(est.pooled_se);
        if (est.mean > best) { best = est.mean; lam_max = lam; }
    }
    json j = base_report(c, make_run_config(c));
    j["data_hash"] = matrix_hash(y);
    j["sweep"] = rows;
    j["lambda_max"] = lam_max;
    j["includes_constant"] = false; // constant cancels across the grid
    if (!c.out.empty()) {
        Matrix tab(static_cast<long>(c.grid.size()), 3);
        for (size_t i = 0; i < c.grid.size(); ++i) {
            tab(static_cast<long>(i), 0) = c.grid[i];
            tab(static_cast<long>(i), 1) = means[i];
            tab(static_cast<long>(i), 2) = ses[i];
        }
        write_csv_matrix(c.out + ".csv", tab);
        j["sweep_csv"] = c.out + ".csv";
    }
    emit(j, c.out);
    return 0;
}

int cmd_bf(const Cli& c) {
    auto load = [](const std::string& path) {
        std::ifstream f(path);
        if (!f) throw IoError("cannot open " + path);
        return json::parse(f);
    };
    json a = load(c.report_a);
    json b = load(c.report_b);
    if (a.value("data_hash", "a") != b.value("data_hash", "b"))
        throw DomainError("incompatible reports: data hashes differ");
    if (a["config"].value("prior", "") != b["config"].value("prior", ""))
        throw DomainError("incompatible reports: prior families differ");
    double ma = a["estimate"]["mean"], mb = b["estimate"]["mean"];
    double sa = a["estimate"]["pooled_se"], sb = b["estimate"]["pooled_se"];
    json j;
    j["schema"] = 1;
    j["version"] = kArtifactVersion;
    j["log_bf"] = ma - mb;
    j["se"] = std::sqrt(sa * sa + sb * sb);
    j["report_a"] = c.report_a;
    j["report_b"] = c.report_b;
    emit(j, c.out);
    return 0;
}

int cmd_predict(const Cli& c) {
    Matrix train = read_csv_matrix(c.train);
    Matrix test = read_csv_matrix(c.test);
    Matrix om = read_csv_matrix(c.omega_csv);
    const long p = om.rows();
    if (om.cols() != p || train.cols() != p || test.cols() != p)
        throw DimensionError("omega/train/test dimensions disagree");
    double ss = 0.0;
    for (long j = 0; j < p; ++j) {
        if (om(j, j) <= 0.0) throw DomainError("omega diagonal must be positive");
        Vector resid = test.col(j);
        for (long k = 0; k < p; ++k)
            if (k != j) resid += test.col(k) * (om(j, k) / om(j, j));
        ss += resid.squaredNorm();
    }
    json j;
    j["schema"] = 1;
    j["version"] = kArtifactVersion;
    j["prediction_loss"] = std::sqrt(ss);
    j["train_loglik"] = gaussian_loglik(train, symmetrize(om));
    j["data_hash"] = matrix_hash(train);
    emit(j, c.out);
    return 0;
}

int cmd_sample_gwishart(const Cli& c) {
    if (c.graph_csv.empty()) throw DomainError("needs --graph-csv");
    Graph g = graph_from_matrix(read_csv_matrix(c.graph_csv));
    const int p = g.size();
    Matrix v = c.v_csv.empty() ? Matrix::Identity(p, p) : read_csv_matrix(c.v_csv);
    double alpha = c.alpha > 0 ? c.alpha : 1.0;
    int m = c.m > 0 ? c.m : 10000;
    GWishartPrior prior{alpha, v, g};
    GWishartChain chain(prior);
    RngStream rng(c.seed, 1);
    for (int i = 0; i < 500; ++i) chain.sweep(rng);
    Matrix mean = Matrix::Zero(p, p), m2 = Matrix::Zero(p, p);
    for (int i = 0; i < m; ++i) {
        chain.sweep(rng);
        const Matrix& w = chain.state();
        mean += w;
        m2 += w.cwiseProduct(w);
    }
    mean /= m;
    Matrix se = ((m2 / m - mean.cwiseProduct(mean)).cwiseMax(0.0) / m).cwiseSqrt();
    json j;
    j["schema"] = 1;
    j["version"] = kArtifactVersion;
    j["alpha"] = alpha;
    j["m"] = m;
    j["seed"] = c.seed;
    std::vector<std::vector<double>> mv(p), sv(p);
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < p; ++k) { mv[i].push_back(mean(i, k)); sv[i].push_back(se(i, k)); }
    j["mean"] = mv;
    j["mc_se"] = sv;
    if (!c.out.empty()) {
        write_csv_matrix(c.out, mean);
        j["mean_csv"] = c.out;
        std::cout << j.dump(2) << "\n";
    } else {
        emit(j, "");
    }
    return 0;
}

int cmd_baselines(const Cli& c) {
    Matrix y = load_data(c);
    RunConfig cfg = make_run_config(c);
    PriorSpec prior = make_prior(c, static_cast<int>(y.cols()));
    json j = base_report(c, cfg);
    j["data_hash"] = matrix_hash(y);
    auto pack = [](const BaselineResult& r) {
        json b;
        b["method"] = r.method;
        b["log_marginal"] = std::isfinite(r.log_marginal) ? json(r.log_marginal) : json("-inf");
        b["se"] = r.se;
        b["draws_used"] = r.draws_used;
        b["failed"] = r.failed;
        return b;
    };
    {
        RngStream rng(cfg.seed, 1);
        j["harmonic_mean"] = pack(harmonic_mean_evidence(y, prior, cfg.m, cfg.burnin, rng));
    }
    {
        RngStream rng(cfg.seed, 2);
        j["ais"] = pack(ais(y, prior, std::min(cfg.m, 200), rng));
    }
    {
        RngStream rng(cfg.seed, 3);
        j["nested_sampling"] = pack(nested_sampling(y, prior, std::min(cfg.m, 200), rng));
    }
    emit(j, c.out);
    return 0;
}

int cmd_oracle(const Cli& c) {
    Matrix y = load_data(c);
    const int p = static_cast<int>(y.cols());
    Matrix s = y.transpose() * y;
    json j;
    j["schema"] = 1;
    j["version"] = kArtifactVersion;
    j["data_hash"] = matrix_hash(y);
    RngStream rng(c.seed, 1);
    if (c.prior == "wishart") {
        PriorSpec prior = make_prior(c, p);
        const auto& w = std::get<WishartPrior>(prior);
        j["log_marginal"] = wishart_log_marginal_exact(s, w.v, w.alpha, static_cast<int>(y.rows()));
        j["mc_se"] = 0.0;
    } else if (c.prior == "bgl" && p == 2) {
        auto r = bgl_log_marginal_p2(s, c.lambda, static_cast<int>(y.rows()), 1000000, rng);
        j["log_marginal"] = r.value;
        j["mc_se"] = r.mc_se;
    } else if (c.prior == "ghs" && p == 2) {
        auto r = ghs_log_marginal_p2(s, c.lambda, static_cast<int>(y.rows()), 200000, 1e-8, rng);
        j["log_marginal"] = r.value;
        j["mc_se"] = r.mc_se;
    } else if (c.prior == "gwishart") {
        PriorSpec prior = make_prior(c, p);
        const auto& gw = std::get<GWishartPrior>(prior);
        if (gw.g.n_edges() != p * (p - 1) / 2)
            throw DomainError("oracle for gwishart needs the complete graph");
        j["log_marginal"] = gwishart_complete_oracle(s, gw.v, gw.alpha, static_cast<int>(y.rows()));
        j["mc_se"] = 0.0;
    } else {
        throw DomainError("no oracle for this prior/dimension");
    }
    emit(j, c.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"marginal likelihood estimation for Gaussian graphical models"};
    app.require_subcommand(1);
    Cli c;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--prior", c.prior, "wishart|bgl|ghs|gwishart");
        sub->add_option("--lambda", c.lambda);
        sub->add_option("--alpha", c.alpha);
        sub->add_option("--v-csv", c.v_csv);
        sub->add_flag("--v-tridiag", c.v_tridiag, "block-tridiagonal scale: 1/alpha diag, 0.25/alpha off");
        sub->add_option("--graph-csv", c.graph_csv);
        sub->add_option("--data", c.data);
        sub->add_option("--m", c.m);
        sub->add_option("--burnin", c.burnin);
        sub->add_option("--perms", c.perms);
        sub->add_option("--seed", c.seed);
        sub->add_option("--out", c.out);
        sub->add_option("--workers", c.workers);
        sub->add_flag("--center", c.center);
        sub->add_option("--lambda-grid", c.grid)->delimiter(',');
    };

    auto* s_sim = app.add_subcommand("simulate");
    add_common(s_sim);
    s_sim->add_option("--n", c.n);
    s_sim->add_option("--p", c.p);
    auto* s_ev = app.add_subcommand("evidence");
    add_common(s_ev);
    auto* s_sweep = app.add_subcommand("sweep");
    add_common(s_sweep);
    auto* s_bf = app.add_subcommand("bf");
    s_bf->add_option("--report-a", c.report_a)->required();
    s_bf->add_option("--report-b", c.report_b)->required();
    s_bf->add_option("--out", c.out);
    auto* s_pred = app.add_subcommand("predict");
    s_pred->add_option("--train", c.train)->required();
    s_pred->add_option("--test", c.test)->required();
    s_pred->add_option("--omega", c.omega_csv)->required();
    s_pred->add_option("--out", c.out);
    auto* s_gw = app.add_subcommand("sample-gwishart");
    add_common(s_gw);
    auto* s_base = app.add_subcommand("baselines");
    add_common(s_base);
    auto* s_orc = app.add_subcommand("oracle");
    add_common(s_orc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (s_sim->parsed()) return cmd_simulate(c);
        if (s_ev->parsed()) return cmd_evidence(c);
        if (s_sweep->parsed()) return cmd_sweep(c);
        if (s_bf->parsed()) return cmd_bf(c);
        if (s_pred->parsed()) return cmd_predict(c);
        if (s_gw->parsed()) return cmd_sample_gwishart(c);
        if (s_base->parsed()) return cmd_baselines(c);
        if (s_orc->parsed()) return cmd_oracle(c);
    } catch (const DimensionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        json j;
        j["schema"] = 1;
        j["error"] = e.what();
        try { emit(j, c.out); } catch (...) { std::cerr << j.dump() << "\n"; }
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
