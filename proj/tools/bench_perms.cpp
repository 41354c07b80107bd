// Benchmark: permutation replicates run serially vs with OpenMP workers.
// The parallel path must reproduce the serial numbers bit for bit (each
// replicate owns its RNG stream), so this doubles as a determinism check.

#include <chrono>
#include <cstdio>

#include "ggme/baseline.hpp"
#include "ggme/evidence.hpp"

using namespace ggme;

int main(int argc, char** argv) {
    int p = argc > 1 ? std::atoi(argv[1]) : 8;
    int n = argc > 2 ? std::atoi(argv[2]) : 2 * p;
    int workers = argc > 3 ? std::atoi(argv[3]) : 4;

    Matrix v = Matrix::Identity(p, p) / (p + 2.0);
    PriorSpec prior = WishartPrior{p + 2.0, v};
    RngStream rng(42, 7);
    PriorSampler ps(prior, p);
    Matrix om = *ps.draw(rng);
    Matrix l = spd_chol(spd_inverse(om));
    Matrix y(n, p);
    for (int i = 0; i < n; ++i) {
        Vector z(p);
        for (int j = 0; j < p; ++j) z[j] = sample_normal(rng);
        y.row(i) = (l * z).transpose();
    }

    RunConfig cfg;
    cfg.m = 2000;
    cfg.burnin = 500;
    cfg.n_perm = 16;
    cfg.seed = 11;

    auto run = [&](int w) {
        cfg.workers = w;
        auto t0 = std::chrono::steady_clock::now();
        EvidenceEstimate est = estimate_with_permutations(y, prior, cfg);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("workers=%d  mean=%.10f  sd=%.6f  %.2fs\n", w, est.mean, est.sd, dt);
        return std::pair<EvidenceEstimate, double>(est, dt);
    };

    auto [serial, ts] = run(1);
    auto [parallel, tp] = run(workers);

    bool same = serial.per_perm.size() == parallel.per_perm.size();
    for (size_t i = 0; same && i < serial.per_perm.size(); ++i)
        same = serial.per_perm[i] == parallel.per_perm[i];
    std::printf("speedup: %.2fx   replicates identical: %s\n", ts / tp, same ? "yes" : "NO");
    return same ? 0 : 1;
}
