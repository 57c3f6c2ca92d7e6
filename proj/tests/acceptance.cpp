// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <boost/math/special_functions/digamma.hpp>

#include "gfamix/csv.hpp"
#include "gfamix/elbo.hpp"
#include "gfamix/fit.hpp"
#include "gfamix/generative.hpp"
#include "gfamix/glasso.hpp"
#include "gfamix/metrics.hpp"
#include "gfamix/serialization.hpp"
#include "gfamix/updates.hpp"

#include "commands.hpp"
#include "local_optimality.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gfamix;
using testing_support::make_state;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail, double seconds)
{
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << " (" << detail << "; " << seconds
         << " s)";
    std::cout << line.str() << std::endl;
    if (!ok)
        ++failures;
}

template <class F>
void criterion(int id, const std::string& what, F&& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, ok, what, detail, s);
}

std::string fmt(double v)
{
    std::ostringstream o;
    o << v;
    return o.str();
}

MultiViewDataset scalar_data(std::vector<double> x, Labels r)
{
    Eigen::MatrixXd v = Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    return validate_dataset({v}, r);
}

constexpr double kTiny = 1e-300;

// 1 ---------------------------------------------------------------------------

bool monotone_fits(std::string& detail)
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> n_dist(20, 100), m_dist(2, 6), d_dist(2, 8), k_dist(0, 3), kh_dist(0, 5);
    double worst = 0.0;
    long checked = 0;
    for (int run = 0; run < 20; ++run) {
        const int N = n_dist(rng), M = m_dist(rng);
        std::vector<int> dims;
        for (int m = 0; m < M; ++m)
            dims.push_back(d_dist(rng));
        int K = k_dist(rng), K_hat = kh_dist(rng);
        if (K + K_hat == 0)
            K = 1;
        auto h = default_hyperparameters(K, K_hat, 2);
        auto p = testing_support::random_params(std::max(K, 1), K_hat, 2, dims, rng);
        auto sim = sample_generative(p, default_hyperparameters(std::max(K, 1), K_hat, 2), N, rng());
        double prev = std::numeric_limits<double>::quiet_NaN();
        fit(sim.data, h, rng(), [&](UpdateStep, const VariationalState& s) {
            const double e = elbo(s, sim.data, h);
            if (!std::isnan(prev)) {
                worst = std::min(worst, (e - prev) / std::abs(e));
                ++checked;
            }
            prev = e;
        });
    }
    detail = "worst relative delta " + fmt(worst) + " over " + std::to_string(checked) + " updates";
    return worst >= -1e-8;
}

// 2 ---------------------------------------------------------------------------

bool conjugate_oracles(std::string& detail)
{
    double worst = 0.0;
    auto track = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };

    { // latents: precision 1 + E[tau] E[w^2], mean E[tau] E[w] x / precision
        auto data = scalar_data({-1.3}, {1});
        auto s = make_state(1, 0, 1, {1}, 1);
        s.w_mean[0][0](0, 0) = 0.7;
        s.w_cov[0][0](0, 0) = 0.3;
        s.tau[0][0] = GammaDist{3.0, 2.0};
        update_latents(s, data);
        const double prec = 1.0 + 1.5 * (0.49 + 0.3);
        track(s.z_cov[0](0, 0), 1.0 / prec);
        track(s.z_mean(0, 0), 1.5 * 0.7 * -1.3 / prec);
    }
    { // loadings: precision E[alpha] + E[tau] sum E[z^2], mean E[tau] sum x E[z] / precision
        auto data = scalar_data({2.0, 2.0, 2.0}, {1, 0, 1});
        auto s = make_state(1, 0, 1, {1}, 3);
        s.z_mean.setConstant(0.5);
        for (auto& c : s.z_cov)
            c(0, 0) = 0.75;
        update_loadings(s, data);
        track(s.w_cov[0][0](0, 0), 0.25);
        track(s.w_mean[0][0](0, 0), 0.75);
    }
    { // ARD: shape a0 + D/2, rate b0 + E||w||^2 / 2
        auto h = default_hyperparameters(1, 1, 1);
        auto s = make_state(1, 1, 1, {2, 4}, 1);
        s.w_mean[0][0] << std::sqrt(0.5), std::sqrt(0.5);
        s.w_cov[0][0](0, 0) = 0.5;
        s.what_mean[1].setZero();
        s.what_cov[1](0, 0) = 0.025;
        update_ard(s, h);
        track(s.alpha[0][0][0].shape, 1e-14 + 1.0);
        track(s.alpha[0][0][0].rate, 1e-14 + 1.0);
        track(s.alpha_hat[1][0].shape, 30.0 + 2.0);
        track(s.alpha_hat[1][0].rate, 1.0 + 0.05);
    }
    { // noise: shape b0 + N D / 2, rate b0 + sum x^2 / 2 (loadings pinned at zero)
        const double x = std::sqrt(2.0);
        auto data = scalar_data({x, x, x, x, x}, {1, 1, 0, 0, 1});
        auto h = default_hyperparameters(1, 0, 1);
        auto s = make_state(1, 0, 1, {1}, 5);
        s.w_cov[0][0](0, 0) = kTiny;
        update_noise(s, data, h);
        track(s.tau[0][0].shape, 1e-14 + 2.5);
        track(s.tau[0][0].rate, 1e-14 + 5.0);
    }
    { // label probabilities: a0 + beta sum r q, b0 + beta sum (1 - r) q
        auto data = scalar_data({0.0, 0.0, 0.0}, {1, 0, 1});
        auto h = default_hyperparameters(1, 0, 2);
        auto s = make_state(1, 0, 2, {1}, 3);
        s.resp << 0.25, 0.75, 1.0, 0.0, 0.5, 0.5;
        update_label_probs(s, data, h);
        track(s.gamma[0].a, 0.5 + 100.0 * 0.75);
        track(s.gamma[0].b, 0.5 + 100.0 * 1.0);
        track(s.gamma[1].a, 0.5 + 100.0 * 1.25);
        track(s.gamma[1].b, 0.5);
    }
    { // mixture weights: alpha0 + sum q
        auto h = default_hyperparameters(1, 0, 2);
        auto s = make_state(1, 0, 2, {1}, 4);
        s.resp << 0.1, 0.9, 0.6, 0.4, 1.0, 0.0, 0.3, 0.7;
        update_mixture_weights(s, h);
        track(s.pi.conc(0), 3.0);
        track(s.pi.conc(1), 3.0);
    }
    detail = "largest absolute deviation " + fmt(worst);
    return worst <= 1e-10;
}

// 3 ---------------------------------------------------------------------------

bool local_optimality(std::string& detail)
{
    auto bench = make_weak_signal_benchmark(30, 3, 3, 4);
    auto h = default_hyperparameters(2, 2, 2);
    auto state = initialize(bench.data, h, 2);
    for (int i = 0; i < 4; ++i)
        run_update_cycle(state, bench.data, h);
    double worst = -std::numeric_limits<double>::infinity();
    std::string worst_block;
    for (auto b : {probe::Block::Latents, probe::Block::ClusterLoadings, probe::Block::SharedLoadings,
                   probe::Block::Ard, probe::Block::Noise, probe::Block::Assignments, probe::Block::MixtureWeights,
                   probe::Block::LabelProbs}) {
        const double g = probe::max_relative_gain(b, state, bench.data, h, 50, 1e-3, 7);
        if (g > worst) {
            worst = g;
            worst_block = probe::name(b);
        }
    }
    detail = "largest relative gain " + fmt(worst) + " (" + worst_block + ")";
    return worst <= 1e-8;
}

// 4 ---------------------------------------------------------------------------

bool recovery(std::string& detail)
{
    int hits = 0;
    std::string aris;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto bench = make_weak_signal_benchmark(60, 4, 5, seed);
        auto model = fit(bench.data, default_hyperparameters(2, 4, 2), seed);
        std::vector<int> assigned(60);
        for (int n = 0; n < 60; ++n)
            model.state.resp.row(n).maxCoeff(&assigned[n]);
        const double ari = adjusted_rand_index(assigned, bench.latent.c);
        hits += ari >= 0.9;
        aris += (aris.empty() ? "" : " ") + fmt(ari);
    }
    detail = "ARI " + aris + "; " + std::to_string(hits) + "/5 at >= 0.9";
    return hits >= 4;
}

// 5 ---------------------------------------------------------------------------

bool ablation(std::string& detail)
{
    auto dir = testing_support::temp_dir("acceptance_compare");
    std::ostringstream out, err;
    if (cli::run({"simulate", "--out", (dir / "data").string(), "--seed", "1"}, out, err) != 0 ||
        cli::run({"compare", "--data", (dir / "data" / "manifest.json").string(), "--out", (dir / "cmp.csv").string(),
                  "--seed", "1", "--train-sizes", "4,8,16,28,42", "--test-size", "10", "--repeats", "10"},
                 out, err) != 0) {
        detail = "cli failed: " + err.str();
        return false;
    }
    auto t = csv::Table::read(dir / "cmp.csv");
    std::map<std::string, std::map<int, double>> mean;
    for (const auto& row : t.rows)
        mean[row[1]][std::stoi(row[0])] = std::stod(row[2]);
    double gap = 0.0;
    bool beats_glasso = true;
    std::string sizes;
    for (const auto& [size, a] : mean["gfamix"]) {
        gap += a - mean["gfamix-noshared"][size];
        if (size <= 16)
            beats_glasso = beats_glasso && a >= mean["glasso"][size];
        sizes += " " + std::to_string(size) + ":" + fmt(a) + "/" + fmt(mean["gfamix-noshared"][size]) + "/" +
                 fmt(mean["glasso"][size]);
    }
    gap /= static_cast<double>(mean["gfamix"].size());
    detail = "mean gap " + fmt(gap) + "; size:gfamix/noshared/glasso" + sizes;
    return gap >= 0.10 && beats_glasso;
}

// 6 ---------------------------------------------------------------------------

bool auc_exact(std::string& detail)
{
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> len(2, 30), level(0, 5);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = len(rng);
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (int j = 0; j < n; ++j) {
            s[j] = level(rng) * 0.25; // coarse grid forces ties
            y[j] = static_cast<int>(rng() & 1);
        }
        y[0] = 0;
        y[1] = 1;
        if (auc(s, y) != oracle::brute_force_auc(s, y))
            ++mismatches;
    }
    detail = std::to_string(mismatches) + " mismatches in 1000";
    return mismatches == 0;
}

// 7 ---------------------------------------------------------------------------

MultiViewDataset logistic_problem(int N, const std::vector<int>& dims, double signal, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    std::vector<Eigen::MatrixXd> views;
    for (int D : dims) {
        Eigen::MatrixXd v(N, D);
        for (Eigen::Index i = 0; i < v.size(); ++i)
            v(i) = normal(rng) * 1.5 + 0.5;
        views.push_back(v);
    }
    Labels y(N);
    for (int n = 0; n < N; ++n) {
        const double eta = 0.2 + signal * (views[0](n, 0) - 0.5) - 0.5 * signal * (views.back()(n, 0) - 0.5);
        y[n] = unif(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1 : 0;
    }
    return validate_dataset(views, y);
}

bool glasso_kkt_check(std::string& detail)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> m_dist(2, 5), d_dist(1, 6), n_dist(40, 120);
    std::uniform_real_distribution<double> frac(0.02, 0.9);
    double excess = 0.0, residual = 0.0;
    for (int p = 0; p < 10; ++p) {
        std::vector<int> dims(m_dist(rng));
        for (int& d : dims)
            d = d_dist(rng);
        auto data = logistic_problem(n_dist(rng), dims, 0.8, rng());
        const double lambda = frac(rng) * glasso_lambda_max(data);
        auto k = glasso_kkt(fit_glasso_at(data, lambda), data, lambda);
        excess = std::max(excess, k.max_zero_group_excess);
        residual = std::max({residual, k.max_active_residual, k.intercept_gradient});
    }

    auto data = logistic_problem(200, {2, 2}, 0.6, 5);
    auto m = fit_glasso_at(data, 1e-12);
    auto ref = oracle::logistic_gd(data.concatenated(), *data.labels);
    Eigen::VectorXd p = predict_glasso(m, data);
    double diff = 0.0;
    for (int n = 0; n < 200; ++n) {
        const double eta = ref.b + data.concatenated().row(n).dot(ref.w);
        diff += std::abs(p(n) - 1.0 / (1.0 + std::exp(-eta)));
    }
    diff /= 200.0;
    detail = "zero-group excess " + fmt(excess) + ", active residual " + fmt(residual) +
             ", lambda->0 mean |dp| " + fmt(diff);
    return excess <= 1e-6 && residual <= 1e-6 && diff <= 1e-4;
}

// 8 ---------------------------------------------------------------------------

bool reduction(std::string& detail)
{
    std::mt19937_64 rng(8);
    auto p = testing_support::random_params(1, 0, 1, {4, 4}, rng);
    auto sim = sample_generative(p, default_hyperparameters(1, 0, 1), 80, 3);
    auto h = default_hyperparameters(4, 0, 1);
    h.elbo_rel_tol = 1e-12;
    h.max_iter = 5000;
    double worst = 0.0;
    auto model = fit(sim.data, h, 2, [&](UpdateStep, const VariationalState& s) {
        const double ref = oracle::plain_gfa_elbo(s, sim.data, h);
        worst = std::max(worst, std::abs(elbo(s, sim.data, h) - ref) / std::abs(ref));
    });
    int dead = 0;
    for (int k = 0; k < model.state.K; ++k) {
        bool all = true;
        for (const auto& g : model.state.alpha[0])
            all = all && 1.0 / g[static_cast<std::size_t>(k)].mean() < 1e-6;
        dead += all;
    }
    detail = "worst relative ELBO difference " + fmt(worst) + "; " + std::to_string(dead) +
             " of 3 superfluous factors with E[alpha]^-1 < 1e-6 in every view";
    return worst <= 1e-8 && dead >= 1;
}

// 9 ---------------------------------------------------------------------------

bool serialization(std::string& detail)
{
    auto bench = make_weak_signal_benchmark(60, 4, 5, 9);
    auto model = fit(bench.data, default_hyperparameters(2, 4, 2), 9);
    auto dir = testing_support::temp_dir("acceptance_model");
    save_model(model, dir / "model.json");
    auto back = load_model(dir / "model.json");
    const double e = elbo(back.state, bench.data, back.hyper);
    const double stored = back.elbo_trace.back();
    std::int64_t a, b;
    std::memcpy(&a, &e, sizeof a);
    std::memcpy(&b, &stored, sizeof b);
    detail = "ulp difference " + std::to_string(a - b);
    return a == b && stored == model.elbo_trace.back();
}

} // namespace

int main()
{
    criterion(1, "per-update ELBO deltas on 20 random fits >= -1e-8 |ELBO|", monotone_fits);
    criterion(2, "scalar conjugate updates match closed-form oracles within 1e-10", conjugate_oracles);
    criterion(3, "50 perturbations per block raise the ELBO by at most 1e-8 relative", local_optimality);
    criterion(4, "benchmark recovery ARI >= 0.9 on at least 4 of 5 seeds", recovery);
    criterion(5, "shared-factor ablation gap >= 0.10 and gfamix >= glasso at sizes <= 16", ablation);
    criterion(6, "AUC equals the all-pairs oracle on 1000 random instances", auc_exact);
    criterion(7, "group lasso KKT within 1e-6 and lambda->0 matches logistic oracle within 1e-4", glasso_kkt_check);
    criterion(8, "single-cluster no-shared bound equals plain GFA; ARD switches off a superfluous factor", reduction);
    criterion(9, "train, save, load, re-evaluate ELBO at 0 ulp", serialization);
    return failures == 0 ? 0 : 1;
}
