#include "doctest.h"

#include <cstring>
#include <fstream>
#include <limits>

#include "gfamix/csv.hpp"
#include "gfamix/elbo.hpp"
#include "gfamix/error.hpp"
#include "gfamix/generative.hpp"
#include "gfamix/io.hpp"
#include "gfamix/serialization.hpp"

#include "test_support.hpp"

using namespace gfamix;

namespace {

bool same_bits(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

bool same_bits(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!same_bits(a(i), b(i)))
            return false;
    return true;
}

} // namespace

TEST_CASE("trained model round-trips bit-exactly and re-evaluates its bound")
{
    auto bench = make_weak_signal_benchmark(30, 3, 3, 2);
    auto h = default_hyperparameters(2, 2, 2);
    h.prune_threshold = 1e-5;
    h.max_iter = 40;
    auto model = fit(bench.data, h, 4);
    auto dir = testing_support::temp_dir("model_rt");
    save_model(model, dir / "model.json");
    auto back = load_model(dir / "model.json");

    CHECK(back.n_iterations == model.n_iterations);
    CHECK(back.converged == model.converged);
    CHECK(back.view_dims == model.view_dims);
    CHECK(back.hyper.prune_threshold == model.hyper.prune_threshold);
    CHECK(same_bits(back.hyper.ard_shape, model.hyper.ard_shape));
    REQUIRE(back.elbo_trace.size() == model.elbo_trace.size());
    for (std::size_t i = 0; i < model.elbo_trace.size(); ++i)
        CHECK(same_bits(back.elbo_trace[i], model.elbo_trace[i]));
    const auto& a = model.state;
    const auto& b = back.state;
    CHECK(same_bits(a.z_mean, b.z_mean));
    CHECK(same_bits(a.z_cov[7], b.z_cov[7]));
    CHECK(same_bits(a.w_mean[1][2], b.w_mean[1][2]));
    CHECK(same_bits(a.what_cov[0], b.what_cov[0]));
    CHECK(same_bits(a.resp, b.resp));
    CHECK(same_bits(a.pi.conc, b.pi.conc));
    CHECK(same_bits(a.tau[1][1].rate, b.tau[1][1].rate));
    CHECK(same_bits(a.pruned_offset, b.pruned_offset));

    const double e = elbo(back.state, bench.data, back.hyper);
    CHECK(same_bits(e, model.elbo_trace.back()));
}

TEST_CASE("extreme doubles survive the JSON encoding")
{
    auto s = testing_support::make_state(1, 1, 1, {2}, 3);
    s.z_mean << 1e-320, -0.1, std::numeric_limits<double>::max(), 1.0 / 3.0, -2.2250738585072014e-308, 5e-324;
    s.tau[0][0] = GammaDist{1e-14 + 1.5, 0.1 + 0.2};
    TrainedModel m;
    m.hyper = default_hyperparameters(1, 1, 1);
    m.state = s;
    m.view_dims = {2};
    m.elbo_trace = {-123.456789012345678};
    m.n_iterations = 1;
    auto back = trained_model_from_json(nlohmann::json::parse(to_json(m).dump()));
    CHECK(same_bits(back.state.z_mean, s.z_mean));
    CHECK(same_bits(back.state.tau[0][0].shape, s.tau[0][0].shape));
    CHECK(same_bits(back.state.tau[0][0].rate, s.tau[0][0].rate));
}

TEST_CASE("model loading rejects foreign or broken documents")
{
    auto dir = testing_support::temp_dir("model_bad");
    std::ofstream(dir / "other.json") << R"({"schema": "something-else", "version": 1})";
    CHECK_THROWS_AS(load_model(dir / "other.json"), ValidationError);
    std::ofstream(dir / "newer.json") << R"({"schema": "gfamix.trained-model", "version": 99})";
    CHECK_THROWS_AS(load_model(dir / "newer.json"), ValidationError);
    std::ofstream(dir / "junk.json") << "{not json";
    CHECK_THROWS_AS(load_model(dir / "junk.json"), ValidationError);
    CHECK_THROWS_AS(load_model(dir / "absent.json"), IoError);
}

TEST_CASE("hyperparameters round-trip")
{
    auto h = default_hyperparameters(3, 1, 4);
    h.beta_weight = 7.5;
    h.prune_threshold = 1e-9;
    auto back = hyperparameters_from_json(to_json(h));
    CHECK(back.K == 3);
    CHECK(back.K_hat == 1);
    CHECK(back.S == 4);
    CHECK(back.beta_weight == 7.5);
    CHECK(back.prune_threshold == 1e-9);
    h.prune_threshold.reset();
    CHECK_FALSE(hyperparameters_from_json(to_json(h)).prune_threshold.has_value());
}

TEST_CASE("CSV helpers: 17 significant digits, header tables, atomic writes")
{
    CHECK(csv::format_double(0.1) == "0.10000000000000001");
    CHECK(csv::format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(std::strtod(csv::format_double(1e-320).c_str(), nullptr) == 1e-320);

    csv::Table t;
    t.header = {"a", "b"};
    t.rows = {{"1", "x"}, {"2", "y"}};
    CHECK(t.to_string() == "a,b\n1,x\n2,y\n");
    auto parsed = csv::Table::parse(t.to_string());
    CHECK(parsed.header == t.header);
    CHECK(parsed.rows == t.rows);

    auto dir = testing_support::temp_dir("csv");
    Eigen::MatrixXd m(2, 2);
    m << 0.1, -2e-300, 3.0, 1.0 / 7.0;
    write_file_atomically(dir / "m.csv", csv::matrix_to_string(m));
    CHECK(csv::read_matrix(dir / "m.csv") == m);
    CHECK_THROWS_AS(write_file_atomically(dir / "missing" / "x.csv", "1\n"), IoError);
    CHECK_FALSE(std::filesystem::exists(dir / "missing"));
    std::ofstream(dir / "ragged.csv") << "1,2\n3\n";
    CHECK_THROWS_AS(csv::read_matrix(dir / "ragged.csv"), ValidationError);
    std::ofstream(dir / "nan.csv") << "1,abc\n";
    CHECK_THROWS_AS(csv::read_matrix(dir / "nan.csv"), ValidationError);
}

TEST_CASE("ground truth record carries parameters and latents")
{
    auto bench = make_weak_signal_benchmark(10, 2, 2, 3);
    auto j = to_json(bench.params, bench.latent);
    CHECK(j.at("schema") == "gfamix.ground-truth");
    CHECK(j.at("W_hat").size() == 2);
    for (std::size_t n = 0; n < 10; ++n)
        CHECK(j.at("clusters")[n].get<int>() == bench.latent.c[n] + 1);
}
