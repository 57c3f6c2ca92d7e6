#include "commands.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "gfamix/csv.hpp"
#include "gfamix/dataset.hpp"
#include "gfamix/error.hpp"
#include "gfamix/fit.hpp"
#include "gfamix/generative.hpp"
#include "gfamix/io.hpp"
#include "gfamix/predict.hpp"
#include "gfamix/serialization.hpp"

namespace gfamix::cli {

namespace fs = std::filesystem;
using csv::format_double;

namespace {

void require_path(const fs::path& p, const char* flag, const std::string& command)
{
    if (p.empty())
        throw ValidationError(command + " needs " + flag);
}

void require_classifier(const std::string& name)
{
    if (std::find(kClassifierNames.begin(), kClassifierNames.end(), name) != kClassifierNames.end())
        return;
    std::string valid;
    for (const auto& n : kClassifierNames)
        valid += (valid.empty() ? "" : ", ") + n;
    throw ValidationError("unknown classifier '" + name + "'; valid names: " + valid);
}

MultiViewDataset read_labelled(const RunConfig& config)
{
    require_path(config.data, "--data", config.command);
    auto data = read_dataset(config.data);
    if (!data.has_labels())
        throw ValidationError(config.command + " requires a dataset with labels");
    return data;
}

ResampleOptions resample_options(const RunConfig& config)
{
    ResampleOptions o;
    o.train_sizes = config.train_sizes;
    o.test_size = config.test_size;
    o.n_repeats = config.repeats;
    o.seed = config.seed;
    return o;
}

fs::path sibling(const fs::path& p, const std::string& suffix)
{
    return p.parent_path() / (p.stem().string() + suffix);
}

std::string join_indices(const std::vector<std::size_t>& idx)
{
    std::string s;
    for (auto i : idx)
        s += (s.empty() ? "" : " ") + std::to_string(i);
    return s;
}

std::string vector_csv(const Eigen::VectorXd& v)
{
    csv::Table t;
    t.header = {"index", "value"};
    for (Eigen::Index i = 0; i < v.size(); ++i)
        t.rows.push_back({std::to_string(i + 1), format_double(v(i))});
    return t.to_string();
}

} // namespace

Classifier make_classifier(const std::string& name, const Hyperparameters& hyper, const GLassoOptions& glasso_options)
{
    require_classifier(name);
    if (name == "glasso") {
        return [glasso_options](const MultiViewDataset& train, const MultiViewDataset& test, std::uint64_t seed) {
            return predict_glasso(fit_glasso(train, 20, 5, seed, glasso_options), test);
        };
    }
    Hyperparameters h = hyper;
    if (name == "gfamix-noshared") {
        h.K = hyper.K + hyper.K_hat;
        h.K_hat = 0;
    }
    h.validate();
    return [h](const MultiViewDataset& train, const MultiViewDataset& test, std::uint64_t seed) {
        return predict(fit(train, h, seed), test).prob_class1;
    };
}

void cmd_simulate(const RunConfig& config, std::ostream& log)
{
    require_path(config.out, "--out", "simulate");
    auto bench = make_weak_signal_benchmark(config.n_samples, config.n_views, config.view_dim, config.seed);
    write_dataset(bench.data, config.out);
    write_file_atomically(config.out / "ground_truth.json", to_json(bench.params, bench.latent).dump(2) + "\n");
    log << "wrote " << config.n_samples << " samples in " << config.n_views << " views to " << config.out.string()
        << "\n";
}

void cmd_train(const RunConfig& config, std::ostream& log)
{
    require_path(config.model, "--model", "train");
    config.hyper.validate();
    const auto data = read_labelled(config);
    const auto model = fit(data, config.hyper, config.seed);

    csv::Table trace;
    trace.header = {"iteration", "elbo"};
    for (std::size_t i = 0; i < model.elbo_trace.size(); ++i)
        trace.rows.push_back({std::to_string(i + 1), format_double(model.elbo_trace[i])});

    save_model(model, config.model);
    write_file_atomically(config.out.empty() ? sibling(config.model, "_trace.csv") : config.out, trace.to_string());
    if (!model.converged)
        log << "warning: not converged after " << model.n_iterations << " iterations\n";
    log << "elbo " << format_double(model.elbo_trace.back()) << " after " << model.n_iterations << " iterations\n";
}

void cmd_predict(const RunConfig& config, std::ostream& log)
{
    require_path(config.model, "--model", "predict");
    require_path(config.data, "--data", "predict");
    require_path(config.out, "--out", "predict");
    const auto model = load_model(config.model);
    const auto data = read_dataset(config.data);
    const auto pred = predict(model, data);

    csv::Table t;
    t.header = {"sample"};
    for (Eigen::Index c = 0; c < pred.responsibilities.cols(); ++c)
        t.header.push_back("resp_" + std::to_string(c + 1));
    t.header.push_back("prob_class1");
    for (Eigen::Index n = 0; n < pred.responsibilities.rows(); ++n) {
        std::vector<std::string> row{std::to_string(n + 1)};
        for (Eigen::Index c = 0; c < pred.responsibilities.cols(); ++c)
            row.push_back(format_double(pred.responsibilities(n, c)));
        row.push_back(format_double(pred.prob_class1(n)));
        t.rows.push_back(std::move(row));
    }
    write_file_atomically(config.out, t.to_string());
    log << "predicted " << data.n_samples() << " samples\n";
}

void cmd_evaluate(const RunConfig& config, std::ostream& log)
{
    require_path(config.out, "--out", "evaluate");
    config.hyper.validate();
    const auto classifier = make_classifier(config.classifier, config.hyper);
    const auto data = read_labelled(config);
    const auto report = resample_eval(data, classifier, resample_options(config));

    csv::Table t;
    t.header = {"size", "repeat", "auc"};
    for (std::size_t s = 0; s < report.train_sizes.size(); ++s) {
        for (std::size_t r = 0; r < report.auc_per_draw[s].size(); ++r)
            t.rows.push_back({std::to_string(report.train_sizes[s]), std::to_string(r + 1),
                              format_double(report.auc_per_draw[s][r])});
        log << config.classifier << " size " << report.train_sizes[s] << " mean auc "
            << format_double(report.auc_mean[s]) << "\n";
    }
    write_file_atomically(config.out, t.to_string());
}

void cmd_reconstruct(const RunConfig& config, std::ostream& log)
{
    require_path(config.model, "--model", "reconstruct");
    require_path(config.out, "--out", "reconstruct");
    const auto model = load_model(config.model);
    const auto& resp = model.state.resp;
    const auto N = static_cast<std::size_t>(resp.rows());
    const int S = model.hyper.S;
    const auto M = model.view_dims.size();

    std::vector<std::string> names;
    if (!config.data.empty()) {
        const auto data = read_dataset(config.data);
        if (data.n_samples() != N || data.view_dims() != model.view_dims)
            throw ValidationError("dataset shape does not match the training data of the model");
        names = data.view_names;
    } else {
        for (std::size_t m = 0; m < M; ++m)
            names.push_back("view" + std::to_string(m + 1));
    }

    // Cluster ERPs average over the trials the model assigns to that cluster.
    std::vector<int> assigned(N);
    for (std::size_t n = 0; n < N; ++n)
        resp.row(static_cast<Eigen::Index>(n)).maxCoeff(&assigned[n]);

    std::vector<std::vector<Eigen::VectorXd>> erp(S);
    for (int c = 0; c < S; ++c) {
        std::vector<bool> mask(N);
        for (std::size_t n = 0; n < N; ++n)
            mask[n] = assigned[n] == c;
        if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
            log << "notice: no trial assigned to cluster " << c + 1 << "; averaging over all trials\n";
            mask.assign(N, true);
        }
        erp[c] = trial_average(reconstruct(model, c), mask);
    }
    const auto shared = trial_average(reconstruct_shared(model), std::vector<bool>(N, true));

    std::vector<std::pair<fs::path, std::string>> files;
    for (std::size_t m = 0; m < M; ++m) {
        for (int c = 0; c < S; ++c)
            files.emplace_back(config.out / (names[m] + "_cluster" + std::to_string(c + 1) + ".csv"),
                               vector_csv(erp[c][m]));
        files.emplace_back(config.out / (names[m] + "_shared.csv"), vector_csv(shared[m]));
        for (int a = 0; a < S; ++a)
            for (int b = a + 1; b < S; ++b)
                files.emplace_back(config.out / (names[m] + "_diff_" + std::to_string(a + 1) + "_" +
                                                 std::to_string(b + 1) + ".csv"),
                                   vector_csv(erp[a][m] - erp[b][m]));
    }
    if (S < 2)
        log << "notice: single cluster, difference output skipped\n";

    std::error_code ec;
    fs::create_directories(config.out, ec);
    if (ec)
        throw IoError("cannot create directory " + config.out.string());
    for (const auto& [path, text] : files)
        write_file_atomically(path, text);
    log << "wrote " << files.size() << " files to " << config.out.string() << "\n";
}

void cmd_compare(const RunConfig& config, std::ostream& log)
{
    require_path(config.out, "--out", "compare");
    config.hyper.validate();
    std::vector<Classifier> classifiers;
    for (const auto& name : kClassifierNames)
        classifiers.push_back(make_classifier(name, config.hyper));
    const auto data = read_labelled(config);
    const auto options = resample_options(config);
    const auto draws = draw_resamples(data, options);

    csv::Table t;
    t.header = {"size", "classifier", "auc_mean"};
    for (int r = 0; r < options.n_repeats; ++r)
        t.header.push_back("auc_" + std::to_string(r + 1));
    std::vector<EvalReport> reports;
    for (std::size_t i = 0; i < classifiers.size(); ++i) {
        reports.push_back(evaluate_draws(data, classifiers[i], draws, options));
        log << kClassifierNames[i] << " done\n";
    }
    for (std::size_t s = 0; s < options.train_sizes.size(); ++s) {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            std::vector<std::string> row{std::to_string(options.train_sizes[s]), kClassifierNames[i],
                                         format_double(reports[i].auc_mean[s])};
            for (double a : reports[i].auc_per_draw[s])
                row.push_back(format_double(a));
            t.rows.push_back(std::move(row));
            log << kClassifierNames[i] << " size " << options.train_sizes[s] << " mean auc "
                << format_double(reports[i].auc_mean[s]) << "\n";
        }
    }

    csv::Table log_draws;
    log_draws.header = {"size", "repeat", "seed", "train", "test"};
    for (std::size_t s = 0; s < draws.size(); ++s)
        for (std::size_t r = 0; r < draws[s].size(); ++r)
            log_draws.rows.push_back({std::to_string(options.train_sizes[s]), std::to_string(r + 1),
                                      std::to_string(draws[s][r].seed), join_indices(draws[s][r].train),
                                      join_indices(draws[s][r].test)});

    write_file_atomically(config.out, t.to_string());
    write_file_atomically(sibling(config.out, "_draws.csv"), log_draws.to_string());
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    CLI::App app{"Group factor analysis mixture: simulate, train, predict, evaluate, reconstruct, compare"};
    app.require_subcommand(1);

    double prune = 0.0;
    std::vector<CLI::Option*> prune_options;
    std::string data, model, outp;

    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", config.seed, "random seed"); };
    auto add_hyper = [&](CLI::App* sub) {
        auto& h = config.hyper;
        sub->add_option("--K", h.K, "cluster-specific factors");
        sub->add_option("--K-hat", h.K_hat, "shared factors");
        sub->add_option("--S", h.S, "clusters");
        sub->add_option("--beta-weight", h.beta_weight, "label likelihood weight");
        sub->add_option("--shared-ard-shape", h.shared_ard_shape, "shape of the shared-factor ARD prior");
        sub->add_option("--max-iter", h.max_iter, "maximum update cycles");
        sub->add_option("--tol", h.elbo_rel_tol, "relative ELBO change for convergence");
        prune_options.push_back(
            sub->add_option("--prune-threshold", prune, "prune factors with E[alpha]^-1 below this"));
    };
    auto add_eval = [&](CLI::App* sub) {
        sub->add_option("--train-sizes", config.train_sizes, "training set sizes")->delimiter(',');
        sub->add_option("--test-size", config.test_size, "test set size");
        sub->add_option("--repeats", config.repeats, "draws per size");
    };

    auto* simulate = app.add_subcommand("simulate", "write the synthetic weak-signal benchmark");
    simulate->add_option("--out", outp, "output directory")->required();
    simulate->add_option("--N", config.n_samples, "samples");
    simulate->add_option("--M", config.n_views, "views");
    simulate->add_option("--D", config.view_dim, "dimensions per view");
    add_seed(simulate);

    auto* train = app.add_subcommand("train", "fit the model and save it");
    train->add_option("--data", data, "dataset manifest")->required();
    train->add_option("--model", model, "model output path")->required();
    train->add_option("--out", outp, "ELBO trace CSV (default: <model>_trace.csv)");
    add_seed(train);
    add_hyper(train);

    auto* pred = app.add_subcommand("predict", "cluster responsibilities and class-1 probabilities");
    pred->add_option("--model", model, "trained model")->required();
    pred->add_option("--data", data, "dataset manifest")->required();
    pred->add_option("--out", outp, "output CSV")->required();

    auto* evaluate = app.add_subcommand("evaluate", "resampled test AUC for one classifier");
    evaluate->add_option("--data", data, "dataset manifest")->required();
    evaluate->add_option("--out", outp, "output CSV")->required();
    evaluate->add_option("--classifier", config.classifier, "gfamix, gfamix-noshared or glasso");
    add_seed(evaluate);
    add_hyper(evaluate);
    add_eval(evaluate);

    auto* recon = app.add_subcommand("reconstruct", "trial-averaged cluster, shared and difference ERPs");
    recon->add_option("--model", model, "trained model")->required();
    recon->add_option("--data", data, "training manifest (view names, shape check)");
    recon->add_option("--out", outp, "output directory")->required();

    auto* compare = app.add_subcommand("compare", "paired AUC comparison of all classifiers");
    compare->add_option("--data", data, "dataset manifest")->required();
    compare->add_option("--out", outp, "output CSV")->required();
    add_seed(compare);
    add_hyper(compare);
    add_eval(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    config.command = app.get_subcommands().front()->get_name();
    config.data = data;
    config.model = model;
    config.out = outp;
    if (std::any_of(prune_options.begin(), prune_options.end(), [](const CLI::Option* o) { return o->count() > 0; }))
        config.hyper.prune_threshold = prune;

    try {
        if (config.command == "simulate")
            cmd_simulate(config, out);
        else if (config.command == "train")
            cmd_train(config, out);
        else if (config.command == "predict")
            cmd_predict(config, out);
        else if (config.command == "evaluate")
            cmd_evaluate(config, out);
        else if (config.command == "reconstruct")
            cmd_reconstruct(config, out);
        else
            cmd_compare(config, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::Validation: return 2;
        case ErrorKind::Io: return 3;
        case ErrorKind::Numerical: return 4;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"gfamix"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace gfamix::cli
