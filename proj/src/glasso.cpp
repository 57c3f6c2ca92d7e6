#include "gfamix/glasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "gfamix/error.hpp"

namespace gfamix {

namespace {

struct Standardized
{
    std::vector<Eigen::MatrixXd> X;
    std::vector<Eigen::VectorXd> mean;
    std::vector<Eigen::VectorXd> sd;
    Eigen::VectorXd y;
};

const Labels& require_labels(const MultiViewDataset& data)
{
    if (!data.labels)
        throw ValidationError("group lasso needs labels");
    return *data.labels;
}

Eigen::VectorXd label_vector(const Labels& labels)
{
    Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i)
        y(static_cast<Eigen::Index>(i)) = labels[i];
    return y;
}

Standardized standardize(const MultiViewDataset& data)
{
    Standardized out;
    const double N = static_cast<double>(data.n_samples());
    for (const auto& V : data.views) {
        Eigen::VectorXd mu = V.colwise().mean().transpose();
        Eigen::MatrixXd C = V.rowwise() - mu.transpose();
        Eigen::VectorXd sd = (C.colwise().squaredNorm().array() / N).sqrt().transpose();
        for (Eigen::Index j = 0; j < sd.size(); ++j)
            if (!(sd(j) > 0.0))
                sd(j) = 1.0;
        out.X.push_back(C * sd.cwiseInverse().asDiagonal());
        out.mean.push_back(std::move(mu));
        out.sd.push_back(std::move(sd));
    }
    if (data.labels)
        out.y = label_vector(*data.labels);
    return out;
}

std::vector<Eigen::MatrixXd> apply_standardization(const MultiViewDataset& data, const GLassoModel& model)
{
    std::vector<Eigen::MatrixXd> out;
    for (std::size_t m = 0; m < data.n_views(); ++m)
        out.push_back((data.views[m].rowwise() - model.feature_mean[m].transpose()) *
                      model.feature_sd[m].cwiseInverse().asDiagonal());
    return out;
}

double softplus(double t)
{
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t)
{
    if (t >= 0.0)
        return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double mean_logistic_loss(const Eigen::VectorXd& eta, const Eigen::VectorXd& y)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        total += softplus(eta(i)) - y(i) * eta(i);
    return total / static_cast<double>(eta.size());
}

Eigen::VectorXd linear_predictor(const std::vector<Eigen::MatrixXd>& X, double b, const std::vector<Eigen::VectorXd>& w)
{
    Eigen::VectorXd eta = Eigen::VectorXd::Constant(X.front().rows(), b);
    for (std::size_t m = 0; m < X.size(); ++m)
        eta.noalias() += X[m] * w[m];
    return eta;
}

Eigen::VectorXd residual(const Eigen::VectorXd& eta, const Eigen::VectorXd& y)
{
    Eigen::VectorXd r(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        r(i) = sigmoid(eta(i)) - y(i);
    return r;
}

void finalize_scale(GLassoModel& model)
{
    model.weights.clear();
    model.intercept = model.std_intercept;
    for (std::size_t m = 0; m < model.std_weights.size(); ++m) {
        Eigen::VectorXd w = model.std_weights[m].cwiseQuotient(model.feature_sd[m]);
        model.intercept -= w.dot(model.feature_mean[m]);
        model.weights.push_back(std::move(w));
    }
}

double lambda_max_std(const Standardized& st)
{
    const double N = static_cast<double>(st.y.size());
    const double p = st.y.mean();
    double out = 0.0;
    for (const auto& X : st.X) {
        const Eigen::VectorXd g = X.transpose() * (Eigen::VectorXd::Constant(st.y.size(), p) - st.y) / N;
        out = std::max(out, g.norm() / std::sqrt(static_cast<double>(X.cols())));
    }
    // Nudged up so the all-zero solution is exact despite rounding in the block step.
    return out * (1.0 + 1e-10);
}

GLassoModel solve(const Standardized& st, double lambda, const GLassoOptions& options, const GLassoModel* warm)
{
    const std::size_t M = st.X.size();
    const Eigen::Index N = st.y.size();
    const double p = st.y.mean();
    if (p == 0.0 || p == 1.0)
        throw ValidationError("group lasso needs both classes in the training data");

    GLassoModel model;
    model.feature_mean = st.mean;
    model.feature_sd = st.sd;
    model.lambda_selected = lambda;
    model.lambda_path = {lambda};
    bool warm_ok = warm && warm->std_weights.size() == M;
    for (std::size_t m = 0; m < M && warm_ok; ++m)
        warm_ok = warm->std_weights[m].size() == st.X[m].cols();
    if (warm_ok) {
        model.std_intercept = warm->std_intercept;
        model.std_weights = warm->std_weights;
    } else {
        model.std_intercept = std::log(p / (1.0 - p));
        for (const auto& X : st.X)
            model.std_weights.push_back(Eigen::VectorXd::Zero(X.cols()));
    }

    // Quadratic majorizer: the logistic Hessian is bounded by X^T X / (4N).
    std::vector<double> lipschitz;
    for (const auto& X : st.X) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.transpose() * X / static_cast<double>(N),
                                                          Eigen::EigenvaluesOnly);
        lipschitz.push_back(std::max(0.25 * es.eigenvalues().maxCoeff(), 1e-12));
    }

    Eigen::VectorXd eta = linear_predictor(st.X, model.std_intercept, model.std_weights);
    auto report = [&] {
        if (!options.on_block)
            return;
        double penalty = 0.0;
        for (const auto& w : model.std_weights)
            penalty += std::sqrt(static_cast<double>(w.size())) * w.norm();
        options.on_block(mean_logistic_loss(eta, st.y) + lambda * penalty);
    };
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        double max_change = 0.0;

        const double gb = residual(eta, st.y).mean();
        const double db = -4.0 * gb;
        model.std_intercept += db;
        eta.array() += db;
        max_change = std::max(max_change, std::abs(db));
        report();

        for (std::size_t m = 0; m < M; ++m) {
            const auto& X = st.X[m];
            auto& w = model.std_weights[m];
            const double L = lipschitz[m];
            const Eigen::VectorXd g = X.transpose() * residual(eta, st.y) / static_cast<double>(N);
            const Eigen::VectorXd v = w - g / L;
            const double thresh = lambda * std::sqrt(static_cast<double>(X.cols())) / L;
            const double vn = v.norm();
            Eigen::VectorXd w_new = vn > thresh ? Eigen::VectorXd((1.0 - thresh / vn) * v)
                                                : Eigen::VectorXd::Zero(w.size());
            const Eigen::VectorXd delta = w_new - w;
            if (delta.size() > 0) {
                max_change = std::max(max_change, delta.cwiseAbs().maxCoeff());
                eta.noalias() += X * delta;
            }
            w = std::move(w_new);
            report();
        }
        if (!eta.allFinite())
            throw NumericalError("group lasso: non-finite linear predictor");
        if (max_change < options.tol)
            break;
    }
    finalize_scale(model);
    return model;
}

double validation_log_loss(const GLassoModel& model, const MultiViewDataset& data)
{
    const Eigen::VectorXd prob = predict_glasso(model, data);
    const auto& labels = *data.labels;
    double total = 0.0;
    for (Eigen::Index i = 0; i < prob.size(); ++i) {
        const double q = std::clamp(prob(i), 1e-15, 1.0 - 1e-15);
        total -= labels[static_cast<std::size_t>(i)] == 1 ? std::log(q) : std::log1p(-q);
    }
    return total / static_cast<double>(prob.size());
}

} // namespace

int GLassoModel::n_active_groups() const
{
    return static_cast<int>(std::count_if(std_weights.begin(), std_weights.end(),
                                          [](const Eigen::VectorXd& w) { return w.squaredNorm() > 0.0; }));
}

double glasso_lambda_max(const MultiViewDataset& data)
{
    require_labels(data);
    return lambda_max_std(standardize(data));
}

GLassoModel fit_glasso_at(const MultiViewDataset& data, double lambda, const GLassoOptions& options,
                          const GLassoModel* warm_start)
{
    require_labels(data);
    if (!(lambda >= 0.0))
        throw ValidationError("lambda must be non-negative");
    return solve(standardize(data), lambda, options, warm_start);
}

std::vector<GLassoModel> glasso_path(const MultiViewDataset& data, const std::vector<double>& lambdas,
                                     const GLassoOptions& options)
{
    require_labels(data);
    const auto st = standardize(data);
    std::vector<GLassoModel> out;
    for (double lambda : lambdas)
        out.push_back(solve(st, lambda, options, out.empty() ? nullptr : &out.back()));
    return out;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<int> out(labels.size(), 0);
    std::size_t next = 0; // the second class continues where the first stopped
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls)
                idx.push_back(i);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (auto i : idx)
            out[i] = static_cast<int>(next++ % static_cast<std::size_t>(folds));
    }
    return out;
}

GLassoModel fit_glasso(const MultiViewDataset& data, int n_lambda, int cv_folds, std::uint64_t seed,
                       const GLassoOptions& options)
{
    const auto& labels = require_labels(data);
    if (n_lambda < 1 || cv_folds < 2)
        throw ValidationError("group lasso needs n_lambda >= 1 and cv_folds >= 2");
    const auto ones = static_cast<int>(std::count(labels.begin(), labels.end(), 1));
    const int zeros = static_cast<int>(labels.size()) - ones;
    if (ones == 0 || zeros == 0)
        throw ValidationError("group lasso needs both classes in the training data");

    const auto st = standardize(data);
    const double lmax = lambda_max_std(st);
    std::vector<double> path;
    for (int i = 0; i < n_lambda; ++i)
        path.push_back(n_lambda == 1 ? lmax : lmax * std::pow(1e-3, static_cast<double>(i) / (n_lambda - 1)));

    // Every validation fold must hold both classes, which caps the fold count
    // at the minority class size.
    const int folds = std::min(cv_folds, std::min(ones, zeros));
    std::vector<double> cv_curve;
    double selected = lmax;
    if (folds >= 2) {
        std::vector<int> fold_of;
        bool ok = false;
        for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
            fold_of = stratified_folds(labels, folds, seed + static_cast<std::uint64_t>(attempt));
            ok = true;
            for (int f = 0; f < folds && ok; ++f) {
                bool in0 = false, in1 = false, out0 = false, out1 = false;
                for (std::size_t i = 0; i < labels.size(); ++i) {
                    const bool held = fold_of[i] == f;
                    (labels[i] ? (held ? in1 : out1) : (held ? in0 : out0)) = true;
                }
                ok = in0 && in1 && out0 && out1;
            }
        }
        if (!ok)
            throw ValidationError("could not build stratified folds with both classes after 100 attempts");

        cv_curve.assign(path.size(), 0.0);
        for (int f = 0; f < folds; ++f) {
            std::vector<std::size_t> train, valid;
            for (std::size_t i = 0; i < labels.size(); ++i)
                (fold_of[i] == f ? valid : train).push_back(i);
            const auto train_data = data.subset(train);
            const auto valid_data = data.subset(valid);
            const auto models = glasso_path(train_data, path, options);
            for (std::size_t l = 0; l < path.size(); ++l)
                cv_curve[l] += validation_log_loss(models[l], valid_data) / folds;
        }
        for (double v : cv_curve)
            if (!std::isfinite(v))
                throw NumericalError("group lasso: non-finite validation loss");
        const auto best = std::min_element(cv_curve.begin(), cv_curve.end()) - cv_curve.begin();
        selected = path[static_cast<std::size_t>(best)];
    }

    // Refit along the path down to the selected lambda so the warm starts match the CV fits.
    GLassoModel model;
    for (double lambda : path) {
        model = solve(st, lambda, options, model.std_weights.empty() ? nullptr : &model);
        if (lambda == selected)
            break;
    }
    model.lambda_selected = selected;
    model.lambda_path = path;
    model.cv_curve = std::move(cv_curve);
    return model;
}

Eigen::VectorXd predict_glasso(const GLassoModel& model, const MultiViewDataset& data)
{
    if (data.n_views() != model.weights.size())
        throw ValidationError("dimension mismatch: view count differs from the group lasso model");
    Eigen::VectorXd eta = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(data.n_samples()), model.intercept);
    for (std::size_t m = 0; m < data.n_views(); ++m) {
        if (data.views[m].cols() != model.weights[m].size())
            throw ValidationError("dimension mismatch in view " + std::to_string(m + 1));
        eta.noalias() += data.views[m] * model.weights[m];
    }
    return eta.unaryExpr([](double t) { return sigmoid(t); });
}

double glasso_objective(const GLassoModel& model, const MultiViewDataset& data, double lambda)
{
    const auto& labels = require_labels(data);
    const auto X = apply_standardization(data, model);
    const Eigen::VectorXd eta = linear_predictor(X, model.std_intercept, model.std_weights);
    double penalty = 0.0;
    for (const auto& w : model.std_weights)
        penalty += std::sqrt(static_cast<double>(w.size())) * w.norm();
    return mean_logistic_loss(eta, label_vector(labels)) + lambda * penalty;
}

GLassoKkt glasso_kkt(const GLassoModel& model, const MultiViewDataset& data, double lambda)
{
    const auto& labels = require_labels(data);
    const auto X = apply_standardization(data, model);
    const Eigen::VectorXd y = label_vector(labels);
    const Eigen::VectorXd r = residual(linear_predictor(X, model.std_intercept, model.std_weights), y);
    const double N = static_cast<double>(y.size());
    GLassoKkt out;
    out.intercept_gradient = std::abs(r.mean());
    out.max_zero_group_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < X.size(); ++m) {
        const Eigen::VectorXd g = X[m].transpose() * r / N;
        const double scale = lambda * std::sqrt(static_cast<double>(X[m].cols()));
        const auto& w = model.std_weights[m];
        const double wn = w.norm();
        if (wn == 0.0)
            out.max_zero_group_excess = std::max(out.max_zero_group_excess, g.norm() - scale);
        else
            out.max_active_residual = std::max(out.max_active_residual, (g + scale * w / wn).norm());
    }
    return out;
}

} // namespace gfamix
