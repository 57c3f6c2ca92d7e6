#include "gfamix/serialization.hpp"

#include <string>

#include "gfamix/error.hpp"
#include "gfamix/io.hpp"

namespace gfamix {

using nlohmann::json;

namespace {

json matrix_json(const Eigen::MatrixXd& m)
{
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            data.push_back(m(i, j));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from(const json& j)
{
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
        throw ValidationError("matrix entry has inconsistent shape");
    Eigen::MatrixXd m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2)
            m(i, j2) = data[idx++].get<double>();
    return m;
}

json vector_json(const Eigen::VectorXd& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from(const json& j)
{
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json gamma_json(const GammaDist& g)
{
    return json::array({g.shape, g.rate});
}

GammaDist gamma_from(const json& j)
{
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json state_json(const VariationalState& s)
{
    json j;
    j["K"] = s.K;
    j["K_hat"] = s.K_hat;
    j["S"] = s.S;
    j["view_dims"] = s.view_dims;
    j["z_mean"] = matrix_json(s.z_mean);
    j["z_cov"] = json::array();
    for (const auto& c : s.z_cov)
        j["z_cov"].push_back(matrix_json(c));
    j["w_mean"] = json::array();
    j["w_cov"] = json::array();
    j["alpha"] = json::array();
    j["tau"] = json::array();
    for (int c = 0; c < s.S; ++c) {
        json wm = json::array(), wc = json::array(), al = json::array(), ta = json::array();
        for (int m = 0; m < s.n_views(); ++m) {
            wm.push_back(matrix_json(s.w_mean[c][m]));
            wc.push_back(matrix_json(s.w_cov[c][m]));
            json ak = json::array();
            for (const auto& a : s.alpha[c][m])
                ak.push_back(gamma_json(a));
            al.push_back(std::move(ak));
            ta.push_back(gamma_json(s.tau[c][m]));
        }
        j["w_mean"].push_back(std::move(wm));
        j["w_cov"].push_back(std::move(wc));
        j["alpha"].push_back(std::move(al));
        j["tau"].push_back(std::move(ta));
    }
    j["what_mean"] = json::array();
    j["what_cov"] = json::array();
    j["alpha_hat"] = json::array();
    for (int m = 0; m < s.n_views(); ++m) {
        j["what_mean"].push_back(matrix_json(s.what_mean[m]));
        j["what_cov"].push_back(matrix_json(s.what_cov[m]));
        json ak = json::array();
        for (const auto& a : s.alpha_hat[m])
            ak.push_back(gamma_json(a));
        j["alpha_hat"].push_back(std::move(ak));
    }
    j["pi"] = vector_json(s.pi.conc);
    j["gamma"] = json::array();
    for (const auto& g : s.gamma)
        j["gamma"].push_back(json::array({g.a, g.b}));
    j["resp"] = matrix_json(s.resp);
    j["pruned_offset"] = s.pruned_offset;
    return j;
}

VariationalState state_from(const json& j)
{
    VariationalState s;
    s.K = j.at("K").get<int>();
    s.K_hat = j.at("K_hat").get<int>();
    s.S = j.at("S").get<int>();
    s.view_dims = j.at("view_dims").get<std::vector<int>>();
    s.z_mean = matrix_from(j.at("z_mean"));
    for (const auto& c : j.at("z_cov"))
        s.z_cov.push_back(matrix_from(c));
    const int M = static_cast<int>(s.view_dims.size());
    s.w_mean.resize(s.S);
    s.w_cov.resize(s.S);
    s.alpha.resize(s.S);
    s.tau.resize(s.S);
    for (int c = 0; c < s.S; ++c) {
        for (int m = 0; m < M; ++m) {
            s.w_mean[c].push_back(matrix_from(j.at("w_mean").at(c).at(m)));
            s.w_cov[c].push_back(matrix_from(j.at("w_cov").at(c).at(m)));
            std::vector<GammaDist> ak;
            for (const auto& a : j.at("alpha").at(c).at(m))
                ak.push_back(gamma_from(a));
            s.alpha[c].push_back(std::move(ak));
            s.tau[c].push_back(gamma_from(j.at("tau").at(c).at(m)));
        }
    }
    for (int m = 0; m < M; ++m) {
        s.what_mean.push_back(matrix_from(j.at("what_mean").at(m)));
        s.what_cov.push_back(matrix_from(j.at("what_cov").at(m)));
        std::vector<GammaDist> ak;
        for (const auto& a : j.at("alpha_hat").at(m))
            ak.push_back(gamma_from(a));
        s.alpha_hat.push_back(std::move(ak));
    }
    s.pi.conc = vector_from(j.at("pi"));
    for (const auto& g : j.at("gamma"))
        s.gamma.push_back({g.at(0).get<double>(), g.at(1).get<double>()});
    s.resp = matrix_from(j.at("resp"));
    s.pruned_offset = j.at("pruned_offset").get<double>();
    return s;
}

} // namespace

json to_json(const Hyperparameters& h)
{
    json j;
    j["K"] = h.K;
    j["K_hat"] = h.K_hat;
    j["S"] = h.S;
    j["ard_shape"] = h.ard_shape;
    j["ard_rate"] = h.ard_rate;
    j["shared_ard_shape"] = h.shared_ard_shape;
    j["shared_ard_rate"] = h.shared_ard_rate;
    j["noise_shape"] = h.noise_shape;
    j["noise_rate"] = h.noise_rate;
    j["beta_weight"] = h.beta_weight;
    j["dirichlet_conc"] = h.dirichlet_conc;
    j["beta_a"] = h.beta_a;
    j["beta_b"] = h.beta_b;
    j["max_iter"] = h.max_iter;
    j["elbo_rel_tol"] = h.elbo_rel_tol;
    j["prune_threshold"] = h.prune_threshold ? json(*h.prune_threshold) : json(nullptr);
    return j;
}

Hyperparameters hyperparameters_from_json(const json& j)
{
    Hyperparameters h;
    h.K = j.at("K").get<int>();
    h.K_hat = j.at("K_hat").get<int>();
    h.S = j.at("S").get<int>();
    h.ard_shape = j.at("ard_shape").get<double>();
    h.ard_rate = j.at("ard_rate").get<double>();
    h.shared_ard_shape = j.at("shared_ard_shape").get<double>();
    h.shared_ard_rate = j.at("shared_ard_rate").get<double>();
    h.noise_shape = j.at("noise_shape").get<double>();
    h.noise_rate = j.at("noise_rate").get<double>();
    h.beta_weight = j.at("beta_weight").get<double>();
    h.dirichlet_conc = j.at("dirichlet_conc").get<double>();
    h.beta_a = j.at("beta_a").get<double>();
    h.beta_b = j.at("beta_b").get<double>();
    h.max_iter = j.at("max_iter").get<int>();
    h.elbo_rel_tol = j.at("elbo_rel_tol").get<double>();
    if (!j.at("prune_threshold").is_null())
        h.prune_threshold = j.at("prune_threshold").get<double>();
    h.validate();
    return h;
}

json to_json(const TrainedModel& model)
{
    json j;
    j["schema"] = kModelSchema;
    j["version"] = kModelSchemaVersion;
    j["hyperparameters"] = to_json(model.hyper);
    j["view_dims"] = model.view_dims;
    j["n_iterations"] = model.n_iterations;
    j["converged"] = model.converged;
    j["elbo_trace"] = model.elbo_trace;
    j["state"] = state_json(model.state);
    return j;
}

TrainedModel trained_model_from_json(const json& j)
{
    try {
        if (j.at("schema").get<std::string>() != kModelSchema)
            throw ValidationError("not a trained-model document");
        if (j.at("version").get<int>() != kModelSchemaVersion)
            throw ValidationError("unsupported model schema version " + std::to_string(j.at("version").get<int>()));
        TrainedModel m;
        m.hyper = hyperparameters_from_json(j.at("hyperparameters"));
        m.view_dims = j.at("view_dims").get<std::vector<int>>();
        m.n_iterations = j.at("n_iterations").get<int>();
        m.converged = j.at("converged").get<bool>();
        m.elbo_trace = j.at("elbo_trace").get<std::vector<double>>();
        m.state = state_from(j.at("state"));
        m.state.validate();
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model document: ") + e.what());
    }
}

json to_json(const GenerativeParams& p, const LatentRecord& latent)
{
    json j;
    j["schema"] = "gfamix.ground-truth";
    j["version"] = 1;
    j["pi"] = vector_json(p.pi);
    j["gamma"] = vector_json(p.gamma);
    j["tau"] = p.tau;
    j["W_hat"] = json::array();
    for (const auto& w : p.W_hat)
        j["W_hat"].push_back(matrix_json(w));
    j["W"] = json::array();
    for (const auto& per_cluster : p.W) {
        json views = json::array();
        for (const auto& w : per_cluster)
            views.push_back(matrix_json(w));
        j["W"].push_back(std::move(views));
    }
    json clusters = json::array();
    for (int c : latent.c)
        clusters.push_back(c + 1);
    j["clusters"] = std::move(clusters);
    j["labels"] = latent.r;
    j["z"] = matrix_json(latent.z);
    j["z_hat"] = matrix_json(latent.z_hat);
    return j;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path)
{
    write_file_atomically(path, to_json(model).dump() + "\n");
}

TrainedModel load_model(const std::filesystem::path& path)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed model file " + path.string() + ": " + e.what());
    }
    return trained_model_from_json(j);
}

} // namespace gfamix
