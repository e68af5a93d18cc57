#include "fnt/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "fnt/errors.hpp"
#include "fnt/rng.hpp"

namespace fnt {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_arity(const MlpModel& model, std::size_t features) {
    if (features != static_cast<std::size_t>(model.input_arity))
        throw std::invalid_argument("mlp: feature arity mismatch");
}

}  // namespace

void validate_mlp_config(const MlpConfig& cfg) {
    if (cfg.hidden_nodes < 1) throw ConfigError("mlp: hidden_nodes must be >= 1");
    if (cfg.max_iterations < 1) throw ConfigError("mlp: max_iterations must be >= 1");
    if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0))
        throw ConfigError("mlp: learning_rate must lie in (0, 1]");
    if (!(cfg.momentum >= 0.0 && cfg.momentum <= 1.0))
        throw ConfigError("mlp: momentum must lie in [0, 1]");
    if (!(cfg.rprop.eta_plus > 1.0)) throw ConfigError("mlp: rprop eta_plus must be > 1");
    if (!(cfg.rprop.eta_minus > 0.0 && cfg.rprop.eta_minus < 1.0))
        throw ConfigError("mlp: rprop eta_minus must lie in (0, 1)");
    if (!(cfg.rprop.delta_init > 0.0 && cfg.rprop.delta_max > 0.0))
        throw ConfigError("mlp: rprop step sizes must be positive");
}

MlpModel init_mlp(int input_arity, const MlpConfig& cfg) {
    if (input_arity < 1) throw ConfigError("mlp: input arity must be >= 1");
    MlpModel m;
    m.input_arity = input_arity;
    m.hidden_nodes = cfg.hidden_nodes;
    m.w1.resize(static_cast<std::size_t>(cfg.hidden_nodes) * input_arity);
    m.b1.resize(cfg.hidden_nodes);
    m.w2.resize(cfg.hidden_nodes);
    Rng rng(cfg.seed);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(input_arity));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(cfg.hidden_nodes));
    for (double& w : m.w1) w = rng.uniform(-0.5, 0.5) * s1;
    for (double& b : m.b1) b = rng.uniform(-0.5, 0.5) * s1;
    for (double& w : m.w2) w = rng.uniform(-0.5, 0.5) * s2;
    m.b2 = rng.uniform(-0.5, 0.5) * s2;
    return m;
}

double predict_mlp(const MlpModel& model, std::span<const double> features) {
    check_arity(model, features.size());
    double out = model.b2;
    for (int h = 0; h < model.hidden_nodes; ++h) {
        double net = model.b1[h];
        const double* row = model.w1.data() + static_cast<std::size_t>(h) * model.input_arity;
        for (int i = 0; i < model.input_arity; ++i) net += row[i] * features[i];
        out += model.w2[h] * sigmoid(net);
    }
    return out;
}

std::size_t mlp_weight_count(const MlpModel& model) {
    return model.w1.size() + model.b1.size() + model.w2.size() + 1;
}

std::vector<double> pack_weights(const MlpModel& model) {
    std::vector<double> v;
    v.reserve(mlp_weight_count(model));
    v.insert(v.end(), model.w1.begin(), model.w1.end());
    v.insert(v.end(), model.b1.begin(), model.b1.end());
    v.insert(v.end(), model.w2.begin(), model.w2.end());
    v.push_back(model.b2);
    return v;
}

void unpack_weights(MlpModel& model, std::span<const double> weights) {
    if (weights.size() != mlp_weight_count(model))
        throw std::invalid_argument("mlp: weight vector length mismatch");
    std::size_t pos = 0;
    for (double& w : model.w1) w = weights[pos++];
    for (double& b : model.b1) b = weights[pos++];
    for (double& w : model.w2) w = weights[pos++];
    model.b2 = weights[pos++];
}

double mlp_loss_and_gradient(const MlpModel& model, std::span<const Sample> rows,
                             std::span<double> grad_out) {
    if (rows.empty()) throw std::invalid_argument("mlp: no rows");
    check_arity(model, rows[0].features.size());
    const bool want_grad = !grad_out.empty();
    if (want_grad && grad_out.size() != mlp_weight_count(model))
        throw std::invalid_argument("mlp: gradient buffer length mismatch");
    if (want_grad) std::fill(grad_out.begin(), grad_out.end(), 0.0);

    const std::size_t n_w1 = model.w1.size();
    const std::size_t n_b1 = model.b1.size();
    const double inv_n = 1.0 / static_cast<double>(rows.size());

    std::vector<double> hidden(model.hidden_nodes);
    double loss = 0.0;
    for (const Sample& s : rows) {
        double out = model.b2;
        for (int h = 0; h < model.hidden_nodes; ++h) {
            double net = model.b1[h];
            const double* row = model.w1.data() + static_cast<std::size_t>(h) * model.input_arity;
            for (int i = 0; i < model.input_arity; ++i) net += row[i] * s.features[i];
            hidden[h] = sigmoid(net);
            out += model.w2[h] * hidden[h];
        }
        const double err = out - s.target;
        loss += 0.5 * err * err;
        if (!want_grad) continue;
        for (int h = 0; h < model.hidden_nodes; ++h) {
            const double z = hidden[h];
            grad_out[n_w1 + n_b1 + h] += err * z;                       // w2
            const double back = err * model.w2[h] * z * (1.0 - z);
            grad_out[n_w1 + h] += back;                                 // b1
            double* grow = grad_out.data() + static_cast<std::size_t>(h) * model.input_arity;
            for (int i = 0; i < model.input_arity; ++i) grow[i] += back * s.features[i];
        }
        grad_out[grad_out.size() - 1] += err;                           // b2
    }
    if (want_grad)
        for (double& g : grad_out) g *= inv_n;
    return loss * inv_n;
}

MlpModel train_mlp(const Dataset& normalized, const MlpConfig& cfg, MlpTrainStats* stats) {
    validate_mlp_config(cfg);
    validate_dataset(normalized);

    MlpModel model = init_mlp(static_cast<int>(normalized.n_features()), cfg);
    const std::size_t n = mlp_weight_count(model);
    std::vector<double> weights = pack_weights(model);
    std::vector<double> grad(n, 0.0);
    std::vector<double> prev_grad(n, 0.0);
    std::vector<double> step(n, cfg.rprop.delta_init);
    std::vector<double> velocity(n, 0.0);

    double min_step = cfg.rprop.delta_init;
    double max_step = cfg.rprop.delta_init;

    double loss = mlp_loss_and_gradient(model, normalized.rows, grad);
    double best_loss = loss;
    std::vector<double> best_weights = weights;
    const double initial_rmse = std::sqrt(2.0 * loss);

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        if (cfg.trainer == MlpTrainer::rprop) {
            // iRprop-: shrink the step and skip the move on a sign change
            for (std::size_t k = 0; k < n; ++k) {
                const double s = grad[k] * prev_grad[k];
                if (s > 0.0) {
                    step[k] = std::min(step[k] * cfg.rprop.eta_plus, cfg.rprop.delta_max);
                } else if (s < 0.0) {
                    step[k] = std::max(step[k] * cfg.rprop.eta_minus, cfg.rprop.delta_min);
                    grad[k] = 0.0;
                }
                if (grad[k] > 0.0) {
                    weights[k] -= step[k];
                } else if (grad[k] < 0.0) {
                    weights[k] += step[k];
                }
                prev_grad[k] = grad[k];
                min_step = std::min(min_step, step[k]);
                max_step = std::max(max_step, step[k]);
            }
        } else {
            for (std::size_t k = 0; k < n; ++k) {
                velocity[k] = cfg.momentum * velocity[k] - cfg.learning_rate * grad[k];
                weights[k] += velocity[k];
            }
        }
        unpack_weights(model, weights);
        loss = mlp_loss_and_gradient(model, normalized.rows, grad);
        if (loss < best_loss) {
            best_loss = loss;
            best_weights = weights;
        }
    }

    unpack_weights(model, best_weights);
    if (stats) {
        stats->initial_rmse = initial_rmse;
        stats->final_rmse = std::sqrt(2.0 * best_loss);
        stats->min_step_seen = min_step;
        stats->max_step_seen = max_step;
    }
    return model;
}

std::string serialize_mlp(const MlpModel& model) {
    nlohmann::ordered_json j;
    j["format"] = "mlp-model";
    j["version"] = 1;
    j["input_arity"] = model.input_arity;
    j["hidden_nodes"] = model.hidden_nodes;
    j["w1"] = model.w1;
    j["b1"] = model.b1;
    j["w2"] = model.w2;
    j["b2"] = model.b2;
    return j.dump(2) + "\n";
}

MlpModel deserialize_mlp(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("mlp document: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "mlp-model")
        throw DataError("mlp document: missing format tag 'mlp-model'");
    MlpModel m;
    m.input_arity = j.value("input_arity", 0);
    m.hidden_nodes = j.value("hidden_nodes", 0);
    if (m.input_arity < 1 || m.hidden_nodes < 1)
        throw DataError("mlp document: bad dimensions");
    m.w1 = j.value("w1", std::vector<double>{});
    m.b1 = j.value("b1", std::vector<double>{});
    m.w2 = j.value("w2", std::vector<double>{});
    m.b2 = j.value("b2", 0.0);
    if (m.w1.size() != static_cast<std::size_t>(m.input_arity) * m.hidden_nodes ||
        m.b1.size() != static_cast<std::size_t>(m.hidden_nodes) ||
        m.w2.size() != static_cast<std::size_t>(m.hidden_nodes))
        throw DataError("mlp document: weight dimensions inconsistent");
    for (double v : m.w1)
        if (!std::isfinite(v)) throw DataError("mlp document: non-finite weight");
    return m;
}

}  // namespace fnt
