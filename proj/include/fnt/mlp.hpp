#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fnt/dataset.hpp"

namespace fnt {

enum class MlpTrainer { rprop, backprop };

struct RpropParams {
    double eta_plus = 1.2;
    double eta_minus = 0.5;
    double delta_init = 0.1;
    double delta_max = 50.0;
    double delta_min = 1e-8;
};

struct MlpConfig {
    int hidden_nodes = 32;
    int max_iterations = 500;
    MlpTrainer trainer = MlpTrainer::rprop;
    double learning_rate = 0.3;  // backprop only
    double momentum = 0.2;       // backprop only
    RpropParams rprop;
    std::uint64_t seed = 0;
};

void validate_mlp_config(const MlpConfig& cfg);

// input -> sigmoid hidden layer -> identity output.
struct MlpModel {
    int input_arity = 0;
    int hidden_nodes = 0;
    std::vector<double> w1;  // hidden x input, row-major
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // hidden
    double b2 = 0.0;
};

// Uniform [-0.5, 0.5] / sqrt(fan-in) initialization, deterministic per seed.
MlpModel init_mlp(int input_arity, const MlpConfig& cfg);

double predict_mlp(const MlpModel& model, std::span<const double> features);

// Half mean squared error over the rows; fills grad_out (same packing as
// pack_weights) when non-empty. Exposed for the finite-difference check.
double mlp_loss_and_gradient(const MlpModel& model, std::span<const Sample> rows,
                             std::span<double> grad_out);

std::size_t mlp_weight_count(const MlpModel& model);
std::vector<double> pack_weights(const MlpModel& model);
void unpack_weights(MlpModel& model, std::span<const double> weights);

struct MlpTrainStats {
    double initial_rmse = 0.0;
    double final_rmse = 0.0;
    double min_step_seen = 0.0;  // rprop only
    double max_step_seen = 0.0;
};

// Full-batch training with resilient propagation (default) or plain
// backpropagation with learning rate and momentum. Tracks the best weights by
// training RMSE across all epochs (initialization included), so the returned
// model is never worse than the starting point. Inputs are expected to be
// normalized; targets stay in original units.
MlpModel train_mlp(const Dataset& normalized, const MlpConfig& cfg,
                   MlpTrainStats* stats = nullptr);

// Same text-document convention as FNT models.
std::string serialize_mlp(const MlpModel& model);
MlpModel deserialize_mlp(const std::string& text);

}  // namespace fnt
