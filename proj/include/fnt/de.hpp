#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "fnt/dataset.hpp"
#include "fnt/tree.hpp"

namespace fnt {

class Rng;

enum class DeVariant {
    paper_eq7,  // r1 + F*(r1 - g) + F*(r2 - r3) under the crossover mask
    rand_one,   // r1 + F*(r2 - r3) under the same mask
};

// Box bound for one dimension. min_abs > 0 additionally keeps |x| >= min_abs
// (used for activation argument b, which must stay away from zero).
struct Bounds {
    double lo = 0.0;
    double hi = 1.0;
    double min_abs = 0.0;
};

struct DeConfig {
    int population_size = 50;
    double mutation_factor = 0.5;  // F
    double crossover_prob = 0.9;   // C
    long max_evaluations = 10000;
    DeVariant variant = DeVariant::paper_eq7;
    std::pair<double, double> node_arg_range{0.0, 1.0};
    std::pair<double, double> edge_range{-1.0, 1.0};
    std::uint64_t seed = 0;
};

void validate_de_config(const DeConfig& cfg);

struct DeState {
    std::vector<ParamVector> population;
    std::vector<double> fitnesses;
    ParamVector best;
    double best_fitness = std::numeric_limits<double>::infinity();
    long evaluations_used = 0;
    long generation = 0;
};

using Objective = std::function<double(std::span<const double>)>;

// Reflects x back into [bound.lo, bound.hi], then pushes it away from zero if
// the bound carries a min_abs floor.
double reflect_into(double x, const Bounds& bound);

// Builds one trial vector from donors r1, r2, r3 and population best g.
// Per-component: the update rule when u < C, else r1's component verbatim.
ParamVector de_trial(std::span<const double> r1, std::span<const double> r2,
                     std::span<const double> r3, std::span<const double> g,
                     std::span<const Bounds> bounds, const DeConfig& cfg, Rng& rng);

// Uniform population in bounds (member 0 overridden by `seeded` when given),
// all members evaluated.
DeState de_init(const Objective& objective, std::span<const Bounds> bounds, const DeConfig& cfg,
                std::span<const double> seeded = {});

// One synchronous generation: every member's trial is built against the
// entering population (donors r1 != r2 != r3, none the member itself) and
// greedy replacement is applied at the end. Per-member RNG streams are
// derived from (seed, generation, member), so evaluation order cannot change
// the result.
void de_step(DeState& state, const Objective& objective, std::span<const Bounds> bounds,
             const DeConfig& cfg);

// Convergence log sink: called with (evaluations_used, best_fitness) after
// initialization and after every generation.
using DeLogger = std::function<void(long, double)>;

// de_init plus de_step until another full generation would exceed
// max_evaluations.
DeState de_minimize(const Objective& objective, std::span<const Bounds> bounds,
                    const DeConfig& cfg, std::span<const double> seeded = {},
                    const DeLogger& logger = {});

// Bounds for a model's flattened vector: node_arg_range for a and b (with a
// 1e-6 floor on |b|), edge_range for weights, and output-map bounds derived
// from the training target range.
std::vector<Bounds> parameter_bounds(const FntModel& model, std::span<const Sample> rows,
                                     const DeConfig& cfg);

std::vector<double> predict_rows(const FntModel& model, std::span<const Sample> rows);
double training_rmse(const FntModel& model, std::span<const Sample> rows);

struct FitResult {
    FntModel model;
    double rmse = 0.0;
};

// Differential evolution over the flattened parameters; objective is the
// training RMSE of the re-parameterized model. One member is seeded from the
// input model's parameters, so the returned RMSE never exceeds the input's.
FitResult optimize_parameters(const FntModel& model, std::span<const Sample> rows,
                              const DeConfig& cfg, const DeLogger& logger = {});

}  // namespace fnt
