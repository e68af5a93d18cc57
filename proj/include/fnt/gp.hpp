#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "fnt/dataset.hpp"
#include "fnt/de.hpp"
#include "fnt/tree.hpp"

namespace fnt {

class Rng;

struct GpConfig {
    int population_size = 30;
    int tournament_size = 15;
    double crossover_prob = 0.8;
    double mutation_prob = 0.2;
    int max_height = 5;   // levels, root included
    int max_arity = 4;
    long max_generations = 100000;
    std::pair<double, double> node_arg_range{0.0, 1.0};
    std::pair<double, double> edge_range{-1.0, 1.0};
    long inner_de_budget = 500;     // DE evaluations per structure candidate
    int stagnation_patience = 200;  // generations without best improvement
    std::uint64_t seed = 0;
    GaussianForm gaussian = GaussianForm::squared;
    bool use_output_map = true;
};

void validate_gp_config(const GpConfig& cfg);

// Grow-style random tree: computational root, uniform arity in [2, max_arity],
// terminals uniform over the inputs, node arguments and weights uniform over
// their configured ranges.
FntModel random_tree(const GpConfig& cfg, int input_arity, Rng& rng);

// Swaps one uniformly drawn subtree of each parent. Offspring that would
// exceed max_height (or lose a computational root) trigger a redraw of both
// cut points; after 8 failed attempts the parents are returned unchanged.
// Parents are never mutated in place.
std::pair<FntModel, FntModel> crossover(const FntModel& parent_a, const FntModel& parent_b,
                                        const GpConfig& cfg, Rng& rng);

// Applies exactly one of the four structural operators, chosen uniformly, to
// a copy of the model.
FntModel mutate(const FntModel& model, const GpConfig& cfg, Rng& rng);

// The individual operators (mutate dispatches among them uniformly):
// 1. one terminal replaced by a fresh terminal
FntModel mutate_replace_one_terminal(const FntModel& model, const GpConfig& cfg, Rng& rng);
// 2. every terminal replaced by a fresh terminal
FntModel mutate_replace_all_terminals(const FntModel& model, const GpConfig& cfg, Rng& rng);
// 3. a computational node replaced by a freshly grown subtree (height-capped)
FntModel mutate_grow_subtree(const FntModel& model, const GpConfig& cfg, Rng& rng);
// 4. a non-root computational node collapsed to a terminal; identity when the
//    root is the only computational node
FntModel mutate_collapse_to_terminal(const FntModel& model, const GpConfig& cfg, Rng& rng);

struct ScoredModel {
    FntModel model;
    double rmse = 0.0;
};

struct GpState {
    std::vector<ScoredModel> population;
    long generation = 0;
    ScoredModel best;
};

struct GenerationStats {
    long generation = 0;
    double best_rmse = 0.0;
    double mean_rmse = 0.0;
    int best_complexity = 0;
};

using GenerationLogger = std::function<void(const GenerationStats&)>;

struct EvolveResult {
    FntModel best;
    double best_rmse = 0.0;
    std::vector<double> history;  // best-so-far RMSE after init and each generation
    long generations_run = 0;
};

// Structure-optimization loop: tournament selection, subtree crossover,
// the four mutation operators, generational replacement with elitism of 1.
// Every new candidate is scored by its training RMSE after a short DE
// refinement (inner_de_budget evaluations) of its parameters; the returned
// model carries its refined parameters. Terminates at max_generations or
// after stagnation_patience generations without improvement. The dataset is
// expected to carry normalized features.
EvolveResult evolve_structure(const Dataset& normalized, const GpConfig& cfg,
                              const DeConfig& de_cfg, const GenerationLogger& logger = {});

}  // namespace fnt
