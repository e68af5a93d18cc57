#include "fnt/gp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fnt/errors.hpp"
#include "fnt/rng.hpp"

namespace fnt {

namespace {

constexpr double kMinAbsB = 1e-6;
constexpr int kCrossoverAttempts = 8;
constexpr double kGrowLeafProb = 0.5;

// sub-stream labels for derive_seed(seed, generation, sub(tag, index))
enum : std::uint64_t { kTagTree = 0, kTagFitness = 1, kTagVariation = 2 };

std::uint64_t sub(std::uint64_t tag, std::uint64_t index) { return (tag << 32) | index; }

double draw_b(const GpConfig& cfg, Rng& rng) {
    double b = rng.uniform(cfg.node_arg_range.first, cfg.node_arg_range.second);
    if (std::fabs(b) < kMinAbsB) {
        b = cfg.node_arg_range.second >= kMinAbsB ? kMinAbsB : -kMinAbsB;
    }
    return b;
}

// level is the node's own level (root = 1); children sit one level deeper.
FntNode grow_node(const GpConfig& cfg, int input_arity, Rng& rng, int level, bool must_be_comp) {
    const bool leaf =
        !must_be_comp && (level >= cfg.max_height || rng.bernoulli(kGrowLeafProb));
    if (leaf) return FntNode::leaf(static_cast<int>(rng.uniform_index(input_arity)));

    FntNode n;
    const std::size_t arity = 2 + rng.uniform_index(static_cast<std::size_t>(cfg.max_arity - 1));
    n.a = rng.uniform(cfg.node_arg_range.first, cfg.node_arg_range.second);
    n.b = draw_b(cfg, rng);
    n.weights.resize(arity);
    for (double& w : n.weights) w = rng.uniform(cfg.edge_range.first, cfg.edge_range.second);
    n.children.reserve(arity);
    for (std::size_t j = 0; j < arity; ++j) {
        n.children.push_back(grow_node(cfg, input_arity, rng, level + 1, false));
    }
    return n;
}

struct NodeRef {
    FntNode* node;
    int level;
};

void collect_nodes(FntNode& node, int level, std::vector<NodeRef>& out) {
    out.push_back({&node, level});
    for (FntNode& c : node.children) collect_nodes(c, level + 1, out);
}

void collect_leaves(FntNode& node, std::vector<FntNode*>& out) {
    if (node.is_leaf()) {
        out.push_back(&node);
        return;
    }
    for (FntNode& c : node.children) collect_leaves(c, out);
}

void collect_computational(FntNode& node, int level, std::vector<NodeRef>& out) {
    if (node.is_leaf()) return;
    out.push_back({&node, level});
    for (FntNode& c : node.children) collect_computational(c, level + 1, out);
}

}  // namespace

void validate_gp_config(const GpConfig& cfg) {
    if (cfg.population_size < 2) throw ConfigError("gp: population_size must be >= 2");
    if (cfg.tournament_size < 2 || cfg.tournament_size > cfg.population_size)
        throw ConfigError("gp: tournament_size must lie in [2, population_size]");
    if (!(cfg.crossover_prob >= 0.0 && cfg.crossover_prob <= 1.0))
        throw ConfigError("gp: crossover probability must lie in [0, 1]");
    if (!(cfg.mutation_prob >= 0.0 && cfg.mutation_prob <= 1.0))
        throw ConfigError("gp: mutation probability must lie in [0, 1]");
    if (cfg.max_height < 2) throw ConfigError("gp: max_height must be >= 2");
    if (cfg.max_arity < 2) throw ConfigError("gp: max_arity must be >= 2");
    if (cfg.max_generations < 0) throw ConfigError("gp: max_generations must be >= 0");
    if (cfg.inner_de_budget < 1) throw ConfigError("gp: inner_de_budget must be >= 1");
    if (cfg.stagnation_patience < 1) throw ConfigError("gp: stagnation_patience must be >= 1");
    if (!(cfg.node_arg_range.first <= cfg.node_arg_range.second))
        throw ConfigError("gp: node argument range is not ordered");
    if (!(cfg.edge_range.first <= cfg.edge_range.second))
        throw ConfigError("gp: edge range is not ordered");
    if (cfg.node_arg_range.second < kMinAbsB && cfg.node_arg_range.first > -kMinAbsB)
        throw ConfigError("gp: node argument range leaves no room for |b| >= 1e-6");
}

FntModel random_tree(const GpConfig& cfg, int input_arity, Rng& rng) {
    validate_gp_config(cfg);
    if (input_arity < 1) throw ConfigError("gp: input arity must be >= 1");
    FntModel m;
    m.input_arity = input_arity;
    m.gaussian = cfg.gaussian;
    if (cfg.use_output_map) m.output_map = OutputMap{1.0, 0.0};
    m.root = grow_node(cfg, input_arity, rng, 1, true);
    return m;
}

std::pair<FntModel, FntModel> crossover(const FntModel& parent_a, const FntModel& parent_b,
                                        const GpConfig& cfg, Rng& rng) {
    for (int attempt = 0; attempt < kCrossoverAttempts; ++attempt) {
        FntModel child_a = parent_a;
        FntModel child_b = parent_b;
        std::vector<NodeRef> nodes_a;
        std::vector<NodeRef> nodes_b;
        collect_nodes(child_a.root, 1, nodes_a);
        collect_nodes(child_b.root, 1, nodes_b);
        const NodeRef cut_a = nodes_a[rng.uniform_index(nodes_a.size())];
        const NodeRef cut_b = nodes_b[rng.uniform_index(nodes_b.size())];

        const int height_a = node_height(*cut_a.node);
        const int height_b = node_height(*cut_b.node);
        const bool height_ok = cut_a.level + height_b - 1 <= cfg.max_height &&
                               cut_b.level + height_a - 1 <= cfg.max_height;
        const bool root_ok = !(cut_a.level == 1 && cut_b.node->is_leaf()) &&
                             !(cut_b.level == 1 && cut_a.node->is_leaf());
        if (height_ok && root_ok) {
            std::swap(*cut_a.node, *cut_b.node);
            return {std::move(child_a), std::move(child_b)};
        }
    }
    return {parent_a, parent_b};
}

FntModel mutate_replace_one_terminal(const FntModel& model, const GpConfig& cfg, Rng& rng) {
    (void)cfg;
    FntModel out = model;
    std::vector<FntNode*> leaves;
    collect_leaves(out.root, leaves);
    FntNode* leaf = leaves[rng.uniform_index(leaves.size())];
    leaf->feature = static_cast<int>(rng.uniform_index(out.input_arity));
    return out;
}

FntModel mutate_replace_all_terminals(const FntModel& model, const GpConfig& cfg, Rng& rng) {
    (void)cfg;
    FntModel out = model;
    std::vector<FntNode*> leaves;
    collect_leaves(out.root, leaves);
    for (FntNode* leaf : leaves)
        leaf->feature = static_cast<int>(rng.uniform_index(out.input_arity));
    return out;
}

FntModel mutate_grow_subtree(const FntModel& model, const GpConfig& cfg, Rng& rng) {
    FntModel out = model;
    std::vector<NodeRef> comp;
    collect_computational(out.root, 1, comp);
    const NodeRef target = comp[rng.uniform_index(comp.size())];
    *target.node = grow_node(cfg, out.input_arity, rng, target.level, true);
    return out;
}

FntModel mutate_collapse_to_terminal(const FntModel& model, const GpConfig& cfg, Rng& rng) {
    (void)cfg;
    FntModel out = model;
    std::vector<NodeRef> comp;
    collect_computational(out.root, 1, comp);
    // the root must stay computational
    std::vector<NodeRef> eligible(comp.begin() + 1, comp.end());
    if (eligible.empty()) return out;
    const NodeRef target = eligible[rng.uniform_index(eligible.size())];
    *target.node = FntNode::leaf(static_cast<int>(rng.uniform_index(out.input_arity)));
    return out;
}

FntModel mutate(const FntModel& model, const GpConfig& cfg, Rng& rng) {
    switch (rng.uniform_index(4)) {
        case 0: return mutate_replace_one_terminal(model, cfg, rng);
        case 1: return mutate_replace_all_terminals(model, cfg, rng);
        case 2: return mutate_grow_subtree(model, cfg, rng);
        default: return mutate_collapse_to_terminal(model, cfg, rng);
    }
}

namespace {

std::size_t tournament(const std::vector<ScoredModel>& population, int tournament_size, Rng& rng) {
    std::size_t best = rng.uniform_index(population.size());
    for (int i = 1; i < tournament_size; ++i) {
        const std::size_t candidate = rng.uniform_index(population.size());
        if (population[candidate].rmse < population[best].rmse) best = candidate;
    }
    return best;
}

}  // namespace

EvolveResult evolve_structure(const Dataset& normalized, const GpConfig& cfg,
                              const DeConfig& de_cfg, const GenerationLogger& logger) {
    validate_gp_config(cfg);
    validate_dataset(normalized);
    const int arity = static_cast<int>(normalized.n_features());

    // inner refinement budget; the DE population shrinks if the budget cannot
    // cover one full evaluation sweep
    DeConfig inner = de_cfg;
    inner.node_arg_range = cfg.node_arg_range;
    inner.edge_range = cfg.edge_range;
    inner.max_evaluations = std::max<long>(cfg.inner_de_budget, 4);
    inner.population_size = static_cast<int>(
        std::min<long>(inner.population_size, inner.max_evaluations));
    inner.population_size = std::max(inner.population_size, 4);
    validate_de_config(inner);

    const auto score = [&](const FntModel& model, long generation,
                           std::size_t index) -> ScoredModel {
        DeConfig dc = inner;
        dc.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(generation),
                              sub(kTagFitness, index));
        FitResult fit = optimize_parameters(model, normalized.rows, dc);
        return ScoredModel{std::move(fit.model), fit.rmse};
    };

    GpState state;
    state.population.reserve(cfg.population_size);
    for (int i = 0; i < cfg.population_size; ++i) {
        Rng tree_rng(derive_seed(cfg.seed, 0, sub(kTagTree, static_cast<std::uint64_t>(i))));
        FntModel tree = random_tree(cfg, arity, tree_rng);
        state.population.push_back(score(tree, 0, static_cast<std::size_t>(i)));
    }
    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < state.population.size(); ++i) {
        if (state.population[i].rmse < state.population[best_idx].rmse) best_idx = i;
    }
    state.best = state.population[best_idx];

    EvolveResult result;
    result.history.push_back(state.best.rmse);

    const auto emit_stats = [&](long generation) {
        if (!logger) return;
        double mean = 0.0;
        for (const ScoredModel& s : state.population) mean += s.rmse;
        mean /= static_cast<double>(state.population.size());
        logger(GenerationStats{generation, state.best.rmse, mean, complexity(state.best.model)});
    };
    emit_stats(0);

    int stagnation = 0;
    for (long gen = 1; gen <= cfg.max_generations; ++gen) {
        Rng var_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(gen), sub(kTagVariation, 0)));

        std::vector<FntModel> offspring;
        offspring.reserve(cfg.population_size);
        while (offspring.size() + 1 < static_cast<std::size_t>(cfg.population_size)) {
            const ScoredModel& pa =
                state.population[tournament(state.population, cfg.tournament_size, var_rng)];
            const ScoredModel& pb =
                state.population[tournament(state.population, cfg.tournament_size, var_rng)];
            FntModel c1 = pa.model;
            FntModel c2 = pb.model;
            if (var_rng.bernoulli(cfg.crossover_prob)) {
                std::tie(c1, c2) = crossover(pa.model, pb.model, cfg, var_rng);
            }
            if (var_rng.bernoulli(cfg.mutation_prob)) c1 = mutate(c1, cfg, var_rng);
            if (var_rng.bernoulli(cfg.mutation_prob)) c2 = mutate(c2, cfg, var_rng);
            offspring.push_back(std::move(c1));
            if (offspring.size() + 1 < static_cast<std::size_t>(cfg.population_size))
                offspring.push_back(std::move(c2));
        }

        std::vector<ScoredModel> next;
        next.reserve(cfg.population_size);
        next.push_back(state.best);  // elitism of 1
        for (std::size_t i = 0; i < offspring.size(); ++i) {
            next.push_back(score(offspring[i], gen, i + 1));
        }
        state.population = std::move(next);
        state.generation = gen;
        result.generations_run = gen;

        bool improved = false;
        for (const ScoredModel& s : state.population) {
            if (s.rmse < state.best.rmse) {
                state.best = s;
                improved = true;
            }
        }
        result.history.push_back(state.best.rmse);
        emit_stats(gen);

        stagnation = improved ? 0 : stagnation + 1;
        if (stagnation >= cfg.stagnation_patience) break;
    }

    result.best = state.best.model;
    result.best_rmse = state.best.rmse;
    return result;
}

}  // namespace fnt
