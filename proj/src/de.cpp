#include "fnt/de.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fnt/errors.hpp"
#include "fnt/rng.hpp"

namespace fnt {

namespace {

constexpr double kMinAbsB = 1e-6;
constexpr double kBadFitness = 1e300;

double sanitize(double f) { return std::isfinite(f) ? f : kBadFitness; }

std::size_t best_index(const std::vector<double>& fitnesses) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < fitnesses.size(); ++i) {
        if (fitnesses[i] < fitnesses[best]) best = i;
    }
    return best;
}

double clamp_into(double x, const Bounds& bound) {
    x = std::clamp(x, bound.lo, bound.hi);
    if (bound.min_abs > 0.0 && std::fabs(x) < bound.min_abs) {
        const bool pos_ok = bound.min_abs >= bound.lo && bound.min_abs <= bound.hi;
        const bool neg_ok = -bound.min_abs >= bound.lo && -bound.min_abs <= bound.hi;
        if (pos_ok && neg_ok) {
            x = x < 0.0 ? -bound.min_abs : bound.min_abs;
        } else if (pos_ok) {
            x = bound.min_abs;
        } else if (neg_ok) {
            x = -bound.min_abs;
        }
    }
    return x;
}

void draw_donors(std::size_t member, std::size_t n, Rng& rng, std::size_t& r1, std::size_t& r2,
                 std::size_t& r3) {
    do {
        r1 = rng.uniform_index(n);
    } while (r1 == member);
    do {
        r2 = rng.uniform_index(n);
    } while (r2 == member || r2 == r1);
    do {
        r3 = rng.uniform_index(n);
    } while (r3 == member || r3 == r1 || r3 == r2);
}

}  // namespace

void validate_de_config(const DeConfig& cfg) {
    if (cfg.population_size < 4)
        throw ConfigError("de: population_size must be >= 4 (three donors plus target)");
    if (!(cfg.mutation_factor > 0.0)) throw ConfigError("de: mutation factor F must be > 0");
    if (!(cfg.crossover_prob >= 0.0 && cfg.crossover_prob <= 1.0))
        throw ConfigError("de: crossover probability C must lie in [0, 1]");
    if (cfg.max_evaluations < cfg.population_size)
        throw ConfigError("de: max_evaluations must cover at least one population evaluation");
    if (!(cfg.node_arg_range.first <= cfg.node_arg_range.second))
        throw ConfigError("de: node argument range is not ordered");
    if (!(cfg.edge_range.first <= cfg.edge_range.second))
        throw ConfigError("de: edge range is not ordered");
}

double reflect_into(double x, const Bounds& bound) {
    const double width = bound.hi - bound.lo;
    if (!(width > 0.0)) {
        x = bound.lo;
    } else if (x < bound.lo || x > bound.hi) {
        double y = std::fabs(std::fmod(x - bound.lo, 2.0 * width));
        if (y > width) y = 2.0 * width - y;
        x = bound.lo + y;
    }
    if (bound.min_abs > 0.0 && std::fabs(x) < bound.min_abs) x = clamp_into(x, bound);
    return x;
}

ParamVector de_trial(std::span<const double> r1, std::span<const double> r2,
                     std::span<const double> r3, std::span<const double> g,
                     std::span<const Bounds> bounds, const DeConfig& cfg, Rng& rng) {
    ParamVector trial(r1.size());
    const double F = cfg.mutation_factor;
    for (std::size_t k = 0; k < r1.size(); ++k) {
        const double u = rng.uniform();
        double v;
        if (u < cfg.crossover_prob) {
            v = cfg.variant == DeVariant::paper_eq7
                    ? r1[k] + F * (r1[k] - g[k]) + F * (r2[k] - r3[k])
                    : r1[k] + F * (r2[k] - r3[k]);
        } else {
            v = r1[k];
        }
        trial[k] = reflect_into(v, bounds[k]);
    }
    return trial;
}

DeState de_init(const Objective& objective, std::span<const Bounds> bounds, const DeConfig& cfg,
                std::span<const double> seeded) {
    DeState state;
    state.population.resize(static_cast<std::size_t>(cfg.population_size));
    state.fitnesses.resize(static_cast<std::size_t>(cfg.population_size));
    for (std::size_t i = 0; i < state.population.size(); ++i) {
        Rng rng(derive_seed(cfg.seed, 0, i));
        ParamVector& member = state.population[i];
        member.resize(bounds.size());
        if (i == 0 && !seeded.empty()) {
            if (seeded.size() != bounds.size())
                throw std::invalid_argument("de_init: seeded member length mismatch");
            for (std::size_t k = 0; k < bounds.size(); ++k)
                member[k] = clamp_into(seeded[k], bounds[k]);
        } else {
            for (std::size_t k = 0; k < bounds.size(); ++k)
                member[k] = reflect_into(rng.uniform(bounds[k].lo, bounds[k].hi), bounds[k]);
        }
        state.fitnesses[i] = sanitize(objective(member));
        ++state.evaluations_used;
        if (state.fitnesses[i] < state.best_fitness) {
            state.best_fitness = state.fitnesses[i];
            state.best = member;
        }
    }
    return state;
}

void de_step(DeState& state, const Objective& objective, std::span<const Bounds> bounds,
             const DeConfig& cfg) {
    const std::size_t n = state.population.size();
    const std::size_t g = best_index(state.fitnesses);
    std::vector<ParamVector> trials(n);
    std::vector<double> trial_fitness(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(state.generation) + 1, i));
        std::size_t r1;
        std::size_t r2;
        std::size_t r3;
        draw_donors(i, n, rng, r1, r2, r3);
        trials[i] = de_trial(state.population[r1], state.population[r2], state.population[r3],
                             state.population[g], bounds, cfg, rng);
        trial_fitness[i] = sanitize(objective(trials[i]));
        ++state.evaluations_used;
    }
    // synchronous greedy replacement: the trial wins unless strictly worse
    for (std::size_t i = 0; i < n; ++i) {
        if (trial_fitness[i] <= state.fitnesses[i]) {
            state.population[i] = std::move(trials[i]);
            state.fitnesses[i] = trial_fitness[i];
            if (state.fitnesses[i] < state.best_fitness) {
                state.best_fitness = state.fitnesses[i];
                state.best = state.population[i];
            }
        }
    }
    ++state.generation;
}

DeState de_minimize(const Objective& objective, std::span<const Bounds> bounds,
                    const DeConfig& cfg, std::span<const double> seeded,
                    const DeLogger& logger) {
    validate_de_config(cfg);
    if (bounds.empty()) throw std::invalid_argument("de_minimize: no dimensions");
    DeState state = de_init(objective, bounds, cfg, seeded);
    if (logger) logger(state.evaluations_used, state.best_fitness);
    while (state.evaluations_used + cfg.population_size <= cfg.max_evaluations) {
        de_step(state, objective, bounds, cfg);
        if (logger) logger(state.evaluations_used, state.best_fitness);
    }
    return state;
}

std::vector<Bounds> parameter_bounds(const FntModel& model, std::span<const Sample> rows,
                                     const DeConfig& cfg) {
    std::vector<Bounds> bounds;
    bounds.reserve(param_count(model));
    const auto [node_lo, node_hi] = cfg.node_arg_range;
    const auto [edge_lo, edge_hi] = cfg.edge_range;

    // same pre-order walk as flatten()
    auto walk = [&](auto&& self, const FntNode& node) -> void {
        if (node.is_leaf()) return;
        bounds.push_back(Bounds{node_lo, node_hi, 0.0});
        bounds.push_back(Bounds{node_lo, node_hi, kMinAbsB});
        for (std::size_t j = 0; j < node.weights.size(); ++j)
            bounds.push_back(Bounds{edge_lo, edge_hi, 0.0});
        for (const FntNode& c : node.children) self(self, c);
    };
    walk(walk, model.root);

    if (model.output_map) {
        double t_lo = rows.empty() ? 0.0 : rows[0].target;
        double t_hi = t_lo;
        for (const Sample& s : rows) {
            t_lo = std::min(t_lo, s.target);
            t_hi = std::max(t_hi, s.target);
        }
        double delta = t_hi - t_lo;
        if (!(delta > 0.0)) delta = std::max(1.0, std::fabs(t_hi));
        bounds.push_back(Bounds{-4.0 * delta, 4.0 * delta, 0.0});
        bounds.push_back(Bounds{t_lo - 2.0 * delta, t_hi + 2.0 * delta, 0.0});
    }
    return bounds;
}

std::vector<double> predict_rows(const FntModel& model, std::span<const Sample> rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const Sample& s : rows) out.push_back(evaluate(model, s.features));
    return out;
}

double training_rmse(const FntModel& model, std::span<const Sample> rows) {
    if (rows.empty()) throw std::invalid_argument("training_rmse: no rows");
    double acc = 0.0;
    for (const Sample& s : rows) {
        const double d = evaluate(model, s.features) - s.target;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(rows.size()));
}

FitResult optimize_parameters(const FntModel& model, std::span<const Sample> rows,
                              const DeConfig& cfg, const DeLogger& logger) {
    validate_de_config(cfg);
    validate_model(model);
    if (rows.empty()) throw std::invalid_argument("optimize_parameters: no rows");
    if (rows[0].features.size() != static_cast<std::size_t>(model.input_arity))
        throw std::invalid_argument("optimize_parameters: dataset arity mismatch");

    const std::vector<Bounds> bounds = parameter_bounds(model, rows, cfg);
    FntModel scratch = model;
    const Objective objective = [&](std::span<const double> v) {
        apply_params(scratch, v);
        return training_rmse(scratch, rows);
    };
    const double input_rmse = sanitize(training_rmse(model, rows));
    const ParamVector seeded = flatten(model);
    DeState state = de_minimize(objective, bounds, cfg, seeded, logger);
    if (input_rmse < state.best_fitness) return FitResult{model, input_rmse};
    return FitResult{unflatten(model, state.best), state.best_fitness};
}

}  // namespace fnt
