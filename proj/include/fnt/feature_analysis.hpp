#pragma once

#include <span>
#include <string>
#include <vector>

#include "fnt/dataset.hpp"
#include "fnt/de.hpp"
#include "fnt/gp.hpp"

namespace fnt {

// One independently trained model: its selected feature set (sorted,
// non-empty) and its final training RMSE.
struct ModelRecord {
    std::vector<int> selected_features;
    double rmse = 0.0;
};

enum class AnalysisMode {
    individual,  // each single feature, matched by membership
    subset,      // observed feature sets, matched exactly (or by containment)
};

struct AnalysisOptions {
    bool subset_containment = false;  // subset mode: containment instead of exact match
    bool inverse_fitness = false;     // score with 1/e_i instead of e_i
};

struct FeatureSetScore {
    std::string label;
    std::vector<int> features;
    double selection_rate = 0.0;
    double fitness = 0.0;
    double predictability = 0.0;
};

struct AnalysisResult {
    AnalysisMode mode = AnalysisMode::individual;
    std::vector<FeatureSetScore> rows;
};

// Trains M independent models on the full dataset (normalization fitted on
// all rows) with seeds derived from the config seeds and the run index;
// records each model's final training RMSE and selected feature set.
std::vector<ModelRecord> build_model_list(const Dataset& ds, const GpConfig& gp_cfg,
                                          const DeConfig& de_cfg, int M);

// Fraction of records matching the feature set: membership of the single
// feature in individual mode, exact set equality (or containment) in subset
// mode.
double selection_rate(std::span<const ModelRecord> records, std::span<const int> feature_set,
                      AnalysisMode mode, const AnalysisOptions& options = {});

// Singleton sets score the sum of matching models' RMSEs; larger sets score
// their mean. Zero when nothing matches.
double set_fitness(std::span<const ModelRecord> records, std::span<const int> feature_set,
                   AnalysisMode mode, const AnalysisOptions& options = {});

// Max-normalized fitness: P_j = F_j / max_j F_j. Throws when every fitness is
// zero.
std::vector<double> predictability(std::span<const double> fitnesses);

// Individual mode scores every single feature; subset mode scores the
// distinct selected sets observed in the records, in first-appearance order.
AnalysisResult analyze(std::span<const ModelRecord> records,
                       std::span<const std::string> feature_names, AnalysisMode mode,
                       const AnalysisOptions& options = {});

// Aligned text table of (feature set, R, P).
std::string render_analysis(const AnalysisResult& result);

// label,selection_rate,predictability
std::string render_analysis_csv(const AnalysisResult& result);

// Audit dump: model,rmse,selected_features (indices ';'-joined, 0-based)
std::string render_records_csv(std::span<const ModelRecord> records);

}  // namespace fnt
