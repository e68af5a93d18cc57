#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fnt/dataset.hpp"
#include "fnt/gp.hpp"
#include "fnt/mlp.hpp"

namespace fnt {

enum class FoldScheme { kfold, five_by_two };

struct FoldAssignment {
    std::vector<int> train;
    std::vector<int> test;
};

// Shuffled, seed-deterministic fold layout. For kfold the test sets partition
// the rows with sizes differing by at most one; for five_by_two each of the 5
// repetitions splits the rows into two halves, each serving once as train and
// once as test (10 assignments).
struct FoldPlan {
    FoldScheme scheme = FoldScheme::kfold;
    int k = 10;
    std::vector<FoldAssignment> assignments;
    std::uint64_t seed = 0;
};

FoldPlan make_fold_plan(int n_rows, FoldScheme scheme, int k, std::uint64_t seed);

enum class NormalizationScope { per_fold, global };

struct CvOptions {
    bool structure_reuse = true;  // search the tree once, refit parameters per fold
    NormalizationScope normalization = NormalizationScope::per_fold;
};

struct PredictionRow {
    int row_index = 0;
    double target = 0.0;
    double prediction = 0.0;
};

struct FoldRecord {
    int fold = 0;
    double train_rmse = 0.0;
    double test_rmse = 0.0;
    std::optional<double> train_r;
    std::optional<double> test_r;
    std::optional<int> complexity;
    std::vector<int> selected_features;
    std::vector<PredictionRow> test_predictions;
};

struct CvReport {
    std::string model_type;
    double mean_train_rmse = 0.0;
    double mean_test_rmse = 0.0;
    std::optional<double> mean_train_r;
    std::optional<double> mean_test_r;
    std::optional<double> std_train_r;
    std::optional<double> std_test_r;
    std::optional<int> model_complexity;
    std::vector<int> selected_features;
    bool structure_reused = false;
    std::vector<FoldRecord> per_fold;
};

// Runs the FNT protocol on the plan. With structure_reuse the tree topology
// is evolved on fold 1's training rows only; the remaining folds re-fit
// parameters on their own training rows. Normalization is fitted on each
// fold's training rows (or once globally). Per-fold seeds derive from the
// config seeds and the fold index.
CvReport run_cv_fnt(const Dataset& ds, const FoldPlan& plan, const GpConfig& gp_cfg,
                    const DeConfig& de_cfg, const CvOptions& options = {});

// Same fold and normalization handling; the baseline trains from scratch on
// every fold. Complexity is the computational node count (hidden + output).
CvReport run_cv_baseline(const Dataset& ds, const FoldPlan& plan, const MlpConfig& mlp_cfg,
                         const CvOptions& options = {});

// Aligned text table, rows sorted by mean test correlation descending
// (undefined last), ties broken by lower test RMSE.
std::string render_report(std::span<const CvReport> reports,
                          std::span<const std::string> feature_names);

// Machine-readable JSON: one record per report, plus per-fold records.
// config_lines, when given, are embedded as the document's effective_config.
std::string render_report_json(std::span<const CvReport> reports,
                               std::span<const std::string> feature_names,
                               std::span<const std::string> config_lines = {});

// Plot-ready dump of one report's test predictions:
// fold,row_index,target,prediction
std::string render_predictions_csv(const CvReport& report);

}  // namespace fnt
