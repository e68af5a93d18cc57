#include "fnt/cv.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fnt/errors.hpp"
#include "fnt/format.hpp"
#include "fnt/metrics.hpp"
#include "fnt/rng.hpp"

namespace fnt {

namespace {

// fold-seed streams
enum : std::uint64_t { kStreamGp = 1, kStreamDe = 2, kStreamMlp = 3 };

std::vector<Sample> gather(const Dataset& ds, const std::vector<int>& indices) {
    std::vector<Sample> out;
    out.reserve(indices.size());
    for (int i : indices) out.push_back(ds.rows[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<double> targets_of(std::span<const Sample> rows) {
    std::vector<double> t;
    t.reserve(rows.size());
    for (const Sample& s : rows) t.push_back(s.target);
    return t;
}

std::optional<double> safe_correlation(std::span<const double> y, std::span<const double> d) {
    if (y.size() < 2) return std::nullopt;
    return correlation(y, d);
}

Dataset fold_dataset(const Dataset& ds, std::vector<Sample> rows, int fold) {
    Dataset out;
    out.feature_names = ds.feature_names;
    out.target_name = ds.target_name;
    out.provenance = ds.provenance + "#fold" + std::to_string(fold);
    out.rows = std::move(rows);
    return out;
}

void aggregate_report(CvReport& rep) {
    std::vector<double> train_rmses;
    std::vector<double> test_rmses;
    std::vector<double> train_rs;
    std::vector<double> test_rs;
    for (const FoldRecord& f : rep.per_fold) {
        train_rmses.push_back(f.train_rmse);
        test_rmses.push_back(f.test_rmse);
        if (f.train_r) train_rs.push_back(*f.train_r);
        if (f.test_r) test_rs.push_back(*f.test_r);
    }
    rep.mean_train_rmse = aggregate(train_rmses).mean;
    rep.mean_test_rmse = aggregate(test_rmses).mean;
    if (!train_rs.empty()) {
        const MeanStd ms = aggregate(train_rs);
        rep.mean_train_r = ms.mean;
        rep.std_train_r = ms.std;
    }
    if (!test_rs.empty()) {
        const MeanStd ms = aggregate(test_rs);
        rep.mean_test_r = ms.mean;
        rep.std_test_r = ms.std;
    }
    rep.model_complexity = rep.per_fold.front().complexity;
    rep.selected_features = rep.per_fold.front().selected_features;
}

std::string feature_list_1based(std::span<const int> features) {
    std::string out;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(features[i] + 1);
    }
    return out.empty() ? "-" : out;
}

std::string opt_num(const std::optional<double>& v, int precision) {
    if (!v) return "-";
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << *v;
    return os.str();
}

}  // namespace

FoldPlan make_fold_plan(int n_rows, FoldScheme scheme, int k, std::uint64_t seed) {
    FoldPlan plan;
    plan.scheme = scheme;
    plan.k = k;
    plan.seed = seed;
    Rng rng(seed);

    if (scheme == FoldScheme::kfold) {
        if (k < 2) throw ConfigError("fold plan: k must be >= 2");
        if (n_rows < k)
            throw DataError("fold plan: " + std::to_string(n_rows) + " rows cannot fill " +
                            std::to_string(k) + " folds");
        std::vector<int> order(static_cast<std::size_t>(n_rows));
        std::iota(order.begin(), order.end(), 0);
        shuffle(order, rng);
        const int base = n_rows / k;
        const int extra = n_rows % k;
        std::size_t pos = 0;
        for (int f = 0; f < k; ++f) {
            const int size = base + (f < extra ? 1 : 0);
            FoldAssignment a;
            a.test.assign(order.begin() + pos, order.begin() + pos + size);
            a.train.reserve(static_cast<std::size_t>(n_rows - size));
            for (int i = 0; i < n_rows; ++i) {
                const int row = order[static_cast<std::size_t>(i)];
                if (i < static_cast<int>(pos) || i >= static_cast<int>(pos) + size)
                    a.train.push_back(row);
            }
            std::sort(a.test.begin(), a.test.end());
            std::sort(a.train.begin(), a.train.end());
            plan.assignments.push_back(std::move(a));
            pos += static_cast<std::size_t>(size);
        }
        return plan;
    }

    if (n_rows < 2) throw DataError("fold plan: need at least 2 rows for 5x2 CV");
    std::vector<int> order(static_cast<std::size_t>(n_rows));
    std::iota(order.begin(), order.end(), 0);
    for (int rep = 0; rep < 5; ++rep) {
        shuffle(order, rng);
        const int half = n_rows / 2;
        std::vector<int> first(order.begin(), order.begin() + (n_rows - half));
        std::vector<int> second(order.begin() + (n_rows - half), order.end());
        std::sort(first.begin(), first.end());
        std::sort(second.begin(), second.end());
        plan.assignments.push_back(FoldAssignment{first, second});
        plan.assignments.push_back(FoldAssignment{second, first});
    }
    return plan;
}

CvReport run_cv_fnt(const Dataset& ds, const FoldPlan& plan, const GpConfig& gp_cfg,
                    const DeConfig& de_cfg, const CvOptions& options) {
    validate_dataset(ds);
    validate_gp_config(gp_cfg);
    validate_de_config(de_cfg);
    if (plan.assignments.empty()) throw std::invalid_argument("run_cv_fnt: empty fold plan");

    CvReport rep;
    rep.model_type = "FNT";
    rep.structure_reused = options.structure_reuse;

    NormalizationParams global_params;
    if (options.normalization == NormalizationScope::global)
        global_params = fit_normalization(ds.rows);

    FntModel structure;
    bool have_structure = false;

    for (std::size_t f = 0; f < plan.assignments.size(); ++f) {
        const FoldAssignment& fold = plan.assignments[f];
        const std::vector<Sample> train = gather(ds, fold.train);
        const std::vector<Sample> test = gather(ds, fold.test);
        const NormalizationParams params = options.normalization == NormalizationScope::global
                                               ? global_params
                                               : fit_normalization(train);
        const std::vector<Sample> ntrain = apply_normalization(params, train);
        const std::vector<Sample> ntest = apply_normalization(params, test);

        DeConfig fold_de = de_cfg;
        fold_de.seed = derive_seed(de_cfg.seed, kStreamDe, f);

        FntModel model;
        if (options.structure_reuse && have_structure) {
            model = optimize_parameters(structure, ntrain, fold_de).model;
        } else {
            GpConfig fold_gp = gp_cfg;
            fold_gp.seed = derive_seed(gp_cfg.seed, kStreamGp, f);
            const EvolveResult evolved =
                evolve_structure(fold_dataset(ds, ntrain, static_cast<int>(f) + 1), fold_gp, de_cfg);
            model = optimize_parameters(evolved.best, ntrain, fold_de).model;
            if (options.structure_reuse) {
                structure = model;
                have_structure = true;
            }
        }

        const std::vector<double> train_pred = predict_rows(model, ntrain);
        const std::vector<double> test_pred = predict_rows(model, ntest);
        const std::vector<double> train_tgt = targets_of(ntrain);
        const std::vector<double> test_tgt = targets_of(ntest);

        FoldRecord record;
        record.fold = static_cast<int>(f) + 1;
        record.train_rmse = rmse(train_pred, train_tgt);
        record.test_rmse = rmse(test_pred, test_tgt);
        record.train_r = safe_correlation(train_pred, train_tgt);
        record.test_r = safe_correlation(test_pred, test_tgt);
        record.complexity = complexity(model);
        record.selected_features = selected_features(model);
        record.test_predictions.reserve(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) {
            record.test_predictions.push_back(
                PredictionRow{fold.test[i], test[i].target, test_pred[i]});
        }
        rep.per_fold.push_back(std::move(record));
    }

    aggregate_report(rep);
    return rep;
}

CvReport run_cv_baseline(const Dataset& ds, const FoldPlan& plan, const MlpConfig& mlp_cfg,
                         const CvOptions& options) {
    validate_dataset(ds);
    validate_mlp_config(mlp_cfg);
    if (plan.assignments.empty()) throw std::invalid_argument("run_cv_baseline: empty fold plan");

    CvReport rep;
    rep.model_type = "MLP";
    rep.structure_reused = false;

    NormalizationParams global_params;
    if (options.normalization == NormalizationScope::global)
        global_params = fit_normalization(ds.rows);

    std::vector<int> all_features(ds.n_features());
    std::iota(all_features.begin(), all_features.end(), 0);

    for (std::size_t f = 0; f < plan.assignments.size(); ++f) {
        const FoldAssignment& fold = plan.assignments[f];
        const std::vector<Sample> train = gather(ds, fold.train);
        const std::vector<Sample> test = gather(ds, fold.test);
        const NormalizationParams params = options.normalization == NormalizationScope::global
                                               ? global_params
                                               : fit_normalization(train);
        const std::vector<Sample> ntrain = apply_normalization(params, train);
        const std::vector<Sample> ntest = apply_normalization(params, test);

        MlpConfig fold_cfg = mlp_cfg;
        fold_cfg.seed = derive_seed(mlp_cfg.seed, kStreamMlp, f);
        const MlpModel model =
            train_mlp(fold_dataset(ds, ntrain, static_cast<int>(f) + 1), fold_cfg);

        std::vector<double> train_pred;
        train_pred.reserve(ntrain.size());
        for (const Sample& s : ntrain) train_pred.push_back(predict_mlp(model, s.features));
        std::vector<double> test_pred;
        test_pred.reserve(ntest.size());
        for (const Sample& s : ntest) test_pred.push_back(predict_mlp(model, s.features));
        const std::vector<double> train_tgt = targets_of(ntrain);
        const std::vector<double> test_tgt = targets_of(ntest);

        FoldRecord record;
        record.fold = static_cast<int>(f) + 1;
        record.train_rmse = rmse(train_pred, train_tgt);
        record.test_rmse = rmse(test_pred, test_tgt);
        record.train_r = safe_correlation(train_pred, train_tgt);
        record.test_r = safe_correlation(test_pred, test_tgt);
        record.complexity = model.hidden_nodes + 1;  // computational nodes
        record.selected_features = all_features;
        record.test_predictions.reserve(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) {
            record.test_predictions.push_back(
                PredictionRow{fold.test[i], test[i].target, test_pred[i]});
        }
        rep.per_fold.push_back(std::move(record));
    }

    aggregate_report(rep);
    return rep;
}

namespace {

std::vector<std::size_t> report_order(std::span<const CvReport> reports) {
    std::vector<std::size_t> order(reports.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ra = reports[a];
        const auto& rb = reports[b];
        if (ra.mean_test_r.has_value() != rb.mean_test_r.has_value())
            return ra.mean_test_r.has_value();
        if (ra.mean_test_r && rb.mean_test_r && *ra.mean_test_r != *rb.mean_test_r)
            return *ra.mean_test_r > *rb.mean_test_r;
        return ra.mean_test_rmse < rb.mean_test_rmse;
    });
    return order;
}

}  // namespace

std::string render_report(std::span<const CvReport> reports,
                          std::span<const std::string> feature_names) {
    if (reports.empty()) throw std::invalid_argument("render_report: no reports");
    const std::vector<std::size_t> order = report_order(reports);

    std::ostringstream os;
    os << std::left << std::setw(4) << "No." << std::setw(7) << "Model" << std::right
       << std::setw(12) << "Train RMSE" << std::setw(12) << "Test RMSE" << std::setw(10)
       << "Train r" << std::setw(10) << "Test r" << std::setw(12) << "Std train r"
       << std::setw(12) << "Std test r" << std::setw(12) << "Complexity" << "  "
       << "Selected features" << "\n";
    int no = 1;
    for (std::size_t idx : order) {
        const CvReport& r = reports[idx];
        os << std::left << std::setw(4) << no++ << std::setw(7) << r.model_type << std::right
           << std::setw(12) << std::fixed << std::setprecision(4) << r.mean_train_rmse
           << std::setw(12) << r.mean_test_rmse << std::setw(10) << opt_num(r.mean_train_r, 4)
           << std::setw(10) << opt_num(r.mean_test_r, 4) << std::setw(12)
           << opt_num(r.std_train_r, 4) << std::setw(12) << opt_num(r.std_test_r, 4)
           << std::setw(12) << (r.model_complexity ? std::to_string(*r.model_complexity) : "-")
           << "  " << feature_list_1based(r.selected_features) << "\n";
    }
    os << "\nFeature numbering:\n";
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        os << "  " << (i + 1) << ": " << feature_names[i] << "\n";
    }
    return os.str();
}

std::string render_report_json(std::span<const CvReport> reports,
                               std::span<const std::string> feature_names,
                               std::span<const std::string> config_lines) {
    using json = nlohmann::ordered_json;
    const std::vector<std::size_t> order = report_order(reports);
    json out = json::array();
    int no = 1;
    for (std::size_t idx : order) {
        const CvReport& r = reports[idx];
        json jr;
        jr["no"] = no++;
        jr["model_type"] = r.model_type;
        jr["mean_train_rmse"] = r.mean_train_rmse;
        jr["mean_test_rmse"] = r.mean_test_rmse;
        jr["mean_train_r"] = r.mean_train_r ? json(*r.mean_train_r) : json(nullptr);
        jr["mean_test_r"] = r.mean_test_r ? json(*r.mean_test_r) : json(nullptr);
        jr["std_train_r"] = r.std_train_r ? json(*r.std_train_r) : json(nullptr);
        jr["std_test_r"] = r.std_test_r ? json(*r.std_test_r) : json(nullptr);
        jr["model_complexity"] = r.model_complexity ? json(*r.model_complexity) : json(nullptr);
        json sel = json::array();
        for (int fi : r.selected_features) sel.push_back(fi);
        jr["selected_features"] = std::move(sel);
        jr["structure_reused"] = r.structure_reused;
        json folds = json::array();
        for (const FoldRecord& fr : r.per_fold) {
            json jf;
            jf["fold"] = fr.fold;
            jf["train_rmse"] = fr.train_rmse;
            jf["test_rmse"] = fr.test_rmse;
            jf["train_r"] = fr.train_r ? json(*fr.train_r) : json(nullptr);
            jf["test_r"] = fr.test_r ? json(*fr.test_r) : json(nullptr);
            jf["complexity"] = fr.complexity ? json(*fr.complexity) : json(nullptr);
            json fsel = json::array();
            for (int fi : fr.selected_features) fsel.push_back(fi);
            jf["selected_features"] = std::move(fsel);
            folds.push_back(std::move(jf));
        }
        jr["per_fold"] = std::move(folds);
        out.push_back(std::move(jr));
    }
    json doc;
    if (!config_lines.empty())
        doc["effective_config"] =
            std::vector<std::string>(config_lines.begin(), config_lines.end());
    doc["feature_names"] = std::vector<std::string>(feature_names.begin(), feature_names.end());
    doc["reports"] = std::move(out);
    return doc.dump(2) + "\n";
}

std::string render_predictions_csv(const CvReport& report) {
    std::string out = "fold,row_index,target,prediction\n";
    for (const FoldRecord& fr : report.per_fold) {
        for (const PredictionRow& p : fr.test_predictions) {
            out += std::to_string(fr.fold);
            out += ',';
            out += std::to_string(p.row_index);
            out += ',';
            out += format_double(p.target);
            out += ',';
            out += format_double(p.prediction);
            out += '\n';
        }
    }
    return out;
}

}  // namespace fnt
