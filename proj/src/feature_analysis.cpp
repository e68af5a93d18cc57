#include "fnt/feature_analysis.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "fnt/format.hpp"
#include "fnt/rng.hpp"

namespace fnt {

namespace {

enum : std::uint64_t { kStreamGpRun = 11, kStreamDeRun = 12 };

bool contains_all(std::span<const int> superset, std::span<const int> subset) {
    // both sorted ascending
    return std::includes(superset.begin(), superset.end(), subset.begin(), subset.end());
}

bool matches(const ModelRecord& record, std::span<const int> feature_set, AnalysisMode mode,
             const AnalysisOptions& options) {
    if (mode == AnalysisMode::individual) {
        return std::binary_search(record.selected_features.begin(),
                                  record.selected_features.end(), feature_set.front());
    }
    if (options.subset_containment) return contains_all(record.selected_features, feature_set);
    return record.selected_features.size() == feature_set.size() &&
           std::equal(record.selected_features.begin(), record.selected_features.end(),
                      feature_set.begin());
}

double record_score(const ModelRecord& record, const AnalysisOptions& options) {
    if (!options.inverse_fitness) return record.rmse;
    return 1.0 / std::max(record.rmse, 1e-12);
}

}  // namespace

std::vector<ModelRecord> build_model_list(const Dataset& ds, const GpConfig& gp_cfg,
                                          const DeConfig& de_cfg, int M) {
    if (M < 1) throw std::invalid_argument("build_model_list: M must be >= 1");
    validate_dataset(ds);
    validate_gp_config(gp_cfg);
    validate_de_config(de_cfg);

    const NormalizationParams params = fit_normalization(ds.rows);
    Dataset normalized = ds;
    normalized.rows = apply_normalization(params, ds.rows);

    std::vector<ModelRecord> records;
    records.reserve(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        GpConfig gp_i = gp_cfg;
        gp_i.seed = derive_seed(gp_cfg.seed, kStreamGpRun, static_cast<std::uint64_t>(i));
        DeConfig de_i = de_cfg;
        de_i.seed = derive_seed(de_cfg.seed, kStreamDeRun, static_cast<std::uint64_t>(i));
        const EvolveResult evolved = evolve_structure(normalized, gp_i, de_cfg);
        const FitResult fit = optimize_parameters(evolved.best, normalized.rows, de_i);
        records.push_back(ModelRecord{selected_features(fit.model), fit.rmse});
    }
    return records;
}

double selection_rate(std::span<const ModelRecord> records, std::span<const int> feature_set,
                      AnalysisMode mode, const AnalysisOptions& options) {
    if (records.empty()) throw std::invalid_argument("selection_rate: no records");
    if (feature_set.empty()) throw std::invalid_argument("selection_rate: empty feature set");
    std::size_t hits = 0;
    for (const ModelRecord& r : records) {
        if (matches(r, feature_set, mode, options)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

double set_fitness(std::span<const ModelRecord> records, std::span<const int> feature_set,
                   AnalysisMode mode, const AnalysisOptions& options) {
    if (records.empty()) throw std::invalid_argument("set_fitness: no records");
    if (feature_set.empty()) throw std::invalid_argument("set_fitness: empty feature set");
    double sum = 0.0;
    std::size_t hits = 0;
    for (const ModelRecord& r : records) {
        if (matches(r, feature_set, mode, options)) {
            sum += record_score(r, options);
            ++hits;
        }
    }
    if (hits == 0) return 0.0;
    // singletons accumulate, larger sets average
    return feature_set.size() == 1 ? sum : sum / static_cast<double>(hits);
}

std::vector<double> predictability(std::span<const double> fitnesses) {
    if (fitnesses.empty()) throw std::invalid_argument("predictability: no fitness values");
    double max_f = 0.0;
    for (double f : fitnesses) max_f = std::max(max_f, f);
    if (!(max_f > 0.0))
        throw std::invalid_argument("predictability: all fitness values are zero");
    std::vector<double> out;
    out.reserve(fitnesses.size());
    for (double f : fitnesses) out.push_back(f / max_f);
    return out;
}

AnalysisResult analyze(std::span<const ModelRecord> records,
                       std::span<const std::string> feature_names, AnalysisMode mode,
                       const AnalysisOptions& options) {
    if (records.empty()) throw std::invalid_argument("analyze: no records");
    AnalysisResult result;
    result.mode = mode;

    std::vector<std::vector<int>> sets;
    if (mode == AnalysisMode::individual) {
        for (std::size_t f = 0; f < feature_names.size(); ++f)
            sets.push_back({static_cast<int>(f)});
    } else {
        for (const ModelRecord& r : records) {
            if (std::find(sets.begin(), sets.end(), r.selected_features) == sets.end())
                sets.push_back(r.selected_features);
        }
    }

    std::vector<double> fitnesses;
    fitnesses.reserve(sets.size());
    for (const auto& s : sets) fitnesses.push_back(set_fitness(records, s, mode, options));
    const std::vector<double> scores = predictability(fitnesses);

    for (std::size_t i = 0; i < sets.size(); ++i) {
        FeatureSetScore row;
        row.features = sets[i];
        std::string label;
        for (std::size_t j = 0; j < sets[i].size(); ++j) {
            if (j) label += ", ";
            const int f = sets[i][j];
            label += f >= 0 && f < static_cast<int>(feature_names.size())
                         ? feature_names[static_cast<std::size_t>(f)]
                         : "feature" + std::to_string(f);
        }
        row.label = label;
        row.selection_rate = selection_rate(records, sets[i], mode, options);
        row.fitness = fitnesses[i];
        row.predictability = scores[i];
        result.rows.push_back(std::move(row));
    }
    return result;
}

std::string render_analysis(const AnalysisResult& result) {
    std::ostringstream os;
    os << (result.mode == AnalysisMode::individual ? "Individual input features"
                                                   : "Input feature subsets")
       << "\n";
    os << std::left << std::setw(4) << "#" << std::setw(48) << "Input feature set" << std::right
       << std::setw(16) << "Selection rate" << std::setw(22) << "Predictability score" << "\n";
    int no = 1;
    for (const FeatureSetScore& row : result.rows) {
        os << std::left << std::setw(4) << no++ << std::setw(48) << ("{" + row.label + "}")
           << std::right << std::fixed << std::setprecision(5) << std::setw(16)
           << row.selection_rate << std::setw(22) << row.predictability << "\n";
    }
    return os.str();
}

std::string render_analysis_csv(const AnalysisResult& result) {
    std::string out = "feature_set,selection_rate,predictability\n";
    for (const FeatureSetScore& row : result.rows) {
        std::string label = row.label;
        std::replace(label.begin(), label.end(), ',', ';');
        out += label;
        out += ',';
        out += format_double(row.selection_rate);
        out += ',';
        out += format_double(row.predictability);
        out += '\n';
    }
    return out;
}

std::string render_records_csv(std::span<const ModelRecord> records) {
    std::string out = "model,rmse,selected_features\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(records[i].rmse);
        out += ',';
        for (std::size_t j = 0; j < records[i].selected_features.size(); ++j) {
            if (j) out += ';';
            out += std::to_string(records[i].selected_features[j]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace fnt
