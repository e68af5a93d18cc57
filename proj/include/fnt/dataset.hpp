#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fnt {

struct Sample {
    std::vector<double> features;
    double target = 0.0;
};

// A feature matrix plus one target column. Immutable once built; loaders and
// generators validate shape and finiteness up front, so downstream code can
// share a Dataset freely across threads.
struct Dataset {
    std::vector<std::string> feature_names;
    std::string target_name;
    std::vector<Sample> rows;
    std::string provenance;  // file path or generator descriptor

    std::size_t n_features() const { return feature_names.size(); }
    std::size_t n_rows() const { return rows.size(); }
};

// Throws DataError when an invariant is violated (row arity mismatch,
// non-finite value, fewer than 2 rows or 1 feature).
void validate_dataset(const Dataset& ds);

// Loads a CSV file: UTF-8, comma separated, one header row, '.' decimal
// separator. Lines starting with '#' are comments and are skipped (reports
// and generated datasets carry their effective config that way). The target
// column is extracted by name; the remaining columns become features in
// header order. Non-numeric and non-finite cells are rejected with the row
// and column named.
Dataset load_csv(const std::string& path, const std::string& target_column);

// Writes the schema load_csv reads: feature columns then the target column.
// header_comments are emitted first, one "# " line each.
void save_csv(const Dataset& ds, const std::string& path,
              const std::vector<std::string>& header_comments = {});

// Per-feature min/max, fitted on training rows only so test folds never leak
// into the transform.
struct NormalizationParams {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t arity() const { return min.size(); }
};

NormalizationParams fit_normalization(std::span<const Sample> train_rows);

// Maps each feature x -> (x - min) / (max - min); constant columns map to 0.
// Targets stay in original units. Unseen rows may fall outside [0, 1] and are
// not clamped.
std::vector<Sample> apply_normalization(const NormalizationParams& params,
                                        std::span<const Sample> rows);

// Inverse transform on the feature columns; constant columns are restored to
// their fitted min.
std::vector<Sample> invert_normalization(const NormalizationParams& params,
                                         std::span<const Sample> rows);

struct SynthMaterial {
    double true_density = 0.0;  // kg/m^3
    double d50 = 0.0;           // um
};

// c0 + c1 * u + c2 * v
struct AffineMap2 {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double operator()(double u, double v) const { return c0 + c1 * u + c2 * v; }
};

// Synthetic die-filling generator. Deposited mass follows the critical-
// velocity fill law: below the critical shoe speed the die fills completely;
// above it the fill ratio decays as (v_c / v_s)^m with m in [1.0, 1.6].
// The critical velocity and full-die mass are affine in the row's inputs so
// tests can pin them exactly.
struct SynthConfig {
    std::vector<SynthMaterial> materials;
    std::vector<double> granule_sizes;  // um
    std::vector<double> shoe_speeds;    // mm/s
    int repeats = 3;
    double m_exponent = 1.3;
    double noise_sd = 0.0;              // grams
    AffineMap2 full_die_mass;           // (granule_size, true_density) -> grams
    AffineMap2 critical_velocity;       // (granule_size, d50) -> mm/s
    std::uint64_t seed = 0;
};

// Three powders, six granule sizes, seven shoe speeds, three repeats
// (378 rows). Target depends on all four inputs.
SynthConfig default_synth_config();

// Variant whose target depends only on granule size and shoe speed; density
// and d50 still vary across rows but carry no signal.
SynthConfig planted_synth_config();

void validate_synth_config(const SynthConfig& cfg);

// Pure function of the config including the seed: identical config yields a
// bit-identical Dataset. Row count = |materials| * |sizes| * |speeds| * repeats.
Dataset generate_synthetic(const SynthConfig& cfg);

}  // namespace fnt
