#include "fnt/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "fnt/errors.hpp"
#include "fnt/format.hpp"
#include "fnt/rng.hpp"

namespace fnt {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

// Strict numeric cell parse: the whole token must be consumed and the value
// must be finite.
double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || cell.empty()) {
        throw DataError("non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                        ", column '" + column + "'");
    }
    if (!std::isfinite(value)) {
        throw DataError("non-finite cell '" + cell + "' at row " + std::to_string(row) +
                        ", column '" + column + "'");
    }
    return value;
}

}  // namespace

void validate_dataset(const Dataset& ds) {
    if (ds.feature_names.empty()) throw DataError("dataset has no feature columns");
    if (ds.rows.size() < 2) throw DataError("dataset has fewer than 2 rows");
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        const Sample& s = ds.rows[i];
        if (s.features.size() != ds.feature_names.size()) {
            throw DataError("row " + std::to_string(i + 1) + " has " +
                            std::to_string(s.features.size()) + " features, expected " +
                            std::to_string(ds.feature_names.size()));
        }
        for (double v : s.features) {
            if (!std::isfinite(v))
                throw DataError("non-finite feature value at row " + std::to_string(i + 1));
        }
        if (!std::isfinite(s.target))
            throw DataError("non-finite target value at row " + std::to_string(i + 1));
    }
}

Dataset load_csv(const std::string& path, const std::string& target_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw DataError("missing header row in " + path);

    std::unordered_set<std::string> seen;
    for (const auto& name : header) {
        if (name.empty()) throw DataError("empty header name in " + path);
        if (!seen.insert(name).second) throw DataError("duplicate header '" + name + "' in " + path);
    }

    auto target_it = std::find(header.begin(), header.end(), target_column);
    if (target_it == header.end())
        throw DataError("target column '" + target_column + "' not found in " + path);
    const std::size_t target_idx = static_cast<std::size_t>(target_it - header.begin());
    if (header.size() < 2)
        throw DataError("no feature columns besides the target in " + path);

    Dataset ds;
    ds.target_name = target_column;
    ds.provenance = path;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i != target_idx) ds.feature_names.push_back(header[i]);
    }

    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        ++row_no;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw DataError("row " + std::to_string(row_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        }
        Sample s;
        s.features.reserve(header.size() - 1);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v = parse_cell(cells[i], row_no, header[i]);
            if (i == target_idx) {
                s.target = v;
            } else {
                s.features.push_back(v);
            }
        }
        ds.rows.push_back(std::move(s));
    }
    if (ds.rows.size() < 2)
        throw DataError("fewer than 2 data rows in " + path);
    validate_dataset(ds);
    return ds;
}

void save_csv(const Dataset& ds, const std::string& path,
              const std::vector<std::string>& header_comments) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    for (const auto& c : header_comments) out << "# " << c << "\n";
    for (std::size_t i = 0; i < ds.feature_names.size(); ++i) {
        out << ds.feature_names[i] << ",";
    }
    out << ds.target_name << "\n";
    for (const Sample& s : ds.rows) {
        for (double v : s.features) out << format_double(v) << ",";
        out << format_double(s.target) << "\n";
    }
    if (!out) throw DataError("error while writing: " + path);
}

NormalizationParams fit_normalization(std::span<const Sample> train_rows) {
    if (train_rows.empty()) throw std::invalid_argument("fit_normalization: empty row list");
    const std::size_t arity = train_rows[0].features.size();
    NormalizationParams p;
    p.min.assign(arity, std::numeric_limits<double>::infinity());
    p.max.assign(arity, -std::numeric_limits<double>::infinity());
    for (const Sample& s : train_rows) {
        if (s.features.size() != arity)
            throw std::invalid_argument("fit_normalization: inconsistent feature arity");
        for (std::size_t j = 0; j < arity; ++j) {
            p.min[j] = std::min(p.min[j], s.features[j]);
            p.max[j] = std::max(p.max[j], s.features[j]);
        }
    }
    return p;
}

std::vector<Sample> apply_normalization(const NormalizationParams& params,
                                        std::span<const Sample> rows) {
    std::vector<Sample> out;
    out.reserve(rows.size());
    for (const Sample& s : rows) {
        if (s.features.size() != params.arity())
            throw std::invalid_argument("apply_normalization: feature arity mismatch");
        Sample n;
        n.target = s.target;
        n.features.resize(s.features.size());
        for (std::size_t j = 0; j < s.features.size(); ++j) {
            const double span = params.max[j] - params.min[j];
            n.features[j] = span > 0.0 ? (s.features[j] - params.min[j]) / span : 0.0;
        }
        out.push_back(std::move(n));
    }
    return out;
}

std::vector<Sample> invert_normalization(const NormalizationParams& params,
                                         std::span<const Sample> rows) {
    std::vector<Sample> out;
    out.reserve(rows.size());
    for (const Sample& s : rows) {
        if (s.features.size() != params.arity())
            throw std::invalid_argument("invert_normalization: feature arity mismatch");
        Sample n;
        n.target = s.target;
        n.features.resize(s.features.size());
        for (std::size_t j = 0; j < s.features.size(); ++j) {
            const double span = params.max[j] - params.min[j];
            n.features[j] = span > 0.0 ? params.min[j] + s.features[j] * span : params.min[j];
        }
        out.push_back(std::move(n));
    }
    return out;
}

SynthConfig default_synth_config() {
    SynthConfig cfg;
    cfg.materials = {{1581.0, 59.83}, {1570.3, 94.7}, {1785.6, 52.33}};
    cfg.granule_sizes = {90.0, 250.0, 500.0, 1000.0, 1400.0, 2360.0};
    cfg.shoe_speeds = {10.0, 20.0, 30.0, 50.0, 100.0, 200.0, 400.0};
    cfg.repeats = 3;
    cfg.m_exponent = 1.3;
    cfg.noise_sd = 0.0;
    cfg.full_die_mass = {-0.5, 0.002, 0.004};     // grams from (size, density)
    cfg.critical_velocity = {5.0, 0.09, 0.15};    // mm/s from (size, d50)
    cfg.seed = 0;
    return cfg;
}

SynthConfig planted_synth_config() {
    SynthConfig cfg = default_synth_config();
    cfg.full_die_mass = {5.5, 0.002, 0.0};        // density coefficient zeroed
    cfg.critical_velocity = {12.0, 0.09, 0.0};    // d50 coefficient zeroed
    return cfg;
}

void validate_synth_config(const SynthConfig& cfg) {
    if (cfg.materials.empty()) throw ConfigError("synth: no materials");
    if (cfg.granule_sizes.empty()) throw ConfigError("synth: no granule sizes");
    if (cfg.shoe_speeds.empty()) throw ConfigError("synth: no shoe speeds");
    if (cfg.repeats < 1) throw ConfigError("synth: repeats must be >= 1");
    if (!(cfg.m_exponent >= 1.0 && cfg.m_exponent <= 1.6))
        throw ConfigError("synth: m_exponent must lie in [1.0, 1.6]");
    if (!(cfg.noise_sd >= 0.0)) throw ConfigError("synth: noise_sd must be >= 0");
    for (double s : cfg.granule_sizes)
        if (!(s > 0.0)) throw ConfigError("synth: granule sizes must be strictly positive");
    for (double v : cfg.shoe_speeds)
        if (!(v > 0.0)) throw ConfigError("synth: shoe speeds must be strictly positive");
}

Dataset generate_synthetic(const SynthConfig& cfg) {
    validate_synth_config(cfg);
    Dataset ds;
    ds.feature_names = {"true_density", "d50", "granule_size", "shoe_speed"};
    ds.target_name = "mass";
    {
        std::ostringstream prov;
        prov << "synthetic(seed=" << cfg.seed << ", m=" << cfg.m_exponent
             << ", noise_sd=" << cfg.noise_sd << ")";
        ds.provenance = prov.str();
    }
    Rng rng(cfg.seed);
    ds.rows.reserve(cfg.materials.size() * cfg.granule_sizes.size() * cfg.shoe_speeds.size() *
                    static_cast<std::size_t>(cfg.repeats));
    for (const SynthMaterial& mat : cfg.materials) {
        for (double size : cfg.granule_sizes) {
            const double v_c = cfg.critical_velocity(size, mat.d50);
            const double m_full = cfg.full_die_mass(size, mat.true_density);
            if (!(v_c > 0.0))
                throw ConfigError("synth: critical velocity non-positive for granule size " +
                                  std::to_string(size));
            if (!(m_full >= 0.0))
                throw ConfigError("synth: full-die mass negative for granule size " +
                                  std::to_string(size));
            for (double speed : cfg.shoe_speeds) {
                const double fill_ratio =
                    speed <= v_c ? 1.0 : std::pow(v_c / speed, cfg.m_exponent);
                for (int r = 0; r < cfg.repeats; ++r) {
                    double mass = m_full * fill_ratio;
                    if (cfg.noise_sd > 0.0) mass += cfg.noise_sd * rng.gaussian();
                    if (mass < 0.0) mass = 0.0;
                    ds.rows.push_back(
                        Sample{{mat.true_density, mat.d50, size, speed}, mass});
                }
            }
        }
    }
    validate_dataset(ds);
    return ds;
}

}  // namespace fnt
