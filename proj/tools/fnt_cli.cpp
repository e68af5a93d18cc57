#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fnt/cv.hpp"
#include "fnt/dataset.hpp"
#include "fnt/de.hpp"
#include "fnt/errors.hpp"
#include "fnt/feature_analysis.hpp"
#include "fnt/format.hpp"
#include "fnt/gp.hpp"
#include "fnt/metrics.hpp"
#include "fnt/mlp.hpp"
#include "fnt/rng.hpp"
#include "fnt/tree.hpp"

namespace {

using namespace fnt;

// master-seed fan-out streams
enum : std::uint64_t {
    kSeedSynth = 0x73796e,
    kSeedGp = 0x6770,
    kSeedDe = 0x6465,
    kSeedMlp = 0x6d6c70,
    kSeedPlan = 0x706c6e,
};

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string data_path;
};

struct ModelOpts {
    std::string gaussian = "squared";
    std::string output_map = "linear";
};

struct SynthOpts {
    SynthConfig cfg = default_synth_config();
    bool planted = false;
    std::string sizes_csv;
    std::string speeds_csv;
    std::string materials_csv;
    std::string mass_map;
    std::string vc_map;
};

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(what + ": cannot parse number '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

AffineMap2 parse_affine(const std::string& text, const std::string& what) {
    std::vector<double> c;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            c.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(what + ": cannot parse coefficient '" + item + "'");
        }
    }
    if (c.size() != 3) throw ConfigError(what + ": expected c0:c1:c2");
    return AffineMap2{c[0], c[1], c[2]};
}

std::vector<SynthMaterial> parse_materials(const std::string& text) {
    std::vector<SynthMaterial> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::size_t sep = item.find(':');
        if (sep == std::string::npos)
            throw ConfigError("materials: expected density:d50 pairs, got '" + item + "'");
        try {
            out.push_back(SynthMaterial{std::stod(item.substr(0, sep)),
                                        std::stod(item.substr(sep + 1))});
        } catch (const std::exception&) {
            throw ConfigError("materials: cannot parse pair '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("materials: empty list");
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
    if (!out) throw DataError("error while writing: " + path);
}

std::string comment_block(const std::vector<std::string>& lines) {
    std::string out;
    for (const std::string& l : lines) out += "# " + l + "\n";
    return out;
}

void register_gp_de_flags(CLI::App* cmd, GpConfig& gp, DeConfig& de, ModelOpts& model) {
    cmd->add_option("--gp-population", gp.population_size, "GP population size");
    cmd->add_option("--gp-tournament", gp.tournament_size, "tournament size");
    cmd->add_option("--gp-crossover-prob", gp.crossover_prob, "crossover probability");
    cmd->add_option("--gp-mutation-prob", gp.mutation_prob, "mutation probability");
    cmd->add_option("--gp-max-height", gp.max_height, "maximum tree height (levels)");
    cmd->add_option("--gp-max-arity", gp.max_arity, "maximum children per node");
    cmd->add_option("--gp-generations", gp.max_generations, "maximum GP generations");
    cmd->add_option("--gp-patience", gp.stagnation_patience,
                    "generations without improvement before stopping");
    cmd->add_option("--gp-inner-de", gp.inner_de_budget,
                    "DE evaluations used to score each structure candidate");
    cmd->add_option("--node-arg-min", gp.node_arg_range.first, "activation argument lower bound");
    cmd->add_option("--node-arg-max", gp.node_arg_range.second, "activation argument upper bound");
    cmd->add_option("--edge-min", gp.edge_range.first, "edge weight lower bound");
    cmd->add_option("--edge-max", gp.edge_range.second, "edge weight upper bound");
    cmd->add_option("--de-population", de.population_size, "DE population size");
    cmd->add_option("--de-f", de.mutation_factor, "DE mutation factor F");
    cmd->add_option("--de-c", de.crossover_prob, "DE crossover probability C");
    cmd->add_option("--de-evals", de.max_evaluations, "DE objective evaluation budget");
    cmd->add_option("--de-variant", [&de](const std::vector<std::string>& v) {
            if (v[0] == "paper_eq7") {
                de.variant = DeVariant::paper_eq7;
            } else if (v[0] == "rand_one") {
                de.variant = DeVariant::rand_one;
            } else {
                return false;
            }
            return true;
        }, "DE update rule: paper_eq7 | rand_one")
        ->check(CLI::IsMember({"paper_eq7", "rand_one"}));
    cmd->add_option("--gaussian", model.gaussian, "node activation form: squared | paper_eq5")
        ->check(CLI::IsMember({"squared", "paper_eq5"}));
    cmd->add_option("--output-map", model.output_map,
                    "root output rescaling: linear | none")
        ->check(CLI::IsMember({"linear", "none"}));
}

void apply_model_opts(GpConfig& gp, const ModelOpts& model) {
    gp.gaussian = model.gaussian == "squared" ? GaussianForm::squared : GaussianForm::paper_eq5;
    gp.use_output_map = model.output_map == "linear";
}

void sync_seeds(std::uint64_t master, GpConfig& gp, DeConfig& de) {
    gp.seed = derive_seed(master, kSeedGp);
    de.seed = derive_seed(master, kSeedDe);
    de.node_arg_range = gp.node_arg_range;
    de.edge_range = gp.edge_range;
}

std::vector<std::string> gp_de_config_lines(std::uint64_t master, const GpConfig& gp,
                                            const DeConfig& de, const ModelOpts& model) {
    std::vector<std::string> lines;
    lines.push_back("seed=" + std::to_string(master));
    lines.push_back("gp-population=" + std::to_string(gp.population_size));
    lines.push_back("gp-tournament=" + std::to_string(gp.tournament_size));
    lines.push_back("gp-crossover-prob=" + format_double(gp.crossover_prob));
    lines.push_back("gp-mutation-prob=" + format_double(gp.mutation_prob));
    lines.push_back("gp-max-height=" + std::to_string(gp.max_height));
    lines.push_back("gp-max-arity=" + std::to_string(gp.max_arity));
    lines.push_back("gp-generations=" + std::to_string(gp.max_generations));
    lines.push_back("gp-patience=" + std::to_string(gp.stagnation_patience));
    lines.push_back("gp-inner-de=" + std::to_string(gp.inner_de_budget));
    lines.push_back("node-arg-min=" + format_double(gp.node_arg_range.first));
    lines.push_back("node-arg-max=" + format_double(gp.node_arg_range.second));
    lines.push_back("edge-min=" + format_double(gp.edge_range.first));
    lines.push_back("edge-max=" + format_double(gp.edge_range.second));
    lines.push_back("de-population=" + std::to_string(de.population_size));
    lines.push_back("de-f=" + format_double(de.mutation_factor));
    lines.push_back("de-c=" + format_double(de.crossover_prob));
    lines.push_back("de-evals=" + std::to_string(de.max_evaluations));
    lines.push_back(std::string("de-variant=") +
                    (de.variant == DeVariant::paper_eq7 ? "paper_eq7" : "rand_one"));
    lines.push_back("gaussian=" + model.gaussian);
    lines.push_back("output-map=" + model.output_map);
    return lines;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory: " + dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

int cmd_synth(const CommonOpts& common, SynthOpts& synth) {
    if (synth.planted) {
        const SynthConfig keep = synth.cfg;
        synth.cfg = planted_synth_config();
        synth.cfg.repeats = keep.repeats;
        synth.cfg.m_exponent = keep.m_exponent;
        synth.cfg.noise_sd = keep.noise_sd;
    }
    if (!synth.sizes_csv.empty())
        synth.cfg.granule_sizes = parse_number_list(synth.sizes_csv, "granule sizes");
    if (!synth.speeds_csv.empty())
        synth.cfg.shoe_speeds = parse_number_list(synth.speeds_csv, "shoe speeds");
    if (!synth.materials_csv.empty()) synth.cfg.materials = parse_materials(synth.materials_csv);
    if (!synth.mass_map.empty()) synth.cfg.full_die_mass = parse_affine(synth.mass_map, "mass map");
    if (!synth.vc_map.empty())
        synth.cfg.critical_velocity = parse_affine(synth.vc_map, "critical velocity map");
    synth.cfg.seed = derive_seed(common.seed, kSeedSynth);

    const Dataset ds = generate_synthetic(synth.cfg);
    ensure_out_dir(common.out_dir);
    const std::string path = join_path(common.out_dir, "synthetic.csv");

    std::vector<std::string> lines;
    lines.push_back("command=synth");
    lines.push_back("seed=" + std::to_string(common.seed));
    lines.push_back("planted=" + std::string(synth.planted ? "true" : "false"));
    lines.push_back("repeats=" + std::to_string(synth.cfg.repeats));
    lines.push_back("m-exponent=" + format_double(synth.cfg.m_exponent));
    lines.push_back("noise-sd=" + format_double(synth.cfg.noise_sd));
    {
        std::string mats;
        for (const SynthMaterial& m : synth.cfg.materials) {
            if (!mats.empty()) mats += ",";
            mats += format_double(m.true_density) + ":" + format_double(m.d50);
        }
        lines.push_back("materials=" + mats);
        std::string sizes;
        for (double s : synth.cfg.granule_sizes) {
            if (!sizes.empty()) sizes += ",";
            sizes += format_double(s);
        }
        lines.push_back("sizes=" + sizes);
        std::string speeds;
        for (double s : synth.cfg.shoe_speeds) {
            if (!speeds.empty()) speeds += ",";
            speeds += format_double(s);
        }
        lines.push_back("speeds=" + speeds);
        const AffineMap2& mm = synth.cfg.full_die_mass;
        lines.push_back("mass-map=" + format_double(mm.c0) + ":" + format_double(mm.c1) + ":" +
                        format_double(mm.c2));
        const AffineMap2& vc = synth.cfg.critical_velocity;
        lines.push_back("vc-map=" + format_double(vc.c0) + ":" + format_double(vc.c1) + ":" +
                        format_double(vc.c2));
    }
    save_csv(ds, path, lines);
    std::cout << "wrote " << path << "\n"
              << "rows " << ds.n_rows() << "\n"
              << "seed " << common.seed << "\n";
    return 0;
}

int cmd_train(const CommonOpts& common, GpConfig gp, DeConfig de, const ModelOpts& model,
              const std::string& target_column) {
    apply_model_opts(gp, model);
    sync_seeds(common.seed, gp, de);
    const Dataset ds = load_csv(common.data_path, target_column);

    const NormalizationParams params = fit_normalization(ds.rows);
    Dataset normalized = ds;
    normalized.rows = apply_normalization(params, ds.rows);

    ensure_out_dir(common.out_dir);
    std::vector<std::string> cfg_lines = gp_de_config_lines(common.seed, gp, de, model);
    cfg_lines.insert(cfg_lines.begin(), "command=train");
    cfg_lines.push_back("data=" + common.data_path);
    cfg_lines.push_back("target=" + target_column);

    std::ostringstream gen_log;
    gen_log << comment_block(cfg_lines) << "generation,best_rmse,mean_rmse,best_complexity\n";
    const GenerationLogger logger = [&gen_log](const GenerationStats& s) {
        gen_log << s.generation << "," << format_double(s.best_rmse) << ","
                << format_double(s.mean_rmse) << "," << s.best_complexity << "\n";
    };

    const EvolveResult evolved = evolve_structure(normalized, gp, de, logger);
    std::ostringstream de_log;
    de_log << comment_block(cfg_lines) << "evaluation_count,best_rmse\n";
    const FitResult fit = optimize_parameters(
        evolved.best, normalized.rows, de, [&de_log](long evals, double best) {
            de_log << evals << "," << format_double(best) << "\n";
        });
    write_file(join_path(common.out_dir, "de_convergence_log.csv"), de_log.str());

    const std::vector<double> pred = predict_rows(fit.model, normalized.rows);
    std::vector<double> tgt;
    tgt.reserve(normalized.rows.size());
    for (const Sample& s : normalized.rows) tgt.push_back(s.target);
    const double train_rmse_value = rmse(pred, tgt);
    std::optional<double> train_r;
    if (pred.size() >= 2) train_r = correlation(pred, tgt);

    const std::string model_path = join_path(common.out_dir, "model.fnt.json");
    write_file(model_path, serialize(fit.model));
    write_file(join_path(common.out_dir, "generation_log.csv"), gen_log.str());

    std::ostringstream summary;
    summary << comment_block(cfg_lines);
    summary << "train_rmse " << format_double(train_rmse_value) << "\n";
    summary << "train_r " << (train_r ? format_double(*train_r) : std::string("-")) << "\n";
    summary << "complexity " << complexity(fit.model) << "\n";
    {
        summary << "selected_features";
        for (int f : selected_features(fit.model)) summary << " " << f;
        summary << "\n";
    }
    summary << "generations " << evolved.generations_run << "\n";
    summary << "model_file model.fnt.json\n";
    write_file(join_path(common.out_dir, "train_summary.txt"), summary.str());

    std::cout << "rmse " << format_double(train_rmse_value) << "\n"
              << "r " << (train_r ? format_double(*train_r) : std::string("-")) << "\n"
              << "complexity " << complexity(fit.model) << "\n";
    std::cout << "selected_features";
    for (int f : selected_features(fit.model)) std::cout << " " << f;
    std::cout << "\nmodel " << model_path << "\n";
    return 0;
}

int cmd_cv(const CommonOpts& common, GpConfig gp, DeConfig de, MlpConfig mlp,
           const ModelOpts& model, const std::string& target_column, const std::string& scheme,
           const std::string& structure, const std::string& baseline,
           const std::string& normalization) {
    apply_model_opts(gp, model);
    sync_seeds(common.seed, gp, de);
    mlp.seed = derive_seed(common.seed, kSeedMlp);

    const Dataset ds = load_csv(common.data_path, target_column);
    const FoldScheme fold_scheme =
        scheme == "10fcv" ? FoldScheme::kfold : FoldScheme::five_by_two;
    const FoldPlan plan = make_fold_plan(static_cast<int>(ds.n_rows()), fold_scheme, 10,
                                         derive_seed(common.seed, kSeedPlan));

    CvOptions options;
    options.structure_reuse = structure == "reuse";
    options.normalization = normalization == "global" ? NormalizationScope::global
                                                      : NormalizationScope::per_fold;

    std::vector<CvReport> reports;
    reports.push_back(run_cv_fnt(ds, plan, gp, de, options));
    if (baseline == "mlp") reports.push_back(run_cv_baseline(ds, plan, mlp, options));

    std::vector<std::string> cfg_lines = gp_de_config_lines(common.seed, gp, de, model);
    cfg_lines.insert(cfg_lines.begin(), "command=cv");
    cfg_lines.push_back("data=" + common.data_path);
    cfg_lines.push_back("target=" + target_column);
    cfg_lines.push_back("scheme=" + scheme);
    cfg_lines.push_back("structure=" + structure);
    cfg_lines.push_back("baseline=" + baseline);
    cfg_lines.push_back("normalization=" + normalization);
    cfg_lines.push_back("mlp-hidden=" + std::to_string(mlp.hidden_nodes));
    cfg_lines.push_back("mlp-iterations=" + std::to_string(mlp.max_iterations));

    ensure_out_dir(common.out_dir);
    const std::string table = comment_block(cfg_lines) + render_report(reports, ds.feature_names);
    write_file(join_path(common.out_dir, "cv_report.txt"), table);
    write_file(join_path(common.out_dir, "cv_report.json"),
               render_report_json(reports, ds.feature_names, cfg_lines));
    write_file(join_path(common.out_dir, "predictions_fnt.csv"),
               comment_block(cfg_lines) + render_predictions_csv(reports[0]));
    if (reports.size() > 1) {
        write_file(join_path(common.out_dir, "predictions_mlp.csv"),
                   comment_block(cfg_lines) + render_predictions_csv(reports[1]));
    }
    std::cout << table;
    return 0;
}

int cmd_features(const CommonOpts& common, GpConfig gp, DeConfig de, const ModelOpts& model,
                 const std::string& target_column, int n_models, const std::string& mode,
                 const std::string& subset_match, const std::string& score) {
    apply_model_opts(gp, model);
    sync_seeds(common.seed, gp, de);
    const Dataset ds = load_csv(common.data_path, target_column);

    const std::vector<ModelRecord> records = build_model_list(ds, gp, de, n_models);

    AnalysisOptions analysis_opts;
    analysis_opts.subset_containment = subset_match == "containment";
    analysis_opts.inverse_fitness = score == "inverse";

    std::vector<std::string> cfg_lines = gp_de_config_lines(common.seed, gp, de, model);
    cfg_lines.insert(cfg_lines.begin(), "command=features");
    cfg_lines.push_back("data=" + common.data_path);
    cfg_lines.push_back("target=" + target_column);
    cfg_lines.push_back("models=" + std::to_string(n_models));
    cfg_lines.push_back("mode=" + mode);
    cfg_lines.push_back("subset-match=" + subset_match);
    cfg_lines.push_back("score=" + score);
    const std::string header = comment_block(cfg_lines);

    ensure_out_dir(common.out_dir);
    write_file(join_path(common.out_dir, "feature_records.csv"),
               header + render_records_csv(records));

    if (mode == "individual" || mode == "both") {
        const AnalysisResult res =
            analyze(records, ds.feature_names, AnalysisMode::individual, analysis_opts);
        write_file(join_path(common.out_dir, "features_individual.txt"),
                   header + render_analysis(res));
        write_file(join_path(common.out_dir, "features_individual.csv"),
                   header + render_analysis_csv(res));
        std::cout << render_analysis(res) << "\n";
    }
    if (mode == "subset" || mode == "both") {
        const AnalysisResult res =
            analyze(records, ds.feature_names, AnalysisMode::subset, analysis_opts);
        write_file(join_path(common.out_dir, "features_subset.txt"),
                   header + render_analysis(res));
        write_file(join_path(common.out_dir, "features_subset.csv"),
                   header + render_analysis_csv(res));
        std::cout << render_analysis(res) << "\n";
    }
    std::cout << "models " << records.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flexible neural tree regression toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value configuration file; subcommand keys live in a [subcommand] section");
    app.allow_config_extras(CLI::config_extras_mode::error);

    CommonOpts common;
    ModelOpts model;
    GpConfig gp;
    DeConfig de;
    MlpConfig mlp;
    SynthOpts synth;
    std::string target_column = "mass";
    std::string scheme = "10fcv";
    std::string structure = "reuse";
    std::string baseline = "none";
    std::string normalization = "per-fold";
    std::string mode = "both";
    std::string subset_match = "exact";
    std::string score = "rmse";
    int n_models = 30;

    const auto add_common = [&](CLI::App* cmd, bool needs_data) {
        cmd->fallthrough();  // lets --config reach the main app after the subcommand
        cmd->add_option("--seed", common.seed, "master seed (fans out to all components)");
        cmd->add_option("--out", common.out_dir, "output directory");
        auto* data = cmd->add_option("--data", common.data_path, "input CSV path");
        cmd->add_option("--target", target_column, "target column name");
        if (needs_data) data->required();
    };

    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic die-filling dataset");
    add_common(synth_cmd, false);
    synth_cmd->add_option("--synth-repeats", synth.cfg.repeats, "repeats per condition");
    synth_cmd->add_option("--synth-noise-sd", synth.cfg.noise_sd, "additive noise sd (grams)");
    synth_cmd->add_option("--synth-m", synth.cfg.m_exponent, "fill-law exponent in [1.0, 1.6]");
    synth_cmd->add_option("--synth-sizes", synth.sizes_csv, "granule sizes, comma separated");
    synth_cmd->add_option("--synth-speeds", synth.speeds_csv, "shoe speeds, comma separated");
    synth_cmd->add_option("--synth-materials", synth.materials_csv,
                          "materials as density:d50 pairs, comma separated");
    synth_cmd->add_option("--synth-mass-map", synth.mass_map,
                          "full-die mass coefficients c0:c1:c2 over (size, density)");
    synth_cmd->add_option("--synth-vc-map", synth.vc_map,
                          "critical velocity coefficients c0:c1:c2 over (size, d50)");
    synth_cmd->add_flag("--planted", synth.planted,
                        "target depends only on granule size and shoe speed");

    CLI::App* train_cmd = app.add_subcommand("train", "evolve and fit one model on a dataset");
    add_common(train_cmd, true);
    register_gp_de_flags(train_cmd, gp, de, model);

    CLI::App* cv_cmd = app.add_subcommand("cv", "cross-validate on a shared fold plan");
    add_common(cv_cmd, true);
    register_gp_de_flags(cv_cmd, gp, de, model);
    cv_cmd->add_option("--scheme", scheme, "10fcv | 5x2fcv")
        ->check(CLI::IsMember({"10fcv", "5x2fcv"}));
    cv_cmd->add_option("--structure", structure, "reuse | per-fold")
        ->check(CLI::IsMember({"reuse", "per-fold"}));
    cv_cmd->add_option("--baseline", baseline, "none | mlp")
        ->check(CLI::IsMember({"none", "mlp"}));
    cv_cmd->add_option("--normalization", normalization, "per-fold | global")
        ->check(CLI::IsMember({"per-fold", "global"}));
    cv_cmd->add_option("--mlp-hidden", mlp.hidden_nodes, "baseline hidden nodes");
    cv_cmd->add_option("--mlp-iterations", mlp.max_iterations, "baseline training epochs");
    cv_cmd->add_option("--mlp-trainer", [&mlp](const std::vector<std::string>& v) {
            mlp.trainer = v[0] == "backprop" ? MlpTrainer::backprop : MlpTrainer::rprop;
            return true;
        }, "rprop | backprop")
        ->check(CLI::IsMember({"rprop", "backprop"}));
    cv_cmd->add_option("--mlp-learning-rate", mlp.learning_rate, "backprop learning rate");
    cv_cmd->add_option("--mlp-momentum", mlp.momentum, "backprop momentum");

    CLI::App* features_cmd =
        app.add_subcommand("features", "evolutionary feature analysis over M models");
    add_common(features_cmd, true);
    register_gp_de_flags(features_cmd, gp, de, model);
    features_cmd->add_option("--models", n_models, "number of independent models M");
    features_cmd->add_option("--mode", mode, "individual | subset | both")
        ->check(CLI::IsMember({"individual", "subset", "both"}));
    features_cmd->add_option("--subset-match", subset_match, "exact | containment")
        ->check(CLI::IsMember({"exact", "containment"}));
    features_cmd->add_option("--score", score, "rmse | inverse")
        ->check(CLI::IsMember({"rmse", "inverse"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(common, synth);
        if (train_cmd->parsed()) return cmd_train(common, gp, de, model, target_column);
        if (cv_cmd->parsed())
            return cmd_cv(common, gp, de, mlp, model, target_column, scheme, structure, baseline,
                          normalization);
        if (features_cmd->parsed())
            return cmd_features(common, gp, de, model, target_column, n_models, mode,
                                subset_match, score);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
