// Acceptance suite: one self-contained check per criterion, each printing a
// single PASS/FAIL line (plus detail lines prefixed with two spaces).
// Usage: fnt_acceptance [criterion-number]

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fnt/cv.hpp"
#include "fnt/dataset.hpp"
#include "fnt/de.hpp"
#include "fnt/feature_analysis.hpp"
#include "fnt/gp.hpp"
#include "fnt/metrics.hpp"
#include "fnt/mlp.hpp"
#include "fnt/rng.hpp"
#include "fnt/tree.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

namespace {

using namespace fnt;
namespace fs = std::filesystem;

bool close_rel(double a, double b, double tol = 1e-12) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::ostringstream detail;

// --- criterion 1: formula oracles ------------------------------------------

bool criterion_formula_oracles() {
    Rng rng(20240101);
    int checked = 0;

    // rmse / correlation / r_squared
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(40);
        std::vector<double> y(n);
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.uniform(-50.0, 50.0);
            d[i] = rng.uniform(-50.0, 50.0);
        }
        if (!close_rel(rmse(y, d), oracle::rmse(y, d))) return false;
        const auto r = correlation(y, d);
        const auto ro = oracle::correlation(y, d);
        if (r.has_value() != ro.has_value()) return false;
        if (r && !close_rel(*r, *ro)) return false;
        const auto r2 = r_squared(y, d);
        const auto r2o = oracle::r_squared(y, d);
        if (r2 && !close_rel(*r2, *r2o)) return false;
        ++checked;
    }

    // node evaluation (weighted sum + Gaussian, both forms, with/without map)
    for (int trial = 0; trial < 1000; ++trial) {
        const FntModel m = testutil::random_model(777000 + trial, 4, trial % 2 == 0);
        const std::vector<double> x = testutil::random_features(rng, 4);
        if (!close_rel(evaluate(m, x), oracle::eval_model(m, x))) return false;
        ++checked;
    }

    // selection rate / fitness / predictability over random record lists
    for (int trial = 0; trial < 1000; ++trial) {
        const int n_records = 5 + static_cast<int>(rng.uniform_index(25));
        std::vector<oracle::Record> recs;
        for (int i = 0; i < n_records; ++i) {
            oracle::Record r;
            for (int f = 0; f < 4; ++f)
                if (rng.bernoulli(0.5)) r.features.push_back(f);
            if (r.features.empty())
                r.features.push_back(static_cast<int>(rng.uniform_index(4)));
            r.rmse = rng.uniform(0.1, 5.0);
            recs.push_back(std::move(r));
        }
        std::vector<ModelRecord> lib;
        for (const auto& r : recs) lib.push_back(ModelRecord{r.features, r.rmse});

        std::vector<double> fs_lib;
        std::vector<double> fs_oracle;
        for (int f = 0; f < 4; ++f) {
            const std::vector<int> single{f};
            if (!close_rel(selection_rate(lib, single, AnalysisMode::individual),
                           oracle::selection_rate(recs, single, true)))
                return false;
            const double fl = set_fitness(lib, single, AnalysisMode::individual);
            const double fo = oracle::set_fitness(recs, single, true);
            if (!close_rel(fl, fo)) return false;
            fs_lib.push_back(fl);
            fs_oracle.push_back(fo);
        }
        const std::vector<int>& probe = recs[rng.uniform_index(recs.size())].features;
        if (!close_rel(selection_rate(lib, probe, AnalysisMode::subset),
                       oracle::selection_rate(recs, probe, false)))
            return false;
        if (!close_rel(set_fitness(lib, probe, AnalysisMode::subset),
                       oracle::set_fitness(recs, probe, false)))
            return false;
        if (*std::max_element(fs_lib.begin(), fs_lib.end()) > 0.0) {
            const std::vector<double> p_lib = predictability(fs_lib);
            const std::vector<double> p_oracle = oracle::predictability(fs_oracle);
            for (std::size_t k = 0; k < p_lib.size(); ++k)
                if (!close_rel(p_lib[k], p_oracle[k])) return false;
        }
        ++checked;
    }

    detail << "  rmse, correlation, r_squared, node evaluation, selection-rate/fitness/"
              "predictability each matched the brute-force oracle on 1000 random inputs "
              "(1e-12 relative)\n";
    return checked == 3000;
}

// --- criterion 2: reference tree counts -------------------------------------

bool criterion_reference_tree() {
    const FntModel m = testutil::figure_tree();
    const int cx = complexity(m);
    const std::size_t len = flatten(m).size();
    detail << "  complexity " << cx << " (want 12), flattened length " << len << " (want 19)\n";
    return cx == 12 && len == 19 && param_count(m) == 19;
}

// --- criterion 3: DE sphere convergence -------------------------------------

double sphere(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

bool criterion_de_convergence() {
    const std::vector<Bounds> bounds(10, Bounds{-1.0, 1.0, 0.0});
    bool all_ok = true;
    for (DeVariant variant : {DeVariant::paper_eq7, DeVariant::rand_one}) {
        int hits = 0;
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            DeConfig cfg;  // spec defaults: pop 50, F 0.5, C 0.9, 10000 evaluations
            cfg.variant = variant;
            cfg.seed = seed;
            const DeState state = de_minimize(sphere, bounds, cfg);
            worst = std::max(worst, state.best_fitness);
            if (state.best_fitness < 1e-6) ++hits;
        }
        const bool ok = hits == 10;
        detail << "  " << (variant == DeVariant::paper_eq7 ? "paper_eq7" : "rand_one ")
               << ": " << hits << "/10 seeds below 1e-6 within 10000 evaluations (worst "
               << worst << ")" << (ok ? "" : "  <-- FAILS") << "\n";
        if (!ok) all_ok = false;
    }
    if (!all_ok) {
        detail << "  note: the verbatim update rule's F*(r1 - g) term repels trials from the\n"
                  "  population best; measured convergence is geometric but ~2x slower than\n"
                  "  rand_one (crosses 1e-6 near 20000 evaluations). See the project notes.\n";
    }
    return all_ok;
}

// --- criterion 4: self-recovery on the true structure ------------------------

bool criterion_self_recovery() {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GpConfig gcfg;
        gcfg.max_height = 2;  // root over terminals; recovery landscape stays unimodal enough
        gcfg.seed = seed;
        Rng tree_rng(derive_seed(seed, 1));
        FntModel truth = random_tree(gcfg, 4, tree_rng);
        truth.output_map = OutputMap{tree_rng.uniform(0.5, 2.0), tree_rng.uniform(-1.0, 1.0)};

        Rng data_rng(derive_seed(seed, 2));
        std::vector<Sample> rows;
        rows.reserve(200);
        for (int i = 0; i < 200; ++i) {
            Sample s;
            s.features = testutil::random_features(data_rng, 4);
            s.target = evaluate(truth, s.features);
            rows.push_back(std::move(s));
        }

        // same structure, parameters re-drawn uniformly inside the bounds
        FntModel start = truth;
        {
            DeConfig bcfg;
            const std::vector<Bounds> bounds = parameter_bounds(start, rows, bcfg);
            Rng prng(derive_seed(seed, 3));
            ParamVector v(bounds.size());
            for (std::size_t k = 0; k < v.size(); ++k)
                v[k] = prng.uniform(bounds[k].lo, bounds[k].hi);
            apply_params(start, v);
        }

        DeConfig de;  // 10000-evaluation default budget
        de.variant = DeVariant::rand_one;
        de.seed = derive_seed(seed, 4);
        const FitResult fit = optimize_parameters(start, rows, de);
        if (fit.rmse < 1e-3) ++hits;
    }
    detail << "  " << hits << "/10 seeds reached train RMSE < 1e-3 (need >= 8)\n";
    return hits >= 8;
}

// --- criterion 5: synthetic 10FCV analogue -----------------------------------

GpConfig cv_analogue_gp(std::uint64_t master) {
    GpConfig gp;
    gp.max_generations = 150;  // within the 300-generation desk-scale cap
    gp.stagnation_patience = 50;
    gp.inner_de_budget = 400;  // within the 500-evaluation cap
    gp.seed = derive_seed(master, 0x6770);
    return gp;
}

DeConfig cv_analogue_de(std::uint64_t master) {
    DeConfig de;
    de.variant = DeVariant::rand_one;
    de.seed = derive_seed(master, 0x6465);
    return de;
}

bool criterion_cv_analogue() {
    SynthConfig sc = default_synth_config();
    sc.noise_sd = 0.3;
    sc.seed = 4242;
    const Dataset ds = generate_synthetic(sc);

    const std::uint64_t master = 3;
    const FoldPlan plan10 =
        make_fold_plan(static_cast<int>(ds.n_rows()), FoldScheme::kfold, 10,
                       derive_seed(master, 0x706c6e));
    const FoldPlan plan52 =
        make_fold_plan(static_cast<int>(ds.n_rows()), FoldScheme::five_by_two, 10,
                       derive_seed(master, 0x706c6e));

    const CvReport r10 = run_cv_fnt(ds, plan10, cv_analogue_gp(master), cv_analogue_de(master));
    const CvReport r52 = run_cv_fnt(ds, plan52, cv_analogue_gp(master), cv_analogue_de(master));
    if (!r10.mean_test_r || !r52.mean_test_r) return false;

    detail << "  378 rows, noise sd 0.3 g: 10FCV mean test r = " << *r10.mean_test_r
           << " (need >= 0.90), 5x2FCV mean test r = " << *r52.mean_test_r << "\n";
    return *r10.mean_test_r >= 0.90 && *r10.mean_test_r >= *r52.mean_test_r;
}

// --- criterion 6: planted feature analysis -----------------------------------

bool criterion_feature_analysis() {
    SynthConfig sc = planted_synth_config();
    sc.repeats = 1;
    sc.noise_sd = 0.0;
    sc.seed = 777;
    const Dataset ds = generate_synthetic(sc);  // target reads size and speed only

    int ok_seeds = 0;
    for (std::uint64_t master = 0; master < 10; ++master) {
        GpConfig gp;
        gp.population_size = 16;
        gp.tournament_size = 8;
        gp.max_generations = 30;
        gp.stagnation_patience = 15;
        gp.inner_de_budget = 200;
        gp.seed = derive_seed(master, 0x6770);
        DeConfig de;
        de.variant = DeVariant::rand_one;
        de.max_evaluations = 3000;
        de.seed = derive_seed(master, 0x6465);

        const std::vector<ModelRecord> records = build_model_list(ds, gp, de, 30);
        const AnalysisResult res = analyze(records, ds.feature_names, AnalysisMode::individual);
        // rows follow feature order: true_density, d50, granule_size, shoe_speed
        const double min_r_signal =
            std::min(res.rows[2].selection_rate, res.rows[3].selection_rate);
        const double max_r_decoy =
            std::max(res.rows[0].selection_rate, res.rows[1].selection_rate);
        const double min_p_signal =
            std::min(res.rows[2].predictability, res.rows[3].predictability);
        const double max_p_decoy =
            std::max(res.rows[0].predictability, res.rows[1].predictability);
        if (min_r_signal > max_r_decoy && min_p_signal > max_p_decoy) ++ok_seeds;
    }
    detail << "  granule size and shoe speed outrank true density and d50 in both R and P on "
           << ok_seeds << "/10 master seeds (need >= 9), M = 30 models each\n";
    return ok_seeds >= 9;
}

// --- criterion 7: fold plan properties ---------------------------------------

bool criterion_fold_plans() {
    for (int n : {10, 57, 389}) {
        const FoldPlan plan = make_fold_plan(n, FoldScheme::kfold, 10, 2024);
        if (plan.assignments.size() != 10) return false;
        std::vector<int> seen;
        std::size_t min_size = static_cast<std::size_t>(n);
        std::size_t max_size = 0;
        for (const FoldAssignment& a : plan.assignments) {
            min_size = std::min(min_size, a.test.size());
            max_size = std::max(max_size, a.test.size());
            seen.insert(seen.end(), a.test.begin(), a.test.end());
        }
        std::sort(seen.begin(), seen.end());
        for (int i = 0; i < n; ++i)
            if (seen[static_cast<std::size_t>(i)] != i) return false;  // cover + disjoint
        if (seen.size() != static_cast<std::size_t>(n)) return false;
        if (max_size - min_size > 1) return false;

        const FoldPlan half = make_fold_plan(n, FoldScheme::five_by_two, 10, 2024);
        if (half.assignments.size() != 10) return false;
        for (std::size_t rep = 0; rep < 5; ++rep) {
            const FoldAssignment& a = half.assignments[2 * rep];
            const FoldAssignment& b = half.assignments[2 * rep + 1];
            if (a.train != b.test || a.test != b.train) return false;
            if (a.train.size() + a.test.size() != static_cast<std::size_t>(n)) return false;
            const std::size_t diff = a.train.size() > a.test.size()
                                         ? a.train.size() - a.test.size()
                                         : a.test.size() - a.train.size();
            if (diff > 1) return false;
        }
    }
    detail << "  10FCV partitions (sizes within 1) and 5x2FCV role pairs verified for "
              "n in {10, 57, 389}\n";
    return true;
}

// --- criterion 8: MLP gradients and linear recovery --------------------------

bool criterion_mlp() {
    Rng rng(88);
    for (int net = 0; net < 20; ++net) {
        MlpConfig cfg;
        cfg.hidden_nodes = 2 + net % 7;
        cfg.seed = 500 + static_cast<std::uint64_t>(net);
        const int arity = 1 + net % 4;
        MlpModel model = init_mlp(arity, cfg);
        std::vector<Sample> rows;
        for (int i = 0; i < 10; ++i) {
            Sample s;
            s.features = testutil::random_features(rng, arity);
            s.target = rng.uniform(-2.0, 2.0);
            rows.push_back(std::move(s));
        }
        std::vector<double> analytic(mlp_weight_count(model));
        mlp_loss_and_gradient(model, rows, analytic);

        std::vector<double> w = pack_weights(model);
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double keep = w[k];
            const double h = 1e-5;
            w[k] = keep + h;
            unpack_weights(model, w);
            const double up = mlp_loss_and_gradient(model, rows, {});
            w[k] = keep - h;
            unpack_weights(model, w);
            const double down = mlp_loss_and_gradient(model, rows, {});
            w[k] = keep;
            const double numeric = (up - down) / (2.0 * h);
            // 1e-6 floor: central differences at h = 1e-5 carry ~1e-11
            // roundoff, so smaller components are below the method's noise
            const double denom = std::max({std::fabs(analytic[k]), std::fabs(numeric), 1e-6});
            if (std::fabs(analytic[k] - numeric) / denom >= 1e-5) return false;
        }
        unpack_weights(model, w);
    }

    Dataset linear;
    linear.feature_names = {"x"};
    linear.target_name = "y";
    linear.provenance = "acceptance";
    Rng data_rng(99);
    for (int i = 0; i < 80; ++i) {
        const double x = data_rng.uniform();
        linear.rows.push_back(Sample{{x}, 2.0 * x});
    }
    MlpConfig cfg;
    cfg.hidden_nodes = 8;
    cfg.seed = 7;
    const MlpModel model = train_mlp(linear, cfg);
    double acc = 0.0;
    int n = 0;
    for (double x = 0.025; x < 1.0; x += 0.05) {
        const double err = predict_mlp(model, std::vector<double>{x}) - 2.0 * x;
        acc += err * err;
        ++n;
    }
    const double test_rmse = std::sqrt(acc / n);
    detail << "  gradients matched central differences on 20 networks; rprop fit y = 2x to "
              "test RMSE "
           << test_rmse << " (need < 0.05)\n";
    return test_rmse < 0.05;
}

// --- criterion 9: byte-identical reruns through the CLI ----------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool criterion_determinism() {
    const fs::path base =
        fs::temp_directory_path() / ("fnt_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(base);
    fs::create_directories(base);

    const std::string budget =
        " --gp-population 16 --gp-tournament 8 --gp-generations 30 --gp-patience 15"
        " --gp-inner-de 200 --de-evals 3000 --de-variant rand_one";

    const auto run = [&](const std::string& args) {
        const std::string cmd = std::string(FNT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };

    // one shared input file so reruns differ only in their output directory
    const std::string data = (base / "a" / "synth/synthetic.csv").string();
    for (const char* round : {"a", "b"}) {
        const fs::path dir = base / round;
        if (!run("synth --seed 4242 --synth-noise-sd 0.3 --out " + (dir / "synth").string()))
            return false;
        if (!run("train --data " + data + " --seed 3" + budget + " --out " +
                 (dir / "train").string()))
            return false;
        if (!run("cv --data " + data + " --seed 3 --scheme 10fcv" + budget + " --out " +
                 (dir / "cv").string()))
            return false;
        if (!run("features --data " + data + " --seed 3 --models 5" + budget + " --out " +
                 (dir / "features").string()))
            return false;
    }

    const std::vector<std::string> files = {
        "synth/synthetic.csv",       "train/model.fnt.json",
        "train/train_summary.txt",   "train/generation_log.csv",
        "train/de_convergence_log.csv",
        "cv/cv_report.txt",          "cv/cv_report.json",
        "cv/predictions_fnt.csv",    "features/features_individual.csv",
        "features/features_subset.csv", "features/feature_records.csv",
    };
    std::size_t compared = 0;
    for (const std::string& f : files) {
        const std::string a = slurp(base / "a" / f);
        const std::string b = slurp(base / "b" / f);
        if (a.empty() || a != b) {
            detail << "  mismatch or missing: " << f << "\n";
            fs::remove_all(base);
            return false;
        }
        ++compared;
    }
    fs::remove_all(base);
    detail << "  " << compared
           << " primary output files byte-identical across repeated seeded runs of "
              "synth, train, cv, features\n";
    return compared == files.size();
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool()> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "formula oracles (error metrics, node math, feature scores)", criterion_formula_oracles},
    {2, "reference tree: complexity 12, parameter length 19", criterion_reference_tree},
    {3, "DE sphere convergence, both variants, 10000 evaluations", criterion_de_convergence},
    {4, "self-recovery of a planted tree's parameters", criterion_self_recovery},
    {5, "synthetic 10FCV analogue (mean test r, protocol ordering)", criterion_cv_analogue},
    {6, "planted feature analysis ranking (R and P)", criterion_feature_analysis},
    {7, "fold plan partition properties", criterion_fold_plans},
    {8, "MLP gradient check and linear recovery", criterion_mlp},
    {9, "byte-identical seeded reruns via the CLI", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        detail.str("");
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.run();
        } catch (const std::exception& e) {
            detail << "  exception: " << e.what() << "\n";
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name
                  << "  (" << secs << " s)\n"
                  << detail.str();
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
