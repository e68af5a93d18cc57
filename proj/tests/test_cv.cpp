#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "fnt/cv.hpp"
#include "fnt/errors.hpp"
#include "fnt/rng.hpp"
#include "helpers.hpp"

using namespace fnt;

namespace {

void check_kfold_properties(const FoldPlan& plan, int n, int k) {
    REQUIRE(plan.assignments.size() == static_cast<std::size_t>(k));
    std::set<int> seen;
    std::size_t min_size = static_cast<std::size_t>(n);
    std::size_t max_size = 0;
    for (const FoldAssignment& a : plan.assignments) {
        min_size = std::min(min_size, a.test.size());
        max_size = std::max(max_size, a.test.size());
        for (int idx : a.test) {
            CHECK(idx >= 0);
            CHECK(idx < n);
            CHECK(seen.insert(idx).second);  // pairwise disjoint
        }
        // train = complement of test
        CHECK(a.train.size() + a.test.size() == static_cast<std::size_t>(n));
        std::set<int> test_set(a.test.begin(), a.test.end());
        for (int idx : a.train) CHECK(test_set.count(idx) == 0);
    }
    CHECK(seen.size() == static_cast<std::size_t>(n));  // union covers all rows
    CHECK(max_size - min_size <= 1);
}

void check_5x2_properties(const FoldPlan& plan, int n) {
    REQUIRE(plan.assignments.size() == 10);
    for (std::size_t rep = 0; rep < 5; ++rep) {
        const FoldAssignment& first = plan.assignments[2 * rep];
        const FoldAssignment& second = plan.assignments[2 * rep + 1];
        // the two roles swap train and test
        CHECK(first.train == second.test);
        CHECK(first.test == second.train);
        CHECK(first.train.size() + first.test.size() == static_cast<std::size_t>(n));
        const std::size_t a = first.train.size();
        const std::size_t b = first.test.size();
        CHECK((a > b ? a - b : b - a) <= 1);
        std::set<int> all(first.train.begin(), first.train.end());
        for (int idx : first.test) CHECK(all.insert(idx).second);
        CHECK(all.size() == static_cast<std::size_t>(n));
    }
}

GpConfig cv_gp_config(std::uint64_t seed) {
    GpConfig cfg;
    cfg.population_size = 8;
    cfg.tournament_size = 3;
    cfg.max_height = 3;
    cfg.max_generations = 6;
    cfg.stagnation_patience = 6;
    cfg.inner_de_budget = 60;
    cfg.seed = seed;
    return cfg;
}

DeConfig cv_de_config(std::uint64_t seed) {
    DeConfig cfg;
    cfg.population_size = 10;
    cfg.max_evaluations = 200;
    cfg.variant = DeVariant::rand_one;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("fold plan properties across dataset sizes") {
    for (int n : {10, 57, 389}) {
        const FoldPlan tenfold = make_fold_plan(n, FoldScheme::kfold, 10, 42);
        check_kfold_properties(tenfold, n, 10);
        const FoldPlan five_two = make_fold_plan(n, FoldScheme::five_by_two, 0, 42);
        check_5x2_properties(five_two, n);
    }
    // 389 rows: 10FCV test sizes 38 or 39, 5x2 halves 194/195
    const FoldPlan p389 = make_fold_plan(389, FoldScheme::kfold, 10, 7);
    for (const FoldAssignment& a : p389.assignments) {
        CHECK(a.test.size() >= 38);
        CHECK(a.test.size() <= 39);
    }
    const FoldPlan h389 = make_fold_plan(389, FoldScheme::five_by_two, 0, 7);
    for (const FoldAssignment& a : h389.assignments) {
        CHECK(a.test.size() >= 194);
        CHECK(a.test.size() <= 195);
    }
}

TEST_CASE("leave-one-out degenerate: n = k") {
    const FoldPlan plan = make_fold_plan(10, FoldScheme::kfold, 10, 3);
    for (const FoldAssignment& a : plan.assignments) CHECK(a.test.size() == 1);
    check_kfold_properties(plan, 10, 10);
}

TEST_CASE("fold plans are deterministic and validate inputs") {
    const FoldPlan a = make_fold_plan(57, FoldScheme::kfold, 10, 11);
    const FoldPlan b = make_fold_plan(57, FoldScheme::kfold, 10, 11);
    for (std::size_t i = 0; i < a.assignments.size(); ++i) {
        CHECK(a.assignments[i].train == b.assignments[i].train);
        CHECK(a.assignments[i].test == b.assignments[i].test);
    }
    const FoldPlan c = make_fold_plan(57, FoldScheme::kfold, 10, 12);
    bool differs = false;
    for (std::size_t i = 0; i < a.assignments.size(); ++i)
        differs = differs || (a.assignments[i].test != c.assignments[i].test);
    CHECK(differs);

    CHECK_THROWS_AS(make_fold_plan(5, FoldScheme::kfold, 10, 1), DataError);
    CHECK_THROWS_AS(make_fold_plan(10, FoldScheme::kfold, 1, 1), ConfigError);
    CHECK_THROWS_AS(make_fold_plan(1, FoldScheme::five_by_two, 0, 1), DataError);
}

TEST_CASE("run_cv_fnt with structure reuse shares topology across folds") {
    SynthConfig scfg = default_synth_config();
    scfg.granule_sizes = {90.0, 500.0, 2360.0};
    scfg.shoe_speeds = {10.0, 50.0, 400.0};
    scfg.repeats = 2;
    scfg.noise_sd = 0.2;
    scfg.seed = 5;
    const Dataset ds = generate_synthetic(scfg);

    const FoldPlan plan = make_fold_plan(static_cast<int>(ds.n_rows()), FoldScheme::kfold, 5, 9);
    const CvReport rep = run_cv_fnt(ds, plan, cv_gp_config(1), cv_de_config(2));

    CHECK(rep.model_type == "FNT");
    CHECK(rep.structure_reused);
    REQUIRE(rep.per_fold.size() == 5);
    for (const FoldRecord& f : rep.per_fold) {
        CHECK(f.complexity == rep.model_complexity);
        CHECK(f.selected_features == rep.selected_features);
        CHECK(f.train_rmse >= 0.0);
        CHECK(f.test_rmse >= 0.0);
        CHECK(f.test_predictions.size() == plan.assignments[f.fold - 1].test.size());
    }
}

TEST_CASE("report aggregates recompute from the fold records") {
    const Dataset ds = testutil::toy_dataset(40, 3, 31);
    const FoldPlan plan = make_fold_plan(40, FoldScheme::kfold, 4, 13);
    const CvReport rep = run_cv_fnt(ds, plan, cv_gp_config(3), cv_de_config(4));

    std::vector<double> test_rmses;
    std::vector<double> test_rs;
    for (const FoldRecord& f : rep.per_fold) {
        test_rmses.push_back(f.test_rmse);
        if (f.test_r) test_rs.push_back(*f.test_r);
    }
    double mean = 0.0;
    for (double v : test_rmses) mean += v;
    mean /= static_cast<double>(test_rmses.size());
    CHECK(rep.mean_test_rmse == doctest::Approx(mean).epsilon(1e-12));
    if (!test_rs.empty()) {
        double mr = 0.0;
        for (double v : test_rs) mr += v;
        mr /= static_cast<double>(test_rs.size());
        REQUIRE(rep.mean_test_r.has_value());
        CHECK(*rep.mean_test_r == doctest::Approx(mr).epsilon(1e-12));
    }
}

TEST_CASE("per-fold structure mode records fold-specific trees") {
    const Dataset ds = testutil::toy_dataset(30, 3, 41);
    const FoldPlan plan = make_fold_plan(30, FoldScheme::kfold, 3, 15);
    CvOptions options;
    options.structure_reuse = false;
    const CvReport rep = run_cv_fnt(ds, plan, cv_gp_config(5), cv_de_config(6), options);
    CHECK_FALSE(rep.structure_reused);
    REQUIRE(rep.per_fold.size() == 3);
}

TEST_CASE("baseline shares the fold plan and reports computational nodes") {
    const Dataset ds = testutil::toy_dataset(40, 3, 51);
    const FoldPlan plan = make_fold_plan(40, FoldScheme::kfold, 4, 17);
    MlpConfig mlp;
    mlp.hidden_nodes = 6;
    mlp.max_iterations = 40;
    mlp.seed = 3;
    const CvReport rep = run_cv_baseline(ds, plan, mlp);
    CHECK(rep.model_type == "MLP");
    REQUIRE(rep.per_fold.size() == 4);
    CHECK(rep.model_complexity == 7);  // hidden + output
    CHECK(rep.selected_features == std::vector<int>{0, 1, 2});
    for (const FoldRecord& f : rep.per_fold) {
        CHECK(f.test_predictions.size() == plan.assignments[f.fold - 1].test.size());
    }
}

TEST_CASE("constant targets yield an explicit no-value correlation") {
    Dataset ds = testutil::toy_dataset(24, 2, 61);
    for (Sample& s : ds.rows) s.target = 5.0;
    const FoldPlan plan = make_fold_plan(24, FoldScheme::kfold, 3, 19);
    MlpConfig mlp;
    mlp.hidden_nodes = 3;
    mlp.max_iterations = 30;
    const CvReport rep = run_cv_baseline(ds, plan, mlp);
    for (const FoldRecord& f : rep.per_fold) {
        CHECK_FALSE(f.test_r.has_value());
    }
    CHECK_FALSE(rep.mean_test_r.has_value());
}

TEST_CASE("identical seeds give identical reports") {
    const Dataset ds = testutil::toy_dataset(30, 3, 71);
    const FoldPlan plan = make_fold_plan(30, FoldScheme::kfold, 3, 23);
    const CvReport a = run_cv_fnt(ds, plan, cv_gp_config(7), cv_de_config(8));
    const CvReport b = run_cv_fnt(ds, plan, cv_gp_config(7), cv_de_config(8));
    REQUIRE(a.per_fold.size() == b.per_fold.size());
    for (std::size_t i = 0; i < a.per_fold.size(); ++i) {
        CHECK(a.per_fold[i].train_rmse == b.per_fold[i].train_rmse);
        CHECK(a.per_fold[i].test_rmse == b.per_fold[i].test_rmse);
    }
    CHECK(render_predictions_csv(a) == render_predictions_csv(b));
}

TEST_CASE("render_report orders rows by test correlation") {
    CvReport strong;
    strong.model_type = "FNT";
    strong.mean_test_r = 0.95;
    strong.mean_test_rmse = 2.0;
    strong.per_fold.push_back(FoldRecord{});
    CvReport weak;
    weak.model_type = "MLP";
    weak.mean_test_r = 0.79;
    weak.mean_test_rmse = 3.4;
    weak.per_fold.push_back(FoldRecord{});

    const std::vector<std::string> names{"a", "b"};
    const std::vector<CvReport> reports{weak, strong};
    const std::string table = render_report(reports, names);
    const std::size_t fnt_pos = table.find("FNT");
    const std::size_t mlp_pos = table.find("MLP");
    REQUIRE(fnt_pos != std::string::npos);
    REQUIRE(mlp_pos != std::string::npos);
    CHECK(fnt_pos < mlp_pos);

    SUBCASE("ties break on lower test RMSE") {
        CvReport tie_a = strong;
        tie_a.model_type = "AAA";
        tie_a.mean_test_rmse = 2.5;
        CvReport tie_b = strong;
        tie_b.model_type = "BBB";
        tie_b.mean_test_rmse = 2.1;
        const std::vector<CvReport> tied{tie_a, tie_b};
        const std::string t = render_report(tied, names);
        CHECK(t.find("BBB") < t.find("AAA"));
    }
    SUBCASE("single report renders") {
        const std::vector<CvReport> one{strong};
        CHECK(render_report(one, names).find("FNT") != std::string::npos);
    }
    SUBCASE("undefined correlation sorts last and prints a dash") {
        CvReport undef = weak;
        undef.model_type = "ZZZ";
        undef.mean_test_r.reset();
        const std::vector<CvReport> mixed{undef, strong};
        const std::string t = render_report(mixed, names);
        CHECK(t.find("FNT") < t.find("ZZZ"));
    }
}

TEST_CASE("report json is well-formed and deterministic") {
    const Dataset ds = testutil::toy_dataset(24, 2, 81);
    const FoldPlan plan = make_fold_plan(24, FoldScheme::kfold, 3, 29);
    MlpConfig mlp;
    mlp.hidden_nodes = 3;
    mlp.max_iterations = 20;
    const CvReport rep = run_cv_baseline(ds, plan, mlp);
    const std::vector<CvReport> reports{rep};
    const std::string a = render_report_json(reports, ds.feature_names);
    const std::string b = render_report_json(reports, ds.feature_names);
    CHECK(a == b);
    CHECK(a.find("\"model_type\": \"MLP\"") != std::string::npos);
}
