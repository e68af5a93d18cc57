#pragma once

#include <vector>

#include "fnt/dataset.hpp"
#include "fnt/gp.hpp"
#include "fnt/rng.hpp"
#include "fnt/tree.hpp"

namespace testutil {

// Hand-encoded tree with the reference figure's counts: computational set
// {+2, +3}, terminals {x1, x2, x3}, 12 nodes total (4 computational, 8
// terminals, 11 edges).
inline fnt::FntModel figure_tree() {
    using fnt::FntNode;
    FntNode c = FntNode::computational(
        0.4, 0.7, {0.5, -0.3, 0.8},
        {FntNode::leaf(0), FntNode::leaf(1), FntNode::leaf(2)});
    FntNode a = FntNode::computational(
        0.2, 0.9, {0.6, 0.1, -0.4},
        {FntNode::leaf(0), FntNode::leaf(1), std::move(c)});
    FntNode b = FntNode::computational(0.8, 0.3, {0.2, 0.7},
                                       {FntNode::leaf(1), FntNode::leaf(2)});
    FntNode root = FntNode::computational(0.5, 0.6, {0.9, -0.2, 0.4},
                                          {std::move(a), FntNode::leaf(2), std::move(b)});
    fnt::FntModel m;
    m.root = std::move(root);
    m.input_arity = 3;
    return m;
}

inline fnt::GpConfig small_gp_config(std::uint64_t seed = 1) {
    fnt::GpConfig cfg;
    cfg.seed = seed;
    return cfg;
}

inline fnt::FntModel random_model(std::uint64_t seed, int input_arity = 4,
                                  bool output_map = false) {
    fnt::GpConfig cfg = small_gp_config(seed);
    cfg.use_output_map = output_map;
    fnt::Rng rng(seed);
    return fnt::random_tree(cfg, input_arity, rng);
}

inline std::vector<double> random_features(fnt::Rng& rng, int arity) {
    std::vector<double> x(static_cast<std::size_t>(arity));
    for (double& v : x) v = rng.uniform();
    return x;
}

// Small deterministic dataset: target is an arbitrary smooth function of the
// features.
inline fnt::Dataset toy_dataset(int rows = 40, int arity = 4, std::uint64_t seed = 7) {
    fnt::Dataset ds;
    for (int f = 0; f < arity; ++f) ds.feature_names.push_back("f" + std::to_string(f));
    ds.target_name = "y";
    ds.provenance = "toy";
    fnt::Rng rng(seed);
    for (int i = 0; i < rows; ++i) {
        fnt::Sample s;
        s.features = random_features(rng, arity);
        s.target = 2.0 * s.features[0] - 1.5 * s.features[arity > 1 ? 1 : 0] + 0.5;
        ds.rows.push_back(std::move(s));
    }
    return ds;
}

}  // namespace testutil
