#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fnt {

// Activation applied at every computational node.
enum class GaussianForm {
    squared,    // exp(-((o - a) / b)^2), the literal Gaussian bell
    paper_eq5,  // exp(-((o - a) / b)), unsquared variant
};

// One tree node. A node with no children is a terminal referencing an input
// feature; otherwise it is a computational node with activation arguments
// a, b and one weight per child edge. Value semantics throughout: copying a
// node deep-copies its subtree.
struct FntNode {
    int feature = -1;  // terminal payload
    double a = 0.0;
    double b = 1.0;
    std::vector<double> weights;  // one per child
    std::vector<FntNode> children;

    bool is_leaf() const { return children.empty(); }

    static FntNode leaf(int feature_index) {
        FntNode n;
        n.feature = feature_index;
        return n;
    }

    static FntNode computational(double a, double b, std::vector<double> weights,
                                 std::vector<FntNode> children) {
        FntNode n;
        n.a = a;
        n.b = b;
        n.weights = std::move(weights);
        n.children = std::move(children);
        return n;
    }
};

// Affine map applied to the root output so the (0, 1]-bounded tree can reach
// targets in original units. When present, its two parameters ride at the end
// of the flattened parameter vector and are optimized alongside the rest.
struct OutputMap {
    double scale = 1.0;
    double offset = 0.0;
};

struct FntModel {
    FntNode root;
    int input_arity = 0;
    GaussianForm gaussian = GaussianForm::squared;
    std::optional<OutputMap> output_map;
};

// Structural invariants: computational root, 2..max_arity children per
// computational node, matching weight counts, terminal feature indices within
// input_arity, b != 0, height within max_height. Pass 0 to skip the arity or
// height cap. Throws std::invalid_argument naming the violation.
void validate_model(const FntModel& model, int max_arity = 0, int max_height = 0);

// Bottom-up evaluation: each computational node forms the weighted sum of its
// children's values and passes it through the Gaussian activation; terminals
// return their input feature. With the squared form every node output lies in
// (0, 1]. The output map, when present, rescales the root value.
double evaluate(const FntModel& model, std::span<const double> features);

// Total node count, computational plus terminal.
int complexity(const FntModel& model);

// Number of levels in the subtree; a single node has height 1.
int node_height(const FntNode& node);

int count_computational(const FntNode& node);

// Distinct terminal feature indices, ascending.
std::vector<int> selected_features(const FntModel& model);

using ParamVector = std::vector<double>;

// Flattened parameters: a, b, then the edge weights of every computational
// node, visited in pre-order; the output map's scale and offset follow when
// present. Length = 2 * (#computational) + (#edges) [+ 2].
std::size_t param_count(const FntModel& model);
ParamVector flatten(const FntModel& model);

// Returns a copy of the model carrying the given parameters. Throws
// std::invalid_argument on length mismatch. unflatten(m, flatten(m)) == m.
FntModel unflatten(const FntModel& model, const ParamVector& v);

// In-place variant used by optimizer hot loops; same traversal order.
void apply_params(FntModel& model, std::span<const double> v);

// Model document: a single human-readable JSON text, lossless for doubles.
// Grammar documented in the repository README.
std::string serialize(const FntModel& model);

// Throws DataError with a position-bearing message on malformed text and on
// structural violations (e.g. a terminal root).
FntModel deserialize(const std::string& text);

}  // namespace fnt
