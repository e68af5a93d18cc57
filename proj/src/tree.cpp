#include "fnt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "fnt/errors.hpp"

namespace fnt {

namespace {

void validate_node(const FntNode& node, const FntModel& model, int max_arity, int depth,
                   int max_height) {
    if (max_height > 0 && depth > max_height)
        throw std::invalid_argument("tree exceeds max height " + std::to_string(max_height));
    if (node.is_leaf()) {
        if (!node.weights.empty())
            throw std::invalid_argument("terminal node carries edge weights");
        if (node.feature < 0 || node.feature >= model.input_arity)
            throw std::invalid_argument("terminal feature index " + std::to_string(node.feature) +
                                        " outside input arity " +
                                        std::to_string(model.input_arity));
        return;
    }
    if (node.children.size() < 2)
        throw std::invalid_argument("computational node has fewer than 2 children");
    if (max_arity > 0 && node.children.size() > static_cast<std::size_t>(max_arity))
        throw std::invalid_argument("computational node exceeds max arity " +
                                    std::to_string(max_arity));
    if (node.weights.size() != node.children.size())
        throw std::invalid_argument("weight count does not match child count");
    if (node.b == 0.0) throw std::invalid_argument("activation argument b must be nonzero");
    for (const FntNode& c : node.children) validate_node(c, model, max_arity, depth + 1, max_height);
}

double eval_node(const FntNode& node, std::span<const double> features, GaussianForm form) {
    if (node.is_leaf()) return features[static_cast<std::size_t>(node.feature)];
    double o = 0.0;
    for (std::size_t j = 0; j < node.children.size(); ++j) {
        o += node.weights[j] * eval_node(node.children[j], features, form);
    }
    const double t = (o - node.a) / node.b;
    return form == GaussianForm::squared ? std::exp(-t * t) : std::exp(-t);
}

int count_nodes(const FntNode& node) {
    int n = 1;
    for (const FntNode& c : node.children) n += count_nodes(c);
    return n;
}

void collect_features(const FntNode& node, std::vector<int>& out) {
    if (node.is_leaf()) {
        out.push_back(node.feature);
        return;
    }
    for (const FntNode& c : node.children) collect_features(c, out);
}

void flatten_node(const FntNode& node, ParamVector& out) {
    if (node.is_leaf()) return;
    out.push_back(node.a);
    out.push_back(node.b);
    for (double w : node.weights) out.push_back(w);
    for (const FntNode& c : node.children) flatten_node(c, out);
}

void apply_node(FntNode& node, std::span<const double> v, std::size_t& pos) {
    if (node.is_leaf()) return;
    node.a = v[pos++];
    node.b = v[pos++];
    for (double& w : node.weights) w = v[pos++];
    for (FntNode& c : node.children) apply_node(c, v, pos);
}

using json = nlohmann::ordered_json;

json node_to_json(const FntNode& node) {
    if (node.is_leaf()) {
        return json{{"feature", node.feature}};
    }
    json j;
    j["a"] = node.a;
    j["b"] = node.b;
    j["weights"] = node.weights;
    json children = json::array();
    for (const FntNode& c : node.children) children.push_back(node_to_json(c));
    j["children"] = std::move(children);
    return j;
}

FntNode node_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw DataError("model document: expected object at " + path);
    if (j.contains("feature")) {
        if (!j["feature"].is_number_integer())
            throw DataError("model document: feature index must be an integer at " + path);
        return FntNode::leaf(j["feature"].get<int>());
    }
    for (const char* key : {"a", "b", "weights", "children"}) {
        if (!j.contains(key))
            throw DataError("model document: missing '" + std::string(key) + "' at " + path);
    }
    FntNode n;
    n.a = j["a"].get<double>();
    n.b = j["b"].get<double>();
    n.weights = j["weights"].get<std::vector<double>>();
    const json& children = j["children"];
    if (!children.is_array())
        throw DataError("model document: 'children' must be an array at " + path);
    std::size_t idx = 0;
    for (const json& cj : children) {
        n.children.push_back(node_from_json(cj, path + ".children[" + std::to_string(idx) + "]"));
        ++idx;
    }
    return n;
}

}  // namespace

void validate_model(const FntModel& model, int max_arity, int max_height) {
    if (model.input_arity < 1) throw std::invalid_argument("model input arity must be >= 1");
    if (model.root.is_leaf())
        throw std::invalid_argument("root must be a computational node");
    validate_node(model.root, model, max_arity, 1, max_height);
}

double evaluate(const FntModel& model, std::span<const double> features) {
    if (features.size() != static_cast<std::size_t>(model.input_arity))
        throw std::invalid_argument("evaluate: feature arity mismatch");
    for (double v : features) {
        if (!std::isfinite(v)) throw std::invalid_argument("evaluate: non-finite input");
    }
    double y = eval_node(model.root, features, model.gaussian);
    if (model.output_map) y = model.output_map->scale * y + model.output_map->offset;
    return y;
}

int complexity(const FntModel& model) { return count_nodes(model.root); }

int node_height(const FntNode& node) {
    int h = 0;
    for (const FntNode& c : node.children) h = std::max(h, node_height(c));
    return h + 1;
}

int count_computational(const FntNode& node) {
    if (node.is_leaf()) return 0;
    int n = 1;
    for (const FntNode& c : node.children) n += count_computational(c);
    return n;
}

std::vector<int> selected_features(const FntModel& model) {
    std::vector<int> all;
    collect_features(model.root, all);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

std::size_t param_count(const FntModel& model) {
    const int comp = count_computational(model.root);
    const int edges = count_nodes(model.root) - 1;
    std::size_t n = 2 * static_cast<std::size_t>(comp) + static_cast<std::size_t>(edges);
    if (model.output_map) n += 2;
    return n;
}

ParamVector flatten(const FntModel& model) {
    ParamVector v;
    v.reserve(param_count(model));
    flatten_node(model.root, v);
    if (model.output_map) {
        v.push_back(model.output_map->scale);
        v.push_back(model.output_map->offset);
    }
    return v;
}

FntModel unflatten(const FntModel& model, const ParamVector& v) {
    FntModel out = model;
    apply_params(out, v);
    return out;
}

void apply_params(FntModel& model, std::span<const double> v) {
    if (v.size() != param_count(model))
        throw std::invalid_argument("parameter vector length " + std::to_string(v.size()) +
                                    " does not match model parameter count " +
                                    std::to_string(param_count(model)));
    std::size_t pos = 0;
    apply_node(model.root, v, pos);
    if (model.output_map) {
        model.output_map->scale = v[pos++];
        model.output_map->offset = v[pos++];
    }
}

std::string serialize(const FntModel& model) {
    json j;
    j["format"] = "fnt-model";
    j["version"] = 1;
    j["input_arity"] = model.input_arity;
    j["gaussian"] = model.gaussian == GaussianForm::squared ? "squared" : "paper_eq5";
    if (model.output_map) {
        j["output_map"] = {{"scale", model.output_map->scale},
                           {"offset", model.output_map->offset}};
    }
    j["root"] = node_to_json(model.root);
    return j.dump(2) + "\n";
}

FntModel deserialize(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("model document: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "fnt-model")
        throw DataError("model document: missing format tag 'fnt-model'");
    if (j.value("version", 0) != 1)
        throw DataError("model document: unsupported version");
    FntModel m;
    if (!j.contains("input_arity") || !j["input_arity"].is_number_integer())
        throw DataError("model document: missing integer 'input_arity'");
    m.input_arity = j["input_arity"].get<int>();
    const std::string form = j.value("gaussian", "squared");
    if (form == "squared") {
        m.gaussian = GaussianForm::squared;
    } else if (form == "paper_eq5") {
        m.gaussian = GaussianForm::paper_eq5;
    } else {
        throw DataError("model document: unknown gaussian form '" + form + "'");
    }
    if (j.contains("output_map")) {
        m.output_map = OutputMap{j["output_map"].value("scale", 1.0),
                                 j["output_map"].value("offset", 0.0)};
    }
    if (!j.contains("root")) throw DataError("model document: missing 'root'");
    m.root = node_from_json(j["root"], "root");
    try {
        validate_model(m);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("model document: ") + e.what());
    }
    return m;
}

}  // namespace fnt
