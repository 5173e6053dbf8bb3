#include <json.hpp>

#include "facecue/errors.hpp"
#include "facecue/models.hpp"

namespace facecue {
namespace {

using nlohmann::ordered_json;

constexpr int kModelFormatVersion = 1;

ordered_json tree_to_json(const DecisionTree& tree) {
    ordered_json nodes = ordered_json::array();
    for (const auto& node : tree.nodes) {
        ordered_json n;
        if (node.feature >= 0) {
            n["f"] = node.feature;
            n["t"] = node.threshold;
            n["d"] = node.weighted_decrease;
            n["l"] = node.left;
            n["r"] = node.right;
        } else {
            n["counts"] = node.class_counts;
        }
        nodes.push_back(std::move(n));
    }
    ordered_json out;
    out["n_classes"] = tree.n_classes;
    out["n_features"] = tree.n_features;
    out["nodes"] = std::move(nodes);
    return out;
}

DecisionTree tree_from_json(const ordered_json& doc) {
    DecisionTree tree;
    tree.n_classes = doc.at("n_classes").get<std::size_t>();
    tree.n_features = doc.at("n_features").get<std::size_t>();
    for (const auto& n : doc.at("nodes")) {
        DecisionTree::Node node;
        if (n.contains("f")) {
            node.feature = n.at("f").get<int>();
            node.threshold = n.at("t").get<double>();
            node.weighted_decrease = n.at("d").get<double>();
            node.left = n.at("l").get<int>();
            node.right = n.at("r").get<int>();
        } else {
            node.class_counts = n.at("counts").get<std::vector<double>>();
        }
        tree.nodes.push_back(std::move(node));
    }
    return tree;
}

ordered_json matrix_to_json(const Matrix& m) {
    ordered_json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["data"] = m.data();
    return out;
}

Matrix matrix_from_json(const ordered_json& doc) {
    Matrix m(doc.at("rows").get<std::size_t>(), doc.at("cols").get<std::size_t>());
    m.data() = doc.at("data").get<std::vector<double>>();
    if (m.data().size() != m.rows() * m.cols())
        throw Error(Errc::MalformedManifest, "matrix payload size mismatch");
    return m;
}

ordered_json params_to_json(const Hyperparams& p) {
    ordered_json out;
    out["n_trees"] = p.n_trees;
    out["max_depth"] = p.max_depth;
    out["min_samples_leaf"] = p.min_samples_leaf;
    if (p.mtry) out["mtry"] = *p.mtry;
    out["bootstrap"] = p.bootstrap;
    out["k_neighbors"] = p.k_neighbors;
    out["l2"] = p.l2;
    out["learning_rate"] = p.learning_rate;
    out["max_iters"] = p.max_iters;
    out["tol"] = p.tol;
    out["n_estimators"] = p.n_estimators;
    out["boost_learning_rate"] = p.boost_learning_rate;
    return out;
}

Hyperparams params_from_json(const ordered_json& doc) {
    Hyperparams p;
    p.n_trees = doc.at("n_trees").get<int>();
    p.max_depth = doc.at("max_depth").get<int>();
    p.min_samples_leaf = doc.at("min_samples_leaf").get<int>();
    if (doc.contains("mtry")) p.mtry = doc.at("mtry").get<int>();
    p.bootstrap = doc.at("bootstrap").get<bool>();
    p.k_neighbors = doc.at("k_neighbors").get<int>();
    p.l2 = doc.at("l2").get<double>();
    p.learning_rate = doc.at("learning_rate").get<double>();
    p.max_iters = doc.at("max_iters").get<int>();
    p.tol = doc.at("tol").get<double>();
    p.n_estimators = doc.at("n_estimators").get<int>();
    p.boost_learning_rate = doc.at("boost_learning_rate").get<double>();
    return p;
}

ordered_json stump_to_json(const Stump& s) {
    return ordered_json{{"f", s.feature}, {"t", s.threshold}, {"l", s.left_class}, {"r", s.right_class}};
}

Stump stump_from_json(const ordered_json& doc) {
    Stump s;
    s.feature = doc.at("f").get<int>();
    s.threshold = doc.at("t").get<double>();
    s.left_class = doc.at("l").get<int>();
    s.right_class = doc.at("r").get<int>();
    return s;
}

} // namespace

nlohmann::ordered_json TrainedModel::to_json() const {
    ordered_json doc;
    doc["format_version"] = kModelFormatVersion;
    doc["kind"] = classifier_kind_name(spec_.kind);
    doc["seed"] = spec_.seed;
    doc["params"] = params_to_json(spec_.params);
    doc["class_list"] = class_list_;
    doc["feature_count"] = feature_count_;

    ordered_json state;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TreeState>) {
                state["tree"] = tree_to_json(s.tree);
            } else if constexpr (std::is_same_v<T, ForestState>) {
                ordered_json trees = ordered_json::array();
                for (const auto& t : s.trees) trees.push_back(tree_to_json(t));
                state["trees"] = std::move(trees);
            } else if constexpr (std::is_same_v<T, KnnState>) {
                state["train_x"] = matrix_to_json(s.train_x);
                state["train_y"] = s.train_y;
            } else if constexpr (std::is_same_v<T, LogRegState>) {
                state["feature_means"] = s.feature_means;
                state["feature_scales"] = s.feature_scales;
                state["weights"] = matrix_to_json(s.weights);
                state["biases"] = s.biases;
                state["n_classes"] = s.n_classes;
            } else {
                ordered_json heads = ordered_json::array();
                for (const auto& head : s.heads) {
                    ordered_json h;
                    ordered_json stumps = ordered_json::array();
                    for (const auto& st : head.stumps) stumps.push_back(stump_to_json(st));
                    h["stumps"] = std::move(stumps);
                    h["alphas"] = head.alphas;
                    h["fallback_freq"] = head.fallback_freq;
                    heads.push_back(std::move(h));
                }
                state["heads"] = std::move(heads);
            }
        },
        state_);
    doc["state"] = std::move(state);
    return doc;
}

TrainedModel TrainedModel::from_json(const nlohmann::ordered_json& doc) {
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw Error(Errc::MalformedManifest,
                        "unsupported model format version " + std::to_string(version));

        ClassifierSpec spec;
        spec.kind = parse_classifier_kind(doc.at("kind").get<std::string>());
        spec.seed = doc.at("seed").get<std::uint64_t>();
        spec.params = params_from_json(doc.at("params"));
        auto class_list = doc.at("class_list").get<std::vector<std::string>>();
        const auto feature_count = doc.at("feature_count").get<std::size_t>();
        const auto& state = doc.at("state");

        TrainedModel::State model_state;
        switch (spec.kind) {
            case ClassifierKind::DecisionTree:
                model_state = TreeState{tree_from_json(state.at("tree"))};
                break;
            case ClassifierKind::RandomForest: {
                ForestState forest;
                for (const auto& t : state.at("trees")) forest.trees.push_back(tree_from_json(t));
                model_state = std::move(forest);
                break;
            }
            case ClassifierKind::Knn: {
                KnnState knn;
                knn.train_x = matrix_from_json(state.at("train_x"));
                knn.train_y = state.at("train_y").get<std::vector<int>>();
                model_state = std::move(knn);
                break;
            }
            case ClassifierKind::LogisticRegression: {
                LogRegState lr;
                lr.feature_means = state.at("feature_means").get<std::vector<double>>();
                lr.feature_scales = state.at("feature_scales").get<std::vector<double>>();
                lr.weights = matrix_from_json(state.at("weights"));
                lr.biases = state.at("biases").get<std::vector<double>>();
                lr.n_classes = state.at("n_classes").get<std::size_t>();
                model_state = std::move(lr);
                break;
            }
            case ClassifierKind::AdaBoost: {
                AdaBoostState ab;
                for (const auto& h : state.at("heads")) {
                    AdaBoostHead head;
                    for (const auto& st : h.at("stumps")) head.stumps.push_back(stump_from_json(st));
                    head.alphas = h.at("alphas").get<std::vector<double>>();
                    head.fallback_freq = h.at("fallback_freq").get<std::vector<double>>();
                    ab.heads.push_back(std::move(head));
                }
                model_state = std::move(ab);
                break;
            }
        }
        return TrainedModel(std::move(spec), std::move(class_list), feature_count,
                            std::move(model_state));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedManifest, std::string("bad model document: ") + e.what());
    }
}

} // namespace facecue
