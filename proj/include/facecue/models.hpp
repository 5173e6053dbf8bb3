#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "facecue/matrix.hpp"
#include "facecue/tree.hpp"

namespace facecue {

enum class ClassifierKind { DecisionTree, RandomForest, Knn, LogisticRegression, AdaBoost };

const char* classifier_kind_name(ClassifierKind kind);
ClassifierKind parse_classifier_kind(const std::string& s);

struct Hyperparams {
    // trees / forest
    int n_trees = 100;
    int max_depth = -1; // -1 = unbounded
    int min_samples_leaf = 1;
    std::optional<int> mtry; // forest default: round(sqrt(d))
    bool bootstrap = true;
    // knn
    int k_neighbors = 5;
    // logistic regression
    double l2 = 1.0;
    double learning_rate = 0.1;
    int max_iters = 1000;
    double tol = 1e-6;
    // adaboost
    int n_estimators = 50;
    double boost_learning_rate = 1.0;
};

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::RandomForest;
    Hyperparams params;
    std::uint64_t seed = 0;
};

void validate_spec(const ClassifierSpec& spec);

// --- fitted states ----------------------------------------------------------

struct TreeState {
    DecisionTree tree;
};

struct ForestState {
    std::vector<DecisionTree> trees;
    // Averaged leaf distributions over trees evaluated in the given order but
    // reduced in canonical tree-index order; identical output for any order.
    void proba_row(std::span<const double> x, std::span<double> out) const;
};

struct KnnState {
    Matrix train_x;
    std::vector<int> train_y;
};

struct LogRegState {
    std::vector<double> feature_means;
    std::vector<double> feature_scales;
    Matrix weights;               // heads x features (1 head when binary)
    std::vector<double> biases;   // per head
    std::size_t n_classes = 0;
};

struct AdaBoostHead {
    std::vector<Stump> stumps; // over binary labels {0 = rest, 1 = positive}
    std::vector<double> alphas;
    std::vector<double> fallback_freq; // training label frequencies (used when no stump survives)
};

struct AdaBoostState {
    std::vector<AdaBoostHead> heads; // 1 head when binary, else one-vs-rest per class
};

// --- trained model ----------------------------------------------------------

class TrainedModel {
public:
    using State = std::variant<TreeState, ForestState, KnnState, LogRegState, AdaBoostState>;

    TrainedModel() = default;
    TrainedModel(ClassifierSpec spec, std::vector<std::string> class_list, std::size_t feature_count,
                 State state)
        : spec_(std::move(spec)), class_list_(std::move(class_list)), feature_count_(feature_count),
          state_(std::move(state)) {}

    const ClassifierSpec& spec() const { return spec_; }
    const std::vector<std::string>& class_list() const { return class_list_; }
    std::size_t feature_count() const { return feature_count_; }
    const State& state() const { return state_; }

    bool is_tree_based() const {
        return spec_.kind == ClassifierKind::DecisionTree || spec_.kind == ClassifierKind::RandomForest;
    }

    // Per-row class probabilities; rows sum to 1.
    Matrix predict_proba(const Matrix& X) const;
    // argmax of predict_proba, ties toward the earlier class in class_list.
    std::vector<int> predict(const Matrix& X) const;

    nlohmann::ordered_json to_json() const;
    static TrainedModel from_json(const nlohmann::ordered_json& doc);

private:
    ClassifierSpec spec_;
    std::vector<std::string> class_list_;
    std::size_t feature_count_ = 0;
    State state_;
};

// Trains the classifier named by spec on label indices into class_list.
// jobs > 1 parallelizes forest tree growth; results are identical to serial.
TrainedModel train_classifier(const ClassifierSpec& spec, const Matrix& X, std::span<const int> y,
                              const std::vector<std::string>& class_list, int jobs = 1);

// Mean decrease in weighted Gini impurity, averaged over trees and normalized
// to sum 1 (uniform when no split exists). Tree-based models only.
std::vector<double> impurity_importance(const TrainedModel& model);

enum class ImportanceMetric { Accuracy, MacroF1 };

struct PermutationImportance {
    std::vector<double> mean_drop;
    std::vector<double> std_drop; // population std over repeats
    double baseline = 0.0;
};

PermutationImportance permutation_importance(const TrainedModel& model, const Matrix& X,
                                             std::span<const int> y, ImportanceMetric metric,
                                             int n_repeats, std::uint64_t seed);

namespace logreg_detail {
// Loss surface used by the trainer: mean cross-entropy over rows plus
// l2/(2n) * ||w||^2 (bias unpenalized). wb packs [w_0..w_{d-1}, b].
// Exposed so a finite-difference check can probe the exact training gradient.
std::pair<double, std::vector<double>> loss_and_gradient(const Matrix& X, std::span<const int> y01,
                                                         std::span<const double> wb, double l2);
} // namespace logreg_detail

} // namespace facecue
