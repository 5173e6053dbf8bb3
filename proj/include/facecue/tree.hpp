#pragma once

#include <span>
#include <vector>

#include "facecue/matrix.hpp"
#include "facecue/rng.hpp"

namespace facecue {

// CART classification tree with Gini impurity. Split thresholds are midpoints
// of consecutive sorted unique values; value <= threshold routes left. Ties
// between candidate splits break toward the lowest feature index, then the
// lowest threshold.
struct DecisionTree {
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        // impurity decrease weighted by the node's sample fraction (importance bookkeeping)
        double weighted_decrease = 0.0;
        int left = -1;
        int right = -1;
        std::vector<double> class_counts; // leaves only
    };

    std::vector<Node> nodes; // nodes[0] is the root
    std::size_t n_classes = 0;
    std::size_t n_features = 0;

    const Node& leaf_for(std::span<const double> x) const;
    // Leaf class counts normalized to a distribution.
    void leaf_distribution(std::span<const double> x, std::span<double> out) const;
    // Per-feature sum of weighted impurity decreases (unnormalized).
    std::vector<double> split_importance() const;
};

struct TreeGrowParams {
    int max_depth = -1; // -1 = unbounded
    int min_samples_leaf = 1;
    int mtry = 0; // 0 = consider all features
};

// Grows a tree on X rows listed in sample_indices (repetitions allowed, as in
// bootstrap resamples). When mtry is in (0, n_features) each node considers a
// random feature subset drawn from rng; rng may be null when all features are
// considered.
DecisionTree grow_tree(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                       std::span<const std::size_t> sample_indices, const TreeGrowParams& params,
                       SplitMix64* rng);

// Gini impurity of a class-count vector.
double gini_impurity(std::span<const double> class_counts);

// Depth-1 weighted stump for boosting: best weighted-Gini split, leaves
// predict the weighted-majority class (ties toward the lower class index).
struct Stump {
    int feature = -1; // -1: no usable split; both sides predict majority_class
    double threshold = 0.0;
    int left_class = 0;
    int right_class = 0;

    int predict(std::span<const double> x) const {
        if (feature < 0) return left_class;
        return x[static_cast<std::size_t>(feature)] <= threshold ? left_class : right_class;
    }
};

Stump fit_stump(const Matrix& X, std::span<const int> y, std::span<const double> weights,
                std::size_t n_classes);

} // namespace facecue
