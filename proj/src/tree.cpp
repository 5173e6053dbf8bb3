#include "facecue/tree.hpp"

#include <algorithm>
#include <numeric>

#include "facecue/errors.hpp"

namespace facecue {

double gini_impurity(std::span<const double> class_counts) {
    double total = 0.0;
    for (double c : class_counts) total += c;
    if (total <= 0.0) return 0.0;
    double sum_sq = 0.0;
    for (double c : class_counts) {
        const double p = c / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

namespace {

// Midpoint that is guaranteed to satisfy lo <= m < hi so the <= predicate
// reproduces the training partition even for adjacent doubles.
double split_midpoint(double lo, double hi) {
    const double m = lo + (hi - lo) / 2.0;
    if (m >= hi) return lo;
    return m;
}

int argmax_class(std::span<const double> counts) {
    int best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c)
        if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    return best;
}

struct BestSplit {
    int feature = -1;
    double threshold = 0.0;
    double decrease = -1.0;
    std::size_t n_left = 0;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                const TreeGrowParams& params, SplitMix64* rng, std::size_t root_size)
        : x_(X), y_(y), n_classes_(n_classes), params_(params), rng_(rng),
          root_size_(static_cast<double>(root_size)) {
        const std::size_t d = X.cols();
        use_subset_ = rng != nullptr && params.mtry > 0 && static_cast<std::size_t>(params.mtry) < d;
        feature_pool_.resize(d);
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
    }

    int build(DecisionTree& tree, std::vector<std::size_t> indices, int depth) {
        std::vector<double> counts(n_classes_, 0.0);
        for (std::size_t i : indices) counts[static_cast<std::size_t>(y_[i])] += 1.0;
        const double impurity = gini_impurity(counts);

        const bool depth_capped = params_.max_depth >= 0 && depth >= params_.max_depth;
        const auto msl = static_cast<std::size_t>(params_.min_samples_leaf);
        BestSplit best;
        if (impurity > 0.0 && !depth_capped && indices.size() >= 2 * msl)
            best = find_best_split(indices, counts, impurity);

        if (best.feature < 0) return make_leaf(tree, std::move(counts));

        std::vector<std::size_t> left, right;
        left.reserve(best.n_left);
        right.reserve(indices.size() - best.n_left);
        for (std::size_t i : indices)
            (x_.at(i, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right)
                .push_back(i);

        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(node_index)].feature = best.feature;
        tree.nodes[static_cast<std::size_t>(node_index)].threshold = best.threshold;
        tree.nodes[static_cast<std::size_t>(node_index)].weighted_decrease =
            (static_cast<double>(indices.size()) / root_size_) * best.decrease;
        indices.clear();
        indices.shrink_to_fit();

        const int left_index = build(tree, std::move(left), depth + 1);
        const int right_index = build(tree, std::move(right), depth + 1);
        tree.nodes[static_cast<std::size_t>(node_index)].left = left_index;
        tree.nodes[static_cast<std::size_t>(node_index)].right = right_index;
        return node_index;
    }

private:
    int make_leaf(DecisionTree& tree, std::vector<double>&& counts) {
        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.back().class_counts = std::move(counts);
        return node_index;
    }

    BestSplit find_best_split(const std::vector<std::size_t>& indices,
                              const std::vector<double>& counts, double impurity) {
        const std::size_t d = x_.cols();
        std::span<const std::size_t> candidates;
        if (use_subset_) {
            const auto mtry = static_cast<std::size_t>(params_.mtry);
            for (std::size_t i = 0; i < mtry; ++i) {
                const std::size_t j = i + rng_->next_index(d - i);
                std::swap(feature_pool_[i], feature_pool_[j]);
            }
            std::sort(feature_pool_.begin(), feature_pool_.begin() + static_cast<long>(mtry));
            candidates = std::span<const std::size_t>(feature_pool_.data(), mtry);
        } else {
            std::sort(feature_pool_.begin(), feature_pool_.end());
            candidates = feature_pool_;
        }

        const std::size_t n = indices.size();
        const auto n_total = static_cast<double>(n);
        const auto msl = static_cast<std::size_t>(params_.min_samples_leaf);

        BestSplit best;
        std::vector<std::pair<double, int>> sorted(n);
        std::vector<double> left_counts(n_classes_);
        std::vector<double> right_counts(n_classes_);
        for (std::size_t f : candidates) {
            for (std::size_t i = 0; i < n; ++i)
                sorted[i] = {x_.at(indices[i], f), y_[indices[i]]};
            std::sort(sorted.begin(), sorted.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (sorted.front().first == sorted.back().first) continue;

            std::fill(left_counts.begin(), left_counts.end(), 0.0);
            std::size_t i = 0;
            while (i < n) {
                std::size_t j = i;
                while (j + 1 < n && sorted[j + 1].first == sorted[i].first) ++j;
                for (std::size_t t = i; t <= j; ++t)
                    left_counts[static_cast<std::size_t>(sorted[t].second)] += 1.0;
                if (j + 1 < n) {
                    const std::size_t n_left = j + 1;
                    const std::size_t n_right = n - n_left;
                    if (n_left >= msl && n_right >= msl) {
                        for (std::size_t c = 0; c < n_classes_; ++c)
                            right_counts[c] = counts[c] - left_counts[c];
                        const double decrease =
                            impurity -
                            (static_cast<double>(n_left) / n_total) * gini_impurity(left_counts) -
                            (static_cast<double>(n_right) / n_total) * gini_impurity(right_counts);
                        if (decrease > best.decrease) {
                            best.feature = static_cast<int>(f);
                            best.threshold = split_midpoint(sorted[j].first, sorted[j + 1].first);
                            best.decrease = decrease;
                            best.n_left = n_left;
                        }
                    }
                }
                i = j + 1;
            }
        }
        return best;
    }

    const Matrix& x_;
    std::span<const int> y_;
    std::size_t n_classes_;
    TreeGrowParams params_;
    SplitMix64* rng_;
    double root_size_;
    bool use_subset_ = false;
    std::vector<std::size_t> feature_pool_;
};

} // namespace

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const double> x) const {
    const Node* node = &nodes[0];
    while (node->feature >= 0) {
        node = x[static_cast<std::size_t>(node->feature)] <= node->threshold
                   ? &nodes[static_cast<std::size_t>(node->left)]
                   : &nodes[static_cast<std::size_t>(node->right)];
    }
    return *node;
}

void DecisionTree::leaf_distribution(std::span<const double> x, std::span<double> out) const {
    const Node& leaf = leaf_for(x);
    double total = 0.0;
    for (double c : leaf.class_counts) total += c;
    for (std::size_t c = 0; c < n_classes; ++c)
        out[c] = total > 0.0 ? leaf.class_counts[c] / total : 1.0 / static_cast<double>(n_classes);
}

std::vector<double> DecisionTree::split_importance() const {
    std::vector<double> importance(n_features, 0.0);
    for (const auto& node : nodes)
        if (node.feature >= 0)
            importance[static_cast<std::size_t>(node.feature)] += node.weighted_decrease;
    return importance;
}

DecisionTree grow_tree(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                       std::span<const std::size_t> sample_indices, const TreeGrowParams& params,
                       SplitMix64* rng) {
    if (X.rows() == 0 || sample_indices.empty())
        throw Error(Errc::EmptyTrainingSet, "cannot grow a tree on zero samples");
    if (y.size() != X.rows())
        throw Error(Errc::DimensionMismatch, "label count does not match sample count");

    DecisionTree tree;
    tree.n_classes = n_classes;
    tree.n_features = X.cols();
    TreeBuilder builder(X, y, n_classes, params, rng, sample_indices.size());
    std::vector<std::size_t> indices(sample_indices.begin(), sample_indices.end());
    builder.build(tree, std::move(indices), 0);
    return tree;
}

Stump fit_stump(const Matrix& X, std::span<const int> y, std::span<const double> weights,
                std::size_t n_classes) {
    const std::size_t n = X.rows();
    if (n == 0) throw Error(Errc::EmptyTrainingSet, "cannot fit a stump on zero samples");

    std::vector<double> counts(n_classes, 0.0);
    double total_weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        counts[static_cast<std::size_t>(y[i])] += weights[i];
        total_weight += weights[i];
    }
    const double impurity = gini_impurity(counts);

    Stump stump;
    double best_decrease = -1.0;
    std::vector<double> best_left_counts, best_right_counts;
    std::vector<std::pair<double, std::size_t>> sorted(n);
    std::vector<double> left_counts(n_classes);
    std::vector<double> right_counts(n_classes);
    for (std::size_t f = 0; f < X.cols(); ++f) {
        for (std::size_t i = 0; i < n; ++i) sorted[i] = {X.at(i, f), i};
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (sorted.front().first == sorted.back().first) continue;

        std::fill(left_counts.begin(), left_counts.end(), 0.0);
        double left_weight = 0.0;
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && sorted[j + 1].first == sorted[i].first) ++j;
            for (std::size_t t = i; t <= j; ++t) {
                const std::size_t idx = sorted[t].second;
                left_counts[static_cast<std::size_t>(y[idx])] += weights[idx];
                left_weight += weights[idx];
            }
            if (j + 1 < n) {
                for (std::size_t c = 0; c < n_classes; ++c)
                    right_counts[c] = counts[c] - left_counts[c];
                const double decrease = impurity -
                                        (left_weight / total_weight) * gini_impurity(left_counts) -
                                        ((total_weight - left_weight) / total_weight) *
                                            gini_impurity(right_counts);
                if (decrease > best_decrease) {
                    best_decrease = decrease;
                    stump.feature = static_cast<int>(f);
                    stump.threshold = split_midpoint(sorted[j].first, sorted[j + 1].first);
                    best_left_counts = left_counts;
                    best_right_counts = right_counts;
                }
            }
            i = j + 1;
        }
    }

    if (stump.feature < 0) {
        stump.left_class = stump.right_class = argmax_class(counts);
        return stump;
    }
    stump.left_class = argmax_class(best_left_counts);
    stump.right_class = argmax_class(best_right_counts);
    return stump;
}

} // namespace facecue
