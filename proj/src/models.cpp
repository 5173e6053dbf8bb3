#include "facecue/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "facecue/errors.hpp"
#include "facecue/metrics.hpp"
#include "facecue/rng.hpp"

namespace facecue {

const char* classifier_kind_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::DecisionTree: return "decision_tree";
        case ClassifierKind::RandomForest: return "random_forest";
        case ClassifierKind::Knn: return "knn";
        case ClassifierKind::LogisticRegression: return "logistic_regression";
        case ClassifierKind::AdaBoost: return "adaboost";
    }
    return "unknown";
}

ClassifierKind parse_classifier_kind(const std::string& s) {
    if (s == "decision_tree") return ClassifierKind::DecisionTree;
    if (s == "random_forest") return ClassifierKind::RandomForest;
    if (s == "knn") return ClassifierKind::Knn;
    if (s == "logistic_regression") return ClassifierKind::LogisticRegression;
    if (s == "adaboost") return ClassifierKind::AdaBoost;
    throw Error(Errc::ConfigInvalid, "unknown classifier kind '" + s + "'");
}

void validate_spec(const ClassifierSpec& spec) {
    const auto& p = spec.params;
    if (p.n_trees < 1) throw Error(Errc::ConfigInvalid, "n_trees must be >= 1");
    if (p.min_samples_leaf < 1) throw Error(Errc::ConfigInvalid, "min_samples_leaf must be >= 1");
    if (p.mtry && *p.mtry < 1) throw Error(Errc::ConfigInvalid, "mtry must be >= 1");
    if (p.k_neighbors < 1) throw Error(Errc::ConfigInvalid, "k_neighbors must be >= 1");
    if (p.l2 < 0.0) throw Error(Errc::ConfigInvalid, "l2 must be >= 0");
    if (p.learning_rate <= 0.0) throw Error(Errc::ConfigInvalid, "learning_rate must be > 0");
    if (p.max_iters < 1) throw Error(Errc::ConfigInvalid, "max_iters must be >= 1");
    if (p.tol <= 0.0) throw Error(Errc::ConfigInvalid, "tol must be > 0");
    if (p.n_estimators < 1) throw Error(Errc::ConfigInvalid, "n_estimators must be >= 1");
    if (p.boost_learning_rate <= 0.0)
        throw Error(Errc::ConfigInvalid, "adaboost learning rate must be > 0");
}

namespace {

constexpr std::uint64_t kTreeTag = 0x74726565;   // "tree"
constexpr std::uint64_t kPermTag = 0x7065726D;   // "perm"

double stable_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::vector<std::size_t> identity_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

// ---- decision tree / random forest -----------------------------------------

TreeState fit_decision_tree(const ClassifierSpec& spec, const Matrix& X, std::span<const int> y,
                            std::size_t n_classes) {
    TreeGrowParams grow{spec.params.max_depth, spec.params.min_samples_leaf,
                        spec.params.mtry.value_or(0)};
    if (grow.mtry > 0 && static_cast<std::size_t>(grow.mtry) < X.cols()) {
        SplitMix64 rng(derive_seed(spec.seed, kTreeTag));
        TreeState state{grow_tree(X, y, n_classes, identity_indices(X.rows()), grow, &rng)};
        return state;
    }
    return TreeState{grow_tree(X, y, n_classes, identity_indices(X.rows()), grow, nullptr)};
}

int forest_mtry(const Hyperparams& params, std::size_t n_features) {
    if (params.mtry) return *params.mtry;
    return static_cast<int>(std::llround(std::sqrt(static_cast<double>(n_features))));
}

ForestState fit_random_forest(const ClassifierSpec& spec, const Matrix& X, std::span<const int> y,
                              std::size_t n_classes, int jobs) {
    const std::size_t n = X.rows();
    const auto n_trees = static_cast<std::size_t>(spec.params.n_trees);
    TreeGrowParams grow{spec.params.max_depth, spec.params.min_samples_leaf,
                        forest_mtry(spec.params, X.cols())};

    ForestState state;
    state.trees.resize(n_trees);
    const auto fit_one = [&](std::size_t t) {
        // Per-tree child seed: parallel and serial growth agree bit for bit.
        SplitMix64 rng(derive_seed(spec.seed, kTreeTag, t));
        std::vector<std::size_t> sample_indices;
        if (spec.params.bootstrap) {
            sample_indices.resize(n);
            for (std::size_t i = 0; i < n; ++i) sample_indices[i] = rng.next_index(n);
        } else {
            sample_indices = identity_indices(n);
        }
        const bool subset = grow.mtry > 0 && static_cast<std::size_t>(grow.mtry) < X.cols();
        state.trees[t] = grow_tree(X, y, n_classes, sample_indices, grow, subset ? &rng : nullptr);
    };

    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n_trees)));
    if (workers == 1) {
        for (std::size_t t = 0; t < n_trees; ++t) fit_one(t);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t t = static_cast<std::size_t>(w); t < n_trees;
                     t += static_cast<std::size_t>(workers))
                    fit_one(t);
            });
        for (auto& th : pool) th.join();
    }
    return state;
}

// ---- k nearest neighbors ----------------------------------------------------

KnnState fit_knn(const ClassifierSpec& spec, const Matrix& X, std::span<const int> y) {
    if (static_cast<std::size_t>(spec.params.k_neighbors) > X.rows())
        throw Error(Errc::KTooLarge, "k_neighbors " + std::to_string(spec.params.k_neighbors) +
                                         " exceeds " + std::to_string(X.rows()) + " training samples");
    KnnState state;
    state.train_x = X;
    state.train_y.assign(y.begin(), y.end());
    return state;
}

void knn_proba_row(const KnnState& state, int k_neighbors, std::size_t n_classes,
                   std::span<const double> x, std::span<double> out) {
    const std::size_t n = state.train_x.rows();
    // (squared distance, training index); index tie-break keeps this a total order.
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        const auto row = state.train_x.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) {
            const double diff = row[c] - x[c];
            d2 += diff * diff;
        }
        dist[i] = {d2, i};
    }
    const auto k = static_cast<std::size_t>(k_neighbors);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i)
        out[static_cast<std::size_t>(state.train_y[dist[i].second])] += 1.0;
    for (std::size_t c = 0; c < n_classes; ++c) out[c] /= static_cast<double>(k);
}

// ---- logistic regression ----------------------------------------------------

LogRegState fit_logreg(const ClassifierSpec& spec, const Matrix& X, std::span<const int> y,
                       std::size_t n_classes) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();

    LogRegState state;
    state.n_classes = n_classes;
    state.feature_means.assign(d, 0.0);
    state.feature_scales.assign(d, 1.0);
    for (std::size_t c = 0; c < d; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += X.at(r, c);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double v = X.at(r, c) - mean;
            var += v * v;
        }
        var /= static_cast<double>(n);
        state.feature_means[c] = mean;
        state.feature_scales[c] = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    Matrix Z(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c)
            Z.at(r, c) = (X.at(r, c) - state.feature_means[c]) / state.feature_scales[c];

    const std::size_t heads = n_classes == 2 ? 1 : n_classes;
    state.weights = Matrix(heads, d);
    state.biases.assign(heads, 0.0);

    std::vector<int> y01(n);
    std::vector<double> wb(d + 1);
    for (std::size_t h = 0; h < heads; ++h) {
        const int positive = n_classes == 2 ? 1 : static_cast<int>(h);
        for (std::size_t i = 0; i < n; ++i) y01[i] = y[i] == positive ? 1 : 0;
        std::fill(wb.begin(), wb.end(), 0.0);
        for (int iter = 0; iter < spec.params.max_iters; ++iter) {
            auto [loss, grad] = logreg_detail::loss_and_gradient(Z, y01, wb, spec.params.l2);
            if (!std::isfinite(loss))
                throw Error(Errc::NonFiniteLoss, "logistic loss diverged; lower the learning rate");
            double max_grad = 0.0;
            for (double g : grad) max_grad = std::max(max_grad, std::abs(g));
            if (max_grad < spec.params.tol) break;
            for (std::size_t j = 0; j <= d; ++j) wb[j] -= spec.params.learning_rate * grad[j];
        }
        for (std::size_t j = 0; j < d; ++j) state.weights.at(h, j) = wb[j];
        state.biases[h] = wb[d];
    }
    return state;
}

void logreg_proba_row(const LogRegState& state, std::span<const double> x, std::span<double> out) {
    const std::size_t d = state.feature_means.size();
    std::vector<double> z(d);
    for (std::size_t c = 0; c < d; ++c)
        z[c] = (x[c] - state.feature_means[c]) / state.feature_scales[c];

    if (state.n_classes == 2) {
        double score = state.biases[0];
        for (std::size_t c = 0; c < d; ++c) score += state.weights.at(0, c) * z[c];
        const double p = stable_sigmoid(score);
        out[0] = 1.0 - p;
        out[1] = p;
        return;
    }
    double total = 0.0;
    for (std::size_t h = 0; h < state.n_classes; ++h) {
        double score = state.biases[h];
        for (std::size_t c = 0; c < d; ++c) score += state.weights.at(h, c) * z[c];
        out[h] = stable_sigmoid(score);
        total += out[h];
    }
    if (total <= 0.0) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(state.n_classes));
        return;
    }
    for (std::size_t h = 0; h < state.n_classes; ++h) out[h] /= total;
}

// ---- adaboost ----------------------------------------------------------------

AdaBoostHead fit_adaboost_head(const ClassifierSpec& spec, const Matrix& X, std::span<const int> y01) {
    const std::size_t n = X.rows();
    AdaBoostHead head;
    head.fallback_freq.assign(2, 0.0);
    for (int v : y01) head.fallback_freq[static_cast<std::size_t>(v)] += 1.0;
    for (double& f : head.fallback_freq) f /= static_cast<double>(n);

    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    for (int round = 0; round < spec.params.n_estimators; ++round) {
        const Stump stump = fit_stump(X, y01, weights, 2);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (stump.predict(X.row(i)) != y01[i]) err += weights[i];
        if (err >= 0.5) break; // weak-learner condition failed; discard and stop
        const double clamped = std::max(err, 1e-10);
        const double alpha = spec.params.boost_learning_rate * std::log((1.0 - clamped) / clamped);
        head.stumps.push_back(stump);
        head.alphas.push_back(alpha);
        if (err == 0.0) break;

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (stump.predict(X.row(i)) != y01[i]) weights[i] *= std::exp(alpha);
            total += weights[i];
        }
        for (double& w : weights) w /= total;
    }
    return head;
}

// Positive-class share of the head's weighted vote; falls back to training
// frequency when boosting found no usable stump.
double adaboost_head_positive(const AdaBoostHead& head, std::span<const double> x) {
    if (head.stumps.empty()) return head.fallback_freq[1];
    double pos = 0.0, total = 0.0;
    for (std::size_t m = 0; m < head.stumps.size(); ++m) {
        total += head.alphas[m];
        if (head.stumps[m].predict(x) == 1) pos += head.alphas[m];
    }
    return pos / total;
}

AdaBoostState fit_adaboost(const ClassifierSpec& spec, const Matrix& X, std::span<const int> y,
                           std::size_t n_classes) {
    AdaBoostState state;
    std::vector<int> y01(X.rows());
    const std::size_t heads = n_classes == 2 ? 1 : n_classes;
    for (std::size_t h = 0; h < heads; ++h) {
        const int positive = n_classes == 2 ? 1 : static_cast<int>(h);
        for (std::size_t i = 0; i < X.rows(); ++i) y01[i] = y[i] == positive ? 1 : 0;
        state.heads.push_back(fit_adaboost_head(spec, X, y01));
    }
    return state;
}

void adaboost_proba_row(const AdaBoostState& state, std::size_t n_classes, std::span<const double> x,
                        std::span<double> out) {
    if (n_classes == 2) {
        const double p = adaboost_head_positive(state.heads[0], x);
        out[0] = 1.0 - p;
        out[1] = p;
        return;
    }
    double total = 0.0;
    for (std::size_t h = 0; h < n_classes; ++h) {
        out[h] = adaboost_head_positive(state.heads[h], x);
        total += out[h];
    }
    if (total <= 0.0) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(n_classes));
        return;
    }
    for (std::size_t h = 0; h < n_classes; ++h) out[h] /= total;
}

double metric_score(ImportanceMetric metric, std::span<const int> y_true, std::span<const int> y_pred,
                    const std::vector<std::string>& class_list) {
    const ConfusionMatrix cm = confusion(y_true, y_pred, class_list);
    const BasicMetrics m = metrics_from_confusion(cm);
    return metric == ImportanceMetric::Accuracy ? m.accuracy : m.macro_f1;
}

} // namespace

void ForestState::proba_row(std::span<const double> x, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> leaf(out.size());
    for (const auto& tree : trees) {
        tree.leaf_distribution(x, leaf);
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += leaf[c];
    }
    for (std::size_t c = 0; c < out.size(); ++c) out[c] /= static_cast<double>(trees.size());
}

Matrix TrainedModel::predict_proba(const Matrix& X) const {
    if (X.cols() != feature_count_)
        throw Error(Errc::DimensionMismatch, "probe has " + std::to_string(X.cols()) +
                                                 " features, model expects " +
                                                 std::to_string(feature_count_));
    const std::size_t n_classes = class_list_.size();
    Matrix proba(X.rows(), n_classes);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const auto row = X.row(r);
        auto out = proba.row(r);
        std::visit(
            [&](const auto& state) {
                using T = std::decay_t<decltype(state)>;
                if constexpr (std::is_same_v<T, TreeState>) {
                    state.tree.leaf_distribution(row, out);
                } else if constexpr (std::is_same_v<T, ForestState>) {
                    state.proba_row(row, out);
                } else if constexpr (std::is_same_v<T, KnnState>) {
                    knn_proba_row(state, spec_.params.k_neighbors, n_classes, row, out);
                } else if constexpr (std::is_same_v<T, LogRegState>) {
                    logreg_proba_row(state, row, out);
                } else {
                    adaboost_proba_row(state, n_classes, row, out);
                }
            },
            state_);
    }
    return proba;
}

std::vector<int> TrainedModel::predict(const Matrix& X) const {
    const Matrix proba = predict_proba(X);
    std::vector<int> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        int best = 0;
        for (std::size_t c = 1; c < class_list_.size(); ++c)
            if (proba.at(r, c) > proba.at(r, static_cast<std::size_t>(best)))
                best = static_cast<int>(c);
        out[r] = best;
    }
    return out;
}

TrainedModel train_classifier(const ClassifierSpec& spec, const Matrix& X, std::span<const int> y,
                              const std::vector<std::string>& class_list, int jobs) {
    validate_spec(spec);
    if (X.rows() == 0) throw Error(Errc::EmptyTrainingSet, "no training samples");
    if (y.size() != X.rows())
        throw Error(Errc::DimensionMismatch, std::to_string(y.size()) + " labels for " +
                                                 std::to_string(X.rows()) + " samples");
    if (class_list.size() < 2) throw Error(Errc::ConfigInvalid, "need at least 2 classes");
    for (int label : y)
        if (label < 0 || label >= static_cast<int>(class_list.size()))
            throw Error(Errc::UnknownLabel, "label index " + std::to_string(label) +
                                                " outside the class list");

    const std::size_t n_classes = class_list.size();
    TrainedModel::State state;
    switch (spec.kind) {
        case ClassifierKind::DecisionTree:
            state = fit_decision_tree(spec, X, y, n_classes);
            break;
        case ClassifierKind::RandomForest:
            state = fit_random_forest(spec, X, y, n_classes, jobs);
            break;
        case ClassifierKind::Knn:
            state = fit_knn(spec, X, y);
            break;
        case ClassifierKind::LogisticRegression:
            state = fit_logreg(spec, X, y, n_classes);
            break;
        case ClassifierKind::AdaBoost:
            state = fit_adaboost(spec, X, y, n_classes);
            break;
    }
    return TrainedModel(spec, class_list, X.cols(), std::move(state));
}

std::vector<double> impurity_importance(const TrainedModel& model) {
    if (!model.is_tree_based())
        throw Error(Errc::UnsupportedModel,
                    std::string("impurity importance needs a tree-based model, got ") +
                        classifier_kind_name(model.spec().kind));

    std::vector<double> raw(model.feature_count(), 0.0);
    if (const auto* tree = std::get_if<TreeState>(&model.state())) {
        raw = tree->tree.split_importance();
    } else {
        const auto& forest = std::get<ForestState>(model.state());
        for (const auto& t : forest.trees) {
            const auto imp = t.split_importance();
            for (std::size_t f = 0; f < raw.size(); ++f) raw[f] += imp[f];
        }
        for (double& v : raw) v /= static_cast<double>(forest.trees.size());
    }
    const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
    if (total <= 0.0) {
        std::fill(raw.begin(), raw.end(), 1.0 / static_cast<double>(raw.size()));
        return raw;
    }
    for (double& v : raw) v /= total;
    return raw;
}

PermutationImportance permutation_importance(const TrainedModel& model, const Matrix& X,
                                             std::span<const int> y, ImportanceMetric metric,
                                             int n_repeats, std::uint64_t seed) {
    if (X.rows() == 0) throw Error(Errc::EmptyTrainingSet, "no samples to permute");
    if (y.size() != X.rows())
        throw Error(Errc::DimensionMismatch, "labels do not match sample count");
    if (n_repeats < 1) throw Error(Errc::ConfigInvalid, "n_repeats must be >= 1");

    const std::vector<int> baseline_pred = model.predict(X);
    const double baseline = metric_score(metric, y, baseline_pred, model.class_list());

    PermutationImportance result;
    result.baseline = baseline;
    result.mean_drop.assign(X.cols(), 0.0);
    result.std_drop.assign(X.cols(), 0.0);

    Matrix permuted = X;
    const std::size_t n = X.rows();
    std::vector<std::size_t> order(n);
    for (std::size_t f = 0; f < X.cols(); ++f) {
        std::vector<double> drops(static_cast<std::size_t>(n_repeats));
        for (int rep = 0; rep < n_repeats; ++rep) {
            std::iota(order.begin(), order.end(), 0);
            SplitMix64 rng(derive_seed(seed, kPermTag + f, static_cast<std::uint64_t>(rep)));
            rng.shuffle(order);
            for (std::size_t r = 0; r < n; ++r) permuted.at(r, f) = X.at(order[r], f);
            const std::vector<int> pred = model.predict(permuted);
            drops[static_cast<std::size_t>(rep)] =
                baseline - metric_score(metric, y, pred, model.class_list());
        }
        for (std::size_t r = 0; r < n; ++r) permuted.at(r, f) = X.at(r, f);

        double mean = std::accumulate(drops.begin(), drops.end(), 0.0) /
                      static_cast<double>(drops.size());
        double var = 0.0;
        for (double dr : drops) var += (dr - mean) * (dr - mean);
        var /= static_cast<double>(drops.size());
        result.mean_drop[f] = mean;
        result.std_drop[f] = std::sqrt(var);
    }
    return result;
}

namespace logreg_detail {

std::pair<double, std::vector<double>> loss_and_gradient(const Matrix& X, std::span<const int> y01,
                                                         std::span<const double> wb, double l2) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    const auto inv_n = 1.0 / static_cast<double>(n);

    double loss = 0.0;
    std::vector<double> grad(d + 1, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        double z = wb[d];
        const auto row = X.row(r);
        for (std::size_t c = 0; c < d; ++c) z += wb[c] * row[c];
        const auto yv = static_cast<double>(y01[r]);
        // max(z,0) - y*z + log(1 + exp(-|z|)) is the stable cross-entropy form
        loss += std::max(z, 0.0) - yv * z + std::log1p(std::exp(-std::abs(z)));
        const double residual = stable_sigmoid(z) - yv;
        for (std::size_t c = 0; c < d; ++c) grad[c] += residual * row[c];
        grad[d] += residual;
    }
    loss *= inv_n;
    for (std::size_t c = 0; c <= d; ++c) grad[c] *= inv_n;
    for (std::size_t c = 0; c < d; ++c) {
        loss += 0.5 * l2 * inv_n * wb[c] * wb[c];
        grad[c] += l2 * inv_n * wb[c];
    }
    return {loss, std::move(grad)};
}

} // namespace logreg_detail

} // namespace facecue
