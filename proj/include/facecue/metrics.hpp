#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "facecue/matrix.hpp"

namespace facecue {

struct ConfusionMatrix {
    std::vector<std::string> class_list;
    std::vector<std::vector<long long>> counts; // rows = true class, cols = predicted

    static ConfusionMatrix zero(const std::vector<std::string>& class_list);
    long long total() const;
};

// Tabulates integer class labels (indices into class_list).
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          const std::vector<std::string>& class_list);

struct BasicMetrics {
    double accuracy = 0.0;
    std::vector<double> precision; // per class; 0 when the predicted column is empty
    std::vector<double> recall;    // per class; 0 when the true row is empty
    std::vector<double> f1;        // harmonic mean; 0 when precision + recall == 0
    double macro_f1 = 0.0;
};

BasicMetrics metrics_from_confusion(const ConfusionMatrix& cm);

// Probability that a random positive outscores a random negative, ties
// counted as 1/2 (rank-statistic formulation). Throws Error(SingleClass)
// unless both classes are present.
double auc_binary(std::span<const double> scores, std::span<const int> y_true01);

// Unweighted one-vs-rest mean over classes with both positives and negatives
// present; nullopt when no class qualifies.
std::optional<double> auc_macro_ovr(const Matrix& probabilities, std::span<const int> y_true,
                                    std::size_t n_classes);

struct FoldMetrics {
    BasicMetrics basic;
    std::optional<double> auc;
    ConfusionMatrix confusion;
    int n_test = 0;
    int feature_count = 0;
};

struct MetricsReport {
    std::vector<std::string> class_list;
    std::vector<FoldMetrics> per_fold;
    BasicMetrics averaged;              // unweighted fold means
    std::optional<double> averaged_auc; // mean over folds where AUC is defined
    ConfusionMatrix pooled_confusion;
    // Headline F1: positive-class (anxious) F1 for binary tasks, macro F1
    // otherwise.
    double headline_f1 = 0.0;
    int n_folds() const { return static_cast<int>(per_fold.size()); }
};

// Fills averaged / pooled fields from per_fold entries.
void finalize_report(MetricsReport& report, bool binary_headline);

} // namespace facecue
