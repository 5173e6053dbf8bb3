#pragma once

#include <optional>
#include <string>
#include <vector>

#include "facecue/dataset.hpp"
#include "facecue/folds.hpp"
#include "facecue/metrics.hpp"
#include "facecue/models.hpp"

namespace facecue {

struct EvalOptions {
    DatasetConfig config = DatasetConfig::D5_MeanPlusStd;
    double correlation_threshold = 0.75;
    // Default keeps correlation pruning fitted on training folds only;
    // prune_global reproduces the paper's apparent prune-then-CV pipeline.
    bool prune_global = false;
    int jobs = 1;
};

struct PredictionRecord {
    int sample_index = 0;
    std::string subject_id;
    std::optional<int> chunk_index;
    int fold = 0;
    int y_true = 0;
    int y_pred = 0;
    std::vector<double> proba;
    Demographics demographics;
};

struct CvResult {
    MetricsReport report;
    std::vector<PredictionRecord> predictions; // pooled test-fold predictions
    std::vector<std::vector<int>> per_fold_source_columns; // fitted transform per fold
    std::vector<std::string> class_list;
};

// Per fold: fit the dataset configuration (pruning on training rows unless
// prune_global), train with a per-fold seed derived from spec.seed, evaluate
// on the held-out subjects. Averages are unweighted fold means.
CvResult run_cv(const SampleSet& samples, const LabelScheme& scheme, const FoldPlan& plan,
                const ClassifierSpec& spec, const EvalOptions& options);

struct AblationRow {
    std::string condition;
    std::vector<int> feature_counts; // per fold
    MetricsReport report;
};

struct AblationReport {
    std::string study; // topk | category | pairwise
    std::vector<AblationRow> rows;
};

// Ablation 1: per fraction, rank features by impurity importance of a model
// fit on each training fold, keep the top ceil(fraction * d), retrain,
// evaluate. fraction = 1.0 reproduces run_cv exactly.
AblationReport ablation_topk(const SampleSet& samples, const LabelScheme& scheme,
                             const FoldPlan& plan, const ClassifierSpec& spec,
                             const EvalOptions& options,
                             const std::vector<double>& fractions = default_topk_fractions());
const std::vector<double>& default_topk_fractions();

// Ablation 2: restrict columns to named feature-category groupings and rerun CV.
struct CategoryGrouping {
    std::string name;
    std::vector<FeatureCategory> categories;
};
const std::vector<CategoryGrouping>& default_category_groupings();
AblationReport ablation_category(const SampleSet& samples, const LabelScheme& scheme,
                                 const FoldPlan& plan, const ClassifierSpec& spec,
                                 const EvalOptions& options,
                                 const std::vector<CategoryGrouping>& groupings =
                                     default_category_groupings());

// Ablation 3: the three pairwise class reductions, each with a fold plan
// rebuilt over the retained subjects using the same seed and k.
AblationReport ablation_pairwise(const SampleSet& samples, int k, std::uint64_t fold_seed,
                                 const ClassifierSpec& spec, const EvalOptions& options,
                                 bool stratify = false);

struct SliceGroup {
    std::string group;
    int n = 0;
    BasicMetrics metrics;
    ConfusionMatrix confusion;
};

struct SliceReport {
    std::string attribute;
    std::vector<SliceGroup> groups;
    std::vector<std::string> omitted_groups; // zero-sample groups, noted
};

// Metrics per demographic group over pooled test-fold predictions.
SliceReport slice_report(const std::vector<PredictionRecord>& predictions,
                         const std::string& attribute, const std::vector<std::string>& class_list);

} // namespace facecue
