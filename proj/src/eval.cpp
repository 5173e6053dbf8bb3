#include "facecue/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "facecue/errors.hpp"
#include "facecue/rng.hpp"
#include "facecue/schema.hpp"

namespace facecue {
namespace {

constexpr std::uint64_t kFoldModelTag = 0;   // per-fold evaluation model
constexpr std::uint64_t kFoldRankerTag = 1;  // per-fold importance-ranking model

struct LabeledRows {
    std::vector<int> rows;    // indices into the SampleSet
    std::vector<int> labels;  // class indices aligned with rows
};

LabeledRows label_samples(const SampleSet& samples, const LabelScheme& scheme) {
    LabeledRows out;
    const auto classes = scheme.classes();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto label = map_label(samples.self_reports[i], scheme);
        if (!label) continue; // pairwise schemes exclude one class
        const auto it = std::find(classes.begin(), classes.end(), *label);
        out.rows.push_back(static_cast<int>(i));
        out.labels.push_back(static_cast<int>(it - classes.begin()));
    }
    return out;
}

// Splits labelled rows by fold; every subject must be covered by the plan.
struct FoldSplit {
    std::vector<int> train_rows, test_rows;
    std::vector<int> train_labels, test_labels;
    std::vector<std::size_t> test_positions; // positions within LabeledRows
};

FoldSplit split_fold(const SampleSet& samples, const LabeledRows& labeled, const FoldPlan& plan,
                     int fold) {
    FoldSplit split;
    for (std::size_t i = 0; i < labeled.rows.size(); ++i) {
        const int row = labeled.rows[i];
        const int f = plan.fold_of(samples.subject_ids[static_cast<std::size_t>(row)]);
        if (f == fold) {
            split.test_rows.push_back(row);
            split.test_labels.push_back(labeled.labels[i]);
            split.test_positions.push_back(i);
        } else {
            split.train_rows.push_back(row);
            split.train_labels.push_back(labeled.labels[i]);
        }
    }
    return split;
}

ClassifierSpec fold_spec(const ClassifierSpec& spec, int fold, std::uint64_t tag) {
    ClassifierSpec out = spec;
    out.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(fold), tag);
    return out;
}

// Shared CV core: optional per-fold column restriction on top of the fitted
// dataset configuration (used by the ablation studies).
using ColumnFilter =
    std::function<std::vector<int>(int fold, const ConfigBuild& build, const Matrix& train_x,
                                   std::span<const int> train_labels)>;

CvResult run_cv_filtered(const SampleSet& samples, const LabelScheme& scheme, const FoldPlan& plan,
                         const ClassifierSpec& spec, const EvalOptions& options,
                         const ColumnFilter& filter) {
    validate_spec(spec);
    const LabeledRows labeled = label_samples(samples, scheme);
    if (labeled.rows.empty()) throw Error(Errc::TooFewSamples, "no labelled samples to evaluate");

    CvResult result;
    result.class_list = scheme.class_names();
    result.report.class_list = result.class_list;

    std::optional<ConfigBuild> global_build;
    if (options.prune_global)
        global_build = fit_config(samples, labeled.rows, options.config,
                                  options.correlation_threshold);

    for (int fold = 0; fold < plan.k; ++fold) {
        FoldSplit split = split_fold(samples, labeled, plan, fold);
        if (split.test_rows.empty() || split.train_rows.empty())
            throw Error(Errc::TooFewSamples,
                        "fold " + std::to_string(fold) + " has an empty train or test partition");

        const ConfigBuild build =
            options.prune_global
                ? *global_build
                : fit_config(samples, split.train_rows, options.config, options.correlation_threshold);
        Matrix train_x = config_matrix(samples, split.train_rows, build);

        std::vector<int> kept_columns(build.source_columns.size());
        std::iota(kept_columns.begin(), kept_columns.end(), 0);
        if (filter) {
            kept_columns = filter(fold, build, train_x, split.train_labels);
            train_x = train_x.select_columns(kept_columns);
        }

        Matrix test_x = config_matrix(samples, split.test_rows, build);
        if (filter) test_x = test_x.select_columns(kept_columns);

        std::vector<int> fold_sources;
        fold_sources.reserve(kept_columns.size());
        for (int c : kept_columns)
            fold_sources.push_back(build.source_columns[static_cast<std::size_t>(c)]);
        result.per_fold_source_columns.push_back(std::move(fold_sources));

        const TrainedModel model = train_classifier(fold_spec(spec, fold, kFoldModelTag), train_x,
                                                    split.train_labels, result.class_list,
                                                    options.jobs);
        const std::vector<int> predictions = model.predict(test_x);
        const Matrix proba = model.predict_proba(test_x);

        FoldMetrics fm;
        fm.confusion = confusion(split.test_labels, predictions, result.class_list);
        fm.basic = metrics_from_confusion(fm.confusion);
        fm.n_test = static_cast<int>(split.test_rows.size());
        fm.feature_count = static_cast<int>(kept_columns.size());
        if (result.class_list.size() == 2) {
            // Positive class = the anxious side (index 0 of the class list).
            std::vector<double> scores(split.test_rows.size());
            std::vector<int> pos(split.test_rows.size());
            bool both = false, seen0 = false, seen1 = false;
            for (std::size_t i = 0; i < split.test_rows.size(); ++i) {
                scores[i] = proba.at(i, 0);
                pos[i] = split.test_labels[i] == 0 ? 1 : 0;
                (pos[i] ? seen1 : seen0) = true;
            }
            both = seen0 && seen1;
            if (both) fm.auc = auc_binary(scores, pos);
        } else {
            fm.auc = auc_macro_ovr(proba, split.test_labels, result.class_list.size());
        }
        result.report.per_fold.push_back(std::move(fm));

        for (std::size_t i = 0; i < split.test_rows.size(); ++i) {
            const auto row = static_cast<std::size_t>(split.test_rows[i]);
            PredictionRecord rec;
            rec.sample_index = split.test_rows[i];
            rec.subject_id = samples.subject_ids[row];
            rec.chunk_index = samples.chunk_indices[row];
            rec.fold = fold;
            rec.y_true = split.test_labels[i];
            rec.y_pred = predictions[i];
            rec.proba.assign(proba.row(i).begin(), proba.row(i).end());
            rec.demographics = samples.demographics[row];
            result.predictions.push_back(std::move(rec));
        }
    }

    finalize_report(result.report, result.class_list.size() == 2);
    return result;
}

std::string base_feature_name(const std::string& feature) {
    for (const char* suffix : {"__mean", "__std"}) {
        const std::string s(suffix);
        if (feature.size() > s.size() &&
            feature.compare(feature.size() - s.size(), s.size(), s) == 0)
            return feature.substr(0, feature.size() - s.size());
    }
    return feature;
}

} // namespace

const std::vector<double>& default_topk_fractions() {
    static const std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    return fractions;
}

CvResult run_cv(const SampleSet& samples, const LabelScheme& scheme, const FoldPlan& plan,
                const ClassifierSpec& spec, const EvalOptions& options) {
    return run_cv_filtered(samples, scheme, plan, spec, options, nullptr);
}

AblationReport ablation_topk(const SampleSet& samples, const LabelScheme& scheme,
                             const FoldPlan& plan, const ClassifierSpec& spec,
                             const EvalOptions& options, const std::vector<double>& fractions) {
    if (spec.kind != ClassifierKind::DecisionTree && spec.kind != ClassifierKind::RandomForest)
        throw Error(Errc::UnsupportedModel, "top-k ablation ranks by impurity importance and needs "
                                            "a tree-based classifier");

    AblationReport report;
    report.study = "topk";
    for (double fraction : fractions) {
        if (fraction <= 0.0 || fraction > 1.0)
            throw Error(Errc::ConfigInvalid, "fractions must lie in (0, 1]");

        const ColumnFilter filter = [&](int fold, const ConfigBuild& build, const Matrix& train_x,
                                        std::span<const int> train_labels) {
            const std::size_t d = build.source_columns.size();
            const auto keep =
                static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(d) - 1e-9));
            if (keep >= d) { // fraction 1.0: identity selection
                std::vector<int> all(d);
                std::iota(all.begin(), all.end(), 0);
                return all;
            }
            const TrainedModel ranker =
                train_classifier(fold_spec(spec, fold, kFoldRankerTag), train_x, train_labels,
                                 scheme.class_names(), options.jobs);
            const std::vector<double> importance = impurity_importance(ranker);
            std::vector<int> order(d);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return importance[static_cast<std::size_t>(a)] >
                       importance[static_cast<std::size_t>(b)];
            });
            std::vector<int> kept(order.begin(), order.begin() + static_cast<long>(keep));
            std::sort(kept.begin(), kept.end()); // preserve original column order
            return kept;
        };

        AblationRow row;
        char label[32];
        std::snprintf(label, sizeof(label), "top_%d_pct", static_cast<int>(std::lround(fraction * 100)));
        row.condition = label;
        CvResult cv = run_cv_filtered(samples, scheme, plan, spec, options, filter);
        for (const auto& fm : cv.report.per_fold) row.feature_counts.push_back(fm.feature_count);
        row.report = std::move(cv.report);
        report.rows.push_back(std::move(row));
    }
    return report;
}

const std::vector<CategoryGrouping>& default_category_groupings() {
    static const std::vector<CategoryGrouping> groupings = {
        {"gaze", {FeatureCategory::Gaze}},
        {"eye_2d_landmarks", {FeatureCategory::EyeLandmark2D}},
        {"eye_3d_landmarks", {FeatureCategory::EyeLandmark3D}},
        {"eye_combined",
         {FeatureCategory::Gaze, FeatureCategory::EyeLandmark2D, FeatureCategory::EyeLandmark3D}},
        {"pose_location", {FeatureCategory::PoseLocation}},
        {"pose_rotation", {FeatureCategory::PoseRotation}},
        {"head_pose_combined", {FeatureCategory::PoseLocation, FeatureCategory::PoseRotation}},
        {"face_2d_landmarks", {FeatureCategory::FaceLandmark2D}},
        {"face_3d_landmarks", {FeatureCategory::FaceLandmark3D}},
        {"face_landmark_combined",
         {FeatureCategory::FaceLandmark2D, FeatureCategory::FaceLandmark3D}},
        {"au_intensity", {FeatureCategory::AUIntensity}},
        {"au_presence", {FeatureCategory::AUPresence}},
        {"au_combined", {FeatureCategory::AUIntensity, FeatureCategory::AUPresence}},
    };
    return groupings;
}

AblationReport ablation_category(const SampleSet& samples, const LabelScheme& scheme,
                                 const FoldPlan& plan, const ClassifierSpec& spec,
                                 const EvalOptions& options,
                                 const std::vector<CategoryGrouping>& groupings) {
    AblationReport report;
    report.study = "category";
    for (const auto& grouping : groupings) {
        if (grouping.categories.empty())
            throw Error(Errc::EmptyGrouping, "grouping '" + grouping.name + "' names no categories");

        const ColumnFilter filter = [&](int, const ConfigBuild& build, const Matrix&,
                                        std::span<const int>) {
            std::vector<int> kept;
            for (std::size_t c = 0; c < build.feature_names.size(); ++c) {
                const FeatureCategory cat = classify_column(base_feature_name(build.feature_names[c]));
                if (std::find(grouping.categories.begin(), grouping.categories.end(), cat) !=
                    grouping.categories.end())
                    kept.push_back(static_cast<int>(c));
            }
            if (kept.empty())
                throw Error(Errc::EmptyGrouping,
                            "grouping '" + grouping.name + "' matches no feature columns");
            return kept;
        };

        AblationRow row;
        row.condition = grouping.name;
        CvResult cv = run_cv_filtered(samples, scheme, plan, spec, options, filter);
        for (const auto& fm : cv.report.per_fold) row.feature_counts.push_back(fm.feature_count);
        row.report = std::move(cv.report);
        report.rows.push_back(std::move(row));
    }
    return report;
}

AblationReport ablation_pairwise(const SampleSet& samples, int k, std::uint64_t fold_seed,
                                 const ClassifierSpec& spec, const EvalOptions& options,
                                 bool stratify) {
    AblationReport report;
    report.study = "pairwise";
    for (AnxietyClass drop :
         {AnxietyClass::Neutral, AnxietyClass::NonAnxious, AnxietyClass::Anxious}) {
        const LabelScheme scheme = LabelScheme::pairwise_drop(drop);
        const LabeledRows labeled = label_samples(samples, scheme);

        const auto classes = scheme.classes();
        std::vector<long long> counts(classes.size(), 0);
        for (int label : labeled.labels) counts[static_cast<std::size_t>(label)]++;
        for (std::size_t c = 0; c < classes.size(); ++c)
            if (counts[c] == 0)
                throw Error(Errc::ClassAbsent, std::string("pairing dropping '") + class_name(drop) +
                                                   "' has no '" + class_name(classes[c]) +
                                                   "' samples");

        std::vector<std::string> subjects;
        std::map<std::string, AnxietyClass> label_of;
        for (std::size_t i = 0; i < labeled.rows.size(); ++i) {
            const auto& id = samples.subject_ids[static_cast<std::size_t>(labeled.rows[i])];
            subjects.push_back(id);
            label_of[id] = classes[static_cast<std::size_t>(labeled.labels[i])];
        }
        const FoldPlan plan = stratify ? grouped_kfold_stratified(subjects, label_of, k, fold_seed)
                                       : grouped_kfold(subjects, k, fold_seed);

        AblationRow row;
        row.condition = std::string(class_name(classes[0])) + "_vs_" + class_name(classes[1]);
        CvResult cv = run_cv(samples, scheme, plan, spec, options);
        for (const auto& fm : cv.report.per_fold) row.feature_counts.push_back(fm.feature_count);
        row.report = std::move(cv.report);
        report.rows.push_back(std::move(row));
    }
    return report;
}

SliceReport slice_report(const std::vector<PredictionRecord>& predictions,
                         const std::string& attribute, const std::vector<std::string>& class_list) {
    std::vector<std::string> group_values;
    std::function<std::string(const Demographics&)> group_of;
    if (attribute == "gender") {
        group_values = {gender_name(Gender::Male), gender_name(Gender::Female)};
        group_of = [](const Demographics& d) { return std::string(gender_name(d.gender)); };
    } else if (attribute == "education") {
        group_values = {education_name(Education::Undergraduate), education_name(Education::Graduate)};
        group_of = [](const Demographics& d) { return std::string(education_name(d.education)); };
    } else if (attribute == "home_location") {
        group_values = {home_location_name(HomeLocation::Rural), home_location_name(HomeLocation::Urban)};
        group_of = [](const Demographics& d) {
            return std::string(home_location_name(d.home_location));
        };
    } else {
        throw Error(Errc::UnknownAttribute, "unknown demographic attribute '" + attribute + "'");
    }

    SliceReport report;
    report.attribute = attribute;
    for (const auto& value : group_values) {
        std::vector<int> y_true, y_pred;
        for (const auto& rec : predictions) {
            if (group_of(rec.demographics) != value) continue;
            y_true.push_back(rec.y_true);
            y_pred.push_back(rec.y_pred);
        }
        if (y_true.empty()) {
            report.omitted_groups.push_back(value);
            continue;
        }
        SliceGroup group;
        group.group = value;
        group.n = static_cast<int>(y_true.size());
        group.confusion = confusion(y_true, y_pred, class_list);
        group.metrics = metrics_from_confusion(group.confusion);
        report.groups.push_back(std::move(group));
    }
    return report;
}

} // namespace facecue
