#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "facecue/featurize.hpp"
#include "facecue/manifest.hpp"
#include "facecue/matrix.hpp"

namespace facecue {

enum class AnxietyClass { Anxious, Neutral, NonAnxious };

const char* class_name(AnxietyClass c);
AnxietyClass parse_class(const std::string& s);

// Label schemes: the main binary split (1-3 anxious / 4-5 non-anxious), the
// three-way split (1-2 / 3 / 4-5), and the pairwise reductions that drop one
// of the three classes.
struct LabelScheme {
    enum class Kind { BinaryMain, Multiclass, Pairwise };

    Kind kind = Kind::BinaryMain;
    AnxietyClass drop = AnxietyClass::Neutral; // Pairwise only

    static LabelScheme binary_main() { return {Kind::BinaryMain, AnxietyClass::Neutral}; }
    static LabelScheme multiclass() { return {Kind::Multiclass, AnxietyClass::Neutral}; }
    static LabelScheme pairwise_drop(AnxietyClass c) { return {Kind::Pairwise, c}; }

    std::vector<AnxietyClass> classes() const;
    std::vector<std::string> class_names() const;
    std::string name() const;
};

LabelScheme parse_label_scheme(const std::string& s);

// Maps a Likert self-report to a class under the scheme; nullopt = excluded
// (Pairwise schemes drop one class). Throws Error(LikertOutOfRange).
std::optional<AnxietyClass> map_label(int score, const LabelScheme& scheme);

// The seven dataset configurations: raw/pruned mean and std blocks and their
// combinations (prune-then-concat vs concat-then-prune).
enum class DatasetConfig {
    D1_MeanAll,
    D2_MeanReduced,
    D3_StdAll,
    D4_StdReduced,
    D5_MeanPlusStd,
    D6_ReducedMeanPlusReducedStd,
    D7_ReducedOfConcat,
};

const char* dataset_config_name(DatasetConfig c);
DatasetConfig parse_dataset_config(const std::string& s);
bool config_needs_mean(DatasetConfig c);
bool config_needs_std(DatasetConfig c);

// Aligned per-sample data before a dataset configuration is applied.
// Column space referenced by ConfigBuild is [mean columns | std columns].
struct SampleSet {
    std::vector<std::string> subject_ids;
    std::vector<std::optional<int>> chunk_indices;
    std::vector<int> self_reports;
    std::vector<Demographics> demographics;
    Matrix means;
    std::vector<std::string> mean_names;
    Matrix stds;
    std::vector<std::string> std_names;

    std::size_t size() const { return subject_ids.size(); }
};

// Builds a SampleSet from aligned mean/std aggregation outputs plus the
// session records carrying labels and demographics. Mean and std vectors must
// name the same subjects/chunks in the same order.
SampleSet make_sample_set(const std::vector<AggregatedVector>& mean_vectors,
                          const std::vector<AggregatedVector>& std_vectors,
                          const std::vector<SessionManifest>& sessions);

// A fitted dataset configuration: which source columns survive, with prune
// provenance. Fitting on training rows and applying to test rows keeps
// correlation pruning leakage-free.
struct ConfigBuild {
    DatasetConfig config = DatasetConfig::D1_MeanAll;
    std::vector<int> source_columns; // indices into [means | stds]
    std::vector<std::string> feature_names;
    std::vector<PruneResult> prunes; // 0-2 entries depending on the config
};

ConfigBuild fit_config(const SampleSet& samples, std::span<const int> fit_rows, DatasetConfig config,
                       double threshold);
Matrix config_matrix(const SampleSet& samples, std::span<const int> rows, const ConfigBuild& build);

// Per-class sample counts, optionally cross-tabulated by one demographic.
struct DistributionRow {
    std::string group; // "all" when not grouped
    std::vector<long long> counts; // aligned with the scheme's class list
};
std::vector<DistributionRow> class_distribution(std::span<const AnxietyClass> labels,
                                                std::span<const Demographics> demographics,
                                                const LabelScheme& scheme,
                                                const std::optional<std::string>& group_by);

} // namespace facecue
