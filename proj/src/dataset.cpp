#include "facecue/dataset.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "facecue/errors.hpp"

namespace facecue {

const char* class_name(AnxietyClass c) {
    switch (c) {
        case AnxietyClass::Anxious: return "anxious";
        case AnxietyClass::Neutral: return "neutral";
        case AnxietyClass::NonAnxious: return "non_anxious";
    }
    return "unknown";
}

AnxietyClass parse_class(const std::string& s) {
    if (s == "anxious") return AnxietyClass::Anxious;
    if (s == "neutral") return AnxietyClass::Neutral;
    if (s == "non_anxious") return AnxietyClass::NonAnxious;
    throw Error(Errc::ConfigInvalid, "unknown class '" + s + "'");
}

std::vector<AnxietyClass> LabelScheme::classes() const {
    switch (kind) {
        case Kind::BinaryMain:
            return {AnxietyClass::Anxious, AnxietyClass::NonAnxious};
        case Kind::Multiclass:
            return {AnxietyClass::Anxious, AnxietyClass::Neutral, AnxietyClass::NonAnxious};
        case Kind::Pairwise: {
            std::vector<AnxietyClass> out;
            for (AnxietyClass c :
                 {AnxietyClass::Anxious, AnxietyClass::Neutral, AnxietyClass::NonAnxious})
                if (c != drop) out.push_back(c);
            return out;
        }
    }
    return {};
}

std::vector<std::string> LabelScheme::class_names() const {
    std::vector<std::string> out;
    for (AnxietyClass c : classes()) out.emplace_back(class_name(c));
    return out;
}

std::string LabelScheme::name() const {
    switch (kind) {
        case Kind::BinaryMain: return "binary";
        case Kind::Multiclass: return "multiclass";
        case Kind::Pairwise: return std::string("pairwise_drop_") + class_name(drop);
    }
    return "unknown";
}

LabelScheme parse_label_scheme(const std::string& s) {
    if (s == "binary") return LabelScheme::binary_main();
    if (s == "multiclass") return LabelScheme::multiclass();
    const std::string prefix = "pairwise_drop_";
    if (s.rfind(prefix, 0) == 0) return LabelScheme::pairwise_drop(parse_class(s.substr(prefix.size())));
    throw Error(Errc::ConfigInvalid, "unknown label scheme '" + s + "'");
}

std::optional<AnxietyClass> map_label(int score, const LabelScheme& scheme) {
    if (score < 1 || score > 5)
        throw Error(Errc::LikertOutOfRange, "Likert score " + std::to_string(score) + " outside 1..5");
    if (scheme.kind == LabelScheme::Kind::BinaryMain)
        return score <= 3 ? AnxietyClass::Anxious : AnxietyClass::NonAnxious;
    const AnxietyClass c = score <= 2   ? AnxietyClass::Anxious
                           : score == 3 ? AnxietyClass::Neutral
                                        : AnxietyClass::NonAnxious;
    if (scheme.kind == LabelScheme::Kind::Pairwise && c == scheme.drop) return std::nullopt;
    return c;
}

const char* dataset_config_name(DatasetConfig c) {
    switch (c) {
        case DatasetConfig::D1_MeanAll: return "D1";
        case DatasetConfig::D2_MeanReduced: return "D2";
        case DatasetConfig::D3_StdAll: return "D3";
        case DatasetConfig::D4_StdReduced: return "D4";
        case DatasetConfig::D5_MeanPlusStd: return "D5";
        case DatasetConfig::D6_ReducedMeanPlusReducedStd: return "D6";
        case DatasetConfig::D7_ReducedOfConcat: return "D7";
    }
    return "unknown";
}

DatasetConfig parse_dataset_config(const std::string& s) {
    if (s == "D1") return DatasetConfig::D1_MeanAll;
    if (s == "D2") return DatasetConfig::D2_MeanReduced;
    if (s == "D3") return DatasetConfig::D3_StdAll;
    if (s == "D4") return DatasetConfig::D4_StdReduced;
    if (s == "D5") return DatasetConfig::D5_MeanPlusStd;
    if (s == "D6") return DatasetConfig::D6_ReducedMeanPlusReducedStd;
    if (s == "D7") return DatasetConfig::D7_ReducedOfConcat;
    throw Error(Errc::ConfigInvalid, "unknown dataset config '" + s + "' (expected D1..D7)");
}

bool config_needs_mean(DatasetConfig c) {
    return c != DatasetConfig::D3_StdAll && c != DatasetConfig::D4_StdReduced;
}

bool config_needs_std(DatasetConfig c) {
    return c != DatasetConfig::D1_MeanAll && c != DatasetConfig::D2_MeanReduced;
}

SampleSet make_sample_set(const std::vector<AggregatedVector>& mean_vectors,
                          const std::vector<AggregatedVector>& std_vectors,
                          const std::vector<SessionManifest>& sessions) {
    const bool has_mean = !mean_vectors.empty();
    const bool has_std = !std_vectors.empty();
    if (!has_mean && !has_std)
        throw Error(Errc::TooFewSamples, "no aggregated vectors supplied");
    if (has_mean && has_std && mean_vectors.size() != std_vectors.size())
        throw Error(Errc::SampleMisalignment,
                    "mean set has " + std::to_string(mean_vectors.size()) + " samples, std set " +
                        std::to_string(std_vectors.size()));

    std::unordered_map<std::string, const SessionManifest*> by_subject;
    for (const auto& s : sessions) by_subject[s.subject_id] = &s;

    const auto& reference = has_mean ? mean_vectors : std_vectors;
    SampleSet set;
    const std::size_t n = reference.size();
    set.subject_ids.reserve(n);
    if (has_mean) {
        set.mean_names = mean_vectors.front().feature_names;
        set.means = Matrix(n, set.mean_names.size());
    }
    if (has_std) {
        set.std_names = std_vectors.front().feature_names;
        set.stds = Matrix(n, set.std_names.size());
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (has_mean && has_std) {
            const auto& m = mean_vectors[i];
            const auto& s = std_vectors[i];
            if (m.subject_id != s.subject_id || m.chunk_index != s.chunk_index)
                throw Error(Errc::SampleMisalignment,
                            "sample " + std::to_string(i) + ": mean row is '" + m.subject_id +
                                "' but std row is '" + s.subject_id + "'");
        }
        const auto& ref = reference[i];
        const auto it = by_subject.find(ref.subject_id);
        if (it == by_subject.end())
            throw Error(Errc::SampleMisalignment,
                        "subject '" + ref.subject_id + "' missing from the manifest");
        set.subject_ids.push_back(ref.subject_id);
        set.chunk_indices.push_back(ref.chunk_index);
        set.self_reports.push_back(it->second->self_report);
        set.demographics.push_back(it->second->demographics);
        if (has_mean) {
            if (mean_vectors[i].feature_names != set.mean_names)
                throw Error(Errc::SampleMisalignment,
                            "sample " + std::to_string(i) + " has a different mean feature list");
            set.means.set_row(i, mean_vectors[i].values);
        }
        if (has_std) {
            if (std_vectors[i].feature_names != set.std_names)
                throw Error(Errc::SampleMisalignment,
                            "sample " + std::to_string(i) + " has a different std feature list");
            set.stds.set_row(i, std_vectors[i].values);
        }
    }
    return set;
}

namespace {

Matrix gather(const SampleSet& samples, std::span<const int> rows, std::span<const int> source_cols) {
    const std::size_t dm = samples.mean_names.size();
    Matrix out(rows.size(), source_cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto row = static_cast<std::size_t>(rows[r]);
        for (std::size_t c = 0; c < source_cols.size(); ++c) {
            const auto col = static_cast<std::size_t>(source_cols[c]);
            out.at(r, c) =
                col < dm ? samples.means.at(row, col) : samples.stds.at(row, col - dm);
        }
    }
    return out;
}

std::vector<int> iota_columns(std::size_t begin, std::size_t count) {
    std::vector<int> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<int>(begin + i);
    return out;
}

} // namespace

ConfigBuild fit_config(const SampleSet& samples, std::span<const int> fit_rows, DatasetConfig config,
                       double threshold) {
    const std::size_t dm = samples.mean_names.size();
    const std::size_t ds = samples.std_names.size();
    if (config_needs_mean(config) && dm == 0)
        throw Error(Errc::ConfigInvalid,
                    std::string(dataset_config_name(config)) + " needs mean features, none present");
    if (config_needs_std(config) && ds == 0)
        throw Error(Errc::ConfigInvalid,
                    std::string(dataset_config_name(config)) + " needs std features, none present");

    ConfigBuild build;
    build.config = config;

    const auto mean_cols = iota_columns(0, dm);
    const auto std_cols = iota_columns(dm, ds);

    const auto prune_block = [&](std::span<const int> block) {
        const Matrix sub = gather(samples, fit_rows, block);
        PruneResult pruned = prune_correlated(sub, threshold);
        std::vector<int> kept;
        kept.reserve(pruned.kept_indices.size());
        for (int local : pruned.kept_indices) kept.push_back(block[static_cast<std::size_t>(local)]);
        build.prunes.push_back(std::move(pruned));
        return kept;
    };

    switch (config) {
        case DatasetConfig::D1_MeanAll:
            build.source_columns = mean_cols;
            break;
        case DatasetConfig::D2_MeanReduced:
            build.source_columns = prune_block(mean_cols);
            break;
        case DatasetConfig::D3_StdAll:
            build.source_columns = std_cols;
            break;
        case DatasetConfig::D4_StdReduced:
            build.source_columns = prune_block(std_cols);
            break;
        case DatasetConfig::D5_MeanPlusStd:
            build.source_columns = mean_cols;
            build.source_columns.insert(build.source_columns.end(), std_cols.begin(), std_cols.end());
            break;
        case DatasetConfig::D6_ReducedMeanPlusReducedStd: {
            build.source_columns = prune_block(mean_cols);
            const auto kept_std = prune_block(std_cols);
            build.source_columns.insert(build.source_columns.end(), kept_std.begin(), kept_std.end());
            break;
        }
        case DatasetConfig::D7_ReducedOfConcat: {
            std::vector<int> all = mean_cols;
            all.insert(all.end(), std_cols.begin(), std_cols.end());
            build.source_columns = prune_block(all);
            break;
        }
    }

    build.feature_names.reserve(build.source_columns.size());
    for (int col : build.source_columns) {
        const auto c = static_cast<std::size_t>(col);
        build.feature_names.push_back(c < dm ? samples.mean_names[c] : samples.std_names[c - dm]);
    }
    return build;
}

Matrix config_matrix(const SampleSet& samples, std::span<const int> rows, const ConfigBuild& build) {
    return gather(samples, rows, build.source_columns);
}

std::vector<DistributionRow> class_distribution(std::span<const AnxietyClass> labels,
                                                std::span<const Demographics> demographics,
                                                const LabelScheme& scheme,
                                                const std::optional<std::string>& group_by) {
    const auto classes = scheme.classes();
    const auto class_index = [&](AnxietyClass c) {
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (classes[i] == c) return static_cast<int>(i);
        throw Error(Errc::UnknownLabel, std::string("class '") + class_name(c) +
                                            "' not valid under scheme " + scheme.name());
    };

    if (!group_by) {
        DistributionRow row{"all", std::vector<long long>(classes.size(), 0)};
        for (AnxietyClass c : labels) row.counts[static_cast<std::size_t>(class_index(c))]++;
        return {row};
    }

    if (labels.size() != demographics.size())
        throw Error(Errc::LengthMismatch, "labels and demographics differ in length");

    const auto group_of = [&](const Demographics& d) -> std::string {
        if (*group_by == "gender") return gender_name(d.gender);
        if (*group_by == "education") return education_name(d.education);
        if (*group_by == "home_location") return home_location_name(d.home_location);
        throw Error(Errc::UnknownAttribute, "unknown demographic '" + *group_by + "'");
    };

    std::map<std::string, DistributionRow> rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::string g = group_of(demographics[i]);
        auto [it, inserted] = rows.try_emplace(g, DistributionRow{g, {}});
        if (inserted) it->second.counts.assign(classes.size(), 0);
        it->second.counts[static_cast<std::size_t>(class_index(labels[i]))]++;
    }
    std::vector<DistributionRow> out;
    out.reserve(rows.size());
    for (auto& [_, row] : rows) out.push_back(std::move(row));
    return out;
}

} // namespace facecue
