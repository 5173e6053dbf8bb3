#include "facecue/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "facecue/errors.hpp"
#include "facecue/frame_table.hpp"
#include "facecue/rng.hpp"
#include "facecue/schema.hpp"

namespace facecue {
namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kBaseTag = 0xBA5E;
constexpr std::uint64_t kSubjectTag = 0x5B;

template <typename K>
K draw_categorical(const std::map<K, double>& dist, SplitMix64& rng) {
    const double u = rng.next_unit();
    double cum = 0.0;
    K last{};
    for (const auto& [key, p] : dist) {
        cum += p;
        last = key;
        if (u < cum) return key;
    }
    return last; // u landed in rounding slack at the top
}

int draw_likert(const std::array<double, 5>& dist, SplitMix64& rng) {
    const double u = rng.next_unit();
    double cum = 0.0;
    for (int score = 1; score <= 5; ++score) {
        cum += dist[static_cast<std::size_t>(score - 1)];
        if (u < cum) return score;
    }
    for (int score = 5; score >= 1; --score)
        if (dist[static_cast<std::size_t>(score - 1)] > 0.0) return score;
    return 5;
}

template <typename K>
void check_distribution(const std::map<K, double>& dist, const char* what) {
    double sum = 0.0;
    for (const auto& [_, p] : dist) {
        if (p < 0.0) throw Error(Errc::ConfigInvalid, std::string(what) + ": negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(Errc::ConfigInvalid, std::string(what) + ": probabilities must sum to 1");
}

} // namespace

void validate_cohort_spec(const CohortSpec& spec) {
    if (spec.n_subjects < 1) throw Error(Errc::ConfigInvalid, "n_subjects must be >= 1");
    if (spec.fps <= 0.0) throw Error(Errc::ConfigInvalid, "fps must be positive");
    if (spec.duration_s <= 0.0) throw Error(Errc::ConfigInvalid, "duration_s must be positive");
    if (spec.noise_sd <= 0.0) throw Error(Errc::ConfigInvalid, "noise_sd must be positive");
    if (spec.ar_coefficient < 0.0 || spec.ar_coefficient >= 1.0)
        throw Error(Errc::ConfigInvalid, "ar_coefficient must lie in [0, 1)");
    if (spec.subject_sd < 0.0) throw Error(Errc::ConfigInvalid, "subject_sd must be >= 0");
    if (spec.age_min < 1 || spec.age_max < spec.age_min)
        throw Error(Errc::ConfigInvalid, "age range is invalid");

    double likert_sum = 0.0;
    for (double p : spec.likert_distribution) {
        if (p < 0.0) throw Error(Errc::ConfigInvalid, "likert_distribution: negative probability");
        likert_sum += p;
    }
    if (std::abs(likert_sum - 1.0) > 1e-9)
        throw Error(Errc::ConfigInvalid, "likert_distribution must sum to 1");
    check_distribution(spec.gender_distribution, "gender_distribution");
    check_distribution(spec.education_distribution, "education_distribution");
    check_distribution(spec.home_location_distribution, "home_location_distribution");

    const ColumnSchema canonical = ColumnSchema::from_names(canonical_openface_header());
    for (const auto& [column, _] : spec.effects) {
        const int idx = canonical.index_of(column);
        if (idx < 0)
            throw Error(Errc::InvalidEffectColumn,
                        "'" + column + "' is not a canonical OpenFace column");
        if (canonical.columns[static_cast<std::size_t>(idx)].category == FeatureCategory::Metadata)
            throw Error(Errc::InvalidEffectColumn,
                        "'" + column + "' is a metadata column and cannot carry an effect");
    }
}

CohortSpec load_cohort_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IOFailure, "cannot open cohort spec '" + path + "'");
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ConfigInvalid, std::string("invalid cohort spec JSON: ") + e.what());
    }

    CohortSpec spec;
    try {
        spec.n_subjects = doc.at("n_subjects").get<int>();
        spec.fps = doc.at("fps").get<double>();
        spec.duration_s = doc.at("duration_s").get<double>();
        const auto likert = doc.at("likert_distribution").get<std::vector<double>>();
        if (likert.size() != 5)
            throw Error(Errc::ConfigInvalid, "likert_distribution must list 5 probabilities");
        std::copy(likert.begin(), likert.end(), spec.likert_distribution.begin());
        if (doc.contains("effects")) {
            for (const auto& [column, shifts] : doc.at("effects").items())
                for (const auto& [cls, shift] : shifts.items())
                    spec.effects[column][parse_class(cls)] = shift.get<double>();
        }
        if (doc.contains("noise_sd")) spec.noise_sd = doc.at("noise_sd").get<double>();
        if (doc.contains("ar_coefficient"))
            spec.ar_coefficient = doc.at("ar_coefficient").get<double>();
        if (doc.contains("subject_sd")) spec.subject_sd = doc.at("subject_sd").get<double>();
        if (doc.contains("gender_distribution")) {
            spec.gender_distribution.clear();
            for (const auto& [key, p] : doc.at("gender_distribution").items())
                spec.gender_distribution[parse_gender(key)] = p.get<double>();
        }
        if (doc.contains("education_distribution")) {
            spec.education_distribution.clear();
            for (const auto& [key, p] : doc.at("education_distribution").items())
                spec.education_distribution[parse_education(key)] = p.get<double>();
        }
        if (doc.contains("home_location_distribution")) {
            spec.home_location_distribution.clear();
            for (const auto& [key, p] : doc.at("home_location_distribution").items())
                spec.home_location_distribution[parse_home_location(key)] = p.get<double>();
        }
        if (doc.contains("age_range")) {
            const auto range = doc.at("age_range").get<std::vector<int>>();
            if (range.size() != 2) throw Error(Errc::ConfigInvalid, "age_range must be [min, max]");
            spec.age_min = range[0];
            spec.age_max = range[1];
        }
        spec.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ConfigInvalid, std::string("bad cohort spec: ") + e.what());
    }
    validate_cohort_spec(spec);
    return spec;
}

GeneratedCohort generate_cohort(const CohortSpec& spec, const std::string& out_dir) {
    validate_cohort_spec(spec);
    namespace fs = std::filesystem;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(Errc::IOFailure, "cannot create '" + out_dir + "': " + ec.message());

    const auto& header = canonical_openface_header();
    const ColumnSchema schema = ColumnSchema::from_names(header);
    const std::size_t width = header.size();
    const auto n_frames =
        static_cast<std::size_t>(std::floor(spec.duration_s * spec.fps + 1e-9));
    if (n_frames == 0) throw Error(Errc::ConfigInvalid, "duration covers no frames");

    // Shared per-column base profile, common to every subject.
    std::vector<double> base(width, 0.0);
    {
        SplitMix64 rng(derive_seed(spec.seed, kBaseTag));
        for (std::size_t c = 0; c < width; ++c)
            if (schema.columns[c].category != FeatureCategory::Metadata) base[c] = rng.next_normal();
    }

    // Per-column class shifts resolved to dense lookup: shift[class][column].
    std::array<std::vector<double>, 3> shift;
    for (auto& s : shift) s.assign(width, 0.0);
    for (const auto& [column, by_class] : spec.effects) {
        const int idx = schema.index_of(column);
        for (const auto& [cls, value] : by_class)
            shift[static_cast<std::size_t>(cls)][static_cast<std::size_t>(idx)] = value;
    }

    const double stationary_sd =
        spec.noise_sd / std::sqrt(1.0 - spec.ar_coefficient * spec.ar_coefficient);

    GeneratedCohort cohort;
    cohort.sessions.reserve(static_cast<std::size_t>(spec.n_subjects));

    const int frame_idx = schema.index_of("frame");
    const int face_id_idx = schema.index_of("face_id");
    const int timestamp_idx = schema.index_of("timestamp");
    const int confidence_idx = schema.index_of("confidence");
    const int success_idx = schema.index_of("success");

    std::vector<double> offset(width);
    std::vector<double> ar_state(width);
    std::vector<double> row(width);
    for (int s = 0; s < spec.n_subjects; ++s) {
        SplitMix64 rng(derive_seed(spec.seed, kSubjectTag, static_cast<std::uint64_t>(s)));

        char id[16];
        std::snprintf(id, sizeof(id), "S%04d", s + 1);

        SessionManifest session;
        session.subject_id = id;
        session.file_path = std::string(id) + ".csv";
        session.self_report = draw_likert(spec.likert_distribution, rng);
        session.demographics.gender = draw_categorical(spec.gender_distribution, rng);
        session.demographics.education = draw_categorical(spec.education_distribution, rng);
        session.demographics.home_location = draw_categorical(spec.home_location_distribution, rng);
        session.age = spec.age_min +
                      static_cast<int>(rng.next_index(
                          static_cast<std::size_t>(spec.age_max - spec.age_min + 1)));
        session.fps = spec.fps;
        session.duration_s = static_cast<double>(n_frames) / spec.fps;

        // Class for effect application comes from the multiclass mapping.
        const AnxietyClass cls = *map_label(session.self_report, LabelScheme::multiclass());
        const auto& class_shift = shift[static_cast<std::size_t>(cls)];

        const fs::path csv_path = fs::path(out_dir) / session.file_path;
        std::ofstream out(csv_path);
        if (!out) throw Error(Errc::IOFailure, "cannot open '" + csv_path.string() + "' for writing");

        for (std::size_t c = 0; c < width; ++c) {
            if (c > 0) out << ", ";
            out << header[c];
        }
        out << '\n';

        for (std::size_t c = 0; c < width; ++c) {
            const bool meta = schema.columns[c].category == FeatureCategory::Metadata;
            offset[c] = meta ? 0.0 : spec.subject_sd * rng.next_normal();
            ar_state[c] = meta ? 0.0 : stationary_sd * rng.next_normal();
        }

        for (std::size_t frame = 0; frame < n_frames; ++frame) {
            row[static_cast<std::size_t>(frame_idx)] = static_cast<double>(frame + 1);
            row[static_cast<std::size_t>(face_id_idx)] = 0.0;
            row[static_cast<std::size_t>(timestamp_idx)] = static_cast<double>(frame) / spec.fps;
            row[static_cast<std::size_t>(confidence_idx)] = 0.9 + 0.1 * rng.next_unit();
            row[static_cast<std::size_t>(success_idx)] = 1.0;
            for (std::size_t c = 0; c < width; ++c) {
                const FeatureCategory cat = schema.columns[c].category;
                if (cat == FeatureCategory::Metadata) continue;
                if (frame > 0)
                    ar_state[c] = spec.ar_coefficient * ar_state[c] + spec.noise_sd * rng.next_normal();
                const double latent = offset[c] + class_shift[c] + ar_state[c];
                row[c] = cat == FeatureCategory::AUPresence ? (latent > 0.0 ? 1.0 : 0.0)
                                                            : base[c] + latent;
            }
            for (std::size_t c = 0; c < width; ++c) {
                if (c > 0) out << ", ";
                out << format_csv_value(row[c]);
            }
            out << '\n';
        }
        out.flush();
        if (!out) throw Error(Errc::IOFailure, "failed writing '" + csv_path.string() + "'");
        cohort.sessions.push_back(std::move(session));
    }

    cohort.manifest_path = (fs::path(out_dir) / "manifest.json").string();
    save_manifest(cohort.sessions, cohort.manifest_path);
    return cohort;
}

CohortSummary describe_cohort(const std::vector<SessionManifest>& sessions) {
    CohortSummary summary;
    summary.n_subjects = static_cast<int>(sessions.size());
    double duration_sum = 0.0;
    int duration_count = 0;
    bool first_fps = true;
    for (const auto& s : sessions) {
        const auto multi = *map_label(s.self_report, LabelScheme::multiclass());
        const auto binary = *map_label(s.self_report, LabelScheme::binary_main());
        summary.multiclass_counts[class_name(multi)]++;
        summary.binary_counts[class_name(binary)]++;
        summary.gender_counts[gender_name(s.demographics.gender)]++;
        summary.education_counts[education_name(s.demographics.education)]++;
        summary.home_location_counts[home_location_name(s.demographics.home_location)]++;
        if (s.duration_s) {
            duration_sum += *s.duration_s;
            ++duration_count;
        }
        if (s.fps) {
            if (first_fps) {
                summary.fps_min = summary.fps_max = *s.fps;
                first_fps = false;
            } else {
                summary.fps_min = std::min(summary.fps_min, *s.fps);
                summary.fps_max = std::max(summary.fps_max, *s.fps);
            }
        }
    }
    if (duration_count > 0) summary.mean_duration_s = duration_sum / duration_count;
    return summary;
}

} // namespace facecue
