#include "facecue/schema.hpp"

#include <optional>
#include <unordered_set>

#include "facecue/errors.hpp"

namespace facecue {
namespace {

// Parses a decimal index with no sign and no leading zeros; accepts only
// values in [0, max_value].
std::optional<int> parse_index(std::string_view s, int max_value) {
    if (s.empty() || s.size() > 3) return std::nullopt;
    if (s.size() > 1 && s[0] == '0') return std::nullopt;
    int value = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return std::nullopt;
        value = value * 10 + (ch - '0');
    }
    if (value > max_value) return std::nullopt;
    return value;
}

bool is_two_digit_au(std::string_view s) {
    return s.size() == 2 && s[0] >= '0' && s[0] <= '9' && s[1] >= '0' && s[1] <= '9';
}

} // namespace

const char* category_name(FeatureCategory category) {
    switch (category) {
        case FeatureCategory::Metadata: return "metadata";
        case FeatureCategory::Gaze: return "gaze";
        case FeatureCategory::EyeLandmark2D: return "eye_landmark_2d";
        case FeatureCategory::EyeLandmark3D: return "eye_landmark_3d";
        case FeatureCategory::PoseLocation: return "pose_location";
        case FeatureCategory::PoseRotation: return "pose_rotation";
        case FeatureCategory::FaceLandmark2D: return "face_landmark_2d";
        case FeatureCategory::FaceLandmark3D: return "face_landmark_3d";
        case FeatureCategory::RigidShape: return "rigid_shape";
        case FeatureCategory::NonRigidShape: return "non_rigid_shape";
        case FeatureCategory::AUIntensity: return "au_intensity";
        case FeatureCategory::AUPresence: return "au_presence";
    }
    return "unknown";
}

FeatureCategory classify_column(const std::string& name) {
    if (name.empty()) throw Error(Errc::UnknownColumn, "empty column name");
    const std::string_view sv(name);

    if (sv == "frame" || sv == "face_id" || sv == "timestamp" || sv == "confidence" ||
        sv == "success")
        return FeatureCategory::Metadata;

    if (sv.starts_with("gaze_")) return FeatureCategory::Gaze;

    if (sv.starts_with("eye_lmk_")) {
        const std::string_view rest = sv.substr(8);
        if (rest.size() >= 2 && rest[1] == '_') {
            const char axis = rest[0];
            if (parse_index(rest.substr(2), 55)) {
                if (axis == 'x' || axis == 'y') return FeatureCategory::EyeLandmark2D;
                if (axis == 'X' || axis == 'Y' || axis == 'Z') return FeatureCategory::EyeLandmark3D;
            }
        }
        throw Error(Errc::UnknownColumn, "unrecognized eye landmark column '" + name + "'");
    }

    if (sv == "pose_Tx" || sv == "pose_Ty" || sv == "pose_Tz") return FeatureCategory::PoseLocation;
    if (sv == "pose_Rx" || sv == "pose_Ry" || sv == "pose_Rz") return FeatureCategory::PoseRotation;

    if (sv == "p_scale" || sv == "p_rx" || sv == "p_ry" || sv == "p_rz" || sv == "p_tx" ||
        sv == "p_ty")
        return FeatureCategory::RigidShape;
    if (sv.starts_with("p_") && parse_index(sv.substr(2), 33)) return FeatureCategory::NonRigidShape;

    if (sv.starts_with("AU") && sv.size() == 6 && is_two_digit_au(sv.substr(2, 2))) {
        if (sv.ends_with("_r")) return FeatureCategory::AUIntensity;
        if (sv.ends_with("_c")) return FeatureCategory::AUPresence;
    }

    if (sv.size() >= 3 && sv[1] == '_') {
        const char axis = sv[0];
        if (parse_index(sv.substr(2), 67)) {
            if (axis == 'x' || axis == 'y') return FeatureCategory::FaceLandmark2D;
            if (axis == 'X' || axis == 'Y' || axis == 'Z') return FeatureCategory::FaceLandmark3D;
        }
    }

    throw Error(Errc::UnknownColumn, "unrecognized column '" + name + "'");
}

ColumnSchema ColumnSchema::from_names(const std::vector<std::string>& names) {
    ColumnSchema schema;
    schema.columns.reserve(names.size());
    std::unordered_set<std::string> seen;
    for (const auto& name : names) {
        if (!seen.insert(name).second)
            throw Error(Errc::DuplicateColumn, "duplicate column '" + name + "'");
        schema.columns.push_back({name, classify_column(name)});
    }
    return schema;
}

std::array<std::size_t, kFeatureCategoryCount> ColumnSchema::category_counts() const {
    std::array<std::size_t, kFeatureCategoryCount> counts{};
    for (const auto& col : columns) counts[static_cast<std::size_t>(col.category)]++;
    return counts;
}

std::vector<int> ColumnSchema::non_metadata_indices() const {
    std::vector<int> out;
    out.reserve(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].category != FeatureCategory::Metadata) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<std::string> ColumnSchema::non_metadata_names() const {
    std::vector<std::string> out;
    out.reserve(columns.size());
    for (const auto& col : columns)
        if (col.category != FeatureCategory::Metadata) out.push_back(col.name);
    return out;
}

int ColumnSchema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return static_cast<int>(i);
    return -1;
}

const std::vector<std::string>& au_intensity_ids() {
    static const std::vector<std::string> ids = {"01", "02", "04", "05", "06", "07", "09", "10", "12",
                                                 "14", "15", "17", "20", "23", "25", "26", "45"};
    return ids;
}

const std::vector<std::string>& au_presence_ids() {
    static const std::vector<std::string> ids = {"01", "02", "04", "05", "06", "07", "09", "10", "12",
                                                 "14", "15", "17", "20", "23", "25", "26", "28", "45"};
    return ids;
}

const std::vector<std::string>& canonical_openface_header() {
    static const std::vector<std::string> header = [] {
        std::vector<std::string> names;
        names.reserve(714);
        for (const char* m : {"frame", "face_id", "timestamp", "confidence", "success"})
            names.emplace_back(m);
        for (int eye = 0; eye < 2; ++eye)
            for (const char* axis : {"x", "y", "z"})
                names.push_back("gaze_" + std::to_string(eye) + "_" + axis);
        names.emplace_back("gaze_angle_x");
        names.emplace_back("gaze_angle_y");
        for (const char* axis : {"x", "y", "X", "Y", "Z"})
            for (int i = 0; i < 56; ++i)
                names.push_back(std::string("eye_lmk_") + axis + "_" + std::to_string(i));
        for (const char* p : {"pose_Tx", "pose_Ty", "pose_Tz", "pose_Rx", "pose_Ry", "pose_Rz"})
            names.emplace_back(p);
        for (const char* axis : {"x", "y", "X", "Y", "Z"})
            for (int i = 0; i < 68; ++i)
                names.push_back(std::string(axis) + "_" + std::to_string(i));
        for (const char* p : {"p_scale", "p_rx", "p_ry", "p_rz", "p_tx", "p_ty"})
            names.emplace_back(p);
        for (int i = 0; i < 34; ++i) names.push_back("p_" + std::to_string(i));
        for (const auto& id : au_intensity_ids()) names.push_back("AU" + id + "_r");
        for (const auto& id : au_presence_ids()) names.push_back("AU" + id + "_c");
        return names;
    }();
    return header;
}

} // namespace facecue
