#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace facecue {

// Column taxonomy of the OpenFace per-frame CSV output.
enum class FeatureCategory {
    Metadata,
    Gaze,
    EyeLandmark2D,
    EyeLandmark3D,
    PoseLocation,
    PoseRotation,
    FaceLandmark2D,
    FaceLandmark3D,
    RigidShape,
    NonRigidShape,
    AUIntensity,
    AUPresence,
};

inline constexpr std::size_t kFeatureCategoryCount = 12;

const char* category_name(FeatureCategory category);

// Maps an OpenFace column name to its category. Throws Error(UnknownColumn)
// for names outside the naming convention (schema drift in the input file).
FeatureCategory classify_column(const std::string& name);

struct ColumnSchema {
    struct Column {
        std::string name;
        FeatureCategory category;
    };

    std::vector<Column> columns;

    // Classifies every name; rejects duplicates. Column order is preserved.
    static ColumnSchema from_names(const std::vector<std::string>& names);

    std::size_t size() const { return columns.size(); }

    std::array<std::size_t, kFeatureCategoryCount> category_counts() const;

    std::vector<int> non_metadata_indices() const;
    std::vector<std::string> non_metadata_names() const;
    int index_of(const std::string& name) const; // -1 when absent
};

// The full 714-column header emitted by OpenFace in video mode, in file order.
const std::vector<std::string>& canonical_openface_header();

// Action-unit id lists (intensity has 17 AUs, presence adds AU28).
const std::vector<std::string>& au_intensity_ids();
const std::vector<std::string>& au_presence_ids();

} // namespace facecue
