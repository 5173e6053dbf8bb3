#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "facecue/dataset.hpp"
#include "facecue/manifest.hpp"

namespace facecue {

// Synthetic cohort parameters. Per-frame features follow an order-1
// autoregressive Gaussian process around a shared per-column base profile,
// optionally offset per subject, with class-conditional mean shifts applied
// to the named effect columns. AU presence columns are thresholded {0,1}.
struct CohortSpec {
    int n_subjects = 0;
    double fps = 20.0;
    double duration_s = 90.0;
    std::array<double, 5> likert_distribution{0.2, 0.2, 0.2, 0.2, 0.2}; // scores 1..5
    // column -> class -> mean shift (class from the multiclass Likert mapping)
    std::map<std::string, std::map<AnxietyClass, double>> effects;
    double noise_sd = 1.0;        // AR innovation sd; stationary var = noise_sd^2 / (1 - ar^2)
    double ar_coefficient = 0.0;  // in [0, 1)
    double subject_sd = 0.0;      // per-subject per-column base offset sd
    std::map<Gender, double> gender_distribution{{Gender::Male, 0.5}, {Gender::Female, 0.5}};
    std::map<Education, double> education_distribution{{Education::Undergraduate, 0.5},
                                                       {Education::Graduate, 0.5}};
    std::map<HomeLocation, double> home_location_distribution{{HomeLocation::Rural, 0.5},
                                                              {HomeLocation::Urban, 0.5}};
    int age_min = 18;
    int age_max = 30;
    std::uint64_t seed = 0;
};

void validate_cohort_spec(const CohortSpec& spec);
CohortSpec load_cohort_spec(const std::string& path);

struct GeneratedCohort {
    std::vector<SessionManifest> sessions;
    std::string manifest_path;
};

// Writes one canonical 714-column CSV per subject plus manifest.json into
// out_dir. Byte-identical output for identical spec + seed.
GeneratedCohort generate_cohort(const CohortSpec& spec, const std::string& out_dir);

struct CohortSummary {
    int n_subjects = 0;
    std::map<std::string, int> multiclass_counts;
    std::map<std::string, int> binary_counts;
    std::map<std::string, int> gender_counts;
    std::map<std::string, int> education_counts;
    std::map<std::string, int> home_location_counts;
    double mean_duration_s = 0.0; // over sessions that record a duration
    double fps_min = 0.0;
    double fps_max = 0.0;
};

CohortSummary describe_cohort(const std::vector<SessionManifest>& sessions);

} // namespace facecue
