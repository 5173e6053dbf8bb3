#pragma once

#include <optional>
#include <string>
#include <vector>

namespace facecue {

enum class Gender { Male, Female };
enum class Education { Undergraduate, Graduate };
enum class HomeLocation { Rural, Urban };

const char* gender_name(Gender g);
const char* education_name(Education e);
const char* home_location_name(HomeLocation h);
Gender parse_gender(const std::string& s);
Education parse_education(const std::string& s);
HomeLocation parse_home_location(const std::string& s);

struct Demographics {
    Gender gender = Gender::Male;
    Education education = Education::Undergraduate;
    HomeLocation home_location = HomeLocation::Urban;
};

struct SessionManifest {
    std::string subject_id;
    std::string file_path; // relative paths resolve against the manifest's directory
    int self_report = 0;   // Likert 1..5, 1 = most anxious
    Demographics demographics;
    int age = 0;
    std::optional<double> fps;        // when absent, inferred from the timestamp column
    std::optional<double> duration_s; // informational; the cohort generator fills it in
};

// Loads and validates a JSON array of session records. In strict mode unknown
// fields are rejected; in lenient mode they produce warnings instead.
std::vector<SessionManifest> load_manifest(const std::string& path, bool lenient = false,
                                           std::vector<std::string>* warnings = nullptr);

void save_manifest(const std::vector<SessionManifest>& sessions, const std::string& path);

// Resolves a session's file_path relative to the directory containing the manifest.
std::string resolve_session_path(const std::string& manifest_path, const SessionManifest& session);

} // namespace facecue
