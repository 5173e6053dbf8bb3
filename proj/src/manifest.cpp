#include "facecue/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "facecue/errors.hpp"

namespace facecue {
namespace {

using nlohmann::ordered_json;

const std::unordered_set<std::string>& known_fields() {
    static const std::unordered_set<std::string> fields = {
        "subject_id", "file_path", "self_report", "gender",
        "education",  "home_location", "age", "fps", "duration_s"};
    return fields;
}

std::string require_string(const ordered_json& record, const char* key) {
    if (!record.contains(key) || !record[key].is_string())
        throw Error(Errc::MalformedManifest, std::string("missing or non-string field '") + key + "'");
    return record[key].get<std::string>();
}

int require_int(const ordered_json& record, const char* key) {
    if (!record.contains(key) || !record[key].is_number_integer())
        throw Error(Errc::MalformedManifest, std::string("missing or non-integer field '") + key + "'");
    return record[key].get<int>();
}

} // namespace

const char* gender_name(Gender g) { return g == Gender::Male ? "male" : "female"; }
const char* education_name(Education e) {
    return e == Education::Undergraduate ? "undergraduate" : "graduate";
}
const char* home_location_name(HomeLocation h) { return h == HomeLocation::Rural ? "rural" : "urban"; }

Gender parse_gender(const std::string& s) {
    if (s == "male") return Gender::Male;
    if (s == "female") return Gender::Female;
    throw Error(Errc::MalformedManifest, "gender must be 'male' or 'female', got '" + s + "'");
}

Education parse_education(const std::string& s) {
    if (s == "undergraduate") return Education::Undergraduate;
    if (s == "graduate") return Education::Graduate;
    throw Error(Errc::MalformedManifest,
                "education must be 'undergraduate' or 'graduate', got '" + s + "'");
}

HomeLocation parse_home_location(const std::string& s) {
    if (s == "rural") return HomeLocation::Rural;
    if (s == "urban") return HomeLocation::Urban;
    throw Error(Errc::MalformedManifest, "home_location must be 'rural' or 'urban', got '" + s + "'");
}

std::vector<SessionManifest> load_manifest(const std::string& path, bool lenient,
                                           std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IOFailure, "cannot open manifest '" + path + "'");

    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedManifest, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw Error(Errc::MalformedManifest, "manifest must be a JSON array");

    std::vector<SessionManifest> sessions;
    sessions.reserve(doc.size());
    std::unordered_set<std::string> seen_subjects;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& record = doc[i];
        if (!record.is_object())
            throw Error(Errc::MalformedManifest, "record " + std::to_string(i) + " is not an object");

        for (const auto& [key, value] : record.items()) {
            (void)value;
            if (!known_fields().count(key)) {
                if (lenient) {
                    if (warnings)
                        warnings->push_back("record " + std::to_string(i) + ": unknown field '" +
                                            key + "' ignored");
                } else {
                    throw Error(Errc::MalformedManifest,
                                "record " + std::to_string(i) + ": unknown field '" + key + "'");
                }
            }
        }

        SessionManifest session;
        session.subject_id = require_string(record, "subject_id");
        session.file_path = require_string(record, "file_path");
        session.self_report = require_int(record, "self_report");
        if (session.self_report < 1 || session.self_report > 5)
            throw Error(Errc::LikertOutOfRange,
                        "subject '" + session.subject_id + "': self_report " +
                            std::to_string(session.self_report) + " outside 1..5");
        session.demographics.gender = parse_gender(require_string(record, "gender"));
        session.demographics.education = parse_education(require_string(record, "education"));
        session.demographics.home_location = parse_home_location(require_string(record, "home_location"));
        session.age = require_int(record, "age");
        if (session.age <= 0)
            throw Error(Errc::MalformedManifest,
                        "subject '" + session.subject_id + "': age must be positive");
        if (record.contains("fps")) {
            if (!record["fps"].is_number() || record["fps"].get<double>() <= 0.0)
                throw Error(Errc::MalformedManifest,
                            "subject '" + session.subject_id + "': fps must be a positive number");
            session.fps = record["fps"].get<double>();
        }
        if (record.contains("duration_s")) {
            if (!record["duration_s"].is_number())
                throw Error(Errc::MalformedManifest,
                            "subject '" + session.subject_id + "': duration_s must be a number");
            session.duration_s = record["duration_s"].get<double>();
        }

        if (!seen_subjects.insert(session.subject_id).second)
            throw Error(Errc::DuplicateSubject, "subject_id '" + session.subject_id + "' repeats");
        sessions.push_back(std::move(session));
    }
    return sessions;
}

void save_manifest(const std::vector<SessionManifest>& sessions, const std::string& path) {
    ordered_json doc = ordered_json::array();
    for (const auto& s : sessions) {
        ordered_json record;
        record["subject_id"] = s.subject_id;
        record["file_path"] = s.file_path;
        record["self_report"] = s.self_report;
        record["gender"] = gender_name(s.demographics.gender);
        record["education"] = education_name(s.demographics.education);
        record["home_location"] = home_location_name(s.demographics.home_location);
        record["age"] = s.age;
        if (s.fps) record["fps"] = *s.fps;
        if (s.duration_s) record["duration_s"] = *s.duration_s;
        doc.push_back(std::move(record));
    }
    std::ofstream out(path);
    if (!out) throw Error(Errc::IOFailure, "cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) throw Error(Errc::IOFailure, "failed writing '" + path + "'");
}

std::string resolve_session_path(const std::string& manifest_path, const SessionManifest& session) {
    namespace fs = std::filesystem;
    fs::path p(session.file_path);
    if (p.is_absolute()) return p.string();
    return (fs::path(manifest_path).parent_path() / p).string();
}

} // namespace facecue
