#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace drawlab::corpus {

enum class Country { CH, JP, RO, RU, US };
enum class Gender { Male, Female, Unknown };
enum class Task { Gods, General };
enum class School { Religious, Secular, Unknown };

const char* to_string(Country c);
const char* to_string(Gender g);
const char* to_string(Task t);
const char* to_string(School s);

/// One scanned drawing plus its collection metadata.
struct DrawingRecord {
    std::string id;
    std::string path;
    Country country = Country::CH;
    std::optional<std::string> region; // only meaningful for RU (e.g. "bo", "sp")
    std::optional<double> age;         // years, in (1, 23] when known
    Gender gender = Gender::Unknown;
    Task task = Task::Gods;
    std::optional<School> school;
};

/// Half-open age interval (lower, upper].
struct AgeBin {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double age) const { return age > lower && age <= upper; }
    std::string label() const;
    auto operator<=>(const AgeBin&) const = default;
};

/// The age categories the analyses default to: (1,7], (7,9], (9,11], (11,13], (13,23].
std::vector<AgeBin> standard_age_bins();

/// The coarser three-way split (1,7], (7,11], (11,23].
std::vector<AgeBin> merged_age_bins();

/// Build bins from strictly increasing edges, e.g. {1,7,9,11,13,23}.
std::vector<AgeBin> bins_from_edges(const std::vector<double>& edges);

enum class Dimension { Country, Region, AgeBin, Task };

const char* to_string(Dimension d);

struct GroupKey {
    Dimension dimension = Dimension::Country;
    std::string label;
    auto operator<=>(const GroupKey&) const = default;
};

/// Parse and validate a manifest (CSV with the canonical header, or a JSON
/// array of records). Throws CorpusError with the offending line or record.
std::vector<DrawingRecord> load_manifest(const std::string& path);

/// Result of a partition: every input record lands either in exactly one
/// group or in the remainder (unbinned ages, unknown ages).
struct Grouping {
    std::map<GroupKey, std::vector<DrawingRecord>> groups;
    std::vector<DrawingRecord> remainder;
};

Grouping group_records(const std::vector<DrawingRecord>& records, Dimension dimension,
                       const std::vector<AgeBin>* bins = nullptr, bool split_russia = false);

} // namespace drawlab::corpus
