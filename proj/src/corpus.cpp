#include "drawlab/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "drawlab/errors.hpp"
#include "drawlab/strings.hpp"

namespace drawlab::corpus {

namespace {

constexpr const char* kHeader = "id,path,country,region,age,gender,task,school";

[[noreturn]] void record_error(const std::string& id, const std::string& field,
                               const std::string& what) {
    throw CorpusError("record '" + id + "': field '" + field + "': " + what);
}

Country parse_country(const std::string& s, const std::string& id) {
    if (s == "CH") return Country::CH;
    if (s == "JP") return Country::JP;
    if (s == "RO") return Country::RO;
    if (s == "RU") return Country::RU;
    if (s == "US") return Country::US;
    record_error(id, "country", "expected one of CH, JP, RO, RU, US; got '" + s + "'");
}

Gender parse_gender(const std::string& s, const std::string& id) {
    if (s.empty() || s == "unknown") return Gender::Unknown;
    if (s == "male") return Gender::Male;
    if (s == "female") return Gender::Female;
    record_error(id, "gender", "expected male, female or unknown; got '" + s + "'");
}

Task parse_task(const std::string& s, const std::string& id) {
    if (s == "gods") return Task::Gods;
    if (s == "general") return Task::General;
    record_error(id, "task", "expected gods or general; got '" + s + "'");
}

std::optional<School> parse_school(const std::string& s, const std::string& id) {
    if (s.empty()) return std::nullopt;
    if (s == "religious") return School::Religious;
    if (s == "secular") return School::Secular;
    if (s == "unknown") return School::Unknown;
    record_error(id, "school", "expected religious, secular or unknown; got '" + s + "'");
}

std::optional<double> parse_age(const std::string& s, const std::string& id) {
    if (s.empty()) return std::nullopt;
    std::size_t pos = 0;
    double age = 0.0;
    try {
        age = std::stod(s, &pos);
    } catch (const std::exception&) {
        record_error(id, "age", "not a number: '" + s + "'");
    }
    if (pos != s.size()) record_error(id, "age", "not a number: '" + s + "'");
    return age;
}

void validate(const DrawingRecord& rec) {
    if (rec.id.empty()) throw CorpusError("record with empty id");
    if (rec.path.empty()) record_error(rec.id, "path", "must not be empty");
    if (rec.age) {
        if (!(*rec.age > 1.0 && *rec.age <= 23.0)) {
            record_error(rec.id, "age",
                         "must lie in (1, 23]; got " + fmt_double(*rec.age));
        }
        if (std::isnan(*rec.age)) record_error(rec.id, "age", "must be a number");
    }
    if (rec.region && rec.country != Country::RU) {
        record_error(rec.id, "region", "only RU records carry a region");
    }
}

void check_unique_ids(const std::vector<DrawingRecord>& records) {
    std::set<std::string> seen;
    for (const auto& rec : records) {
        if (!seen.insert(rec.id).second) {
            throw CorpusError("duplicate record id '" + rec.id + "'");
        }
    }
}

// Minimal RFC-4180 style row split: quoted fields may contain commas and ""
// escapes. Returns false on an unterminated quote.
bool split_csv_row(const std::string& line, std::vector<std::string>& fields) {
    fields.clear();
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return !quoted;
}

std::vector<DrawingRecord> load_csv(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw CorpusError(path + ": empty manifest file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) {
        throw CorpusError(path + ":1: bad header; expected '" + std::string(kHeader) + "'");
    }

    std::vector<DrawingRecord> records;
    std::vector<std::string> fields;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!split_csv_row(line, fields)) {
            throw CorpusError(path + ":" + std::to_string(line_no) + ": unterminated quote");
        }
        if (fields.size() != 8) {
            throw CorpusError(path + ":" + std::to_string(line_no) + ": expected 8 fields, got " +
                              std::to_string(fields.size()));
        }
        DrawingRecord rec;
        rec.id = fields[0];
        rec.path = fields[1];
        rec.country = parse_country(fields[2], rec.id);
        if (!fields[3].empty()) rec.region = fields[3];
        rec.age = parse_age(fields[4], rec.id);
        rec.gender = parse_gender(fields[5], rec.id);
        rec.task = parse_task(fields[6], rec.id);
        rec.school = parse_school(fields[7], rec.id);
        validate(rec);
        records.push_back(std::move(rec));
    }
    return records;
}

std::string json_string_field(const nlohmann::json& obj, const char* key) {
    if (!obj.contains(key) || obj[key].is_null()) return {};
    if (obj[key].is_string()) return obj[key].get<std::string>();
    throw CorpusError(std::string("manifest field '") + key + "' must be a string");
}

std::vector<DrawingRecord> load_json(std::istream& in, const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw CorpusError(path + ": JSON parse error: " + e.what());
    }
    if (!doc.is_array()) throw CorpusError(path + ": manifest JSON must be an array of records");

    std::vector<DrawingRecord> records;
    for (const auto& obj : doc) {
        if (!obj.is_object()) throw CorpusError(path + ": manifest entries must be objects");
        DrawingRecord rec;
        rec.id = json_string_field(obj, "id");
        rec.path = json_string_field(obj, "path");
        rec.country = parse_country(json_string_field(obj, "country"), rec.id);
        const std::string region = json_string_field(obj, "region");
        if (!region.empty()) rec.region = region;
        if (obj.contains("age") && !obj["age"].is_null()) {
            if (obj["age"].is_number()) {
                rec.age = obj["age"].get<double>();
            } else {
                rec.age = parse_age(json_string_field(obj, "age"), rec.id);
            }
        }
        rec.gender = parse_gender(json_string_field(obj, "gender"), rec.id);
        rec.task = parse_task(json_string_field(obj, "task"), rec.id);
        rec.school = parse_school(json_string_field(obj, "school"), rec.id);
        validate(rec);
        records.push_back(std::move(rec));
    }
    return records;
}

std::string country_label(const DrawingRecord& rec, bool split_russia) {
    std::string label = to_string(rec.country);
    if (split_russia && rec.country == Country::RU && rec.region) label += "-" + *rec.region;
    return label;
}

} // namespace

const char* to_string(Country c) {
    switch (c) {
        case Country::CH: return "CH";
        case Country::JP: return "JP";
        case Country::RO: return "RO";
        case Country::RU: return "RU";
        case Country::US: return "US";
    }
    return "?";
}

const char* to_string(Gender g) {
    switch (g) {
        case Gender::Male: return "male";
        case Gender::Female: return "female";
        case Gender::Unknown: return "unknown";
    }
    return "?";
}

const char* to_string(Task t) { return t == Task::Gods ? "gods" : "general"; }

const char* to_string(School s) {
    switch (s) {
        case School::Religious: return "religious";
        case School::Secular: return "secular";
        case School::Unknown: return "unknown";
    }
    return "?";
}

const char* to_string(Dimension d) {
    switch (d) {
        case Dimension::Country: return "country";
        case Dimension::Region: return "region";
        case Dimension::AgeBin: return "age";
        case Dimension::Task: return "task";
    }
    return "?";
}

std::string AgeBin::label() const {
    return "(" + fmt_double(lower) + "," + fmt_double(upper) + "]";
}

std::vector<AgeBin> standard_age_bins() {
    return {{1, 7}, {7, 9}, {9, 11}, {11, 13}, {13, 23}};
}

std::vector<AgeBin> merged_age_bins() { return {{1, 7}, {7, 11}, {11, 23}}; }

std::vector<AgeBin> bins_from_edges(const std::vector<double>& edges) {
    if (edges.size() < 2) throw ConfigError("age bins need at least two edges");
    std::vector<AgeBin> bins;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i] < edges[i + 1])) {
            throw ConfigError("age bin edges must be strictly increasing");
        }
        bins.push_back({edges[i], edges[i + 1]});
    }
    return bins;
}

std::vector<DrawingRecord> load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open manifest: " + path);

    std::vector<DrawingRecord> records;
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        records = load_json(in, path);
    } else {
        records = load_csv(in, path);
    }
    check_unique_ids(records);
    return records;
}

Grouping group_records(const std::vector<DrawingRecord>& records, Dimension dimension,
                       const std::vector<AgeBin>* bins, bool split_russia) {
    Grouping out;

    if (dimension == Dimension::AgeBin) {
        if (!bins || bins->empty()) throw ConfigError("age grouping requires bins");
        for (std::size_t i = 0; i < bins->size(); ++i) {
            for (std::size_t j = i + 1; j < bins->size(); ++j) {
                const AgeBin& x = (*bins)[i];
                const AgeBin& y = (*bins)[j];
                if (x.lower < y.upper && y.lower < x.upper) {
                    throw ConfigError("age bins " + x.label() + " and " + y.label() + " overlap");
                }
            }
        }
    }

    for (const auto& rec : records) {
        std::string label;
        switch (dimension) {
            case Dimension::Country:
                label = country_label(rec, split_russia);
                break;
            case Dimension::Region:
                // Region labels fall back to the bare country when no region
                // was recorded, which only splits countries that have one.
                label = country_label(rec, true);
                break;
            case Dimension::Task:
                label = to_string(rec.task);
                break;
            case Dimension::AgeBin: {
                if (!rec.age) {
                    out.remainder.push_back(rec);
                    continue;
                }
                const AgeBin* hit = nullptr;
                for (const auto& bin : *bins) {
                    if (bin.contains(*rec.age)) {
                        hit = &bin;
                        break;
                    }
                }
                if (!hit) {
                    out.remainder.push_back(rec);
                    continue;
                }
                label = hit->label();
                break;
            }
        }
        out.groups[GroupKey{dimension, label}].push_back(rec);
    }
    return out;
}

} // namespace drawlab::corpus
