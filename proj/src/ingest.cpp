#include "halludet/ingest.hpp"

#include <fstream>
#include <sstream>

#include "halludet/errors.hpp"
#include "json.hpp"

namespace halludet {

namespace {

using json = nlohmann::json;

std::string scalar_to_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return std::to_string(v.get<double>());
    if (v.is_null()) return "";
    throw DataError("field value is not a scalar");
}

// RFC 4180-ish CSV row parser; supports quoted fields with embedded
// delimiters, quotes and newlines already folded into `row`.
std::vector<std::string> split_csv_row(const std::string& row) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (size_t i = 0; i < row.size(); ++i) {
        char c = row[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < row.size() && row[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::vector<std::string> split_tsv_row(const std::string& row) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : row) {
        if (c == '\t') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string chomp_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

struct RawRecord {
    std::map<std::string, std::string> fields;
    std::size_t index = 0;  // 0-based record index within the file
};

std::string source_prefix(const SourceDescriptor& d) { return std::string(to_string(d.name)); }

}  // namespace

InputFormat input_format_from_string(std::string_view s) {
    if (s == "jsonl") return InputFormat::jsonl;
    if (s == "csv") return InputFormat::csv;
    if (s == "tsv") return InputFormat::tsv;
    throw DataError("unknown input_format: '" + std::string(s) + "'");
}

LabelTarget label_target_from_string(std::string_view s) {
    if (s == "correct") return LabelTarget::correct;
    if (s == "hallucinated") return LabelTarget::hallucinated;
    if (s == "drop") return LabelTarget::drop;
    throw DataError("unknown label_map target: '" + std::string(s) + "'");
}

void SourceDescriptor::validate() const {
    if (text_field.empty()) throw DataError("descriptor: text_field is required");
    if (label_field.empty()) throw DataError("descriptor: label_field is required");
    const bool has_lang_field = lang_field.has_value() && !lang_field->empty();
    const bool has_default = default_lang.has_value() && !default_lang->empty();
    if (has_lang_field == has_default) {
        throw DataError("descriptor for " + source_prefix(*this) +
                        ": exactly one of lang_field / default_lang must be set");
    }
    if (has_default && !is_recognized_lang(*default_lang)) {
        throw DataError("descriptor: default_lang '" + *default_lang + "' is not a recognized code");
    }
    if (label_map.empty()) throw DataError("descriptor: label_map must not be empty");
}

SourceDescriptor load_descriptor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open descriptor: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw DataError("malformed descriptor " + path.string() + ": " + e.what());
    }
    SourceDescriptor d;
    try {
        d.name = source_from_string(j.at("name").get<std::string>());
        d.input_format = input_format_from_string(j.at("input_format").get<std::string>());
        d.text_field = j.at("text_field").get<std::string>();
        d.label_field = j.at("label_field").get<std::string>();
        if (j.contains("lang_field")) d.lang_field = j.at("lang_field").get<std::string>();
        if (j.contains("default_lang")) d.default_lang = j.at("default_lang").get<std::string>();
        if (j.contains("id_field")) d.id_field = j.at("id_field").get<std::string>();
        if (j.contains("axis_field")) d.axis_field = j.at("axis_field").get<std::string>();
        d.domain = j.value("domain", std::string("-"));
        for (auto& [raw, target] : j.at("label_map").items()) {
            d.label_map[raw] = label_target_from_string(target.get<std::string>());
        }
    } catch (const json::exception& e) {
        throw DataError("descriptor " + path.string() + " missing field: " + e.what());
    }
    d.validate();
    return d;
}

void save_descriptor(const SourceDescriptor& d, const std::filesystem::path& path) {
    d.validate();
    json j;
    j["name"] = std::string(to_string(d.name));
    j["input_format"] = d.input_format == InputFormat::jsonl ? "jsonl"
                        : d.input_format == InputFormat::csv ? "csv"
                                                             : "tsv";
    j["text_field"] = d.text_field;
    j["label_field"] = d.label_field;
    if (d.lang_field) j["lang_field"] = *d.lang_field;
    if (d.default_lang) j["default_lang"] = *d.default_lang;
    if (d.id_field) j["id_field"] = *d.id_field;
    if (d.axis_field) j["axis_field"] = *d.axis_field;
    j["domain"] = d.domain;
    json lm = json::object();
    for (const auto& [raw, target] : d.label_map) {
        lm[raw] = target == LabelTarget::correct        ? "correct"
                  : target == LabelTarget::hallucinated ? "hallucinated"
                                                        : "drop";
    }
    j["label_map"] = lm;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write descriptor: " + path.string());
    out << j.dump() << "\n";
}

IngestSummary ingest_source(const SourceDescriptor& descriptor, const std::filesystem::path& path,
                            const std::function<void(Sample&&)>& emit, bool strict) {
    descriptor.validate();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + path.string());

    const std::string basename = path.stem().string();
    IngestSummary summary;
    std::vector<std::string> header;  // csv/tsv column names
    std::map<std::string, std::size_t> seen_ids;

    auto field_of = [&](const RawRecord& rec, const std::string& name) -> const std::string& {
        auto it = rec.fields.find(name);
        if (it == rec.fields.end()) {
            throw DataError("record " + std::to_string(rec.index) + " in " + path.string() +
                            ": missing required field '" + name + "'");
        }
        return it->second;
    };

    auto handle_record = [&](const RawRecord& rec) {
        const std::string& raw_label = field_of(rec, descriptor.label_field);
        auto lm = descriptor.label_map.find(raw_label);
        if (lm == descriptor.label_map.end()) {
            throw UnmappedLabelError("unmapped raw label '" + raw_label + "' for source " +
                                     source_prefix(descriptor) + " (record " +
                                     std::to_string(rec.index) + ")");
        }
        if (lm->second == LabelTarget::drop) {
            ++summary.dropped;
            return;
        }
        Sample s;
        s.text = field_of(rec, descriptor.text_field);
        s.label = lm->second == LabelTarget::correct ? Label::correct : Label::hallucinated;
        s.source = descriptor.name;
        if (descriptor.lang_field) {
            s.lang = field_of(rec, *descriptor.lang_field);
        } else {
            s.lang = *descriptor.default_lang;
        }
        if (descriptor.id_field) {
            s.id = field_of(rec, *descriptor.id_field);
        } else {
            s.id = source_prefix(descriptor) + ":" + basename + ":" + std::to_string(rec.index);
        }
        if (descriptor.axis_field) {
            auto it = rec.fields.find(*descriptor.axis_field);
            if (it != rec.fields.end() && !it->second.empty()) s.axis = axis_from_string(it->second);
        }
        s.meta["origin_record"] = std::to_string(rec.index);

        auto violations = validate_sample(s);
        if (!violations.empty()) {
            throw DataError("record " + std::to_string(rec.index) + " in " + path.string() +
                            " violates invariants: " + violations.front());
        }
        if (auto [it, inserted] = seen_ids.emplace(s.id, rec.index); !inserted) {
            throw DataError("duplicate id '" + s.id + "' in " + path.string() + " (records " +
                            std::to_string(it->second) + " and " + std::to_string(rec.index) + ")");
        }
        ++summary.emitted;
        emit(std::move(s));
    };

    std::string line;
    std::size_t record_index = 0;
    std::size_t lineno = 0;
    bool header_read = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = chomp_cr(std::move(line));
        if (descriptor.input_format != InputFormat::jsonl && !header_read) {
            header = descriptor.input_format == InputFormat::csv ? split_csv_row(line)
                                                                 : split_tsv_row(line);
            header_read = true;
            continue;
        }
        if (line.empty()) continue;

        RawRecord rec;
        rec.index = record_index++;
        try {
            if (descriptor.input_format == InputFormat::jsonl) {
                json j;
                try {
                    j = json::parse(line);
                } catch (const json::exception& e) {
                    throw DataError("malformed record at line " + std::to_string(lineno) + ": " +
                                    e.what());
                }
                if (!j.is_object()) {
                    throw DataError("malformed record at line " + std::to_string(lineno) +
                                    ": not an object");
                }
                for (auto& [k, v] : j.items()) {
                    if (v.is_object() || v.is_array()) continue;
                    rec.fields[k] = scalar_to_string(v);
                }
            } else {
                auto cells = descriptor.input_format == InputFormat::csv ? split_csv_row(line)
                                                                         : split_tsv_row(line);
                if (cells.size() != header.size()) {
                    throw DataError("malformed record at line " + std::to_string(lineno) + ": " +
                                    std::to_string(cells.size()) + " fields, header has " +
                                    std::to_string(header.size()));
                }
                for (size_t i = 0; i < header.size(); ++i) rec.fields[header[i]] = cells[i];
            }
            handle_record(rec);
        } catch (const UnmappedLabelError&) {
            throw;
        } catch (const DataError&) {
            if (strict) throw;
            ++summary.errored;
        }
    }
    return summary;
}

std::pair<std::vector<Sample>, IngestSummary> ingest_source_to_vector(
    const SourceDescriptor& descriptor, const std::filesystem::path& path, bool strict) {
    std::vector<Sample> out;
    IngestSummary summary =
        ingest_source(descriptor, path, [&](Sample&& s) { out.push_back(std::move(s)); }, strict);
    return {std::move(out), summary};
}

}  // namespace halludet
