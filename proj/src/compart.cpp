#include "poa/compart.hpp"

#include <json.hpp>
#include <set>

#include "poa/errors.hpp"
#include "poa/io.hpp"
#include "poa/rng.hpp"
#include "poa/text.hpp"

namespace poa {

using nlohmann::json;
using nlohmann::ordered_json;

const std::array<Principle, kPrincipleCount>& canonical_principle_order() {
    static const std::array<Principle, kPrincipleCount> order = {
        Principle::balance,  Principle::harmony,    Principle::variety, Principle::unity,
        Principle::contrast, Principle::emphasis,   Principle::proportion,
        Principle::movement, Principle::rhythm,     Principle::pattern,
    };
    return order;
}

namespace {

constexpr std::string_view kNames[kPrincipleCount] = {
    "balance", "harmony", "variety", "unity", "contrast",
    "emphasis", "proportion", "movement", "rhythm", "pattern",
};

constexpr std::string_view kLabels[kPrincipleCount] = {
    "Balance", "Harmony", "Variety", "Unity", "Contrast",
    "Emphasis", "Proportion", "Movement", "Rhythm", "Pattern",
};

}  // namespace

std::string_view principle_name(Principle p) { return kNames[static_cast<int>(p)]; }
std::string_view principle_label(Principle p) { return kLabels[static_cast<int>(p)]; }

std::optional<Principle> principle_from_name(std::string_view name) {
    std::string lower = to_lower(trim(name));
    for (int i = 0; i < kPrincipleCount; ++i) {
        if (lower == kNames[i]) return static_cast<Principle>(i);
    }
    return std::nullopt;
}

std::string_view prominence_name(Prominence p) {
    switch (p) {
        case Prominence::weak: return "weak";
        case Prominence::mild: return "mild";
        case Prominence::moderate: return "moderate";
        case Prominence::strong: return "strong";
    }
    return "weak";
}

std::optional<Prominence> prominence_from_string(std::string_view text) {
    std::string lower = to_lower(trim(text));
    if (lower == "weak") return Prominence::weak;
    if (lower == "mild") return Prominence::mild;
    if (lower == "moderate") return Prominence::moderate;
    if (lower == "strong") return Prominence::strong;
    return std::nullopt;
}

std::string_view balance_sense_name(BalanceSense s) {
    switch (s) {
        case BalanceSense::symmetric: return "symmetric";
        case BalanceSense::asymmetric: return "asymmetric";
        case BalanceSense::radial: return "radial";
    }
    return "symmetric";
}

std::optional<BalanceSense> extract_balance_sense(std::string_view analysis) {
    auto tokens = tokenize(analysis);
    if (tokens.empty()) return std::nullopt;
    std::string first = to_lower(tokens.front());
    if (first.rfind("asymmetric", 0) == 0) return BalanceSense::asymmetric;
    if (first.rfind("symmetric", 0) == 0) return BalanceSense::symmetric;
    if (first.rfind("radial", 0) == 0) return BalanceSense::radial;
    return std::nullopt;
}

const std::vector<std::string>& style_vocabulary() {
    static const std::vector<std::string> styles = {
        "Post-Impressionism",
        "Expressionism",
        "Impressionism",
        "Northern Renaissance",
        "Realism",
        "Romanticism",
        "Symbolism",
        "Art Nouveau (Modern)",
        "Naïve Art (Primitivism)",
        "Baroque",
        "Rococo",
        "Abstract Expressionism",
        "Cubism",
        "Color Field Painting",
        "Pop Art",
        "Pointillism",
        "Early Renaissance",
        "Ukiyo-e",
        "Mannerism (Late Renaissance)",
        "High Renaissance",
        "Fauvism",
        "Minimalism",
        "Action painting",
        "Contemporary Realism",
        "Synthetic Cubism",
        "New Realism",
        "Analytical Cubism",
    };
    return styles;
}

namespace {

bool in_style_vocabulary(const std::string& name) {
    const auto& vocab = style_vocabulary();
    return std::find(vocab.begin(), vocab.end(), name) != vocab.end();
}

std::string require_string(const json& obj, const char* key) {
    if (!obj.contains(key))
        throw Error(ErrorKind::SchemaViolation, std::string("missing field '") + key + "'");
    if (!obj[key].is_string())
        throw Error(ErrorKind::SchemaViolation, std::string("field '") + key + "' must be a string");
    return obj[key].get<std::string>();
}

PoaEntry parse_poa_entry(Principle principle, const json& value) {
    if (!value.is_object())
        throw Error(ErrorKind::SchemaViolation,
                    "PoA entry for '" + std::string(principle_name(principle)) + "' must be an object");
    for (const auto& [k, v] : value.items()) {
        if (k != "prominence" && k != "analysis")
            throw Error(ErrorKind::SchemaViolation, "unknown PoA entry key '" + k + "'");
    }
    PoaEntry entry;
    auto prominence = prominence_from_string(require_string(value, "prominence"));
    if (!prominence)
        throw Error(ErrorKind::SchemaViolation,
                    "bad prominence '" + value["prominence"].get<std::string>() + "'");
    entry.prominence = *prominence;
    if (value.contains("analysis") && !value["analysis"].is_null()) {
        if (!value["analysis"].is_string())
            throw Error(ErrorKind::SchemaViolation, "analysis must be a string");
        std::string analysis = value["analysis"].get<std::string>();
        if (!analysis.empty()) entry.analysis = analysis;
    }
    if (entry.prominence > Prominence::weak && !entry.analysis)
        throw Error(ErrorKind::SchemaViolation,
                    std::string(principle_name(principle)) +
                        ": prominence above weak requires a non-empty analysis");
    if (principle == Principle::balance && entry.analysis)
        entry.balance_sense = extract_balance_sense(*entry.analysis);
    return entry;
}

}  // namespace

AnnotationRecord parse_record(const std::string& serialized) {
    json doc;
    try {
        doc = json::parse(serialized);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedDocument, e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::MalformedDocument, "record is not an object");

    static const std::set<std::string> allowed = {"id",     "image_ref", "artist", "true_style",
                                                  "genre",  "caption",   "style",  "PoA"};
    for (const auto& [k, v] : doc.items()) {
        if (!allowed.count(k)) throw Error(ErrorKind::SchemaViolation, "unknown key '" + k + "'");
    }

    AnnotationRecord record;
    record.id = require_string(doc, "id");
    record.image_ref = require_string(doc, "image_ref");
    record.artist = require_string(doc, "artist");
    record.true_style = require_string(doc, "true_style");
    if (doc.contains("genre") && !doc["genre"].is_null())
        record.genre = require_string(doc, "genre");
    record.caption = require_string(doc, "caption");
    if (record.caption.empty()) throw Error(ErrorKind::SchemaViolation, "caption must be non-empty");

    if (!doc.contains("style") || !doc["style"].is_array())
        throw Error(ErrorKind::SchemaViolation, "'style' must be an array");
    const auto& styles = doc["style"];
    if (styles.size() != 3)
        throw Error(ErrorKind::SchemaViolation,
                    "'style' must list exactly 3 predictions, got " + std::to_string(styles.size()));
    std::set<std::string> seen;
    for (size_t i = 0; i < 3; ++i) {
        if (!styles[i].is_string())
            throw Error(ErrorKind::SchemaViolation, "style predictions must be strings");
        std::string name = styles[i].get<std::string>();
        if (!in_style_vocabulary(name))
            throw Error(ErrorKind::SchemaViolation, "style '" + name + "' is not in the 27-name vocabulary");
        if (!seen.insert(name).second)
            throw Error(ErrorKind::SchemaViolation, "duplicate style prediction '" + name + "'");
        record.predicted_styles[i] = std::move(name);
    }

    if (doc.contains("PoA")) {
        if (!doc["PoA"].is_object()) throw Error(ErrorKind::SchemaViolation, "'PoA' must be an object");
        for (const auto& [name, value] : doc["PoA"].items()) {
            auto principle = principle_from_name(name);
            if (!principle)
                throw Error(ErrorKind::SchemaViolation, "unknown principle '" + name + "'");
            if (record.poa.count(*principle))
                throw Error(ErrorKind::SchemaViolation, "duplicate principle '" + name + "'");
            record.poa.emplace(*principle, parse_poa_entry(*principle, value));
        }
    } else {
        throw Error(ErrorKind::SchemaViolation, "missing field 'PoA'");
    }
    return record;
}

std::string write_record(const AnnotationRecord& record) {
    ordered_json doc;
    doc["id"] = record.id;
    doc["image_ref"] = record.image_ref;
    doc["artist"] = record.artist;
    doc["true_style"] = record.true_style;
    if (record.genre) doc["genre"] = *record.genre;
    doc["caption"] = record.caption;
    doc["style"] = record.predicted_styles;
    ordered_json poa = ordered_json::object();
    for (Principle p : canonical_principle_order()) {
        auto it = record.poa.find(p);
        if (it == record.poa.end()) continue;
        ordered_json entry;
        entry["prominence"] = std::string(prominence_name(it->second.prominence));
        if (it->second.analysis) entry["analysis"] = *it->second.analysis;
        poa[std::string(principle_name(p))] = std::move(entry);
    }
    doc["PoA"] = std::move(poa);
    return doc.dump();
}

const std::vector<std::string>& default_medium_blocklist() {
    static const std::vector<std::string> terms = {
        "painting", "canvas", "artwork",    "drawing", "sketch", "photograph",
        "photo",    "print",  "watercolor", "fresco",  "oil",    "sculpture",
        "image",    "mural",  "etching",    "illustration", "picture",
    };
    return terms;
}

std::vector<Violation> validate_record(const AnnotationRecord& record) {
    return validate_record(record, default_medium_blocklist());
}

std::vector<Violation> validate_record(const AnnotationRecord& record,
                                       const std::vector<std::string>& medium_blocklist) {
    std::vector<Violation> violations;
    for (const auto& [principle, entry] : record.poa) {
        if (entry.prominence == Prominence::weak && entry.analysis) {
            violations.push_back({Violation::Rule::weak_with_analysis, principle,
                                  "weak prominence carries an analysis"});
        }
        if (!entry.analysis) continue;
        const std::string& analysis = *entry.analysis;
        // (a) the first clause must name its principle.
        size_t clause_end = analysis.find_first_of(",.;");
        std::string_view clause =
            clause_end == std::string::npos ? std::string_view(analysis)
                                            : std::string_view(analysis).substr(0, clause_end);
        if (!contains_word_ci(clause, principle_name(principle))) {
            violations.push_back({Violation::Rule::subject_mismatch, principle,
                                  "first clause does not name '" +
                                      std::string(principle_name(principle)) + "'"});
        }
        // (b) medium terms instead of "the composition".
        for (const auto& term : medium_blocklist) {
            if (contains_word_ci(analysis, term)) {
                violations.push_back({Violation::Rule::medium_term, principle,
                                      "mentions medium term '" + term + "'"});
                break;
            }
        }
    }
    return violations;
}

DatasetSplit split_dataset(const std::vector<AnnotationRecord>& records, size_t test_size,
                           uint64_t seed) {
    if (test_size > records.size())
        throw Error(ErrorKind::BadSize, "test_size " + std::to_string(test_size) + " exceeds " +
                                            std::to_string(records.size()) + " records");
    std::vector<std::string> ids;
    ids.reserve(records.size());
    for (const auto& r : records) ids.push_back(r.id);
    Rng rng = Rng(seed).stream("split");
    rng.shuffle(ids);
    DatasetSplit split;
    split.seed = seed;
    split.test.assign(ids.begin(), ids.begin() + static_cast<ptrdiff_t>(test_size));
    split.train.assign(ids.begin() + static_cast<ptrdiff_t>(test_size), ids.end());
    return split;
}

std::vector<AnnotationRecord> read_caj(const std::filesystem::path& path) {
    std::vector<AnnotationRecord> records;
    auto lines = read_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        try {
            records.push_back(parse_record(lines[i]));
        } catch (const Error& e) {
            throw Error(e.kind(), path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return records;
}

void write_caj(const std::filesystem::path& path, const std::vector<AnnotationRecord>& records) {
    std::string content;
    for (const auto& r : records) {
        content += write_record(r);
        content += '\n';
    }
    atomic_write(path, content);
}

void write_split(const std::filesystem::path& train_path, const std::filesystem::path& test_path,
                 const DatasetSplit& split) {
    std::string train;
    for (const auto& id : split.train) train += id + "\n";
    std::string test;
    for (const auto& id : split.test) test += id + "\n";
    atomic_write(train_path, train);
    atomic_write(test_path, test);
}

}  // namespace poa
