#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace poa {

// The ten principles in template order. This order is the fixed sequence used
// everywhere one is required: the prompt template, statement lists, reports.
enum class Principle : int {
    balance = 0,
    harmony,
    variety,
    unity,
    contrast,
    emphasis,
    proportion,
    movement,
    rhythm,
    pattern,
};

constexpr int kPrincipleCount = 10;

const std::array<Principle, kPrincipleCount>& canonical_principle_order();

std::string_view principle_name(Principle p);   // lowercase, e.g. "balance"
std::string_view principle_label(Principle p);  // capitalized, e.g. "Balance"
std::optional<Principle> principle_from_name(std::string_view name);

// Ordinal prominence scale, weak < mild < moderate < strong.
enum class Prominence : int { weak = 0, mild, moderate, strong };

std::string_view prominence_name(Prominence p);
std::optional<Prominence> prominence_from_string(std::string_view text);

enum class BalanceSense : int { symmetric = 0, asymmetric, radial };

std::string_view balance_sense_name(BalanceSense s);

// Sense is carried by the leading token of the balance analysis ("Asymmetric
// balance is evident..."), so it is derived at parse time, not stored.
std::optional<BalanceSense> extract_balance_sense(std::string_view analysis);

struct PoaEntry {
    Prominence prominence = Prominence::weak;
    std::optional<std::string> analysis;
    std::optional<BalanceSense> balance_sense;  // balance entries only

    bool operator==(const PoaEntry&) const = default;
};

// The 27 style names annotations may predict from.
const std::vector<std::string>& style_vocabulary();

struct AnnotationRecord {
    std::string id;
    std::string image_ref;
    std::string artist;
    std::string true_style;
    std::optional<std::string> genre;
    std::string caption;
    std::array<std::string, 3> predicted_styles;
    std::map<Principle, PoaEntry> poa;

    bool operator==(const AnnotationRecord&) const = default;
};

// One line of a .caj file -> record. Unknown keys, bad enums, wrong style
// arity, and missing analyses above weak prominence are all rejected.
AnnotationRecord parse_record(const std::string& serialized);

// Record -> one .caj line with byte-stable key ordering, such that
// parse_record(write_record(r)) == r for every valid record.
std::string write_record(const AnnotationRecord& record);

struct Violation {
    enum class Rule {
        subject_mismatch,    // first clause does not name the principle
        medium_term,         // analysis names the medium instead of "the composition"
        weak_with_analysis,  // weak prominence should not carry an analysis
    };
    Rule rule;
    Principle principle;
    std::string detail;
};

const std::vector<std::string>& default_medium_blocklist();

// Soft-rule checks; reported, never fatal. Imperfect annotations are kept.
std::vector<Violation> validate_record(const AnnotationRecord& record);
std::vector<Violation> validate_record(const AnnotationRecord& record,
                                       const std::vector<std::string>& medium_blocklist);

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> test;
    uint64_t seed = 0;
};

// Uniform random split, deterministic in (ids, test_size, seed).
DatasetSplit split_dataset(const std::vector<AnnotationRecord>& records, size_t test_size,
                           uint64_t seed);

// .caj file helpers. Parse failures carry the 1-based line number.
std::vector<AnnotationRecord> read_caj(const std::filesystem::path& path);
void write_caj(const std::filesystem::path& path, const std::vector<AnnotationRecord>& records);

void write_split(const std::filesystem::path& train_path, const std::filesystem::path& test_path,
                 const DatasetSplit& split);

}  // namespace poa
