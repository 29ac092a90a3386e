#include "poa/analytics.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "poa/errors.hpp"
#include "poa/text.hpp"

namespace poa {

ProminenceBreakdown prominence_breakdown(const std::vector<AnnotationRecord>& records,
                                         bool include_analysisless) {
    ProminenceBreakdown out;
    for (const auto& record : records) {
        for (const auto& [principle, entry] : record.poa) {
            if (!include_analysisless && !entry.analysis) continue;
            auto& row = out.rows[static_cast<size_t>(principle)];
            row.total += 1;
            row.by_level[static_cast<size_t>(entry.prominence)] += 1;
        }
    }
    return out;
}

TopKAccuracy style_topk_accuracy(const std::vector<AnnotationRecord>& records,
                                 const std::vector<int>& ks) {
    TopKAccuracy out;
    if (records.empty()) return out;
    std::map<std::string, std::array<long, 3>> hits;  // style -> hits at k=1..3
    std::map<std::string, long> counts;
    std::array<long, 3> overall_hits{};
    for (const auto& record : records) {
        if (record.true_style.empty())
            throw Error(ErrorKind::MissingPrediction, "record '" + record.id + "' has no true style");
        for (const auto& s : record.predicted_styles) {
            if (s.empty())
                throw Error(ErrorKind::MissingPrediction,
                            "record '" + record.id + "' lacks style predictions");
        }
        counts[record.true_style] += 1;
        int rank = -1;
        for (int i = 0; i < 3; ++i) {
            if (record.predicted_styles[static_cast<size_t>(i)] == record.true_style) {
                rank = i;
                break;
            }
        }
        if (rank >= 0) {
            for (int k = rank; k < 3; ++k) {
                hits[record.true_style][static_cast<size_t>(k)] += 1;
                overall_hits[static_cast<size_t>(k)] += 1;
            }
        } else {
            hits.try_emplace(record.true_style);
        }
    }
    double n = static_cast<double>(records.size());
    for (int k : ks) {
        if (k < 1 || k > 3) throw Error(ErrorKind::BadSize, "k must lie in [1, 3]");
        out.overall[k] = 100.0 * overall_hits[static_cast<size_t>(k - 1)] / n;
    }
    for (const auto& [style, c] : counts) {
        TopKAccuracy::Row row;
        row.count = c;
        row.proportion = 100.0 * c / n;
        row.top1 = 100.0 * hits[style][0] / c;
        row.top2 = 100.0 * hits[style][1] / c;
        row.top3 = 100.0 * hits[style][2] / c;
        out.per_style[style] = row;
    }
    return out;
}

const std::array<PosTag, kPosClassCount>& reported_pos_classes() {
    static const std::array<PosTag, kPosClassCount> classes = {
        PosTag::NOUN, PosTag::PRON, PosTag::ADJ, PosTag::ADP, PosTag::VERB};
    return classes;
}

std::string_view pos_tag_name(PosTag tag) {
    switch (tag) {
        case PosTag::NOUN: return "NOUN";
        case PosTag::PRON: return "PRON";
        case PosTag::ADJ: return "ADJ";
        case PosTag::ADP: return "ADP";
        case PosTag::VERB: return "VERB";
        case PosTag::OTHER: return "OTHER";
    }
    return "OTHER";
}

namespace {

const std::unordered_set<std::string>& pron_lexicon() {
    static const std::unordered_set<std::string> words = {
        "i",    "you",   "he",    "she",   "it",     "we",      "they",    "me",
        "him",  "her",   "us",    "them",  "mine",   "yours",   "hers",    "ours",
        "theirs", "itself", "himself", "herself", "themselves", "oneself", "one",
        "something", "anything", "nothing", "everything", "someone", "anyone",
        "everyone", "who", "whom", "whose",
    };
    return words;
}

const std::unordered_set<std::string>& adp_lexicon() {
    static const std::unordered_set<std::string> words = {
        "of",      "in",      "on",     "at",      "by",      "with",    "from",
        "to",      "through", "across", "between", "among",   "around",  "within",
        "without", "under",   "over",   "above",   "below",   "into",    "onto",
        "toward",  "towards", "against", "along",  "behind",  "beside",  "besides",
        "near",    "throughout", "upon", "during", "amid",    "amidst",  "via",
        "per",     "beneath", "beyond", "off",     "alongside", "atop",  "underneath",
    };
    return words;
}

const std::unordered_set<std::string>& other_lexicon() {
    static const std::unordered_set<std::string> words = {
        "the",   "a",     "an",    "and",   "or",     "but",    "nor",   "so",
        "is",    "are",   "was",   "were",  "be",     "been",   "being", "am",
        "has",   "have",  "had",   "do",    "does",   "did",    "will",  "would",
        "can",   "could", "may",   "might", "shall",  "should", "must",  "not",
        "as",    "if",    "while", "when",  "where",  "that",   "which", "this",
        "these", "those", "there", "here",  "then",   "than",   "also",  "both",
        "each",  "very",  "more",  "most",  "such",   "no",     "yes",   "its",
        "their", "his",   "her",   "your",  "our",    "my",     "all",   "some",
        "any",   "only",  "too",   "well",  "further", "rather", "quite", "either",
        "how",   "what",  "why",   "because", "together", "overall", "particularly",
        "especially", "immediately", "strongly", "subtly", "slightly", "predominantly",
    };
    return words;
}

const std::unordered_set<std::string>& verb_lexicon() {
    static const std::unordered_set<std::string> words = {
        "achieve", "achieves",  "create",  "creates", "draw",     "draws",    "bring",
        "brings",  "add",       "adds",    "give",    "gives",    "lead",     "leads",
        "make",    "makes",     "evoke",   "evokes",  "convey",   "conveys",  "guide",
        "guides",  "suggest",   "suggests", "appear", "appears",  "contribute",
        "contributes", "enhance", "enhances", "hold", "holds",    "keep",     "keeps",
        "show",    "shows",     "form",    "forms",   "provide",  "provides", "serve",
        "serves",  "establish", "establishes", "maintain", "maintains", "emphasize",
        "emphasizes", "highlight", "highlights", "complement", "complements",
        "mirror",  "mirrors",   "echo",    "echoes",  "flow",     "flows",    "span",
        "spans",   "anchor",    "anchors", "frame",   "frames",   "see",      "seen",
        "stand",   "stands",    "rest",    "rests",   "sit",      "sits",     "rise",
        "rises",   "fall",      "falls",   "move",    "moves",    "recur",    "recurs",
    };
    return words;
}

const std::unordered_set<std::string>& adj_lexicon() {
    static const std::unordered_set<std::string> words = {
        "warm",    "cool",    "bright",  "dark",    "soft",     "bold",    "large",
        "small",   "light",   "heavy",   "vivid",   "subtle",   "strong",  "weak",
        "calm",    "quiet",   "lively",  "rich",    "deep",     "pale",    "sharp",
        "smooth",  "rough",   "gentle",  "stark",   "clear",    "distinct", "equal",
        "similar", "different", "visual", "main",   "central",  "upper",   "lower",
        "left",    "right",   "high",    "low",     "big",      "tiny",    "broad",
        "narrow",  "flat",    "still",   "dynamic", "static",   "complex", "simple",
        "diverse", "uniform", "even",    "steady",  "whole",    "entire",  "several",
        "many",    "few",     "green",   "blue",    "red",      "yellow",  "white",
        "black",   "golden",  "grey",    "gray",    "brown",    "orange",  "purple",
        "natural", "human",   "geometric", "organic", "abstract", "muted", "earthy",
    };
    return words;
}

const std::unordered_set<std::string>& noun_exception_ing() {
    // -ing words that are nouns in ordinary art prose.
    static const std::unordered_set<std::string> words = {
        "painting", "building", "lighting", "setting",  "clothing", "ceiling",
        "evening",  "morning",  "railing",  "shading",  "awning",   "opening",
    };
    return words;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

PosTag tag_word(const std::string& raw) {
    std::string w = to_lower(raw);
    if (w.empty()) return PosTag::OTHER;
    bool has_letter = false;
    for (unsigned char c : w) has_letter = has_letter || std::isalpha(c);
    if (!has_letter) return PosTag::OTHER;

    if (pron_lexicon().count(w)) return PosTag::PRON;
    if (adp_lexicon().count(w)) return PosTag::ADP;
    if (other_lexicon().count(w)) return PosTag::OTHER;
    if (verb_lexicon().count(w)) return PosTag::VERB;
    if (adj_lexicon().count(w)) return PosTag::ADJ;

    if (ends_with(w, "ly")) return PosTag::OTHER;  // adverbs are not a reported class
    if (ends_with(w, "ing") && w.size() > 5 && !noun_exception_ing().count(w)) return PosTag::VERB;
    if (ends_with(w, "ed") && w.size() > 4) return PosTag::VERB;
    if (ends_with(w, "izes") || ends_with(w, "ises") || ends_with(w, "ifies")) return PosTag::VERB;
    if (ends_with(w, "ize") || ends_with(w, "ise") || ends_with(w, "ify")) return PosTag::VERB;
    if (ends_with(w, "ous") || ends_with(w, "ful") || ends_with(w, "ive") ||
        ends_with(w, "less") || ends_with(w, "able") || ends_with(w, "ible") ||
        ends_with(w, "ic") || ends_with(w, "ical") || ends_with(w, "al") ||
        ends_with(w, "ant") || ends_with(w, "ent") || ends_with(w, "ish"))
        return PosTag::ADJ;
    return PosTag::NOUN;
}

}  // namespace

std::vector<PosTag> HeuristicPosTagger::tag(const std::vector<std::string>& tokens) const {
    std::vector<PosTag> tags;
    tags.reserve(tokens.size());
    for (const auto& t : tokens) tags.push_back(tag_word(t));
    return tags;
}

namespace {

struct AnnotationText {
    AnnotationCategory category;
    const std::string* text;
};

std::vector<AnnotationText> record_annotations(const AnnotationRecord& record) {
    std::vector<AnnotationText> out;
    out.push_back({AnnotationCategory::caption, &record.caption});
    for (const auto& [principle, entry] : record.poa) {
        if (!entry.analysis) continue;
        auto cat = static_cast<AnnotationCategory>(static_cast<int>(AnnotationCategory::poa_balance) +
                                                   static_cast<int>(principle));
        out.push_back({cat, &*entry.analysis});
    }
    return out;
}

}  // namespace

std::string_view category_name(AnnotationCategory c) {
    switch (c) {
        case AnnotationCategory::homogeneous: return "homogeneous";
        case AnnotationCategory::caption: return "caption";
        default:
            return principle_name(static_cast<Principle>(
                static_cast<int>(c) - static_cast<int>(AnnotationCategory::poa_balance)));
    }
}

RichnessDiversityReport richness_diversity(const std::vector<AnnotationRecord>& records,
                                           const PosTagger& tagger) {
    RichnessDiversityReport report;
    std::array<long, kCategoryCount> token_totals{};
    std::array<long, kCategoryCount> word_unique_totals{};
    std::array<std::array<long, kPosClassCount>, kCategoryCount> pos_totals{};
    std::array<std::array<long, kPosClassCount>, kCategoryCount> unique_totals{};

    for (const auto& record : records) {
        // Per-image unique token sets per (category, pos class) and overall.
        std::array<std::array<std::set<std::string>, kPosClassCount>, kCategoryCount> uniq;
        std::array<std::set<std::string>, kCategoryCount> word_uniq;
        std::array<bool, kCategoryCount> seen{};
        for (const auto& ann : record_annotations(record)) {
            std::vector<std::string> tokens = tokenize(*ann.text);
            std::vector<PosTag> tags = tagger.tag(tokens);
            for (AnnotationCategory cat : {ann.category, AnnotationCategory::homogeneous}) {
                size_t ci = static_cast<size_t>(cat);
                seen[ci] = true;
                report.categories[ci].annotations += 1;
                token_totals[ci] += static_cast<long>(tokens.size());
                for (size_t i = 0; i < tokens.size(); ++i) {
                    word_uniq[ci].insert(to_lower(tokens[i]));
                    for (int pc = 0; pc < kPosClassCount; ++pc) {
                        if (tags[i] == reported_pos_classes()[static_cast<size_t>(pc)]) {
                            pos_totals[ci][static_cast<size_t>(pc)] += 1;
                            uniq[ci][static_cast<size_t>(pc)].insert(to_lower(tokens[i]));
                        }
                    }
                }
            }
        }
        for (int ci = 0; ci < kCategoryCount; ++ci) {
            if (!seen[static_cast<size_t>(ci)]) continue;
            report.categories[static_cast<size_t>(ci)].images += 1;
            word_unique_totals[static_cast<size_t>(ci)] +=
                static_cast<long>(word_uniq[static_cast<size_t>(ci)].size());
            for (int pc = 0; pc < kPosClassCount; ++pc)
                unique_totals[static_cast<size_t>(ci)][static_cast<size_t>(pc)] +=
                    static_cast<long>(uniq[static_cast<size_t>(ci)][static_cast<size_t>(pc)].size());
        }
    }

    for (int ci = 0; ci < kCategoryCount; ++ci) {
        auto& cat = report.categories[static_cast<size_t>(ci)];
        if (cat.annotations == 0) continue;
        double n = static_cast<double>(cat.annotations);
        cat.richness_words = static_cast<double>(token_totals[static_cast<size_t>(ci)]) / n;
        cat.diversity_words = static_cast<double>(word_unique_totals[static_cast<size_t>(ci)]) / n;
        for (int pc = 0; pc < kPosClassCount; ++pc) {
            cat.richness_pos[static_cast<size_t>(pc)] =
                static_cast<double>(pos_totals[static_cast<size_t>(ci)][static_cast<size_t>(pc)]) / n;
            cat.diversity_pos[static_cast<size_t>(pc)] =
                static_cast<double>(unique_totals[static_cast<size_t>(ci)][static_cast<size_t>(pc)]) /
                n;
        }
    }
    return report;
}

std::vector<std::pair<std::string, long>> term_frequencies(
    const std::vector<AnnotationRecord>& records, Principle principle,
    const std::vector<std::string>& stop_list) {
    std::unordered_set<std::string> stops(stop_list.begin(), stop_list.end());
    std::string principle_lemma = lemmatize(principle_name(principle));
    std::unordered_map<std::string, long> counts;
    for (const auto& record : records) {
        auto it = record.poa.find(principle);
        if (it == record.poa.end() || !it->second.analysis) continue;
        for (const auto& token : tokenize(*it->second.analysis)) {
            std::string lower = to_lower(token);
            std::string lemma = lemmatize(token);
            if (stops.count(lower) || stops.count(lemma)) continue;
            if (lemma == principle_lemma || lower == to_lower(principle_name(principle))) continue;
            if (lemma == "composition" || lower == "composition") continue;
            if (lemma.empty()) continue;
            counts[lemma] += 1;
        }
    }
    std::vector<std::pair<std::string, long>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranked;
}

AnnotationTotals annotation_totals(const std::vector<AnnotationRecord>& records,
                                   bool include_analysisless) {
    AnnotationTotals totals;
    totals.records = static_cast<long>(records.size());
    long caption_words = 0;
    long poa_words = 0;
    long poa_with_text = 0;
    for (const auto& record : records) {
        caption_words += static_cast<long>(tokenize(record.caption).size());
        for (const auto& [principle, entry] : record.poa) {
            if (entry.analysis) {
                poa_words += static_cast<long>(tokenize(*entry.analysis).size());
                poa_with_text += 1;
                totals.poa_annotations += 1;
            } else if (include_analysisless) {
                totals.poa_annotations += 1;
            }
        }
    }
    totals.total_words = caption_words + poa_words;
    if (totals.records > 0)
        totals.avg_caption_words = static_cast<double>(caption_words) / totals.records;
    if (poa_with_text > 0) totals.avg_poa_words = static_cast<double>(poa_words) / poa_with_text;
    return totals;
}

}  // namespace poa
