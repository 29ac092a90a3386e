#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "poa/compart.hpp"
#include "poa/text.hpp"

namespace poa {

struct ProminenceBreakdown {
    struct Row {
        long total = 0;
        std::array<long, 4> by_level{};  // weak, mild, moderate, strong
    };
    std::array<Row, kPrincipleCount> rows{};

    long grand_total() const {
        long n = 0;
        for (const auto& r : rows) n += r.total;
        return n;
    }
};

// Counts every (principle, prominence) occurrence. `include_analysisless`
// keeps entries that carry no analysis text (weak entries may omit it); the
// corpus-wide totals reconcile with the per-principle chart when it is on.
ProminenceBreakdown prominence_breakdown(const std::vector<AnnotationRecord>& records,
                                         bool include_analysisless = true);

struct TopKAccuracy {
    std::map<int, double> overall;  // percent, keyed by k
    struct Row {
        double proportion = 0.0;  // percent of corpus with this true style
        double top1 = 0.0, top2 = 0.0, top3 = 0.0;
        long count = 0;
    };
    std::map<std::string, Row> per_style;
};

// Top-k hit iff the true style appears among the first k predictions.
TopKAccuracy style_topk_accuracy(const std::vector<AnnotationRecord>& records,
                                 const std::vector<int>& ks = {1, 2, 3});

enum class PosTag : int { NOUN = 0, PRON, ADJ, ADP, VERB, OTHER };

constexpr int kPosClassCount = 5;  // OTHER is not a reported class
const std::array<PosTag, kPosClassCount>& reported_pos_classes();
std::string_view pos_tag_name(PosTag tag);

class PosTagger {
public:
    virtual ~PosTagger() = default;
    // Length-preserving: one coarse tag per token.
    virtual std::vector<PosTag> tag(const std::vector<std::string>& tokens) const = 0;
};

// Bundled lexicon + suffix heuristics; unknown open-class words default to
// NOUN. An external tagger can be plugged in behind PosTagger when the exact
// figures of a specific toolchain are wanted.
class HeuristicPosTagger : public PosTagger {
public:
    std::vector<PosTag> tag(const std::vector<std::string>& tokens) const override;
};

// Annotation categories: captions and the ten analyses separately, plus a
// homogeneous view where all of them count as interchangeable annotations.
enum class AnnotationCategory : int {
    homogeneous = 0,
    caption,
    poa_balance,
    poa_harmony,
    poa_variety,
    poa_unity,
    poa_contrast,
    poa_emphasis,
    poa_proportion,
    poa_movement,
    poa_rhythm,
    poa_pattern,
};

constexpr int kCategoryCount = 12;
std::string_view category_name(AnnotationCategory c);

struct RichnessDiversityReport {
    struct CategoryStats {
        long annotations = 0;  // annotations with text in this category
        long images = 0;       // images contributing at least one
        double richness_words = 0.0;
        double diversity_words = 0.0;
        std::array<double, kPosClassCount> richness_pos{};
        std::array<double, kPosClassCount> diversity_pos{};
    };
    std::array<CategoryStats, kCategoryCount> categories{};

    const CategoryStats& at(AnnotationCategory c) const {
        return categories[static_cast<size_t>(c)];
    }
};

// Richness: tokens (total or per PoS class) averaged over individual
// annotations. Diversity: unique lowercased tokens per PoS class counted per
// image, summed, then divided by the category's annotation count — for
// single-annotation categories this is exactly the per-image average, and it
// keeps diversity <= richness in every cell.
RichnessDiversityReport richness_diversity(const std::vector<AnnotationRecord>& records,
                                           const PosTagger& tagger);

// Ranked (term, count) list over one principle's analyses: lemmatized,
// stopworded, with the principle's own name and "composition" excluded.
std::vector<std::pair<std::string, long>> term_frequencies(
    const std::vector<AnnotationRecord>& records, Principle principle,
    const std::vector<std::string>& stop_list = default_stopwords());

struct AnnotationTotals {
    long records = 0;
    long poa_annotations = 0;
    long total_words = 0;  // caption words + analysis words
    double avg_caption_words = 0.0;
    double avg_poa_words = 0.0;  // averaged over entries that carry text
};

AnnotationTotals annotation_totals(const std::vector<AnnotationRecord>& records,
                                   bool include_analysisless = true);

}  // namespace poa
