#pragma once

// Brute-force tallies of the corpus statistics, implemented independently of
// the library (plain nested loops and a separate tokenizer). The acceptance
// suite compares the production analytics against these.

#include <map>
#include <string>
#include <vector>

#include "poa/analytics.hpp"
#include "poa/compart.hpp"

namespace poa_oracle {

std::vector<std::string> tokenize(const std::string& text);

// principle index (0..9) -> level index (0..3) -> count
std::map<int, std::map<int, long>> prominence_counts(
    const std::vector<poa::AnnotationRecord>& records, bool include_analysisless);

struct TopkOracle {
    double overall_top1 = 0, overall_top2 = 0, overall_top3 = 0;
    std::map<std::string, std::array<double, 4>> per_style;  // proportion, t1, t2, t3
};
TopkOracle topk(const std::vector<poa::AnnotationRecord>& records);

struct RichnessCell {
    double richness_words = 0;
    double diversity_words = 0;
    std::map<std::string, double> richness_pos;
    std::map<std::string, double> diversity_pos;
};
// category name ("homogeneous", "caption", principle names) -> cell
std::map<std::string, RichnessCell> richness(const std::vector<poa::AnnotationRecord>& records,
                                             const poa::PosTagger& tagger);

std::vector<std::pair<std::string, long>> term_counts(
    const std::vector<poa::AnnotationRecord>& records, poa::Principle principle,
    const std::vector<std::string>& stop_list);

struct TotalsOracle {
    long records = 0, poa_annotations = 0, total_words = 0;
    double avg_caption_words = 0, avg_poa_words = 0;
};
TotalsOracle totals(const std::vector<poa::AnnotationRecord>& records, bool include_analysisless);

}  // namespace poa_oracle
