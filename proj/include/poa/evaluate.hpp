#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poa/annotation.hpp"
#include "poa/conditioning.hpp"

namespace poa {

struct ContestantId {
    std::string name;
    bool is_reference = false;  // true only for the original artwork

    bool operator==(const ContestantId&) const = default;
};

// One condition set's judge table: Likert scores per statement plus reward
// scores per principle and overall, per contestant.
struct Scorecard {
    std::string condition_id;
    std::vector<std::string> statement_types;  // "content" then present principles, canonical order

    struct Entry {
        std::map<std::string, int> gpt;     // statement -> Likert score, 1..7
        std::map<std::string, double> ir;   // principle -> reward score
        double ir_overall = 0.0;
    };
    std::vector<std::pair<ContestantId, Entry>> contestants;

    std::vector<std::string> principle_statements() const;
};

enum class AssessmentMode : int { alpha = 0, beta };

// Judge prompt: definitions, the evaluation statements (content first, then
// present principles in canonical order), and the Likert instructions with a
// reply stub sized for n_images.
std::string build_judge_prompt(const ConditionSet& cs, int n_images);

std::vector<std::string> judge_statement_types(const ConditionSet& cs);

// Parses the judge reply into one score map per image. Every entry must
// cover exactly the prompt's statement types with integers in [1, 7].
std::vector<std::map<std::string, int>> parse_judge_response(
    const std::string& reply, int n_images, const std::vector<std::string>& statement_types);

// Reward-model scoring prompts: caption + analysis for one principle; the
// caption followed by all analyses in canonical order for the overall score.
std::string ir_prompt_principle(const std::string& caption, const std::string& principle_text);
std::string ir_prompt_overall(const ConditionSet& cs);

// Winner by Likert argmax; ties fall back to the reward score within the
// tied set; exact double ties award nobody.
std::optional<ContestantId> principle_winner(const Scorecard& card, const std::string& principle,
                                             const std::vector<ContestantId>& contestants);

// Winner by most principle wins; count ties fall back to the overall reward
// score within the tied set.
std::optional<ContestantId> image_winner(const Scorecard& card,
                                         const std::vector<ContestantId>& contestants,
                                         bool include_content = false);

struct WinTally {
    int n_condition_sets = 0;
    AssessmentMode mode = AssessmentMode::alpha;
    std::vector<std::string> roster;  // contestant names after mode filtering

    struct Cell {
        std::map<std::string, long> wins;  // contestant -> win count
        long ties = 0;                     // unresolved, excluded from the denominator
        long base = 0;                     // cards in which this row was contested

        double percent(const std::string& name) const {
            long denom = base - ties;
            if (denom <= 0) return 0.0;
            auto it = wins.find(name);
            return it == wins.end() ? 0.0 : 100.0 * static_cast<double>(it->second) / denom;
        }
    };
    std::map<std::string, Cell> per_principle;
    Cell image_level;
};

// Aggregates principle- and image-level wins across cards. Alpha excludes
// the reference contestant; beta requires exactly one.
WinTally run_tournament(const std::vector<Scorecard>& cards, AssessmentMode mode,
                        bool include_content = false);

// Machine-readable report (JSON + CSV table) plus one bar chart per tally.
struct ReportFiles {
    std::string json;
    std::string csv;
    std::vector<std::pair<std::string, std::string>> charts;  // (filename, svg)
};

ReportFiles emit_report(const std::vector<std::pair<std::string, WinTally>>& tallies);

// Scorecard lines: versioned line-delimited records (.scl).
std::string write_scorecard(const Scorecard& card);
Scorecard parse_scorecard(const std::string& line);
std::vector<Scorecard> read_scl(const std::filesystem::path& path);
void write_scl(const std::filesystem::path& path, const std::vector<Scorecard>& cards);

// Reward-model scoring interface: one real-valued score per image for a
// given text prompt. The HTTP adapter posts {"prompt", "images": [b64...]}
// and expects {"scores": [...]}.
class RewardScorer {
public:
    virtual ~RewardScorer() = default;
    virtual std::vector<double> score(const std::vector<ImagePart>& images,
                                      const std::string& prompt) = 0;
};

class HttpRewardScorer : public RewardScorer {
public:
    HttpRewardScorer(std::string endpoint_url, std::shared_ptr<RateLimiter> limiter = nullptr);
    std::vector<double> score(const std::vector<ImagePart>& images,
                              const std::string& prompt) override;

private:
    std::string url_;
    std::shared_ptr<RateLimiter> limiter_;
};

struct JudgeInputs {
    std::string condition_id;
    ConditionSet conditions;
    std::vector<std::string> contestant_names;  // roster order == image order
    std::string reference_name;                 // empty when no original artwork competes
    std::vector<ImagePart> images;              // one per contestant
};

// One full scorecard: Likert scores from the judge endpoint, reward scores
// per principle and overall when a scorer is supplied.
Scorecard judge_one(ChatClient& judge, RewardScorer* reward, const JudgeInputs& inputs,
                    const std::string& model = "art-judge");

}  // namespace poa
