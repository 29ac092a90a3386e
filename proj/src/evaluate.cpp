#include "poa/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>
#include <sstream>

#include "poa/annotation.hpp"
#include "poa/charts.hpp"
#include "poa/definitions.hpp"
#include "poa/errors.hpp"
#include "poa/io.hpp"

namespace poa {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string> Scorecard::principle_statements() const {
    std::vector<std::string> out;
    for (const auto& s : statement_types)
        if (s != "content") out.push_back(s);
    return out;
}

std::vector<std::string> judge_statement_types(const ConditionSet& cs) {
    std::vector<std::string> types = {"content"};
    for (Principle p : canonical_principle_order())
        if (cs.poa.count(p)) types.push_back(std::string(principle_name(p)));
    return types;
}

std::string build_judge_prompt(const ConditionSet& cs, int n_images) {
    if (!cs.caption || cs.poa.empty())
        throw Error(ErrorKind::EmptyConditions,
                    "judge prompt needs a caption and at least one principle");
    if (n_images < 1) throw Error(ErrorKind::BadSize, "n_images must be >= 1");

    std::string out = poa_definitions_block();
    out +=
        "\n\nEVALUATION STATEMENTS\n\n"
        "The following lines are evaluation statements specifying image content and PoA "
        "analysis. Each line is in the format of <statement type>: <statement>.\n";
    out += "content: " + *cs.caption + "\n";
    for (Principle p : canonical_principle_order()) {
        auto it = cs.poa.find(p);
        if (it == cs.poa.end()) continue;
        out += std::string(principle_name(p)) + ": " + it->second + "\n";
    }
    out +=
        "\nEVALUATION INSTRUCTIONS\n\n"
        "Now act as an expert art analyst based on the 10 PoA we defined. For every image "
        "provided, you are to score how well each of the evaluation statements is represented "
        "in the image. Scoring is done on the seven-point Likert Scale (1 = Poor representation, "
        "7 = Excellent representation). Output a list in the sequence of provided images where "
        "each item reports the scores for the corresponding image. The scores for a particular "
        "image is captured by a dictionary of <statement type>: <score> key-value pairs. Do not "
        "report any statement types not in the evaluation statements. Output in strict JSON "
        "format like the following example:\n{\n  \"results\": [\n";
    std::vector<std::string> types = judge_statement_types(cs);
    for (int i = 0; i < n_images; ++i) {
        out += "    {\n";
        for (size_t j = 0; j < types.size(); ++j) {
            out += "      \"" + types[j] + "\": <score>";
            if (j + 1 < types.size()) out += ",";
            out += "\n";
        }
        out += i + 1 < n_images ? "    },\n" : "    }\n";
    }
    out += "  ]\n}";
    return out;
}

std::vector<std::map<std::string, int>> parse_judge_response(
    const std::string& reply, int n_images, const std::vector<std::string>& statement_types) {
    json doc;
    try {
        doc = json::parse(extract_first_json_object(reply));
    } catch (const Error&) {
        throw;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::NoStructuredObject, e.what());
    }
    if (!doc.is_object() || !doc.contains("results") || !doc["results"].is_array())
        throw Error(ErrorKind::NoStructuredObject, "reply lacks a results list");
    const auto& results = doc["results"];
    if (static_cast<int>(results.size()) != n_images)
        throw Error(ErrorKind::WrongArity, "expected " + std::to_string(n_images) +
                                               " result entries, got " +
                                               std::to_string(results.size()));
    std::set<std::string> allowed(statement_types.begin(), statement_types.end());
    std::vector<std::map<std::string, int>> out;
    for (const auto& entry : results) {
        if (!entry.is_object())
            throw Error(ErrorKind::NoStructuredObject, "result entries must be objects");
        std::map<std::string, int> scores;
        for (const auto& [key, value] : entry.items()) {
            if (!allowed.count(key))
                throw Error(ErrorKind::UnknownStatement, "statement '" + key + "' was not evaluated");
            if (!value.is_number_integer())
                throw Error(ErrorKind::ScoreOutOfRange, "score for '" + key + "' is not an integer");
            int score = value.get<int>();
            if (score < 1 || score > 7)
                throw Error(ErrorKind::ScoreOutOfRange,
                            "score " + std::to_string(score) + " outside [1, 7]");
            scores[key] = score;
        }
        for (const auto& type : statement_types) {
            if (!scores.count(type))
                throw Error(ErrorKind::MissingStatement, "statement '" + type + "' missing");
        }
        out.push_back(std::move(scores));
    }
    return out;
}

std::string ir_prompt_principle(const std::string& caption, const std::string& principle_text) {
    return caption + " " + principle_text;
}

std::string ir_prompt_overall(const ConditionSet& cs) {
    std::string out = cs.caption.value_or("");
    for (Principle p : canonical_principle_order()) {
        auto it = cs.poa.find(p);
        if (it == cs.poa.end()) continue;
        out += " " + it->second;
    }
    return out;
}

namespace {

const Scorecard::Entry& entry_for(const Scorecard& card, const ContestantId& id) {
    for (const auto& [cid, entry] : card.contestants) {
        if (cid.name == id.name) return entry;
    }
    throw Error(ErrorKind::MissingScores, "contestant '" + id.name + "' not on the card");
}

}  // namespace

std::optional<ContestantId> principle_winner(const Scorecard& card, const std::string& principle,
                                             const std::vector<ContestantId>& contestants) {
    if (contestants.empty()) throw Error(ErrorKind::MissingScores, "no contestants supplied");
    int best_gpt = 0;
    for (const auto& id : contestants) {
        const auto& entry = entry_for(card, id);
        auto it = entry.gpt.find(principle);
        if (it == entry.gpt.end())
            throw Error(ErrorKind::MissingScores,
                        "no Likert score for '" + principle + "' from '" + id.name + "'");
        best_gpt = std::max(best_gpt, it->second);
    }
    std::vector<ContestantId> tied;
    for (const auto& id : contestants) {
        if (entry_for(card, id).gpt.at(principle) == best_gpt) tied.push_back(id);
    }
    if (tied.size() == 1) return tied.front();

    // Likert tie: compare reward scores within the tied set only.
    double best_ir = -std::numeric_limits<double>::infinity();
    for (const auto& id : tied) {
        const auto& entry = entry_for(card, id);
        auto it = entry.ir.find(principle);
        if (it == entry.ir.end())
            throw Error(ErrorKind::MissingScores,
                        "no reward score for '" + principle + "' from '" + id.name + "'");
        best_ir = std::max(best_ir, it->second);
    }
    std::vector<ContestantId> ir_tied;
    for (const auto& id : tied) {
        if (entry_for(card, id).ir.at(principle) == best_ir) ir_tied.push_back(id);
    }
    if (ir_tied.size() == 1) return ir_tied.front();
    return std::nullopt;  // exact double tie
}

std::optional<ContestantId> image_winner(const Scorecard& card,
                                         const std::vector<ContestantId>& contestants,
                                         bool include_content) {
    std::vector<std::string> rows = card.principle_statements();
    if (include_content &&
        std::find(card.statement_types.begin(), card.statement_types.end(), "content") !=
            card.statement_types.end())
        rows.insert(rows.begin(), "content");
    if (rows.empty()) throw Error(ErrorKind::MissingScores, "card has no scored statements");

    std::map<std::string, long> counts;
    for (const auto& id : contestants) counts[id.name] = 0;
    for (const auto& row : rows) {
        auto winner = principle_winner(card, row, contestants);
        if (winner) counts[winner->name] += 1;
    }
    long best = -1;
    for (const auto& [name, count] : counts) best = std::max(best, count);
    std::vector<ContestantId> tied;
    for (const auto& id : contestants)
        if (counts[id.name] == best) tied.push_back(id);
    if (tied.size() == 1) return tied.front();

    double best_ir = -std::numeric_limits<double>::infinity();
    for (const auto& id : tied) best_ir = std::max(best_ir, entry_for(card, id).ir_overall);
    std::vector<ContestantId> ir_tied;
    for (const auto& id : tied)
        if (entry_for(card, id).ir_overall == best_ir) ir_tied.push_back(id);
    if (ir_tied.size() == 1) return ir_tied.front();
    return std::nullopt;
}

WinTally run_tournament(const std::vector<Scorecard>& cards, AssessmentMode mode,
                        bool include_content) {
    WinTally tally;
    tally.mode = mode;
    tally.n_condition_sets = static_cast<int>(cards.size());
    if (cards.empty()) return tally;

    // Roster consistency across cards.
    std::vector<ContestantId> roster;
    for (const auto& [id, entry] : cards.front().contestants) roster.push_back(id);
    for (const auto& card : cards) {
        if (card.contestants.size() != roster.size())
            throw Error(ErrorKind::RosterMismatch, "cards disagree on the contestant roster");
        for (size_t i = 0; i < roster.size(); ++i) {
            if (!(card.contestants[i].first == roster[i]))
                throw Error(ErrorKind::RosterMismatch, "cards disagree on the contestant roster");
        }
    }
    int n_reference = 0;
    for (const auto& id : roster) n_reference += id.is_reference ? 1 : 0;
    if (n_reference > 1)
        throw Error(ErrorKind::RosterMismatch, "at most one reference contestant is allowed");
    if (mode == AssessmentMode::beta && n_reference == 0)
        throw Error(ErrorKind::MissingReference, "beta assessment needs the reference contestant");

    std::vector<ContestantId> active;
    for (const auto& id : roster) {
        if (mode == AssessmentMode::alpha && id.is_reference) continue;
        active.push_back(id);
    }
    if (active.empty()) throw Error(ErrorKind::RosterMismatch, "no contestants left after filtering");
    for (const auto& id : active) tally.roster.push_back(id.name);

    for (const auto& card : cards) {
        for (const auto& principle : card.principle_statements()) {
            auto& cell = tally.per_principle[principle];
            cell.base += 1;
            auto winner = principle_winner(card, principle, active);
            if (winner)
                cell.wins[winner->name] += 1;
            else
                cell.ties += 1;
        }
        tally.image_level.base += 1;
        auto winner = image_winner(card, active, include_content);
        if (winner)
            tally.image_level.wins[winner->name] += 1;
        else
            tally.image_level.ties += 1;
    }
    return tally;
}

namespace {

double round1(double v) {
    // Half-even rounding to one decimal.
    double scaled = v * 10.0;
    double floor_v = std::floor(scaled);
    double frac = scaled - floor_v;
    double out;
    if (std::abs(frac - 0.5) < 1e-9) {
        out = (static_cast<long long>(floor_v) % 2 == 0) ? floor_v : floor_v + 1.0;
    } else {
        out = std::round(scaled);
    }
    return out / 10.0;
}

ordered_json cell_to_json(const WinTally::Cell& cell, const std::vector<std::string>& roster) {
    ordered_json j;
    j["base"] = cell.base;
    j["unresolved_ties"] = cell.ties;
    ordered_json wins = ordered_json::object();
    ordered_json percents = ordered_json::object();
    for (const auto& name : roster) {
        auto it = cell.wins.find(name);
        wins[name] = it == cell.wins.end() ? 0 : it->second;
        percents[name] = round1(cell.percent(name));
    }
    j["wins"] = std::move(wins);
    j["win_percent"] = std::move(percents);
    return j;
}

}  // namespace

ReportFiles emit_report(const std::vector<std::pair<std::string, WinTally>>& tallies) {
    ReportFiles files;
    ordered_json root;
    root["report"] = "poa-evaluation";
    root["version"] = 1;
    ordered_json modes = ordered_json::object();

    std::ostringstream csv;
    csv << "mode,level,contestant,wins,base,unresolved_ties,win_percent\n";

    for (const auto& [label, tally] : tallies) {
        ordered_json jt;
        jt["n_condition_sets"] = tally.n_condition_sets;
        jt["roster"] = tally.roster;
        ordered_json principles = ordered_json::object();
        for (Principle p : canonical_principle_order()) {
            auto it = tally.per_principle.find(std::string(principle_name(p)));
            if (it == tally.per_principle.end()) continue;
            principles[std::string(principle_name(p))] = cell_to_json(it->second, tally.roster);
        }
        jt["principle_level"] = std::move(principles);
        jt["image_level"] = cell_to_json(tally.image_level, tally.roster);
        modes[label] = std::move(jt);

        auto emit_rows = [&](const std::string& level, const WinTally::Cell& cell) {
            for (const auto& name : tally.roster) {
                auto it = cell.wins.find(name);
                long wins = it == cell.wins.end() ? 0 : it->second;
                csv << label << "," << level << "," << name << "," << wins << "," << cell.base
                    << "," << cell.ties << "," << round1(cell.percent(name)) << "\n";
            }
        };
        for (const auto& [principle, cell] : tally.per_principle) emit_rows(principle, cell);
        emit_rows("image", tally.image_level);

        // One grouped bar chart per tally, principles in canonical order.
        std::vector<std::string> groups;
        std::vector<std::vector<double>> values(tally.roster.size());
        for (Principle p : canonical_principle_order()) {
            auto it = tally.per_principle.find(std::string(principle_name(p)));
            if (it == tally.per_principle.end()) continue;
            groups.push_back(std::string(principle_label(p)));
            for (size_t s = 0; s < tally.roster.size(); ++s)
                values[s].push_back(it->second.percent(tally.roster[s]));
        }
        groups.push_back("Image");
        for (size_t s = 0; s < tally.roster.size(); ++s)
            values[s].push_back(tally.image_level.percent(tally.roster[s]));
        files.charts.emplace_back(
            "wins_" + label + ".svg",
            grouped_bar_chart_svg("Win percentages (" + label + ")", groups, tally.roster, values));
    }
    root["modes"] = std::move(modes);
    files.json = root.dump(2) + "\n";
    files.csv = csv.str();
    return files;
}

std::string write_scorecard(const Scorecard& card) {
    ordered_json doc;
    doc["v"] = 1;
    doc["id"] = card.condition_id;
    doc["statements"] = card.statement_types;
    ordered_json contestants = ordered_json::array();
    for (const auto& [id, entry] : card.contestants) {
        ordered_json c;
        c["name"] = id.name;
        c["reference"] = id.is_reference;
        ordered_json gpt = ordered_json::object();
        for (const auto& type : card.statement_types) {
            auto it = entry.gpt.find(type);
            if (it != entry.gpt.end()) gpt[type] = it->second;
        }
        c["gpt"] = std::move(gpt);
        ordered_json ir = ordered_json::object();
        for (const auto& type : card.statement_types) {
            auto it = entry.ir.find(type);
            if (it != entry.ir.end()) ir[type] = it->second;
        }
        c["ir"] = std::move(ir);
        c["ir_overall"] = entry.ir_overall;
        contestants.push_back(std::move(c));
    }
    doc["contestants"] = std::move(contestants);
    return doc.dump();
}

Scorecard parse_scorecard(const std::string& line) {
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedDocument, e.what());
    }
    if (doc.value("v", 0) != 1)
        throw Error(ErrorKind::SchemaViolation, "unsupported scorecard version");
    Scorecard card;
    card.condition_id = doc.at("id").get<std::string>();
    card.statement_types = doc.at("statements").get<std::vector<std::string>>();
    for (const auto& c : doc.at("contestants")) {
        ContestantId id;
        id.name = c.at("name").get<std::string>();
        id.is_reference = c.value("reference", false);
        Scorecard::Entry entry;
        for (const auto& [k, v] : c.at("gpt").items()) entry.gpt[k] = v.get<int>();
        for (const auto& [k, v] : c.at("ir").items()) entry.ir[k] = v.get<double>();
        entry.ir_overall = c.at("ir_overall").get<double>();
        card.contestants.emplace_back(std::move(id), std::move(entry));
    }
    return card;
}

std::vector<Scorecard> read_scl(const std::filesystem::path& path) {
    std::vector<Scorecard> cards;
    auto lines = read_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        try {
            cards.push_back(parse_scorecard(lines[i]));
        } catch (const Error& e) {
            throw Error(e.kind(), path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return cards;
}

void write_scl(const std::filesystem::path& path, const std::vector<Scorecard>& cards) {
    std::string content;
    for (const auto& card : cards) {
        content += write_scorecard(card);
        content += '\n';
    }
    atomic_write(path, content);
}

Scorecard judge_one(ChatClient& judge, RewardScorer* reward, const JudgeInputs& inputs,
                    const std::string& model) {
    if (inputs.contestant_names.size() != inputs.images.size())
        throw Error(ErrorKind::BadSize, "one image per contestant is required");
    const int n_images = static_cast<int>(inputs.images.size());
    std::vector<std::string> types = judge_statement_types(inputs.conditions);

    ChatRequest request;
    request.user = build_judge_prompt(inputs.conditions, n_images);
    request.images = inputs.images;
    request.model = model;
    request.temperature = 0.0;
    std::string reply = judge.send(request);
    auto scores = parse_judge_response(reply, n_images, types);

    Scorecard card;
    card.condition_id = inputs.condition_id;
    card.statement_types = types;
    card.contestants.resize(inputs.contestant_names.size());
    for (size_t i = 0; i < inputs.contestant_names.size(); ++i) {
        card.contestants[i].first.name = inputs.contestant_names[i];
        card.contestants[i].first.is_reference =
            !inputs.reference_name.empty() && inputs.contestant_names[i] == inputs.reference_name;
        card.contestants[i].second.gpt = scores[i];
    }

    if (reward) {
        const std::string caption = inputs.conditions.caption.value_or("");
        for (Principle p : canonical_principle_order()) {
            auto it = inputs.conditions.poa.find(p);
            if (it == inputs.conditions.poa.end()) continue;
            auto values = reward->score(inputs.images, ir_prompt_principle(caption, it->second));
            if (values.size() != inputs.images.size())
                throw Error(ErrorKind::WrongArity, "reward scorer returned wrong arity");
            for (size_t i = 0; i < values.size(); ++i)
                card.contestants[i].second.ir[std::string(principle_name(p))] = values[i];
        }
        auto overall = reward->score(inputs.images, ir_prompt_overall(inputs.conditions));
        if (overall.size() != inputs.images.size())
            throw Error(ErrorKind::WrongArity, "reward scorer returned wrong arity");
        for (size_t i = 0; i < overall.size(); ++i)
            card.contestants[i].second.ir_overall = overall[i];
    }
    return card;
}

}  // namespace poa

#include <httplib.h>

namespace poa {

HttpRewardScorer::HttpRewardScorer(std::string endpoint_url, std::shared_ptr<RateLimiter> limiter)
    : url_(std::move(endpoint_url)), limiter_(std::move(limiter)) {}

std::vector<double> HttpRewardScorer::score(const std::vector<ImagePart>& images,
                                            const std::string& prompt) {
    if (limiter_) limiter_->acquire();
    ordered_json body;
    body["prompt"] = prompt;
    ordered_json imgs = ordered_json::array();
    for (const auto& image : images)
        imgs.push_back(base64_encode(image.bytes.data(), image.bytes.size()));
    body["images"] = std::move(imgs);

    auto scheme_end = url_.find("://");
    if (scheme_end == std::string::npos)
        throw Error(ErrorKind::EndpointError, "reward endpoint URL needs a scheme: " + url_);
    auto path_start = url_.find('/', scheme_end + 3);
    std::string origin = path_start == std::string::npos ? url_ : url_.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url_.substr(path_start);

    httplib::Client client(origin);
    client.set_read_timeout(120, 0);
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res)
        throw Error(ErrorKind::EndpointError,
                    "no response from " + url_ + " (" + httplib::to_string(res.error()) + ")");
    if (res->status != 200)
        throw Error(ErrorKind::EndpointError,
                    "reward endpoint returned status " + std::to_string(res->status));
    try {
        json reply = json::parse(res->body);
        return reply.at("scores").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::EndpointError, std::string("unexpected reward reply: ") + e.what());
    }
}

}  // namespace poa
