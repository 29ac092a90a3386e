// poa: command-line entry point wiring dataset handling, corpus statistics,
// adapter training, sampling, and the judging/evaluation tournament.

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "poa/analytics.hpp"
#include "poa/annotation.hpp"
#include "poa/charts.hpp"
#include "poa/compart.hpp"
#include "poa/conditioning.hpp"
#include "poa/diffusion.hpp"
#include "poa/errors.hpp"
#include "poa/evaluate.hpp"
#include "poa/io.hpp"
#include "poa/runconfig.hpp"
#include "poa/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct CommandSettings {
    std::string validate_in;

    std::string stats_in, stats_out;
    bool stats_charts = false;

    std::string split_in, split_out;
    int split_test_size = 1000;
    uint64_t split_seed = 0;

    std::string ann_in, ann_out, ann_endpoint, ann_model = "art-analyst";
    double ann_rpm = 30.0;
    int ann_retries = 3;
    int ann_fanout = 4;

    std::string train_config, train_data, train_out;
    std::vector<std::string> train_sets;

    std::string sample_ckpt, sample_conditions, sample_out;
    int sample_steps = 50;
    double sample_cfg = 7.5;
    uint64_t sample_seed = 0;
    bool sample_images = false;

    std::string judge_conditions, judge_images, judge_endpoint, judge_ir_endpoint;
    std::string judge_out, judge_model = "art-judge";
    std::string judge_reference;
    double judge_rpm = 30.0;

    std::string eval_cards, eval_mode = "beta", eval_report;
    bool eval_include_content = false;

    std::vector<std::string> report_tallies;
    std::string report_out;
};

int cmd_validate(const CommandSettings& s) {
    auto records = poa::read_caj(s.validate_in);
    long soft = 0;
    for (const auto& r : records) {
        for (const auto& v : poa::validate_record(r)) {
            ++soft;
            std::cout << r.id << ": " << poa::principle_name(v.principle) << ": " << v.detail
                      << "\n";
        }
    }
    std::cout << records.size() << " records parsed, " << soft << " soft-rule violations\n";
    return 0;
}

int cmd_stats(const CommandSettings& s) {
    auto records = poa::read_caj(s.stats_in);
    fs::path out_dir(s.stats_out);

    poa::AnnotationTotals totals = poa::annotation_totals(records);
    poa::ProminenceBreakdown breakdown = poa::prominence_breakdown(records);
    poa::TopKAccuracy topk = poa::style_topk_accuracy(records);
    poa::HeuristicPosTagger tagger;
    poa::RichnessDiversityReport richness = poa::richness_diversity(records, tagger);

    ordered_json report;
    report["report"] = "poa-stats";
    report["version"] = 1;
    report["totals"] = {{"records", totals.records},
                        {"poa_annotations", totals.poa_annotations},
                        {"total_words", totals.total_words},
                        {"avg_caption_words", totals.avg_caption_words},
                        {"avg_poa_words", totals.avg_poa_words}};
    ordered_json jb = ordered_json::object();
    for (poa::Principle p : poa::canonical_principle_order()) {
        const auto& row = breakdown.rows[static_cast<size_t>(p)];
        jb[std::string(poa::principle_name(p))] = {{"total", row.total},
                                                   {"weak", row.by_level[0]},
                                                   {"mild", row.by_level[1]},
                                                   {"moderate", row.by_level[2]},
                                                   {"strong", row.by_level[3]}};
    }
    report["prominence_breakdown"] = std::move(jb);
    ordered_json jt;
    for (const auto& [k, v] : topk.overall) jt["top" + std::to_string(k)] = v;
    ordered_json per_style = ordered_json::object();
    for (const auto& [style, row] : topk.per_style)
        per_style[style] = {{"proportion", row.proportion},
                            {"top1", row.top1},
                            {"top2", row.top2},
                            {"top3", row.top3}};
    jt["per_style"] = std::move(per_style);
    report["style_topk"] = std::move(jt);
    ordered_json jr = ordered_json::object();
    for (int ci = 0; ci < poa::kCategoryCount; ++ci) {
        const auto& cat = richness.categories[static_cast<size_t>(ci)];
        ordered_json c;
        c["annotations"] = cat.annotations;
        c["richness_words"] = cat.richness_words;
        for (int pc = 0; pc < poa::kPosClassCount; ++pc) {
            std::string name(
                poa::pos_tag_name(poa::reported_pos_classes()[static_cast<size_t>(pc)]));
            c["richness_" + name] = cat.richness_pos[static_cast<size_t>(pc)];
            c["diversity_" + name] = cat.diversity_pos[static_cast<size_t>(pc)];
        }
        jr[std::string(poa::category_name(static_cast<poa::AnnotationCategory>(ci)))] =
            std::move(c);
    }
    report["richness_diversity"] = std::move(jr);
    ordered_json jf = ordered_json::object();
    for (poa::Principle p : poa::canonical_principle_order()) {
        auto terms = poa::term_frequencies(records, p);
        ordered_json arr = ordered_json::array();
        for (size_t i = 0; i < terms.size() && i < 25; ++i)
            arr.push_back({{"term", terms[i].first}, {"count", terms[i].second}});
        jf[std::string(poa::principle_name(p))] = std::move(arr);
    }
    report["term_frequencies"] = std::move(jf);

    poa::atomic_write(out_dir / "stats.json", report.dump(2) + "\n");

    if (s.stats_charts) {
        std::vector<std::string> rows;
        std::vector<std::vector<double>> level_values(4);
        for (poa::Principle p : poa::canonical_principle_order()) {
            const auto& row = breakdown.rows[static_cast<size_t>(p)];
            rows.push_back(std::string(poa::principle_label(p)));
            for (int l = 0; l < 4; ++l)
                level_values[static_cast<size_t>(l)].push_back(
                    static_cast<double>(row.by_level[static_cast<size_t>(l)]));
        }
        poa::atomic_write(out_dir / "prominence_breakdown.svg",
                          poa::stacked_bar_chart_svg("PoA prominence breakdown", rows,
                                                     {"Weak", "Mild", "Moderate", "Strong"},
                                                     level_values));
        for (poa::Principle p : poa::canonical_principle_order()) {
            auto terms = poa::term_frequencies(records, p);
            if (terms.empty()) continue;
            std::string name(poa::principle_name(p));
            poa::atomic_write(out_dir / ("wordcloud_" + name + ".svg"),
                              poa::word_cloud_svg("Top terms: " + name, terms));
        }
    }
    std::cout << "stats written to " << (out_dir / "stats.json").string() << "\n";
    return 0;
}

int cmd_split(const CommandSettings& s) {
    auto records = poa::read_caj(s.split_in);
    auto split = poa::split_dataset(records, static_cast<size_t>(s.split_test_size), s.split_seed);
    fs::path out_dir(s.split_out);
    poa::write_split(out_dir / "train.ids", out_dir / "test.ids", split);
    std::cout << "split " << split.train.size() << "/" << split.test.size() << " written to "
              << out_dir.string() << "\n";
    return 0;
}

int cmd_annotate(const CommandSettings& s) {
    auto lines = poa::read_lines(s.ann_in);
    std::vector<poa::AnnotateJob> jobs;
    for (size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        if (poa::trim(line).empty() || poa::trim(line)[0] == '#') continue;
        // images.list line: id<TAB>path[<TAB>artist[<TAB>true_style[<TAB>genre]]]
        std::vector<std::string> parts;
        size_t start = 0;
        while (true) {
            size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                parts.push_back(line.substr(start));
                break;
            }
            parts.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (parts.size() < 2)
            throw poa::Error(poa::ErrorKind::MalformedDocument,
                             s.ann_in + ":" + std::to_string(i + 1) + ": expected id<TAB>path");
        poa::AnnotateJob job;
        job.meta.id = parts[0];
        job.meta.image_ref = parts[1];
        job.meta.artist = parts.size() > 2 ? parts[2] : "unknown";
        job.meta.true_style = parts.size() > 3 ? parts[3] : "";
        if (parts.size() > 4 && !parts[4].empty()) job.meta.genre = parts[4];
        std::string bytes = poa::read_file(parts[1]);
        job.image.assign(bytes.begin(), bytes.end());
        std::string ext = fs::path(parts[1]).extension().string();
        job.media_type = ext == ".png" ? "image/png" : "image/jpeg";
        jobs.push_back(std::move(job));
    }

    auto limiter = std::make_shared<poa::RateLimiter>(s.ann_rpm);
    poa::HttpChatClient client(s.ann_endpoint, s.ann_model, limiter);
    poa::AnnotationPromptConfig cfg = poa::AnnotationPromptConfig::defaults();
    poa::RetryPolicy policy{s.ann_retries};
    auto result = poa::annotate_batch(client, jobs, cfg, policy, s.ann_fanout, s.ann_model);

    std::vector<poa::AnnotationRecord> records;
    std::string provenance;
    for (const auto& outcome : result.outcomes) {
        records.push_back(outcome.record);
        ordered_json p = {{"id", outcome.record.id},
                          {"model", outcome.model},
                          {"timestamp", outcome.timestamp},
                          {"attempts", outcome.attempts}};
        provenance += p.dump() + "\n";
    }
    poa::write_caj(s.ann_out, records);
    poa::atomic_write(s.ann_out + ".provenance.jsonl", provenance);
    for (const auto& [index, reason] : result.failures)
        std::cerr << "warning: job " << index << " failed: " << reason << "\n";
    std::cout << records.size() << " records annotated, " << result.failures.size()
              << " failures\n";
    return result.failures.empty() ? 0 : 3;
}

poa::RunConfig load_run_config(const std::string& config_path,
                               const std::vector<std::string>& overrides) {
    poa::RunConfig cfg =
        config_path.empty() ? poa::RunConfig{} : poa::RunConfig::from_file(config_path);
    for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw poa::Error(poa::ErrorKind::UsageError, "--set expects key=value, got " + kv);
        cfg.apply(poa::trim(kv.substr(0, eq)), poa::trim(kv.substr(eq + 1)));
    }
    return cfg;
}

int cmd_train(const CommandSettings& s) {
    poa::RunConfig cfg = load_run_config(s.train_config, s.train_sets);
    std::cout << "resolved run config:\n" << cfg.resolved();

    auto records = poa::read_caj(s.train_data);
    if (records.empty()) throw poa::Error(poa::ErrorKind::BadSize, "training data has no records");
    auto dataset = poa::dataset_from_records(records, cfg.denoiser);

    poa::NoiseSchedule schedule = cfg.make_schedule();
    poa::DenoiserParams unet = poa::init_denoiser(cfg.denoiser, poa::Rng(cfg.backbone_seed));
    poa::HashedTextEncoder encoder(cfg.encoder_dim, cfg.encoder_max_context);
    poa::AdapterParams adapter =
        poa::init_params(cfg.adapter, poa::Rng(cfg.seed).stream("adapter-init"));

    poa::TrainerConfig trainer;
    trainer.learning_rate = cfg.learning_rate;
    trainer.weight_decay = cfg.weight_decay;
    trainer.iterations = cfg.iterations;
    trainer.batch_size = cfg.batch_size;
    trainer.drop_policy = cfg.drop_policy;
    trainer.seed = cfg.seed;

    poa::TrainResult result = poa::train_adapter(unet, encoder, adapter, dataset, trainer, schedule);

    fs::path out_dir(s.train_out);
    ordered_json extra;
    extra["backbone_seed"] = cfg.backbone_seed;
    extra["encoder_dim"] = cfg.encoder_dim;
    extra["encoder_max_context"] = cfg.encoder_max_context;
    extra["schedule_steps"] = cfg.schedule_steps;
    extra["beta_start"] = cfg.beta_start;
    extra["beta_end"] = cfg.beta_end;
    extra["denoiser"] = {{"channels", cfg.denoiser.channels},
                         {"height", cfg.denoiser.height},
                         {"width", cfg.denoiser.width},
                         {"base_width", cfg.denoiser.base_width},
                         {"n_heads", cfg.denoiser.n_heads},
                         {"token_dim", cfg.denoiser.token_dim},
                         {"time_dim", cfg.denoiser.time_dim}};
    poa::save_adapter(out_dir / "adapter.ckpt", adapter, extra);
    poa::atomic_write(out_dir / "loss.csv", poa::loss_curve_csv(result.loss_curve));
    poa::atomic_write(out_dir / "run.cfg", cfg.resolved());

    double first = result.loss_curve.empty() ? 0.0 : result.loss_curve.front();
    double last = result.loss_curve.empty() ? 0.0 : result.loss_curve.back();
    std::cout << "trained " << trainer.iterations << " steps, loss " << first << " -> " << last
              << "\ncheckpoint: " << (out_dir / "adapter.ckpt").string() << "\n";
    return 0;
}

poa::DenoiserConfig denoiser_from_extra(const json& extra) {
    poa::DenoiserConfig d;
    const auto& jd = extra.at("denoiser");
    d.channels = jd.at("channels").get<int>();
    d.height = jd.at("height").get<int>();
    d.width = jd.at("width").get<int>();
    d.base_width = jd.at("base_width").get<int>();
    d.n_heads = jd.at("n_heads").get<int>();
    d.token_dim = jd.at("token_dim").get<int>();
    d.time_dim = jd.at("time_dim").get<int>();
    return d;
}

int cmd_sample(const CommandSettings& s) {
    auto [adapter, extra] = poa::load_adapter(s.sample_ckpt);
    poa::DenoiserConfig dconfig = denoiser_from_extra(extra);
    poa::DenoiserParams unet =
        poa::init_denoiser(dconfig, poa::Rng(extra.at("backbone_seed").get<uint64_t>()));
    poa::HashedTextEncoder encoder(extra.at("encoder_dim").get<int>(),
                                   extra.at("encoder_max_context").get<int>());
    poa::NoiseSchedule schedule = poa::NoiseSchedule::linear(
        extra.at("schedule_steps").get<int>(), extra.at("beta_start").get<double>(),
        extra.at("beta_end").get<double>());

    poa::SamplerConfig sampler;
    sampler.n_steps = s.sample_steps;
    sampler.guidance_scale = s.sample_cfg;
    sampler.validate(schedule);

    auto records = poa::read_caj(s.sample_conditions);
    fs::path out_dir(s.sample_out);
    for (const auto& record : records) {
        poa::ConditionSet cs = poa::condition_set_from_record(record);
        poa::Tensor3 latent =
            poa::ddim_sample(unet, adapter, encoder, cs, sampler, schedule, s.sample_seed);
        poa::write_tensor(out_dir / (record.id + ".pot"),
                          {static_cast<size_t>(latent.channels),
                           static_cast<size_t>(latent.height),
                           static_cast<size_t>(latent.width)},
                          latent.data);
        if (s.sample_images)
            poa::write_ppm(out_dir / (record.id + ".ppm"), latent.channels, latent.height,
                           latent.width, latent.data);
    }
    std::cout << records.size() << " latents written to " << out_dir.string() << "\n";
    return 0;
}

int cmd_judge(const CommandSettings& s) {
    auto records = poa::read_caj(s.judge_conditions);
    fs::path images_root(s.judge_images);

    std::vector<std::string> contestants;
    for (const auto& entry : fs::directory_iterator(images_root))
        if (entry.is_directory()) contestants.push_back(entry.path().filename().string());
    std::sort(contestants.begin(), contestants.end());
    if (contestants.empty())
        throw poa::Error(poa::ErrorKind::BadSize,
                         "no contestant directories under " + images_root.string());

    auto limiter = std::make_shared<poa::RateLimiter>(s.judge_rpm);
    poa::HttpChatClient judge_client(s.judge_endpoint, s.judge_model, limiter);
    std::unique_ptr<poa::HttpRewardScorer> reward;
    if (!s.judge_ir_endpoint.empty())
        reward = std::make_unique<poa::HttpRewardScorer>(s.judge_ir_endpoint, limiter);

    std::vector<poa::Scorecard> cards;
    for (const auto& record : records) {
        poa::JudgeInputs inputs;
        inputs.condition_id = record.id;
        inputs.conditions = poa::condition_set_from_record(record);
        if (inputs.conditions.poa.empty()) {
            poa::log_warn("skipping '" + record.id + "': no principles to judge");
            continue;
        }
        inputs.contestant_names = contestants;
        inputs.reference_name = s.judge_reference;
        for (const auto& name : contestants) {
            fs::path img;
            for (const char* ext : {".png", ".jpg", ".jpeg", ".ppm"}) {
                fs::path candidate = images_root / name / (record.id + ext);
                if (fs::exists(candidate)) {
                    img = candidate;
                    break;
                }
            }
            if (img.empty())
                throw poa::Error(poa::ErrorKind::IoError, "no image for contestant '" + name +
                                                              "' and id '" + record.id + "'");
            std::string bytes = poa::read_file(img);
            poa::ImagePart part;
            part.bytes.assign(bytes.begin(), bytes.end());
            part.media_type = img.extension() == ".png" ? "image/png" : "image/jpeg";
            inputs.images.push_back(std::move(part));
        }
        cards.push_back(poa::judge_one(judge_client, reward.get(), inputs, s.judge_model));
    }
    poa::write_scl(s.judge_out, cards);
    std::cout << cards.size() << " scorecards written to " << s.judge_out << "\n";
    return 0;
}

int cmd_evaluate(const CommandSettings& s) {
    auto cards = poa::read_scl(s.eval_cards);
    poa::AssessmentMode mode;
    if (s.eval_mode == "alpha")
        mode = poa::AssessmentMode::alpha;
    else if (s.eval_mode == "beta")
        mode = poa::AssessmentMode::beta;
    else
        throw poa::Error(poa::ErrorKind::UsageError, "--mode must be alpha or beta");

    poa::WinTally tally = poa::run_tournament(cards, mode, s.eval_include_content);
    fs::path out_dir(s.eval_report);
    poa::ReportFiles files = poa::emit_report({{s.eval_mode, tally}});
    poa::atomic_write(out_dir / "evaluation.json", files.json);
    poa::atomic_write(out_dir / "evaluation.csv", files.csv);
    for (const auto& [name, svg] : files.charts) poa::atomic_write(out_dir / name, svg);
    std::cout << "evaluation report written to " << out_dir.string() << "\n";
    return 0;
}

int cmd_report(const CommandSettings& s) {
    std::vector<std::pair<std::string, poa::WinTally>> tallies;
    for (const auto& path : s.report_tallies) {
        json doc = json::parse(poa::read_file(path));
        for (const auto& [label, jt] : doc.at("modes").items()) {
            poa::WinTally tally;
            tally.n_condition_sets = jt.at("n_condition_sets").get<int>();
            tally.roster = jt.at("roster").get<std::vector<std::string>>();
            for (const auto& [principle, cell] : jt.at("principle_level").items()) {
                poa::WinTally::Cell c;
                c.base = cell.at("base").get<long>();
                c.ties = cell.at("unresolved_ties").get<long>();
                for (const auto& [name, wins] : cell.at("wins").items())
                    c.wins[name] = wins.get<long>();
                tally.per_principle[principle] = std::move(c);
            }
            const auto& img = jt.at("image_level");
            tally.image_level.base = img.at("base").get<long>();
            tally.image_level.ties = img.at("unresolved_ties").get<long>();
            for (const auto& [name, wins] : img.at("wins").items())
                tally.image_level.wins[name] = wins.get<long>();
            tallies.emplace_back(label, std::move(tally));
        }
    }
    poa::ReportFiles files = poa::emit_report(tallies);
    fs::path out_dir(s.report_out);
    poa::atomic_write(out_dir / "evaluation.json", files.json);
    poa::atomic_write(out_dir / "evaluation.csv", files.csv);
    for (const auto& [name, svg] : files.charts) poa::atomic_write(out_dir / name, svg);
    std::cout << "combined report written to " << out_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Principles-of-art conditioned diffusion toolkit"};
    app.require_subcommand(1);
    CommandSettings s;

    auto* validate =
        app.add_subcommand("validate", "Parse a .caj dataset and report soft-rule violations");
    validate->add_option("--in", s.validate_in, "Input .caj file")->required();

    auto* stats = app.add_subcommand("stats", "Corpus statistics report");
    stats->add_option("--in", s.stats_in, "Input .caj file")->required();
    stats->add_option("--out", s.stats_out, "Output directory")->required();
    stats->add_flag("--charts", s.stats_charts, "Also emit SVG charts");

    auto* split = app.add_subcommand("split", "Deterministic train/test split");
    split->add_option("--in", s.split_in, "Input .caj file")->required();
    split->add_option("--out", s.split_out, "Output directory")->required();
    split->add_option("--test-size", s.split_test_size, "Test split size");
    split->add_option("--seed", s.split_seed, "Split seed");

    auto* annotate = app.add_subcommand("annotate", "Annotate images through a chat endpoint");
    annotate->add_option("--in", s.ann_in, "images.list file (id<TAB>path per line)")->required();
    annotate->add_option("--out", s.ann_out, "Output .caj file")->required();
    annotate->add_option("--endpoint", s.ann_endpoint, "Chat-completion endpoint URL")->required();
    annotate->add_option("--model", s.ann_model, "Model name");
    annotate->add_option("--rpm", s.ann_rpm, "Requests per minute");
    annotate->add_option("--retries", s.ann_retries, "Max attempts per image");
    annotate->add_option("--fanout", s.ann_fanout, "Concurrent in-flight requests");

    auto* train = app.add_subcommand("train", "Train the adapter on a frozen toy backbone");
    train->add_option("--config", s.train_config, "Run config file (key = value lines)");
    train->add_option("--data", s.train_data, "Training .caj file")->required();
    train->add_option("--out", s.train_out, "Checkpoint/output directory")->required();
    train->add_option("--set", s.train_sets, "Override config keys, key=value");

    auto* sample = app.add_subcommand("sample", "DDIM sampling from a trained checkpoint");
    sample->add_option("--ckpt", s.sample_ckpt, "Adapter checkpoint")->required();
    sample->add_option("--conditions", s.sample_conditions, "Condition sets (.caj)")->required();
    sample->add_option("--steps", s.sample_steps, "DDIM steps");
    sample->add_option("--cfg", s.sample_cfg, "Guidance scale");
    sample->add_option("--seed", s.sample_seed, "Sampling seed");
    sample->add_option("--out", s.sample_out, "Output directory")->required();
    sample->add_flag("--images", s.sample_images, "Also dump 8-bit previews");

    auto* judge = app.add_subcommand("judge", "Produce scorecards via a judge endpoint");
    judge->add_option("--conditions", s.judge_conditions, "Condition sets (.caj)")->required();
    judge->add_option("--images", s.judge_images, "Images root (one subdir per contestant)")
        ->required();
    judge->add_option("--endpoint", s.judge_endpoint, "Judge chat endpoint URL")->required();
    judge->add_option("--ir-endpoint", s.judge_ir_endpoint, "Reward-score endpoint URL");
    judge->add_option("--reference", s.judge_reference, "Contestant that is the original artwork");
    judge->add_option("--model", s.judge_model, "Judge model name");
    judge->add_option("--rpm", s.judge_rpm, "Requests per minute");
    judge->add_option("--out", s.judge_out, "Output .scl file")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Tournament over scorecards");
    evaluate->add_option("--cards", s.eval_cards, "Scorecards (.scl)")->required();
    evaluate->add_option("--mode", s.eval_mode, "alpha or beta");
    evaluate->add_flag("--include-content", s.eval_include_content,
                       "Count the content statement as a category");
    evaluate->add_option("--report", s.eval_report, "Report output directory")->required();

    auto* report = app.add_subcommand("report", "Merge evaluation reports and render charts");
    report->add_option("--tally", s.report_tallies, "evaluation.json files")->required();
    report->add_option("--out", s.report_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(s);
        if (app.got_subcommand(stats)) return cmd_stats(s);
        if (app.got_subcommand(split)) return cmd_split(s);
        if (app.got_subcommand(annotate)) return cmd_annotate(s);
        if (app.got_subcommand(train)) return cmd_train(s);
        if (app.got_subcommand(sample)) return cmd_sample(s);
        if (app.got_subcommand(judge)) return cmd_judge(s);
        if (app.got_subcommand(evaluate)) return cmd_evaluate(s);
        if (app.got_subcommand(report)) return cmd_report(s);
    } catch (const poa::Error& e) {
        std::cerr << "error[" << poa::error_kind_name(e.kind()) << "]: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
