#include "poa/annotation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <json.hpp>
#include <mutex>
#include <set>
#include <thread>

#include "poa/definitions.hpp"
#include "poa/errors.hpp"
#include "poa/io.hpp"
#include "poa/text.hpp"

namespace poa {

using nlohmann::json;
using nlohmann::ordered_json;

AnnotationPromptConfig::AnnotationPromptConfig(std::string definitions,
                                               std::vector<std::string> styles,
                                               std::string schema_stub)
    : poa_definitions(std::move(definitions)),
      style_vocabulary(std::move(styles)),
      output_schema_stub(std::move(schema_stub)) {
    if (poa_definitions.empty())
        throw Error(ErrorKind::PromptIncomplete, "PoA definitions block is empty");
    if (style_vocabulary.size() != 27)
        throw Error(ErrorKind::PromptIncomplete, "style vocabulary must list 27 names, got " +
                                                     std::to_string(style_vocabulary.size()));
    std::set<std::string> unique(style_vocabulary.begin(), style_vocabulary.end());
    if (unique.size() != style_vocabulary.size())
        throw Error(ErrorKind::PromptIncomplete, "style vocabulary contains duplicates");
    if (output_schema_stub.empty())
        throw Error(ErrorKind::PromptIncomplete, "output schema stub is empty");
}

AnnotationPromptConfig AnnotationPromptConfig::defaults() {
    static const char* kSchemaStub =
        "{\n"
        "  \"caption\": <caption>,\n"
        "  \"style\": [<style 1>, <style 2>, <style 3>],\n"
        "  \"PoA\": {\n"
        "    \"balance\": {\n"
        "      \"prominence\": <prominence>,\n"
        "      \"analysis\": <analysis>\n"
        "    },\n"
        "    ...\n"
        "  }\n"
        "}";
    return AnnotationPromptConfig(poa_definitions_block(), poa::style_vocabulary(), kSchemaStub);
}

std::string build_annotation_prompt(const AnnotationPromptConfig& cfg) {
    std::string styles;
    for (size_t i = 0; i < cfg.style_vocabulary.size(); ++i) {
        if (i) styles += ", ";
        styles += cfg.style_vocabulary[i];
    }
    std::string out = cfg.poa_definitions;
    out +=
        "\n\nNow act as an expert art analyst. Given an artwork image, please accomplish 3 "
        "tasks:\n\n"
        "1. Present a concise and objective caption about the artwork's contents and avoid any "
        "mention of the image being an artwork. Do not start with \"The\".\n"
        "2. Identify the primary style of the artwork strictly from the categories [" +
        styles +
        "]. Provide the top-3 most likely styles, ordered from most to least confident.\n"
        "3. Present a compositional study of the artwork according to the 10 PoA we defined. If "
        "a principle is present, indicate a prominence level on the scale [weak, mild, moderate, "
        "strong]. For weak, no analysis is needed. Otherwise, provide a concise and high-quality "
        "analysis on the locations in the composition where the principle is evident, the visual "
        "elements or EoA involved, how the principle is achieved and its intended effects. For "
        "analysis on balance principle, specify the balance type [symmetric, asymmetric, radial] "
        "present. For each analysis: the first sentence's subject must be the principle being "
        "analysed (e.g. 'Asymmetric balance is evident...'); refer to the artwork only as \"the "
        "composition\".\n\n"
        "Output in the following JSON format:\n";
    out += cfg.output_schema_stub;
    return out;
}

std::string extract_first_json_object(const std::string& text) {
    for (size_t start = text.find('{'); start != std::string::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (size_t i = start; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                --depth;
                if (depth == 0) {
                    std::string candidate = text.substr(start, i - start + 1);
                    if (json::accept(candidate)) return candidate;
                    break;  // balanced but invalid; try the next opening brace
                }
            }
        }
    }
    throw Error(ErrorKind::NoStructuredObject, "no structured object found in reply");
}

RawAnnotation parse_annotation_response(const std::string& reply) {
    json doc = json::parse(extract_first_json_object(reply));
    if (!doc.is_object()) throw Error(ErrorKind::NoStructuredObject, "reply is not an object");
    for (const auto& [k, v] : doc.items()) {
        if (k != "caption" && k != "style" && k != "PoA")
            throw Error(ErrorKind::SchemaViolation, "unknown reply key '" + k + "'");
    }
    if (!doc.contains("caption") || !doc["caption"].is_string())
        throw Error(ErrorKind::SchemaViolation, "reply needs a string 'caption'");
    if (!doc.contains("style") || !doc["style"].is_array())
        throw Error(ErrorKind::SchemaViolation, "reply needs a 'style' array");

    RawAnnotation raw;
    raw.caption = doc["caption"].get<std::string>();
    for (const auto& s : doc["style"]) {
        if (!s.is_string()) throw Error(ErrorKind::SchemaViolation, "style entries must be strings");
        raw.style.push_back(s.get<std::string>());
    }
    if (raw.style.size() != 3)
        throw Error(ErrorKind::SchemaViolation,
                    "reply must list exactly 3 styles, got " + std::to_string(raw.style.size()));
    if (doc.contains("PoA")) {
        if (!doc["PoA"].is_object())
            throw Error(ErrorKind::SchemaViolation, "'PoA' must be an object");
        for (const auto& [name, value] : doc["PoA"].items()) {
            if (!value.is_object() || !value.contains("prominence") ||
                !value["prominence"].is_string())
                throw Error(ErrorKind::SchemaViolation,
                            "PoA entry '" + name + "' needs a string prominence");
            RawAnnotation::Entry entry;
            entry.prominence = value["prominence"].get<std::string>();
            if (value.contains("analysis") && value["analysis"].is_string())
                entry.analysis = value["analysis"].get<std::string>();
            raw.poa[name] = std::move(entry);
        }
    }
    return raw;
}

AnnotationRecord raw_to_record(const RawAnnotation& raw, const RecordMeta& meta) {
    // Round through the on-disk schema so one validation path covers both
    // parsed files and live replies.
    ordered_json doc;
    doc["id"] = meta.id;
    doc["image_ref"] = meta.image_ref;
    doc["artist"] = meta.artist;
    doc["true_style"] = meta.true_style;
    if (meta.genre) doc["genre"] = *meta.genre;
    doc["caption"] = raw.caption;
    doc["style"] = raw.style;
    ordered_json poa = ordered_json::object();
    for (const auto& [name, entry] : raw.poa) {
        ordered_json e;
        e["prominence"] = entry.prominence;
        if (entry.analysis) e["analysis"] = *entry.analysis;
        poa[to_lower(trim(name))] = std::move(e);
    }
    doc["PoA"] = std::move(poa);
    return parse_record(doc.dump());
}

struct RateLimiter::Impl {
    std::mutex mu;
    double rpm;
    double tokens;
    std::chrono::steady_clock::time_point last;

    explicit Impl(double rpm_) : rpm(rpm_), tokens(rpm_ > 0 ? 1.0 : 0.0),
                                 last(std::chrono::steady_clock::now()) {}
};

RateLimiter::RateLimiter(double requests_per_minute)
    : impl_(std::make_shared<Impl>(requests_per_minute)) {}

void RateLimiter::acquire() {
    if (impl_->rpm <= 0) return;  // unlimited
    std::unique_lock<std::mutex> lock(impl_->mu);
    for (;;) {
        auto now = std::chrono::steady_clock::now();
        double elapsed = std::chrono::duration<double>(now - impl_->last).count();
        impl_->last = now;
        impl_->tokens = std::min(impl_->rpm, impl_->tokens + elapsed * impl_->rpm / 60.0);
        if (impl_->tokens >= 1.0) {
            impl_->tokens -= 1.0;
            return;
        }
        double wait_s = (1.0 - impl_->tokens) * 60.0 / impl_->rpm;
        lock.unlock();
        std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
        lock.lock();
    }
}

HttpChatClient::HttpChatClient(std::string endpoint_url, std::string model,
                               std::shared_ptr<RateLimiter> limiter)
    : url_(std::move(endpoint_url)), model_(std::move(model)), limiter_(std::move(limiter)) {}

}  // namespace poa

// httplib pulls in system headers; keep it out of the namespace.
#include <httplib.h>

namespace poa {

namespace {

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl parse_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw Error(ErrorKind::EndpointError, "endpoint URL needs a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string HttpChatClient::send(const ChatRequest& request) {
    if (limiter_) limiter_->acquire();

    ordered_json content = ordered_json::array();
    content.push_back({{"type", "text"}, {"text", request.user}});
    for (const auto& image : request.images) {
        std::string data_url = "data:" + image.media_type + ";base64," +
                               base64_encode(image.bytes.data(), image.bytes.size());
        content.push_back({{"type", "image_url"}, {"image_url", {{"url", data_url}}}});
    }

    ordered_json body;
    body["model"] = request.model.empty() ? model_ : request.model;
    body["temperature"] = request.temperature;
    ordered_json messages = ordered_json::array();
    if (!request.system.empty())
        messages.push_back({{"role", "system"}, {"content", request.system}});
    messages.push_back({{"role", "user"}, {"content", content}});
    body["messages"] = std::move(messages);

    ParsedUrl parsed = parse_url(url_);
    httplib::Client client(parsed.origin);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (const char* key = std::getenv("POA_API_KEY"))
        headers.emplace("Authorization", std::string("Bearer ") + key);

    auto res = client.Post(parsed.path, headers, body.dump(), "application/json");
    if (!res)
        throw Error(ErrorKind::EndpointError,
                    "no response from " + url_ + " (" + httplib::to_string(res.error()) + ")");
    if (res->status != 200)
        throw Error(ErrorKind::EndpointError,
                    "endpoint returned status " + std::to_string(res->status));
    try {
        json reply = json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::EndpointError, std::string("unexpected reply shape: ") + e.what());
    }
}

namespace {

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

AnnotationOutcome annotate_image(ChatClient& client, const std::vector<uint8_t>& image_bytes,
                                 const std::string& media_type, const AnnotationPromptConfig& cfg,
                                 const RetryPolicy& policy, const RecordMeta& meta,
                                 const std::string& model) {
    if (image_bytes.empty()) throw Error(ErrorKind::BadSize, "image payload is empty");
    if (policy.max_retries < 1) throw Error(ErrorKind::BadSize, "max_retries must be >= 1");

    ChatRequest request;
    request.user = build_annotation_prompt(cfg);
    request.images.push_back({image_bytes, media_type});
    request.model = model;
    request.temperature = 0.0;

    bool last_was_transport = false;
    std::string last_error;
    for (int attempt = 1; attempt <= policy.max_retries; ++attempt) {
        try {
            std::string reply = client.send(request);
            RawAnnotation raw = parse_annotation_response(reply);
            AnnotationOutcome outcome;
            outcome.record = raw_to_record(raw, meta);
            outcome.model = model;
            outcome.timestamp = utc_timestamp();
            outcome.attempts = attempt;
            return outcome;
        } catch (const Error& e) {
            last_error = e.what();
            last_was_transport = e.kind() == ErrorKind::EndpointError;
            if (e.kind() != ErrorKind::EndpointError && e.kind() != ErrorKind::NoStructuredObject &&
                e.kind() != ErrorKind::SchemaViolation && e.kind() != ErrorKind::MalformedDocument)
                throw;
        }
    }
    if (last_was_transport)
        throw Error(ErrorKind::EndpointError,
                    "endpoint failed after " + std::to_string(policy.max_retries) +
                        " attempts: " + last_error);
    throw Error(ErrorKind::ExhaustedRetries, "no parseable annotation after " +
                                                 std::to_string(policy.max_retries) +
                                                 " attempts: " + last_error);
}

AnnotateBatchResult annotate_batch(ChatClient& client, const std::vector<AnnotateJob>& jobs,
                                   const AnnotationPromptConfig& cfg, const RetryPolicy& policy,
                                   int fan_out, const std::string& model) {
    AnnotateBatchResult result;
    if (jobs.empty()) return result;
    fan_out = std::max(1, std::min<int>(fan_out, static_cast<int>(jobs.size())));

    std::vector<std::optional<AnnotationOutcome>> slots(jobs.size());
    std::vector<std::pair<size_t, std::string>> failures;
    std::mutex failures_mu;
    std::atomic<size_t> next{0};

    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                slots[i] = annotate_image(client, jobs[i].image, jobs[i].media_type, cfg, policy,
                                          jobs[i].meta, model);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failures_mu);
                failures.emplace_back(i, e.what());
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(fan_out));
    for (int i = 0; i < fan_out; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    for (auto& slot : slots)
        if (slot) result.outcomes.push_back(std::move(*slot));
    std::sort(failures.begin(), failures.end());
    result.failures = std::move(failures);
    return result;
}

}  // namespace poa
