#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "poa/compart.hpp"

namespace poa {

struct AnnotationPromptConfig {
    std::string poa_definitions;
    std::vector<std::string> style_vocabulary;
    std::string output_schema_stub;

    // Throws PromptIncomplete when definitions are empty or the vocabulary is
    // not 27 unique names.
    AnnotationPromptConfig(std::string definitions, std::vector<std::string> styles,
                           std::string schema_stub);

    static AnnotationPromptConfig defaults();
};

// Deterministic, byte-stable prompt: definitions, the analyst role and its
// three tasks, the style list verbatim, then the output schema stub.
std::string build_annotation_prompt(const AnnotationPromptConfig& cfg);

// Mirror of the reply schema before enum mapping.
struct RawAnnotation {
    std::string caption;
    std::vector<std::string> style;
    struct Entry {
        std::string prominence;
        std::optional<std::string> analysis;
    };
    std::map<std::string, Entry> poa;
};

// First well-formed object in the reply, fences and surrounding prose
// stripped. NoStructuredObject when none is found.
RawAnnotation parse_annotation_response(const std::string& reply);

// Scans text for the first balanced JSON object and parses it.
std::string extract_first_json_object(const std::string& text);

struct RecordMeta {
    std::string id;
    std::string image_ref;
    std::string artist;
    std::string true_style;
    std::optional<std::string> genre;
};

// Enum-maps a raw annotation into a validated record.
AnnotationRecord raw_to_record(const RawAnnotation& raw, const RecordMeta& meta);

struct ImagePart {
    std::vector<uint8_t> bytes;
    std::string media_type = "image/jpeg";
};

struct ChatRequest {
    std::string system;
    std::string user;
    std::vector<ImagePart> images;  // annotation requests carry exactly one
    std::string model = "art-analyst";
    double temperature = 0.0;
};

class ChatClient {
public:
    virtual ~ChatClient() = default;
    // Returns the assistant reply text; throws EndpointError on transport
    // failure.
    virtual std::string send(const ChatRequest& request) = 0;
};

// Token bucket limiter shared by every adapter that talks to one endpoint.
class RateLimiter {
public:
    explicit RateLimiter(double requests_per_minute);
    void acquire();

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

// Chat-completion HTTP adapter; images travel base64-encoded with their
// media type. Credentials come from the POA_API_KEY environment variable.
class HttpChatClient : public ChatClient {
public:
    HttpChatClient(std::string endpoint_url, std::string model,
                   std::shared_ptr<RateLimiter> limiter = nullptr);

    std::string send(const ChatRequest& request) override;

private:
    std::string url_;
    std::string model_;
    std::shared_ptr<RateLimiter> limiter_;
};

struct RetryPolicy {
    int max_retries = 3;  // maximum total attempts
};

struct AnnotationOutcome {
    AnnotationRecord record;
    std::string model;
    std::string timestamp;  // UTC, ISO-8601
    int attempts = 0;
};

// Sends the annotation prompt with one image and parses the reply into a
// record, retrying malformed replies up to the policy limit. Inputs are
// never mutated and no retry happens after a success.
AnnotationOutcome annotate_image(ChatClient& client, const std::vector<uint8_t>& image_bytes,
                                 const std::string& media_type, const AnnotationPromptConfig& cfg,
                                 const RetryPolicy& policy, const RecordMeta& meta,
                                 const std::string& model = "art-analyst");

struct AnnotateJob {
    RecordMeta meta;
    std::vector<uint8_t> image;
    std::string media_type = "image/jpeg";
};

struct AnnotateBatchResult {
    std::vector<AnnotationOutcome> outcomes;          // successes, input order
    std::vector<std::pair<size_t, std::string>> failures;  // (job index, reason)
};

// Bounded fan-out over jobs; the rate limiter inside the client is the only
// shared synchronized object.
AnnotateBatchResult annotate_batch(ChatClient& client, const std::vector<AnnotateJob>& jobs,
                                   const AnnotationPromptConfig& cfg, const RetryPolicy& policy,
                                   int fan_out = 4, const std::string& model = "art-analyst");

}  // namespace poa
