#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <string>

#include "poa/compart.hpp"
#include "poa/rng.hpp"

namespace poa {

// The generation-time conditioning bundle. Style is a first-class component
// that can be absent here, but drop masks can never remove it.
struct ConditionSet {
    std::optional<std::string> caption;
    std::optional<std::string> style;
    std::map<Principle, std::string> poa;

    bool operator==(const ConditionSet&) const = default;
};

// Conditioning pulled out of an annotation record: caption, true style, and
// every analysis-bearing principle entry.
ConditionSet condition_set_from_record(const AnnotationRecord& record);

// Packs the bundle into the fixed 12-field prompt:
//   Prompt: V Style: V Balance: V ... Pattern: V
// Absent components render as "None." so the encoder always sees the full
// field grid in canonical order.
std::string pack_template(const ConditionSet& cs);

struct DropPolicy {
    double p_caption = 0.5;
    double p_each_poa = 0.5;
    double p_drop_all_poa = 0.1;
    double p_keep_all_poa = 0.1;

    void validate() const;
};

enum class DropMode : int { drop_all = 0, keep_all, independent };

// Style has no slot here on purpose: it is never droppable.
struct DropMask {
    bool drop_caption = false;
    std::array<bool, kPrincipleCount> drop_poa{};
    DropMode mode = DropMode::independent;
};

// Two-stage draw: first the PoA mode (drop_all / keep_all / independent),
// then i.i.d. per-principle flags in independent mode. The caption flag is
// drawn independently in every mode.
DropMask sample_drop_mask(const DropPolicy& policy, Rng& rng);

ConditionSet apply_mask(const ConditionSet& cs, const DropMask& mask);

struct TokenFeatures {
    Eigen::MatrixXd features;       // sequence x feature_dim
    std::vector<uint8_t> mask;      // 1 = real token, 0 = padding

    Eigen::Index sequence() const { return features.rows(); }
    Eigen::Index feature_dim() const { return features.cols(); }
};

class TextEncoder {
public:
    virtual ~TextEncoder() = default;
    virtual TokenFeatures encode(const std::string& text) const = 0;
    virtual int max_context() const = 0;
    virtual int feature_dim() const = 0;
};

// Deterministic stand-in for a large text encoder: per-token embeddings
// seeded by a hash of the token plus sinusoidal position features. Any real
// encoder can be plugged in behind the TextEncoder interface.
class HashedTextEncoder : public TextEncoder {
public:
    HashedTextEncoder(int feature_dim = 64, int max_context = 512, uint64_t vocab_seed = 0);

    TokenFeatures encode(const std::string& text) const override;
    int max_context() const override { return max_context_; }
    int feature_dim() const override { return feature_dim_; }
    uint64_t vocab_seed() const { return vocab_seed_; }

private:
    int feature_dim_;
    int max_context_;
    uint64_t vocab_seed_;
};

// encoder.encode(pack_template(cs)), truncating over-long sequences from the
// tail with a warning. The template leads with Prompt and Style, so those
// fields survive truncation.
TokenFeatures encode_conditions(const ConditionSet& cs, const TextEncoder& encoder);

}  // namespace poa
