#include "poa/conditioning.hpp"

#include <cmath>
#include <sstream>

#include "poa/errors.hpp"
#include "poa/io.hpp"

namespace poa {

ConditionSet condition_set_from_record(const AnnotationRecord& record) {
    ConditionSet cs;
    cs.caption = record.caption;
    cs.style = record.true_style;
    for (const auto& [principle, entry] : record.poa) {
        if (entry.analysis) cs.poa[principle] = *entry.analysis;
    }
    return cs;
}

std::string pack_template(const ConditionSet& cs) {
    static const std::string kNone = "None.";
    std::string out = "Prompt: ";
    out += cs.caption ? *cs.caption : kNone;
    out += " Style: ";
    out += cs.style ? *cs.style : kNone;
    for (Principle p : canonical_principle_order()) {
        out += ' ';
        out += principle_label(p);
        out += ": ";
        auto it = cs.poa.find(p);
        out += it != cs.poa.end() ? it->second : kNone;
    }
    return out;
}

void DropPolicy::validate() const {
    auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in01(p_caption) || !in01(p_each_poa) || !in01(p_drop_all_poa) || !in01(p_keep_all_poa))
        throw Error(ErrorKind::ConfigMismatch, "drop probabilities must lie in [0, 1]");
    if (p_drop_all_poa + p_keep_all_poa > 1.0)
        throw Error(ErrorKind::ConfigMismatch, "p_drop_all_poa + p_keep_all_poa must not exceed 1");
}

DropMask sample_drop_mask(const DropPolicy& policy, Rng& rng) {
    policy.validate();
    DropMask mask;
    mask.drop_caption = rng.bernoulli(policy.p_caption);
    double u = rng.uniform01();
    if (u < policy.p_drop_all_poa) {
        mask.mode = DropMode::drop_all;
        mask.drop_poa.fill(true);
    } else if (u < policy.p_drop_all_poa + policy.p_keep_all_poa) {
        mask.mode = DropMode::keep_all;
        mask.drop_poa.fill(false);
    } else {
        mask.mode = DropMode::independent;
        for (int i = 0; i < kPrincipleCount; ++i)
            mask.drop_poa[static_cast<size_t>(i)] = rng.bernoulli(policy.p_each_poa);
    }
    return mask;
}

ConditionSet apply_mask(const ConditionSet& cs, const DropMask& mask) {
    ConditionSet out;
    out.style = cs.style;  // never dropped
    if (!mask.drop_caption) out.caption = cs.caption;
    for (const auto& [principle, text] : cs.poa) {
        if (!mask.drop_poa[static_cast<size_t>(principle)]) out.poa[principle] = text;
    }
    return out;
}

HashedTextEncoder::HashedTextEncoder(int feature_dim, int max_context, uint64_t vocab_seed)
    : feature_dim_(feature_dim), max_context_(max_context), vocab_seed_(vocab_seed) {
    if (feature_dim < 2 || max_context < 1)
        throw Error(ErrorKind::ConfigMismatch, "encoder needs feature_dim >= 2 and max_context >= 1");
}

TokenFeatures HashedTextEncoder::encode(const std::string& text) const {
    std::vector<std::string> tokens;
    {
        std::istringstream ss(text);
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);
    }
    if (tokens.size() > static_cast<size_t>(max_context_)) {
        log_warn("encoder input of " + std::to_string(tokens.size()) +
                 " tokens truncated to max_context " + std::to_string(max_context_));
        tokens.resize(static_cast<size_t>(max_context_));
    }
    TokenFeatures out;
    out.features.resize(static_cast<Eigen::Index>(tokens.size()), feature_dim_);
    out.mask.assign(tokens.size(), 1);
    for (size_t pos = 0; pos < tokens.size(); ++pos) {
        Rng token_rng(Rng::mix(vocab_seed_ ^ Rng::fnv1a(tokens[pos])));
        for (int d = 0; d < feature_dim_; ++d)
            out.features(static_cast<Eigen::Index>(pos), d) = token_rng.normal();
        // Sinusoidal position features, added onto the content embedding.
        int half = feature_dim_ / 2;
        for (int k = 0; k < half; ++k) {
            double freq = std::pow(10000.0, -2.0 * k / feature_dim_);
            out.features(static_cast<Eigen::Index>(pos), k) += std::sin(pos * freq);
            out.features(static_cast<Eigen::Index>(pos), half + k) += std::cos(pos * freq);
        }
    }
    return out;
}

TokenFeatures encode_conditions(const ConditionSet& cs, const TextEncoder& encoder) {
    return encoder.encode(pack_template(cs));
}

}  // namespace poa
