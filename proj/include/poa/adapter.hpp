#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "poa/conditioning.hpp"
#include "poa/rng.hpp"

namespace poa {

using Mat = Eigen::MatrixXd;

// Resampler adapter that maps encoder token features plus a diffusion
// timestep to a fixed-length sequence of condition tokens. Learned latent
// queries cross-attend to the projected text in every block; each branch is
// modulated by scale/shift/gate produced from the timestep embedding.
struct AdapterConfig {
    int n_blocks = 6;
    int n_latents = 64;
    int width = 64;
    int n_heads = 4;
    int text_dim = 64;   // encoder feature_dim
    int out_dim = 32;    // denoiser token dim
    int time_dim = 64;   // timestep embedding width

    void validate() const;

    bool operator==(const AdapterConfig&) const = default;
};

struct AdapterBlockParams {
    Mat wq, bq, wk, bk, wv, bv, wo, bo;
    Mat ffn_w1, ffn_b1, ffn_w2, ffn_b2;
    // Modulation producers, time_dim -> width each. Gate producers start at
    // zero so every block begins as the identity.
    Mat attn_shift_w, attn_shift_b, attn_scale_w, attn_scale_b, attn_gate_w, attn_gate_b;
    Mat ffn_shift_w, ffn_shift_b, ffn_scale_w, ffn_scale_b, ffn_gate_w, ffn_gate_b;
};

struct AdapterParams {
    AdapterConfig config;
    Mat latents;                 // n_latents x width
    Mat in_proj_w, in_proj_b;    // width x text_dim, width x 1
    std::vector<AdapterBlockParams> blocks;
    Mat out_proj_w, out_proj_b;  // out_dim x width, out_dim x 1
    Mat time_w1, time_b1, time_w2, time_b2;  // shared two-layer timestep MLP

    // Visits every tensor in a fixed order; the order defines checkpoint
    // layout, optimizer state pairing, and enumeration counts.
    template <typename F>
    void for_each(F&& f) {
        f("latents", latents);
        f("in_proj_w", in_proj_w);
        f("in_proj_b", in_proj_b);
        for (size_t i = 0; i < blocks.size(); ++i) {
            std::string p = "block" + std::to_string(i) + ".";
            AdapterBlockParams& b = blocks[i];
            f(p + "wq", b.wq); f(p + "bq", b.bq);
            f(p + "wk", b.wk); f(p + "bk", b.bk);
            f(p + "wv", b.wv); f(p + "bv", b.bv);
            f(p + "wo", b.wo); f(p + "bo", b.bo);
            f(p + "ffn_w1", b.ffn_w1); f(p + "ffn_b1", b.ffn_b1);
            f(p + "ffn_w2", b.ffn_w2); f(p + "ffn_b2", b.ffn_b2);
            f(p + "attn_shift_w", b.attn_shift_w); f(p + "attn_shift_b", b.attn_shift_b);
            f(p + "attn_scale_w", b.attn_scale_w); f(p + "attn_scale_b", b.attn_scale_b);
            f(p + "attn_gate_w", b.attn_gate_w); f(p + "attn_gate_b", b.attn_gate_b);
            f(p + "ffn_shift_w", b.ffn_shift_w); f(p + "ffn_shift_b", b.ffn_shift_b);
            f(p + "ffn_scale_w", b.ffn_scale_w); f(p + "ffn_scale_b", b.ffn_scale_b);
            f(p + "ffn_gate_w", b.ffn_gate_w); f(p + "ffn_gate_b", b.ffn_gate_b);
        }
        f("out_proj_w", out_proj_w);
        f("out_proj_b", out_proj_b);
        f("time_w1", time_w1); f("time_b1", time_b1);
        f("time_w2", time_w2); f("time_b2", time_b2);
    }

    template <typename F>
    void for_each(F&& f) const {
        const_cast<AdapterParams*>(this)->for_each(
            [&](const std::string& name, Mat& t) { f(name, static_cast<const Mat&>(t)); });
    }

    int64_t scalar_count() const;
    uint64_t checksum() const;
};

// ffn hidden width = kFfnExpansion * width
inline constexpr int kFfnExpansion = 4;

// Half sines then half cosines: [sin(t*f_0)..sin(t*f_{d/2-1}), cos(..)..].
Eigen::VectorXd timestep_sinusoid(int t, int dim);

// Sinusoid pushed through the adapter's two-layer perceptron.
Eigen::VectorXd timestep_embed(const AdapterParams& params, int t);

// Scaled-normal init for weights, zeros for biases and gate producers,
// standard normal for the latent queries. Deterministic per seed.
AdapterParams init_params(const AdapterConfig& config, Rng rng);

AdapterParams zeros_like(const AdapterConfig& config);

int64_t param_count(const AdapterConfig& config);

using ConditionTokens = Mat;  // n_latents x out_dim

ConditionTokens adapter_forward(const AdapterParams& params, const TokenFeatures& features, int t);

// Everything the backward pass needs, captured during the forward.
struct AdapterCache;

struct AdapterForwardResult {
    ConditionTokens output;
    std::shared_ptr<AdapterCache> cache;
};

AdapterForwardResult adapter_forward_cached(const AdapterParams& params,
                                            const TokenFeatures& features, int t);

// Exact reverse-mode gradients for every parameter. No gradient is produced
// for the text features; the encoder is frozen by contract.
AdapterParams adapter_backward(const AdapterParams& params, const AdapterCache& cache,
                               const Mat& upstream);

AdapterParams adapter_grad(const AdapterParams& params, const TokenFeatures& features, int t,
                           const Mat& upstream);

// Versioned binary checkpoint: JSON header (config + caller extras + tensor
// table) followed by raw float64 payload; save -> load is bit-exact.
void save_adapter(const std::filesystem::path& path, const AdapterParams& params,
                  const nlohmann::ordered_json& extra = nlohmann::ordered_json::object());
std::pair<AdapterParams, nlohmann::json> load_adapter(const std::filesystem::path& path);

}  // namespace poa
