#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "poa/adapter.hpp"
#include "poa/conditioning.hpp"
#include "poa/rng.hpp"

namespace poa {

struct NoiseSchedule {
    int T = 1000;
    Eigen::VectorXd betas;           // length T, each in (0, 1)
    Eigen::VectorXd alphas_cumprod;  // strictly decreasing cumulative product of (1 - beta)

    static NoiseSchedule linear(int T = 1000, double beta_start = 1e-4, double beta_end = 0.02);
    void validate() const;
};

// Channel-major (c, h, w) tensor backed by a flat vector.
struct Tensor3 {
    int channels = 0, height = 0, width = 0;
    Eigen::VectorXd data;

    static Tensor3 zeros(int c, int h, int w) {
        return {c, h, w, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c) * h * w)};
    }
    double& at(int c, int y, int x) { return data[(c * height + y) * width + x]; }
    double at(int c, int y, int x) const { return data[(c * height + y) * width + x]; }
    Eigen::Index size() const { return data.size(); }
    bool same_shape(const Tensor3& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }
};

struct CrossAttentionWeights {
    Mat wq, wk, wv;  // projection matrices; rows define the attention dim d
};

// Softmax(Q K^T / sqrt(d)) V with Q = Wq z, K = Wk y, V = Wv y, applied
// row-per-token. Rows of the attention matrix sum to 1.
Mat cross_attention(const Mat& z_tokens, const Mat& y_tokens, const CrossAttentionWeights& w);

// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps
Tensor3 forward_noise(const Tensor3& x0, int t, const Tensor3& eps, const NoiseSchedule& schedule);

struct DenoiserConfig {
    int channels = 4, height = 8, width = 8;  // latent shape
    int base_width = 32;                      // channels at full resolution; doubled when downsampled
    int n_heads = 4;
    int token_dim = 32;  // must equal the adapter out_dim
    int time_dim = 32;

    void validate() const;
    bool operator==(const DenoiserConfig&) const = default;
};

// Frozen toy U-Net: two resolutions, residual blocks, one cross-attention
// per resolution, global input->output skip.
struct DenoiserParams {
    DenoiserConfig config;
    Mat time_w1, time_b1, time_w2, time_b2;
    Mat conv_in_k, conv_in_b;
    Mat res1_c1_k, res1_c1_b, res1_tp_w, res1_tp_b, res1_c2_k, res1_c2_b;
    Mat attn1_wq, attn1_bq, attn1_wk, attn1_bk, attn1_wv, attn1_bv, attn1_wo, attn1_bo;
    Mat down_w, down_b;
    Mat res2_c1_k, res2_c1_b, res2_tp_w, res2_tp_b, res2_c2_k, res2_c2_b;
    Mat attn2_wq, attn2_bq, attn2_wk, attn2_bk, attn2_wv, attn2_bv, attn2_wo, attn2_bo;
    Mat up_w, up_b;
    Mat res3_c1_k, res3_c1_b, res3_tp_w, res3_tp_b, res3_c2_k, res3_c2_b;
    Mat conv_out_k, conv_out_b;

    template <typename F>
    void for_each(F&& f) {
        f("time_w1", time_w1); f("time_b1", time_b1);
        f("time_w2", time_w2); f("time_b2", time_b2);
        f("conv_in_k", conv_in_k); f("conv_in_b", conv_in_b);
        f("res1_c1_k", res1_c1_k); f("res1_c1_b", res1_c1_b);
        f("res1_tp_w", res1_tp_w); f("res1_tp_b", res1_tp_b);
        f("res1_c2_k", res1_c2_k); f("res1_c2_b", res1_c2_b);
        f("attn1_wq", attn1_wq); f("attn1_bq", attn1_bq);
        f("attn1_wk", attn1_wk); f("attn1_bk", attn1_bk);
        f("attn1_wv", attn1_wv); f("attn1_bv", attn1_bv);
        f("attn1_wo", attn1_wo); f("attn1_bo", attn1_bo);
        f("down_w", down_w); f("down_b", down_b);
        f("res2_c1_k", res2_c1_k); f("res2_c1_b", res2_c1_b);
        f("res2_tp_w", res2_tp_w); f("res2_tp_b", res2_tp_b);
        f("res2_c2_k", res2_c2_k); f("res2_c2_b", res2_c2_b);
        f("attn2_wq", attn2_wq); f("attn2_bq", attn2_bq);
        f("attn2_wk", attn2_wk); f("attn2_bk", attn2_bk);
        f("attn2_wv", attn2_wv); f("attn2_bv", attn2_bv);
        f("attn2_wo", attn2_wo); f("attn2_bo", attn2_bo);
        f("up_w", up_w); f("up_b", up_b);
        f("res3_c1_k", res3_c1_k); f("res3_c1_b", res3_c1_b);
        f("res3_tp_w", res3_tp_w); f("res3_tp_b", res3_tp_b);
        f("res3_c2_k", res3_c2_k); f("res3_c2_b", res3_c2_b);
        f("conv_out_k", conv_out_k); f("conv_out_b", conv_out_b);
    }
    template <typename F>
    void for_each(F&& f) const {
        const_cast<DenoiserParams*>(this)->for_each(
            [&](const std::string& name, Mat& t) { f(name, static_cast<const Mat&>(t)); });
    }

    uint64_t checksum() const;
};

DenoiserParams init_denoiser(const DenoiserConfig& config, Rng rng);

Tensor3 denoise(const DenoiserParams& unet, const Tensor3& x_t, int t, const Mat& cond);

struct DenoiserCache;

std::pair<Tensor3, std::shared_ptr<DenoiserCache>> denoise_cached(const DenoiserParams& unet,
                                                                  const Tensor3& x_t, int t,
                                                                  const Mat& cond);

// Gradient of a scalar loss wrt the condition tokens, given its gradient wrt
// the denoiser output. Backbone weights stay frozen; only the activation path
// into the condition tokens is differentiated.
Mat denoise_backward_cond(const DenoiserParams& unet, const DenoiserCache& cache,
                          const Tensor3& d_out);

// eps = eps_uncond + s (eps_cond - eps_uncond)
Tensor3 cfg_combine(const Tensor3& eps_cond, const Tensor3& eps_uncond, double s);

struct SamplerConfig {
    int n_steps = 50;
    double guidance_scale = 7.5;
    double eta = 0.0;
    // When true the unconditional branch keeps the style; default renders the
    // all-"None." template.
    bool uncond_keep_style = false;

    void validate(const NoiseSchedule& schedule) const;
};

// Uniform-stride subset of size n, descending from T-1 with the final entry
// at t=0 (the closing update targets abar = 1).
std::vector<int> ddim_timesteps(int T, int n_steps);

// One DDIM update from alpha_t to alpha_prev; eta > 0 mixes in fresh noise.
Tensor3 ddim_update(const Tensor3& x_t, const Tensor3& eps_hat, double alpha_t,
                    double alpha_prev, double eta, Rng& noise_rng);

using EpsModel = std::function<Tensor3(const Tensor3& x_t, int t)>;

// Sampler core over an already-guided eps model; the seed fixes the prior
// draw (and the eta-noise stream).
Tensor3 ddim_sample_with_model(const EpsModel& model, const DenoiserConfig& shape,
                               const SamplerConfig& sampler, const NoiseSchedule& schedule,
                               uint64_t seed);

// Full conditional sampler: templated prompt -> encoder -> adapter(t) ->
// cross-attention conditions, with classifier-free guidance against the
// all-"None." prompt.
Tensor3 ddim_sample(const DenoiserParams& unet, const AdapterParams& adapter,
                    const TextEncoder& encoder, const ConditionSet& cs,
                    const SamplerConfig& sampler, const NoiseSchedule& schedule, uint64_t seed);

struct TrainerConfig {
    double learning_rate = 1e-3;  // desk-scale default; paper-scale runs use 1e-5
    double weight_decay = 0.01;
    int iterations = 2000;
    int batch_size = 4;
    DropPolicy drop_policy;
    uint64_t seed = 0;

    void validate() const;
};

struct TrainItem {
    Tensor3 latent;
    ConditionSet conditions;
};

struct TrainResult {
    std::vector<double> loss_curve;  // one mean-squared-error value per step
};

// AdamW (decoupled weight decay) restricted to the adapter; backbone and
// encoder are read-only throughout.
TrainResult train_adapter(const DenoiserParams& unet, const TextEncoder& encoder,
                          AdapterParams& adapter, const std::vector<TrainItem>& dataset,
                          const TrainerConfig& trainer, const NoiseSchedule& schedule);

std::string loss_curve_csv(const std::vector<double>& losses);

}  // namespace poa
