#include "poa/diffusion.hpp"

#include <cmath>
#include <sstream>

#include "poa/errors.hpp"
#include "poa/io.hpp"

namespace poa {

NoiseSchedule NoiseSchedule::linear(int T, double beta_start, double beta_end) {
    if (T < 1) throw Error(ErrorKind::ConfigMismatch, "schedule needs T >= 1");
    NoiseSchedule s;
    s.T = T;
    s.betas.resize(T);
    s.alphas_cumprod.resize(T);
    double acc = 1.0;
    for (int t = 0; t < T; ++t) {
        double beta = T == 1 ? beta_start
                             : beta_start + (beta_end - beta_start) * t / static_cast<double>(T - 1);
        s.betas[t] = beta;
        acc *= 1.0 - beta;
        s.alphas_cumprod[t] = acc;
    }
    s.validate();
    return s;
}

void NoiseSchedule::validate() const {
    if (betas.size() != T || alphas_cumprod.size() != T)
        throw Error(ErrorKind::ConfigMismatch, "schedule vectors must have length T");
    double acc = 1.0;
    for (int t = 0; t < T; ++t) {
        if (!(betas[t] > 0.0 && betas[t] < 1.0))
            throw Error(ErrorKind::ConfigMismatch, "betas must lie in (0, 1)");
        acc *= 1.0 - betas[t];
        if (std::abs(acc - alphas_cumprod[t]) > 1e-12)
            throw Error(ErrorKind::ConfigMismatch, "alphas_cumprod disagrees with betas");
        if (t > 0 && !(alphas_cumprod[t] < alphas_cumprod[t - 1]))
            throw Error(ErrorKind::ConfigMismatch, "alphas_cumprod must be strictly decreasing");
    }
}

namespace {

double silu(double x) {
    double s = 1.0 / (1.0 + std::exp(-x));
    return x * s;
}

double silu_grad(double x) {
    double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 + x * (1.0 - s));
}

Mat softmax_rows(const Mat& scores) {
    Mat probs(scores.rows(), scores.cols());
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        double mx = scores.row(i).maxCoeff();
        Eigen::ArrayXd e = (scores.row(i).array() - mx).exp();
        probs.row(i) = (e / e.sum()).matrix();
    }
    return probs;
}

Mat linear(const Mat& x, const Mat& w, const Mat& b) {
    return (x * w.transpose()).rowwise() + b.col(0).transpose();
}

Eigen::VectorXd linear_vec(const Eigen::VectorXd& x, const Mat& w, const Mat& b) {
    return w * x + b.col(0);
}

}  // namespace

Mat cross_attention(const Mat& z_tokens, const Mat& y_tokens, const CrossAttentionWeights& w) {
    if (w.wq.cols() != z_tokens.cols() || w.wk.cols() != y_tokens.cols() ||
        w.wv.cols() != y_tokens.cols() || w.wq.rows() != w.wk.rows())
        throw Error(ErrorKind::ShapeMismatch, "cross_attention projection dims are inconsistent");
    Mat q = z_tokens * w.wq.transpose();
    Mat k = y_tokens * w.wk.transpose();
    Mat v = y_tokens * w.wv.transpose();
    double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
    return softmax_rows(q * k.transpose() * scale) * v;
}

Tensor3 forward_noise(const Tensor3& x0, int t, const Tensor3& eps, const NoiseSchedule& schedule) {
    if (t < 0 || t >= schedule.T)
        throw Error(ErrorKind::ConfigMismatch, "t outside [0, T)");
    if (!x0.same_shape(eps)) throw Error(ErrorKind::ShapeMismatch, "x0/eps shape mismatch");
    double abar = schedule.alphas_cumprod[t];
    Tensor3 out = x0;
    out.data = std::sqrt(abar) * x0.data + std::sqrt(1.0 - abar) * eps.data;
    return out;
}

void DenoiserConfig::validate() const {
    if (channels < 1 || height < 2 || width < 2 || base_width < 1 || n_heads < 1 ||
        token_dim < 1 || time_dim < 2)
        throw Error(ErrorKind::ConfigMismatch, "denoiser dims must be positive");
    if (height % 2 != 0 || width % 2 != 0)
        throw Error(ErrorKind::ConfigMismatch, "latent height/width must be even");
    if (base_width % n_heads != 0)
        throw Error(ErrorKind::ConfigMismatch, "base_width must be divisible by n_heads");
    if (time_dim % 2 != 0) throw Error(ErrorKind::ConfigMismatch, "time_dim must be even");
}

namespace {

void shape_denoiser(DenoiserParams& p) {
    const DenoiserConfig& c = p.config;
    const int d0 = c.base_width;
    const int d1 = 2 * c.base_width;
    const int td = c.time_dim;
    auto conv = [](Mat& k, Mat& b, int out, int in) {
        k.resize(out, in * 9);
        b.resize(out, 1);
    };
    auto lin = [](Mat& w, Mat& b, int out, int in) {
        w.resize(out, in);
        b.resize(out, 1);
    };
    lin(p.time_w1, p.time_b1, td, td);
    lin(p.time_w2, p.time_b2, td, td);
    conv(p.conv_in_k, p.conv_in_b, d0, c.channels);
    conv(p.res1_c1_k, p.res1_c1_b, d0, d0);
    lin(p.res1_tp_w, p.res1_tp_b, d0, td);
    conv(p.res1_c2_k, p.res1_c2_b, d0, d0);
    lin(p.attn1_wq, p.attn1_bq, d0, d0);
    lin(p.attn1_wk, p.attn1_bk, d0, c.token_dim);
    lin(p.attn1_wv, p.attn1_bv, d0, c.token_dim);
    lin(p.attn1_wo, p.attn1_bo, d0, d0);
    lin(p.down_w, p.down_b, d1, d0);
    conv(p.res2_c1_k, p.res2_c1_b, d1, d1);
    lin(p.res2_tp_w, p.res2_tp_b, d1, td);
    conv(p.res2_c2_k, p.res2_c2_b, d1, d1);
    lin(p.attn2_wq, p.attn2_bq, d1, d1);
    lin(p.attn2_wk, p.attn2_bk, d1, c.token_dim);
    lin(p.attn2_wv, p.attn2_bv, d1, c.token_dim);
    lin(p.attn2_wo, p.attn2_bo, d1, d1);
    lin(p.up_w, p.up_b, d0, d1);
    conv(p.res3_c1_k, p.res3_c1_b, d0, d0);
    lin(p.res3_tp_w, p.res3_tp_b, d0, td);
    conv(p.res3_c2_k, p.res3_c2_b, d0, d0);
    conv(p.conv_out_k, p.conv_out_b, c.channels, d0);
}

}  // namespace

uint64_t DenoiserParams::checksum() const {
    uint64_t h = 0xcbf29ce484222325ull;
    for_each([&](const std::string&, const Mat& t) {
        uint64_t ch = checksum_matrix(t);
        h ^= ch;
        h *= 0x100000001b3ull;
    });
    return h;
}

DenoiserParams init_denoiser(const DenoiserConfig& config, Rng rng) {
    config.validate();
    DenoiserParams p;
    p.config = config;
    shape_denoiser(p);
    p.for_each([&](const std::string& name, Mat& t) {
        if (name.ends_with("_b") || name.ends_with("b1") || name.ends_with("b2") ||
            name.ends_with("bq") || name.ends_with("bk") || name.ends_with("bv") ||
            name.ends_with("bo")) {
            t.setZero();
        } else {
            double scale = std::sqrt(2.0 / static_cast<double>(t.cols()));
            for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.normal() * scale;
        }
    });
    return p;
}

namespace {

// 3x3 same-padding convolution; kernels are (out_ch, in_ch * 9) with the
// 3x3 window flattened row-major.
Tensor3 conv3x3(const Tensor3& in, const Mat& k, const Mat& b) {
    const int out_ch = static_cast<int>(k.rows());
    Tensor3 out = Tensor3::zeros(out_ch, in.height, in.width);
    for (int o = 0; o < out_ch; ++o) {
        for (int y = 0; y < in.height; ++y) {
            for (int x = 0; x < in.width; ++x) {
                double acc = b(o, 0);
                for (int c = 0; c < in.channels; ++c) {
                    for (int dy = -1; dy <= 1; ++dy) {
                        int yy = y + dy;
                        if (yy < 0 || yy >= in.height) continue;
                        for (int dx = -1; dx <= 1; ++dx) {
                            int xx = x + dx;
                            if (xx < 0 || xx >= in.width) continue;
                            acc += k(o, c * 9 + (dy + 1) * 3 + (dx + 1)) * in.at(c, yy, xx);
                        }
                    }
                }
                out.at(o, y, x) = acc;
            }
        }
    }
    return out;
}

// Gradient wrt the convolution input (weights are frozen).
Tensor3 conv3x3_backward_input(const Tensor3& d_out, const Mat& k, int in_channels) {
    Tensor3 d_in = Tensor3::zeros(in_channels, d_out.height, d_out.width);
    const int out_ch = static_cast<int>(k.rows());
    for (int o = 0; o < out_ch; ++o) {
        for (int y = 0; y < d_out.height; ++y) {
            for (int x = 0; x < d_out.width; ++x) {
                double g = d_out.at(o, y, x);
                if (g == 0.0) continue;
                for (int c = 0; c < in_channels; ++c) {
                    for (int dy = -1; dy <= 1; ++dy) {
                        int yy = y + dy;
                        if (yy < 0 || yy >= d_out.height) continue;
                        for (int dx = -1; dx <= 1; ++dx) {
                            int xx = x + dx;
                            if (xx < 0 || xx >= d_out.width) continue;
                            d_in.at(c, yy, xx) += k(o, c * 9 + (dy + 1) * 3 + (dx + 1)) * g;
                        }
                    }
                }
            }
        }
    }
    return d_in;
}

Tensor3 conv1x1(const Tensor3& in, const Mat& w, const Mat& b) {
    const int out_ch = static_cast<int>(w.rows());
    Tensor3 out = Tensor3::zeros(out_ch, in.height, in.width);
    for (int y = 0; y < in.height; ++y)
        for (int x = 0; x < in.width; ++x)
            for (int o = 0; o < out_ch; ++o) {
                double acc = b(o, 0);
                for (int c = 0; c < in.channels; ++c) acc += w(o, c) * in.at(c, y, x);
                out.at(o, y, x) = acc;
            }
    return out;
}

Tensor3 conv1x1_backward_input(const Tensor3& d_out, const Mat& w, int in_channels) {
    Tensor3 d_in = Tensor3::zeros(in_channels, d_out.height, d_out.width);
    for (int y = 0; y < d_out.height; ++y)
        for (int x = 0; x < d_out.width; ++x)
            for (int o = 0; o < d_out.channels; ++o) {
                double g = d_out.at(o, y, x);
                for (int c = 0; c < in_channels; ++c) d_in.at(c, y, x) += w(o, c) * g;
            }
    return d_in;
}

Tensor3 meanpool2(const Tensor3& in) {
    Tensor3 out = Tensor3::zeros(in.channels, in.height / 2, in.width / 2);
    for (int c = 0; c < in.channels; ++c)
        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x)
                out.at(c, y, x) = 0.25 * (in.at(c, 2 * y, 2 * x) + in.at(c, 2 * y, 2 * x + 1) +
                                          in.at(c, 2 * y + 1, 2 * x) + in.at(c, 2 * y + 1, 2 * x + 1));
    return out;
}

Tensor3 meanpool2_backward(const Tensor3& d_out) {
    Tensor3 d_in = Tensor3::zeros(d_out.channels, d_out.height * 2, d_out.width * 2);
    for (int c = 0; c < d_out.channels; ++c)
        for (int y = 0; y < d_out.height; ++y)
            for (int x = 0; x < d_out.width; ++x) {
                double g = 0.25 * d_out.at(c, y, x);
                d_in.at(c, 2 * y, 2 * x) += g;
                d_in.at(c, 2 * y, 2 * x + 1) += g;
                d_in.at(c, 2 * y + 1, 2 * x) += g;
                d_in.at(c, 2 * y + 1, 2 * x + 1) += g;
            }
    return d_in;
}

Tensor3 upsample2(const Tensor3& in) {
    Tensor3 out = Tensor3::zeros(in.channels, in.height * 2, in.width * 2);
    for (int c = 0; c < in.channels; ++c)
        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x) out.at(c, y, x) = in.at(c, y / 2, x / 2);
    return out;
}

Tensor3 upsample2_backward(const Tensor3& d_out) {
    Tensor3 d_in = Tensor3::zeros(d_out.channels, d_out.height / 2, d_out.width / 2);
    for (int c = 0; c < d_out.channels; ++c)
        for (int y = 0; y < d_out.height; ++y)
            for (int x = 0; x < d_out.width; ++x) d_in.at(c, y / 2, x / 2) += d_out.at(c, y, x);
    return d_in;
}

Tensor3 apply_silu(const Tensor3& in) {
    Tensor3 out = in;
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data[i] = silu(in.data[i]);
    return out;
}

// (h, w) positions as rows, channels as columns.
Mat to_tokens(const Tensor3& t) {
    Mat m(t.height * t.width, t.channels);
    for (int c = 0; c < t.channels; ++c)
        for (int y = 0; y < t.height; ++y)
            for (int x = 0; x < t.width; ++x) m(y * t.width + x, c) = t.at(c, y, x);
    return m;
}

Tensor3 from_tokens(const Mat& m, int h, int w) {
    Tensor3 t = Tensor3::zeros(static_cast<int>(m.cols()), h, w);
    for (int c = 0; c < t.channels; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) t.at(c, y, x) = m(y * w + x, c);
    return t;
}

struct ResCache {
    Tensor3 x_in, act1, conv1, biased, act2;
};

struct ResWeights {
    const Mat *c1_k, *c1_b, *tp_w, *tp_b, *c2_k, *c2_b;
};

Tensor3 resblock(const Tensor3& x, const Eigen::VectorXd& temb, const ResWeights& w,
                 ResCache& cache) {
    cache.x_in = x;
    cache.act1 = apply_silu(x);
    cache.conv1 = conv3x3(cache.act1, *w.c1_k, *w.c1_b);
    Eigen::VectorXd tvec = (*w.tp_w) * temb + w.tp_b->col(0);
    cache.biased = cache.conv1;
    for (int c = 0; c < cache.biased.channels; ++c)
        for (int y = 0; y < cache.biased.height; ++y)
            for (int x2 = 0; x2 < cache.biased.width; ++x2) cache.biased.at(c, y, x2) += tvec[c];
    cache.act2 = apply_silu(cache.biased);
    Tensor3 conv2 = conv3x3(cache.act2, *w.c2_k, *w.c2_b);
    Tensor3 out = x;
    out.data += conv2.data;
    return out;
}

// d(resblock)/d(x_in); temb carries no condition dependence, so its path is
// not differentiated.
Tensor3 resblock_backward(const Tensor3& d_out, const ResWeights& w, const ResCache& cache) {
    Tensor3 d_act2 = conv3x3_backward_input(d_out, *w.c2_k, cache.act2.channels);
    Tensor3 d_biased = d_act2;
    for (Eigen::Index i = 0; i < d_biased.size(); ++i)
        d_biased.data[i] *= silu_grad(cache.biased.data[i]);
    Tensor3 d_act1 = conv3x3_backward_input(d_biased, *w.c1_k, cache.act1.channels);
    Tensor3 d_x = d_out;
    for (Eigen::Index i = 0; i < d_x.size(); ++i)
        d_x.data[i] += d_act1.data[i] * silu_grad(cache.x_in.data[i]);
    return d_x;
}

struct AttnCache {
    Mat tokens, q, k, v;
    std::vector<Mat> probs;
    Mat concat;
};

struct AttnWeights {
    const Mat *wq, *bq, *wk, *bk, *wv, *bv, *wo, *bo;
};

Tensor3 attn_layer(const Tensor3& h, const Mat& cond, const AttnWeights& w, int n_heads,
                   AttnCache& cache) {
    cache.tokens = to_tokens(h);
    cache.q = linear(cache.tokens, *w.wq, *w.bq);
    cache.k = linear(cond, *w.wk, *w.bk);
    cache.v = linear(cond, *w.wv, *w.bv);
    const int dim = static_cast<int>(cache.q.cols());
    const int head_dim = dim / n_heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
    cache.probs.resize(static_cast<size_t>(n_heads));
    cache.concat.resize(cache.q.rows(), dim);
    for (int hd = 0; hd < n_heads; ++hd) {
        Mat qh = cache.q.middleCols(hd * head_dim, head_dim);
        Mat kh = cache.k.middleCols(hd * head_dim, head_dim);
        Mat vh = cache.v.middleCols(hd * head_dim, head_dim);
        cache.probs[static_cast<size_t>(hd)] = softmax_rows(qh * kh.transpose() * scale);
        cache.concat.middleCols(hd * head_dim, head_dim) =
            cache.probs[static_cast<size_t>(hd)] * vh;
    }
    Mat out = linear(cache.concat, *w.wo, *w.bo);
    return from_tokens(out, h.height, h.width);
}

// Returns d(h) and accumulates d(cond).
Tensor3 attn_layer_backward(const Tensor3& d_out, const AttnWeights& w, int n_heads,
                            const AttnCache& cache, Mat& d_cond) {
    Mat d_o = to_tokens(d_out);
    Mat d_concat = d_o * (*w.wo);
    const int dim = static_cast<int>(cache.q.cols());
    const int head_dim = dim / n_heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
    Mat dq = Mat::Zero(cache.q.rows(), dim);
    Mat dk = Mat::Zero(cache.k.rows(), dim);
    Mat dv = Mat::Zero(cache.v.rows(), dim);
    for (int hd = 0; hd < n_heads; ++hd) {
        const Mat& probs = cache.probs[static_cast<size_t>(hd)];
        Mat d_oh = d_concat.middleCols(hd * head_dim, head_dim);
        Mat vh = cache.v.middleCols(hd * head_dim, head_dim);
        Mat qh = cache.q.middleCols(hd * head_dim, head_dim);
        Mat kh = cache.k.middleCols(hd * head_dim, head_dim);
        Mat dprobs = d_oh * vh.transpose();
        dv.middleCols(hd * head_dim, head_dim) = probs.transpose() * d_oh;
        Eigen::VectorXd rowdot = (probs.array() * dprobs.array()).rowwise().sum().matrix();
        Mat dscores =
            (probs.array() * (dprobs.array().colwise() - rowdot.array())).matrix() * scale;
        dq.middleCols(hd * head_dim, head_dim) = dscores * kh;
        dk.middleCols(hd * head_dim, head_dim) = dscores.transpose() * qh;
    }
    d_cond += dk * (*w.wk) + dv * (*w.wv);
    Mat d_tokens = dq * (*w.wq);
    return from_tokens(d_tokens, d_out.height, d_out.width);
}

}  // namespace

struct DenoiserCache {
    Tensor3 x_t;
    Eigen::VectorXd temb;
    Tensor3 h0;
    ResCache res1;
    Tensor3 r1;
    AttnCache attn1;
    Tensor3 a1, pooled, downed;
    ResCache res2;
    Tensor3 r2;
    AttnCache attn2;
    Tensor3 a2, upsampled, upconv, merged;
    ResCache res3;
    Tensor3 r3;
    int cond_rows = 0;
};

std::pair<Tensor3, std::shared_ptr<DenoiserCache>> denoise_cached(const DenoiserParams& unet,
                                                                  const Tensor3& x_t, int t,
                                                                  const Mat& cond) {
    const DenoiserConfig& c = unet.config;
    if (x_t.channels != c.channels || x_t.height != c.height || x_t.width != c.width)
        throw Error(ErrorKind::ShapeMismatch, "latent shape does not match denoiser config");
    if (cond.cols() != c.token_dim)
        throw Error(ErrorKind::ShapeMismatch, "condition token dim does not match denoiser");

    auto cache = std::make_shared<DenoiserCache>();
    cache->x_t = x_t;
    cache->cond_rows = static_cast<int>(cond.rows());

    Eigen::VectorXd sins = timestep_sinusoid(t, c.time_dim);
    Eigen::VectorXd h1 = linear_vec(sins, unet.time_w1, unet.time_b1);
    for (Eigen::Index i = 0; i < h1.size(); ++i) h1[i] = silu(h1[i]);
    cache->temb = linear_vec(h1, unet.time_w2, unet.time_b2);

    cache->h0 = conv3x3(x_t, unet.conv_in_k, unet.conv_in_b);

    ResWeights rw1{&unet.res1_c1_k, &unet.res1_c1_b, &unet.res1_tp_w,
                   &unet.res1_tp_b, &unet.res1_c2_k, &unet.res1_c2_b};
    cache->r1 = resblock(cache->h0, cache->temb, rw1, cache->res1);

    AttnWeights aw1{&unet.attn1_wq, &unet.attn1_bq, &unet.attn1_wk, &unet.attn1_bk,
                    &unet.attn1_wv, &unet.attn1_bv, &unet.attn1_wo, &unet.attn1_bo};
    Tensor3 attn1_out = attn_layer(cache->r1, cond, aw1, c.n_heads, cache->attn1);
    cache->a1 = cache->r1;
    cache->a1.data += attn1_out.data;

    cache->pooled = meanpool2(cache->a1);
    cache->downed = conv1x1(cache->pooled, unet.down_w, unet.down_b);

    ResWeights rw2{&unet.res2_c1_k, &unet.res2_c1_b, &unet.res2_tp_w,
                   &unet.res2_tp_b, &unet.res2_c2_k, &unet.res2_c2_b};
    cache->r2 = resblock(cache->downed, cache->temb, rw2, cache->res2);

    AttnWeights aw2{&unet.attn2_wq, &unet.attn2_bq, &unet.attn2_wk, &unet.attn2_bk,
                    &unet.attn2_wv, &unet.attn2_bv, &unet.attn2_wo, &unet.attn2_bo};
    Tensor3 attn2_out = attn_layer(cache->r2, cond, aw2, c.n_heads, cache->attn2);
    cache->a2 = cache->r2;
    cache->a2.data += attn2_out.data;

    cache->upsampled = upsample2(cache->a2);
    cache->upconv = conv1x1(cache->upsampled, unet.up_w, unet.up_b);
    cache->merged = cache->upconv;
    cache->merged.data += cache->a1.data;

    ResWeights rw3{&unet.res3_c1_k, &unet.res3_c1_b, &unet.res3_tp_w,
                   &unet.res3_tp_b, &unet.res3_c2_k, &unet.res3_c2_b};
    cache->r3 = resblock(cache->merged, cache->temb, rw3, cache->res3);

    Tensor3 out = conv3x3(cache->r3, unet.conv_out_k, unet.conv_out_b);
    out.data += x_t.data;  // global eps-path skip
    return {std::move(out), std::move(cache)};
}

Tensor3 denoise(const DenoiserParams& unet, const Tensor3& x_t, int t, const Mat& cond) {
    return denoise_cached(unet, x_t, t, cond).first;
}

Mat denoise_backward_cond(const DenoiserParams& unet, const DenoiserCache& cache,
                          const Tensor3& d_out) {
    const DenoiserConfig& c = unet.config;
    Mat d_cond = Mat::Zero(cache.cond_rows, c.token_dim);

    ResWeights rw3{&unet.res3_c1_k, &unet.res3_c1_b, &unet.res3_tp_w,
                   &unet.res3_tp_b, &unet.res3_c2_k, &unet.res3_c2_b};
    ResWeights rw2{&unet.res2_c1_k, &unet.res2_c1_b, &unet.res2_tp_w,
                   &unet.res2_tp_b, &unet.res2_c2_k, &unet.res2_c2_b};
    ResWeights rw1{&unet.res1_c1_k, &unet.res1_c1_b, &unet.res1_tp_w,
                   &unet.res1_tp_b, &unet.res1_c2_k, &unet.res1_c2_b};
    AttnWeights aw1{&unet.attn1_wq, &unet.attn1_bq, &unet.attn1_wk, &unet.attn1_bk,
                    &unet.attn1_wv, &unet.attn1_bv, &unet.attn1_wo, &unet.attn1_bo};
    AttnWeights aw2{&unet.attn2_wq, &unet.attn2_bq, &unet.attn2_wk, &unet.attn2_bk,
                    &unet.attn2_wv, &unet.attn2_bv, &unet.attn2_wo, &unet.attn2_bo};

    Tensor3 d_r3 = conv3x3_backward_input(d_out, unet.conv_out_k, c.base_width);
    Tensor3 d_merged = resblock_backward(d_r3, rw3, cache.res3);
    // merged = upconv + a1
    Tensor3 d_a1_from_skip = d_merged;
    Tensor3 d_upsampled = conv1x1_backward_input(d_merged, unet.up_w, 2 * c.base_width);
    Tensor3 d_a2 = upsample2_backward(d_upsampled);

    // a2 = r2 + attn2(r2, cond)
    Tensor3 d_r2 = d_a2;
    Tensor3 d_r2_attn = attn_layer_backward(d_a2, aw2, c.n_heads, cache.attn2, d_cond);
    d_r2.data += d_r2_attn.data;
    Tensor3 d_downed = resblock_backward(d_r2, rw2, cache.res2);
    Tensor3 d_pooled = conv1x1_backward_input(d_downed, unet.down_w, c.base_width);
    Tensor3 d_a1 = meanpool2_backward(d_pooled);
    d_a1.data += d_a1_from_skip.data;

    // a1 = r1 + attn1(r1, cond)
    Tensor3 d_r1 = d_a1;
    Tensor3 d_r1_attn = attn_layer_backward(d_a1, aw1, c.n_heads, cache.attn1, d_cond);
    d_r1.data += d_r1_attn.data;
    resblock_backward(d_r1, rw1, cache.res1);  // x_t path ends here; nothing upstream needs it
    return d_cond;
}

Tensor3 cfg_combine(const Tensor3& eps_cond, const Tensor3& eps_uncond, double s) {
    if (!eps_cond.same_shape(eps_uncond))
        throw Error(ErrorKind::ShapeMismatch, "cfg_combine shapes differ");
    Tensor3 out = eps_uncond;
    out.data = eps_uncond.data + s * (eps_cond.data - eps_uncond.data);
    return out;
}

void SamplerConfig::validate(const NoiseSchedule& schedule) const {
    if (n_steps < 1 || n_steps > schedule.T)
        throw Error(ErrorKind::ConfigMismatch, "n_steps must lie in [1, T]");
    if (eta < 0.0 || eta > 1.0) throw Error(ErrorKind::ConfigMismatch, "eta must lie in [0, 1]");
}

std::vector<int> ddim_timesteps(int T, int n_steps) {
    if (n_steps < 1 || n_steps > T)
        throw Error(ErrorKind::ConfigMismatch, "n_steps must lie in [1, T]");
    std::vector<int> ts;
    ts.reserve(static_cast<size_t>(n_steps));
    if (n_steps == 1) {
        ts.push_back(T - 1);
        return ts;
    }
    for (int i = 0; i < n_steps; ++i) {
        double pos = static_cast<double>(T - 1) * (n_steps - 1 - i) / (n_steps - 1);
        ts.push_back(static_cast<int>(std::lround(pos)));
    }
    return ts;
}

Tensor3 ddim_update(const Tensor3& x_t, const Tensor3& eps_hat, double alpha_t, double alpha_prev,
                    double eta, Rng& noise_rng) {
    if (!x_t.same_shape(eps_hat)) throw Error(ErrorKind::ShapeMismatch, "ddim_update shapes differ");
    Tensor3 x0_hat = x_t;
    double rt = std::sqrt(alpha_t);
    x0_hat.data = (x_t.data - std::sqrt(1.0 - alpha_t) * eps_hat.data) / rt;
    double sigma = 0.0;
    if (eta > 0.0 && alpha_prev < 1.0) {
        sigma = eta * std::sqrt((1.0 - alpha_prev) / (1.0 - alpha_t)) *
                std::sqrt(1.0 - alpha_t / alpha_prev);
    }
    double dir_coeff = std::sqrt(std::max(0.0, 1.0 - alpha_prev - sigma * sigma));
    Tensor3 out = x0_hat;
    out.data = std::sqrt(alpha_prev) * x0_hat.data + dir_coeff * eps_hat.data;
    if (sigma > 0.0) {
        for (Eigen::Index i = 0; i < out.size(); ++i) out.data[i] += sigma * noise_rng.normal();
    }
    return out;
}

Tensor3 ddim_sample_with_model(const EpsModel& model, const DenoiserConfig& shape,
                               const SamplerConfig& sampler, const NoiseSchedule& schedule,
                               uint64_t seed) {
    sampler.validate(schedule);
    Rng prior_rng = Rng(seed).stream("sampler");
    Rng noise_rng = Rng(seed).stream("sampler-eta");
    Tensor3 x = Tensor3::zeros(shape.channels, shape.height, shape.width);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data[i] = prior_rng.normal();

    std::vector<int> ts = ddim_timesteps(schedule.T, sampler.n_steps);
    for (size_t i = 0; i < ts.size(); ++i) {
        int t = ts[i];
        double alpha_t = schedule.alphas_cumprod[t];
        double alpha_prev = i + 1 < ts.size() ? schedule.alphas_cumprod[ts[i + 1]] : 1.0;
        Tensor3 eps = model(x, t);
        x = ddim_update(x, eps, alpha_t, alpha_prev, sampler.eta, noise_rng);
    }
    return x;
}

Tensor3 ddim_sample(const DenoiserParams& unet, const AdapterParams& adapter,
                    const TextEncoder& encoder, const ConditionSet& cs,
                    const SamplerConfig& sampler, const NoiseSchedule& schedule, uint64_t seed) {
    if (adapter.config.out_dim != unet.config.token_dim)
        throw Error(ErrorKind::ConfigMismatch, "adapter out_dim != denoiser token_dim");
    if (encoder.feature_dim() != adapter.config.text_dim)
        throw Error(ErrorKind::ConfigMismatch, "encoder feature_dim != adapter text_dim");

    TokenFeatures cond_features = encode_conditions(cs, encoder);
    ConditionSet uncond;
    if (sampler.uncond_keep_style) uncond.style = cs.style;
    TokenFeatures uncond_features = encode_conditions(uncond, encoder);

    EpsModel model = [&](const Tensor3& x, int t) {
        Mat cond_tokens = adapter_forward(adapter, cond_features, t);
        Mat uncond_tokens = adapter_forward(adapter, uncond_features, t);
        Tensor3 eps_c = denoise(unet, x, t, cond_tokens);
        Tensor3 eps_u = denoise(unet, x, t, uncond_tokens);
        return cfg_combine(eps_c, eps_u, sampler.guidance_scale);
    };
    return ddim_sample_with_model(model, unet.config, sampler, schedule, seed);
}

void TrainerConfig::validate() const {
    if (learning_rate <= 0.0) throw Error(ErrorKind::ConfigMismatch, "learning_rate must be > 0");
    if (weight_decay < 0.0) throw Error(ErrorKind::ConfigMismatch, "weight_decay must be >= 0");
    if (iterations < 0 || batch_size < 1)
        throw Error(ErrorKind::ConfigMismatch, "iterations >= 0 and batch_size >= 1 required");
    drop_policy.validate();
}

namespace {

std::vector<Mat*> tensor_list(AdapterParams& p) {
    std::vector<Mat*> out;
    p.for_each([&](const std::string&, Mat& t) { out.push_back(&t); });
    return out;
}

// Decoupled weight decay, moments (0.9, 0.999), epsilon 1e-8.
struct AdamW {
    double lr, wd;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    int64_t steps = 0;
    AdapterParams m, v;

    AdamW(const AdapterConfig& config, double lr_, double wd_)
        : lr(lr_), wd(wd_), m(zeros_like(config)), v(zeros_like(config)) {}

    void step(AdapterParams& params, AdapterParams& grads) {
        ++steps;
        auto ps = tensor_list(params);
        auto gs = tensor_list(grads);
        auto ms = tensor_list(m);
        auto vs = tensor_list(v);
        double bc1 = 1.0 - std::pow(beta1, static_cast<double>(steps));
        double bc2 = 1.0 - std::pow(beta2, static_cast<double>(steps));
        for (size_t i = 0; i < ps.size(); ++i) {
            Mat& p = *ps[i];
            const Mat& g = *gs[i];
            Mat& mm = *ms[i];
            Mat& vv = *vs[i];
            mm = beta1 * mm + (1.0 - beta1) * g;
            vv = beta2 * vv.array().matrix() + (1.0 - beta2) * g.array().square().matrix();
            Mat mhat = mm / bc1;
            Mat vhat = vv / bc2;
            p.array() -= lr * (mhat.array() / (vhat.array().sqrt() + eps) + wd * p.array());
        }
    }
};

}  // namespace

TrainResult train_adapter(const DenoiserParams& unet, const TextEncoder& encoder,
                          AdapterParams& adapter, const std::vector<TrainItem>& dataset,
                          const TrainerConfig& trainer, const NoiseSchedule& schedule) {
    trainer.validate();
    if (dataset.empty()) throw Error(ErrorKind::BadSize, "training dataset is empty");
    if (adapter.config.out_dim != unet.config.token_dim)
        throw Error(ErrorKind::ConfigMismatch, "adapter out_dim != denoiser token_dim");
    if (encoder.feature_dim() != adapter.config.text_dim)
        throw Error(ErrorKind::ConfigMismatch, "encoder feature_dim != adapter text_dim");
    for (const auto& item : dataset) {
        if (item.latent.channels != unet.config.channels ||
            item.latent.height != unet.config.height || item.latent.width != unet.config.width)
            throw Error(ErrorKind::ShapeMismatch, "dataset latent shape mismatch");
    }

    TrainResult result;
    result.loss_curve.reserve(static_cast<size_t>(trainer.iterations));
    AdamW opt(adapter.config, trainer.learning_rate, trainer.weight_decay);
    Rng train_root = Rng(trainer.seed).stream("train");

    const double numel = static_cast<double>(unet.config.channels) * unet.config.height *
                         unet.config.width;

    for (int step = 0; step < trainer.iterations; ++step) {
        Rng step_rng = train_root.stream(static_cast<uint64_t>(step));
        Rng item_rng = step_rng.stream("data");
        Rng drop_rng = step_rng.stream("drop");
        Rng noise_rng = step_rng.stream("noise");

        AdapterParams grad_sum = zeros_like(adapter.config);
        auto grad_sum_list = tensor_list(grad_sum);
        double loss_sum = 0.0;

        for (int bi = 0; bi < trainer.batch_size; ++bi) {
            const TrainItem& item =
                dataset[static_cast<size_t>(item_rng.uniform_int(dataset.size()))];
            DropMask mask = sample_drop_mask(trainer.drop_policy, drop_rng);
            ConditionSet masked = apply_mask(item.conditions, mask);
            int t = static_cast<int>(noise_rng.uniform_int(static_cast<uint64_t>(schedule.T)));
            Tensor3 eps = item.latent;
            for (Eigen::Index i = 0; i < eps.size(); ++i) eps.data[i] = noise_rng.normal();

            Tensor3 x_t = forward_noise(item.latent, t, eps, schedule);
            TokenFeatures features = encode_conditions(masked, encoder);
            auto adapter_fwd = adapter_forward_cached(adapter, features, t);
            auto [eps_hat, den_cache] = denoise_cached(unet, x_t, t, adapter_fwd.output);

            Tensor3 diff = eps_hat;
            diff.data -= eps.data;
            loss_sum += diff.data.squaredNorm() / numel;

            Tensor3 d_eps_hat = diff;
            d_eps_hat.data *= 2.0 / (numel * trainer.batch_size);
            Mat d_cond = denoise_backward_cond(unet, *den_cache, d_eps_hat);
            AdapterParams g = adapter_backward(adapter, *adapter_fwd.cache, d_cond);
            auto g_list = tensor_list(g);
            for (size_t i = 0; i < g_list.size(); ++i) *grad_sum_list[i] += *g_list[i];
        }

        opt.step(adapter, grad_sum);
        result.loss_curve.push_back(loss_sum / trainer.batch_size);
    }
    return result;
}

std::string loss_curve_csv(const std::vector<double>& losses) {
    std::ostringstream out;
    out << "step,loss\n";
    out.precision(17);
    for (size_t i = 0; i < losses.size(); ++i) out << i << "," << losses[i] << "\n";
    return out.str();
}

}  // namespace poa
