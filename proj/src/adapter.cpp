#include "poa/adapter.hpp"

#include <cmath>
#include <cstring>

#include "poa/errors.hpp"
#include "poa/io.hpp"

namespace poa {

using nlohmann::json;
using nlohmann::ordered_json;

void AdapterConfig::validate() const {
    if (n_blocks < 1 || n_latents < 1 || width < 1 || n_heads < 1 || text_dim < 1 ||
        out_dim < 1 || time_dim < 2)
        throw Error(ErrorKind::ConfigMismatch, "adapter dims must be >= 1 (time_dim >= 2)");
    if (width % n_heads != 0)
        throw Error(ErrorKind::ConfigMismatch, "width must be divisible by n_heads");
    if (time_dim % 2 != 0)
        throw Error(ErrorKind::ConfigMismatch, "time_dim must be even");
}

namespace {

constexpr double kLnEps = 1e-6;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

double gelu_grad(double x) {
    double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.141592653589793238462643383279502884);
    double Phi = 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
    return Phi + x * phi;
}

double silu(double x) {
    double s = 1.0 / (1.0 + std::exp(-x));
    return x * s;
}

double silu_grad(double x) {
    double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 + x * (1.0 - s));
}

struct LnCache {
    Mat hat;
    Eigen::VectorXd inv_std;
};

Mat layer_norm(const Mat& x, LnCache& cache) {
    const Eigen::Index n = x.cols();
    cache.hat.resize(x.rows(), x.cols());
    cache.inv_std.resize(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double mu = x.row(i).mean();
        double var = (x.row(i).array() - mu).square().sum() / static_cast<double>(n);
        double inv = 1.0 / std::sqrt(var + kLnEps);
        cache.inv_std[i] = inv;
        cache.hat.row(i) = (x.row(i).array() - mu) * inv;
    }
    return cache.hat;
}

Mat layer_norm_backward(const LnCache& cache, const Mat& dhat) {
    const Eigen::Index n = dhat.cols();
    Mat dx(dhat.rows(), dhat.cols());
    for (Eigen::Index i = 0; i < dhat.rows(); ++i) {
        double mean_d = dhat.row(i).mean();
        double mean_dh = (dhat.row(i).array() * cache.hat.row(i).array()).sum() /
                         static_cast<double>(n);
        dx.row(i) = cache.inv_std[i] *
                    (dhat.row(i).array() - mean_d - cache.hat.row(i).array() * mean_dh);
    }
    return dx;
}

// y = x * W^T + b (row-major tokens); b is (out x 1).
Mat linear(const Mat& x, const Mat& w, const Mat& b) {
    return (x * w.transpose()).rowwise() + b.col(0).transpose();
}

Eigen::VectorXd linear_vec(const Eigen::VectorXd& x, const Mat& w, const Mat& b) {
    return w * x + b.col(0);
}

// Softmax over each row with masked columns pinned to exactly zero weight.
Mat masked_softmax_rows(const Mat& scores, const std::vector<uint8_t>& mask) {
    Mat probs = Mat::Zero(scores.rows(), scores.cols());
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < scores.cols(); ++j)
            if (mask[static_cast<size_t>(j)]) mx = std::max(mx, scores(i, j));
        double sum = 0.0;
        for (Eigen::Index j = 0; j < scores.cols(); ++j) {
            if (!mask[static_cast<size_t>(j)]) continue;
            double e = std::exp(scores(i, j) - mx);
            probs(i, j) = e;
            sum += e;
        }
        probs.row(i) /= sum;
    }
    return probs;
}

struct BlockCache {
    Mat x_in;
    Eigen::VectorXd attn_shift, attn_scale, attn_gate;
    Eigen::VectorXd ffn_shift, ffn_scale, ffn_gate;
    LnCache ln1;
    Mat mod1, q, k, v;
    std::vector<Mat> attn_probs;  // one L x S matrix per head
    Mat attn_concat, attn_out;
    Mat x_mid;
    LnCache ln2;
    Mat mod2, ffn_pre, ffn_act, ffn_out;
};

}  // namespace

struct AdapterCache {
    TokenFeatures features;
    int t = 0;
    Eigen::VectorXd sinusoid, time_pre, time_hidden, temb;
    Mat text_proj;
    LnCache ln_text;
    Mat text_h;
    std::vector<BlockCache> blocks;
    Mat x_final;
};

Eigen::VectorXd timestep_sinusoid(int t, int dim) {
    if (dim < 2 || dim % 2 != 0)
        throw Error(ErrorKind::ConfigMismatch, "sinusoid dim must be even and >= 2");
    Eigen::VectorXd out(dim);
    int half = dim / 2;
    for (int k = 0; k < half; ++k) {
        double freq = std::pow(10000.0, -2.0 * k / dim);
        out[k] = std::sin(t * freq);
        out[half + k] = std::cos(t * freq);
    }
    return out;
}

Eigen::VectorXd timestep_embed(const AdapterParams& params, int t) {
    Eigen::VectorXd s = timestep_sinusoid(t, params.config.time_dim);
    Eigen::VectorXd z1 = linear_vec(s, params.time_w1, params.time_b1);
    Eigen::VectorXd h1 = z1.unaryExpr([](double v) { return silu(v); });
    return linear_vec(h1, params.time_w2, params.time_b2);
}

namespace {

void shape_params(AdapterParams& p) {
    const AdapterConfig& c = p.config;
    const int w = c.width;
    const int f = kFfnExpansion * c.width;
    p.latents.resize(c.n_latents, w);
    p.in_proj_w.resize(w, c.text_dim);
    p.in_proj_b.resize(w, 1);
    p.blocks.resize(static_cast<size_t>(c.n_blocks));
    for (auto& b : p.blocks) {
        b.wq.resize(w, w); b.bq.resize(w, 1);
        b.wk.resize(w, w); b.bk.resize(w, 1);
        b.wv.resize(w, w); b.bv.resize(w, 1);
        b.wo.resize(w, w); b.bo.resize(w, 1);
        b.ffn_w1.resize(f, w); b.ffn_b1.resize(f, 1);
        b.ffn_w2.resize(w, f); b.ffn_b2.resize(w, 1);
        for (Mat* m : {&b.attn_shift_w, &b.attn_scale_w, &b.attn_gate_w, &b.ffn_shift_w,
                       &b.ffn_scale_w, &b.ffn_gate_w})
            m->resize(w, c.time_dim);
        for (Mat* m : {&b.attn_shift_b, &b.attn_scale_b, &b.attn_gate_b, &b.ffn_shift_b,
                       &b.ffn_scale_b, &b.ffn_gate_b})
            m->resize(w, 1);
    }
    p.out_proj_w.resize(c.out_dim, w);
    p.out_proj_b.resize(c.out_dim, 1);
    p.time_w1.resize(c.time_dim, c.time_dim);
    p.time_b1.resize(c.time_dim, 1);
    p.time_w2.resize(c.time_dim, c.time_dim);
    p.time_b2.resize(c.time_dim, 1);
}

}  // namespace

AdapterParams init_params(const AdapterConfig& config, Rng rng) {
    config.validate();
    AdapterParams p;
    p.config = config;
    shape_params(p);
    p.for_each([&](const std::string& name, Mat& t) {
        bool bias = name.ends_with("_b") || name.ends_with("b1") || name.ends_with("b2") ||
                    name.ends_with(".bq") || name.ends_with(".bk") || name.ends_with(".bv") ||
                    name.ends_with(".bo");
        if (name.find("gate") != std::string::npos || bias) {
            t.setZero();
        } else if (name == "latents") {
            for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.normal();
        } else {
            double scale = 1.0 / std::sqrt(static_cast<double>(t.cols()));
            for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.normal() * scale;
        }
    });
    return p;
}

AdapterParams zeros_like(const AdapterConfig& config) {
    AdapterParams p;
    p.config = config;
    shape_params(p);
    p.for_each([](const std::string&, Mat& t) { t.setZero(); });
    return p;
}

int64_t AdapterParams::scalar_count() const {
    int64_t n = 0;
    for_each([&](const std::string&, const Mat& t) { n += t.size(); });
    return n;
}

uint64_t AdapterParams::checksum() const {
    uint64_t h = 0xcbf29ce484222325ull;
    for_each([&](const std::string&, const Mat& t) {
        uint64_t ch = checksum_matrix(t);
        h ^= ch;
        h *= 0x100000001b3ull;
    });
    return h;
}

int64_t param_count(const AdapterConfig& c) {
    c.validate();
    const int64_t w = c.width;
    const int64_t f = kFfnExpansion * static_cast<int64_t>(c.width);
    const int64_t attn = 4 * (w * w + w);
    const int64_t ffn = f * w + f + w * f + w;
    const int64_t producers = 6 * (w * c.time_dim + w);
    const int64_t per_block = attn + ffn + producers;
    return static_cast<int64_t>(c.n_latents) * w          // latent queries
           + w * c.text_dim + w                           // in_proj
           + c.n_blocks * per_block                       // blocks
           + static_cast<int64_t>(c.out_dim) * w + c.out_dim  // out_proj
           + 2 * (static_cast<int64_t>(c.time_dim) * c.time_dim + c.time_dim);  // time MLP
}

AdapterForwardResult adapter_forward_cached(const AdapterParams& params,
                                            const TokenFeatures& features, int t) {
    const AdapterConfig& c = params.config;
    if (features.feature_dim() != c.text_dim)
        throw Error(ErrorKind::ShapeMismatch,
                    "feature_dim " + std::to_string(features.feature_dim()) +
                        " != adapter text_dim " + std::to_string(c.text_dim));
    if (features.mask.size() != static_cast<size_t>(features.sequence()))
        throw Error(ErrorKind::ShapeMismatch, "attention mask length mismatch");
    bool any = false;
    for (uint8_t m : features.mask) any = any || m;
    if (!any || features.sequence() == 0)
        throw Error(ErrorKind::ShapeMismatch, "adapter needs at least one unmasked text token");

    auto cache = std::make_shared<AdapterCache>();
    cache->features = features;
    cache->t = t;

    cache->sinusoid = timestep_sinusoid(t, c.time_dim);
    cache->time_pre = linear_vec(cache->sinusoid, params.time_w1, params.time_b1);
    cache->time_hidden = cache->time_pre.unaryExpr([](double v) { return silu(v); });
    cache->temb = linear_vec(cache->time_hidden, params.time_w2, params.time_b2);

    cache->text_proj = linear(features.features, params.in_proj_w, params.in_proj_b);
    cache->text_h = layer_norm(cache->text_proj, cache->ln_text);

    const int heads = c.n_heads;
    const int head_dim = c.width / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

    Mat x = params.latents;
    cache->blocks.resize(params.blocks.size());
    for (size_t bi = 0; bi < params.blocks.size(); ++bi) {
        const AdapterBlockParams& bp = params.blocks[bi];
        BlockCache& bc = cache->blocks[bi];
        bc.x_in = x;

        bc.attn_shift = linear_vec(cache->temb, bp.attn_shift_w, bp.attn_shift_b);
        bc.attn_scale = linear_vec(cache->temb, bp.attn_scale_w, bp.attn_scale_b);
        bc.attn_gate = linear_vec(cache->temb, bp.attn_gate_w, bp.attn_gate_b);
        bc.ffn_shift = linear_vec(cache->temb, bp.ffn_shift_w, bp.ffn_shift_b);
        bc.ffn_scale = linear_vec(cache->temb, bp.ffn_scale_w, bp.ffn_scale_b);
        bc.ffn_gate = linear_vec(cache->temb, bp.ffn_gate_w, bp.ffn_gate_b);

        Mat hat1 = layer_norm(x, bc.ln1);
        Eigen::VectorXd scale1 = (1.0 + bc.attn_scale.array()).matrix();
        bc.mod1 = hat1 * scale1.asDiagonal();
        bc.mod1.rowwise() += bc.attn_shift.transpose();

        bc.q = linear(bc.mod1, bp.wq, bp.bq);
        bc.k = linear(cache->text_h, bp.wk, bp.bk);
        bc.v = linear(cache->text_h, bp.wv, bp.bv);

        bc.attn_probs.resize(static_cast<size_t>(heads));
        bc.attn_concat.resize(c.n_latents, c.width);
        for (int h = 0; h < heads; ++h) {
            Mat qh = bc.q.middleCols(h * head_dim, head_dim);
            Mat kh = bc.k.middleCols(h * head_dim, head_dim);
            Mat vh = bc.v.middleCols(h * head_dim, head_dim);
            Mat scores = qh * kh.transpose() * scale;
            bc.attn_probs[static_cast<size_t>(h)] = masked_softmax_rows(scores, features.mask);
            bc.attn_concat.middleCols(h * head_dim, head_dim) =
                bc.attn_probs[static_cast<size_t>(h)] * vh;
        }
        bc.attn_out = linear(bc.attn_concat, bp.wo, bp.bo);
        bc.x_mid = x + bc.attn_out * bc.attn_gate.asDiagonal();

        Mat hat2 = layer_norm(bc.x_mid, bc.ln2);
        Eigen::VectorXd scale2 = (1.0 + bc.ffn_scale.array()).matrix();
        bc.mod2 = hat2 * scale2.asDiagonal();
        bc.mod2.rowwise() += bc.ffn_shift.transpose();

        bc.ffn_pre = linear(bc.mod2, bp.ffn_w1, bp.ffn_b1);
        bc.ffn_act = bc.ffn_pre.unaryExpr([](double v) { return gelu(v); });
        bc.ffn_out = linear(bc.ffn_act, bp.ffn_w2, bp.ffn_b2);
        x = bc.x_mid + bc.ffn_out * bc.ffn_gate.asDiagonal();
    }
    cache->x_final = x;

    AdapterForwardResult result;
    result.output = linear(x, params.out_proj_w, params.out_proj_b);
    if (!result.output.allFinite())
        throw Error(ErrorKind::ShapeMismatch, "adapter produced non-finite condition tokens");
    result.cache = std::move(cache);
    return result;
}

ConditionTokens adapter_forward(const AdapterParams& params, const TokenFeatures& features,
                                int t) {
    return adapter_forward_cached(params, features, t).output;
}

AdapterParams adapter_backward(const AdapterParams& params, const AdapterCache& cache,
                               const Mat& upstream) {
    const AdapterConfig& c = params.config;
    if (upstream.rows() != c.n_latents || upstream.cols() != c.out_dim)
        throw Error(ErrorKind::ShapeMismatch, "upstream gradient must be n_latents x out_dim");

    AdapterParams g = zeros_like(c);
    const int heads = c.n_heads;
    const int head_dim = c.width / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

    // out = x_final * Wout^T + bout
    g.out_proj_w = upstream.transpose() * cache.x_final;
    g.out_proj_b = upstream.colwise().sum().transpose();
    Mat dx = upstream * params.out_proj_w;

    Mat dtext_h = Mat::Zero(cache.text_h.rows(), cache.text_h.cols());
    Eigen::VectorXd dtemb = Eigen::VectorXd::Zero(c.time_dim);

    auto producer_backward = [&](const Eigen::VectorXd& dvec, const Mat& w, Mat& gw, Mat& gb) {
        gw += dvec * cache.temb.transpose();
        gb += dvec;
        dtemb += w.transpose() * dvec;
    };

    for (size_t bi = params.blocks.size(); bi-- > 0;) {
        const AdapterBlockParams& bp = params.blocks[bi];
        const BlockCache& bc = cache.blocks[bi];
        AdapterBlockParams& gb = g.blocks[bi];

        // x_out = x_mid + ffn_out .* gate_f
        Mat dffn_out = dx * bc.ffn_gate.asDiagonal();
        Eigen::VectorXd dgate_f =
            (dx.array() * bc.ffn_out.array()).colwise().sum().matrix().transpose();
        Mat dx_mid = dx;

        // ffn_out = gelu(mod2 * W1^T + b1) * W2^T + b2
        Mat dact = dffn_out * bp.ffn_w2;
        gb.ffn_w2 = dffn_out.transpose() * bc.ffn_act;
        gb.ffn_b2 = dffn_out.colwise().sum().transpose();
        Mat dpre = (dact.array() * bc.ffn_pre.unaryExpr([](double v) { return gelu_grad(v); }).array())
                       .matrix();
        gb.ffn_w1 = dpre.transpose() * bc.mod2;
        gb.ffn_b1 = dpre.colwise().sum().transpose();
        Mat dmod2 = dpre * bp.ffn_w1;

        // mod2 = hat2 .* (1 + scale_f) + shift_f
        Eigen::VectorXd dscale_f =
            (dmod2.array() * bc.ln2.hat.array()).colwise().sum().matrix().transpose();
        Eigen::VectorXd dshift_f = dmod2.colwise().sum().transpose();
        Eigen::VectorXd scale2 = (1.0 + bc.ffn_scale.array()).matrix();
        Mat dhat2 = dmod2 * scale2.asDiagonal();
        dx_mid += layer_norm_backward(bc.ln2, dhat2);

        producer_backward(dshift_f, bp.ffn_shift_w, gb.ffn_shift_w, gb.ffn_shift_b);
        producer_backward(dscale_f, bp.ffn_scale_w, gb.ffn_scale_w, gb.ffn_scale_b);
        producer_backward(dgate_f, bp.ffn_gate_w, gb.ffn_gate_w, gb.ffn_gate_b);

        // x_mid = x_in + attn_out .* gate_a
        Mat dattn_out = dx_mid * bc.attn_gate.asDiagonal();
        Eigen::VectorXd dgate_a =
            (dx_mid.array() * bc.attn_out.array()).colwise().sum().matrix().transpose();
        Mat dx_in = dx_mid;

        // attn_out = attn_concat * Wo^T + bo
        Mat dconcat = dattn_out * bp.wo;
        gb.wo = dattn_out.transpose() * bc.attn_concat;
        gb.bo = dattn_out.colwise().sum().transpose();

        Mat dq = Mat::Zero(c.n_latents, c.width);
        Mat dk = Mat::Zero(bc.k.rows(), c.width);
        Mat dv = Mat::Zero(bc.v.rows(), c.width);
        for (int h = 0; h < heads; ++h) {
            const Mat& probs = bc.attn_probs[static_cast<size_t>(h)];
            Mat d_oh = dconcat.middleCols(h * head_dim, head_dim);
            Mat vh = bc.v.middleCols(h * head_dim, head_dim);
            Mat qh = bc.q.middleCols(h * head_dim, head_dim);
            Mat kh = bc.k.middleCols(h * head_dim, head_dim);
            Mat dprobs = d_oh * vh.transpose();
            dv.middleCols(h * head_dim, head_dim) = probs.transpose() * d_oh;
            // softmax rows: ds = p .* (dp - rowsum(p .* dp))
            Eigen::VectorXd rowdot = (probs.array() * dprobs.array()).rowwise().sum().matrix();
            Mat dscores =
                (probs.array() * (dprobs.array().colwise() - rowdot.array())).matrix() * scale;
            dq.middleCols(h * head_dim, head_dim) = dscores * kh;
            dk.middleCols(h * head_dim, head_dim) = dscores.transpose() * qh;
        }

        gb.wq = dq.transpose() * bc.mod1;
        gb.bq = dq.colwise().sum().transpose();
        Mat dmod1 = dq * bp.wq;
        gb.wk = dk.transpose() * cache.text_h;
        gb.bk = dk.colwise().sum().transpose();
        dtext_h += dk * bp.wk;
        gb.wv = dv.transpose() * cache.text_h;
        gb.bv = dv.colwise().sum().transpose();
        dtext_h += dv * bp.wv;

        Eigen::VectorXd dscale_a =
            (dmod1.array() * bc.ln1.hat.array()).colwise().sum().matrix().transpose();
        Eigen::VectorXd dshift_a = dmod1.colwise().sum().transpose();
        Eigen::VectorXd scale1 = (1.0 + bc.attn_scale.array()).matrix();
        Mat dhat1 = dmod1 * scale1.asDiagonal();
        dx_in += layer_norm_backward(bc.ln1, dhat1);

        producer_backward(dshift_a, bp.attn_shift_w, gb.attn_shift_w, gb.attn_shift_b);
        producer_backward(dscale_a, bp.attn_scale_w, gb.attn_scale_w, gb.attn_scale_b);
        producer_backward(dgate_a, bp.attn_gate_w, gb.attn_gate_w, gb.attn_gate_b);

        dx = dx_in;
    }
    g.latents = dx;

    // text_h = LN(features * Wp^T + bp); encoder features receive no gradient.
    Mat dtext_proj = layer_norm_backward(cache.ln_text, dtext_h);
    g.in_proj_w = dtext_proj.transpose() * cache.features.features;
    g.in_proj_b = dtext_proj.colwise().sum().transpose();

    // temb = W2 silu(W1 s + b1) + b2
    g.time_w2 = dtemb * cache.time_hidden.transpose();
    g.time_b2 = dtemb;
    Eigen::VectorXd dhidden = params.time_w2.transpose() * dtemb;
    Eigen::VectorXd dpre_t =
        (dhidden.array() * cache.time_pre.unaryExpr([](double v) { return silu_grad(v); }).array())
            .matrix();
    g.time_w1 = dpre_t * cache.sinusoid.transpose();
    g.time_b1 = dpre_t;
    return g;
}

AdapterParams adapter_grad(const AdapterParams& params, const TokenFeatures& features, int t,
                           const Mat& upstream) {
    auto fwd = adapter_forward_cached(params, features, t);
    return adapter_backward(params, *fwd.cache, upstream);
}

namespace {

ordered_json config_to_json(const AdapterConfig& c) {
    ordered_json j;
    j["n_blocks"] = c.n_blocks;
    j["n_latents"] = c.n_latents;
    j["width"] = c.width;
    j["n_heads"] = c.n_heads;
    j["text_dim"] = c.text_dim;
    j["out_dim"] = c.out_dim;
    j["time_dim"] = c.time_dim;
    return j;
}

AdapterConfig config_from_json(const json& j) {
    AdapterConfig c;
    c.n_blocks = j.at("n_blocks").get<int>();
    c.n_latents = j.at("n_latents").get<int>();
    c.width = j.at("width").get<int>();
    c.n_heads = j.at("n_heads").get<int>();
    c.text_dim = j.at("text_dim").get<int>();
    c.out_dim = j.at("out_dim").get<int>();
    c.time_dim = j.at("time_dim").get<int>();
    return c;
}

constexpr char kCheckpointMagic[4] = {'P', 'O', 'A', 'K'};
constexpr uint32_t kCheckpointVersion = 1;

}  // namespace

void save_adapter(const std::filesystem::path& path, const AdapterParams& params,
                  const ordered_json& extra) {
    ordered_json header;
    header["format"] = "poa-adapter";
    header["version"] = kCheckpointVersion;
    header["config"] = config_to_json(params.config);
    header["extra"] = extra;
    ordered_json tensors = ordered_json::array();
    params.for_each([&](const std::string& name, const Mat& t) {
        ordered_json entry;
        entry["name"] = name;
        entry["rows"] = t.rows();
        entry["cols"] = t.cols();
        tensors.push_back(std::move(entry));
    });
    header["tensors"] = std::move(tensors);
    std::string header_str = header.dump();

    std::string buf;
    buf.append(kCheckpointMagic, 4);
    uint32_t version = kCheckpointVersion;
    buf.append(reinterpret_cast<const char*>(&version), 4);
    uint64_t hlen = header_str.size();
    buf.append(reinterpret_cast<const char*>(&hlen), 8);
    buf += header_str;
    params.for_each([&](const std::string&, const Mat& t) {
        buf.append(reinterpret_cast<const char*>(t.data()),
                   static_cast<size_t>(t.size()) * sizeof(double));
    });
    atomic_write(path, buf);
}

std::pair<AdapterParams, json> load_adapter(const std::filesystem::path& path) {
    std::string buf = read_file(path);
    if (buf.size() < 16 || std::memcmp(buf.data(), kCheckpointMagic, 4) != 0)
        throw Error(ErrorKind::MalformedDocument, "not an adapter checkpoint: " + path.string());
    uint32_t version;
    std::memcpy(&version, buf.data() + 4, 4);
    if (version != kCheckpointVersion)
        throw Error(ErrorKind::MalformedDocument, "unsupported checkpoint version");
    uint64_t hlen;
    std::memcpy(&hlen, buf.data() + 8, 8);
    if (16 + hlen > buf.size())
        throw Error(ErrorKind::MalformedDocument, "truncated checkpoint header");
    json header;
    try {
        header = json::parse(buf.substr(16, hlen));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedDocument, std::string("bad checkpoint header: ") + e.what());
    }

    AdapterParams params;
    params.config = config_from_json(header.at("config"));
    params.config.validate();
    shape_params(params);

    size_t pos = 16 + hlen;
    size_t tensor_index = 0;
    const auto& table = header.at("tensors");
    params.for_each([&](const std::string& name, Mat& t) {
        if (tensor_index >= table.size())
            throw Error(ErrorKind::MalformedDocument, "checkpoint tensor table too short");
        const auto& entry = table[tensor_index++];
        if (entry.at("name").get<std::string>() != name ||
            entry.at("rows").get<Eigen::Index>() != t.rows() ||
            entry.at("cols").get<Eigen::Index>() != t.cols())
            throw Error(ErrorKind::MalformedDocument, "checkpoint tensor mismatch at '" + name + "'");
        size_t bytes = static_cast<size_t>(t.size()) * sizeof(double);
        if (pos + bytes > buf.size())
            throw Error(ErrorKind::MalformedDocument, "checkpoint payload truncated");
        std::memcpy(t.data(), buf.data() + pos, bytes);
        pos += bytes;
    });
    if (pos != buf.size())
        throw Error(ErrorKind::MalformedDocument, "checkpoint has trailing bytes");
    return {std::move(params), header.value("extra", json::object())};
}

}  // namespace poa
