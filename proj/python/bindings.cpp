// Python surface for the toolkit: dataset handling, the prompt template and
// drop scheme, the adapter, the toy diffusion engine, and the tournament.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "poa/adapter.hpp"
#include "poa/analytics.hpp"
#include "poa/annotation.hpp"
#include "poa/compart.hpp"
#include "poa/conditioning.hpp"
#include "poa/diffusion.hpp"
#include "poa/errors.hpp"
#include "poa/evaluate.hpp"
#include "poa/synth.hpp"

namespace py = pybind11;
using namespace poa;

namespace {

ConditionSet make_condition_set(const std::optional<std::string>& caption,
                                const std::optional<std::string>& style,
                                const std::map<std::string, std::string>& poa) {
    ConditionSet cs;
    cs.caption = caption;
    cs.style = style;
    for (const auto& [name, text] : poa) {
        auto principle = principle_from_name(name);
        if (!principle) throw Error(ErrorKind::SchemaViolation, "unknown principle '" + name + "'");
        cs.poa[*principle] = text;
    }
    return cs;
}

py::array_t<double> tensor_to_array(const Tensor3& t) {
    py::array_t<double> out({t.channels, t.height, t.width});
    std::memcpy(out.mutable_data(), t.data.data(), sizeof(double) * t.data.size());
    return out;
}

Tensor3 array_to_tensor(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 3) throw Error(ErrorKind::ShapeMismatch, "expected a (c, h, w) array");
    Tensor3 t = Tensor3::zeros(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                               static_cast<int>(a.shape(2)));
    std::memcpy(t.data.data(), a.data(), sizeof(double) * t.data.size());
    return t;
}

TokenFeatures make_features(const Eigen::MatrixXd& features, const std::vector<uint8_t>& mask) {
    TokenFeatures f;
    f.features = features;
    f.mask = mask.empty() ? std::vector<uint8_t>(static_cast<size_t>(features.rows()), 1) : mask;
    return f;
}

// Bundles the frozen backbone, encoder, schedule, and a trainable adapter so
// the full train/sample loop is reachable from python.
struct DeskEngine {
    DenoiserConfig denoiser_config;
    AdapterConfig adapter_config;
    NoiseSchedule schedule;
    DenoiserParams unet;
    HashedTextEncoder encoder;
    AdapterParams adapter;

    DeskEngine(int base_width, int token_dim, int adapter_blocks, int adapter_latents,
               int adapter_width, int encoder_dim, int schedule_steps, uint64_t seed)
        : schedule(NoiseSchedule::linear(schedule_steps)), encoder(encoder_dim, 512) {
        denoiser_config.base_width = base_width;
        denoiser_config.token_dim = token_dim;
        adapter_config.n_blocks = adapter_blocks;
        adapter_config.n_latents = adapter_latents;
        adapter_config.width = adapter_width;
        adapter_config.text_dim = encoder_dim;
        adapter_config.out_dim = token_dim;
        unet = init_denoiser(denoiser_config, Rng(seed).stream("backbone"));
        adapter = init_params(adapter_config, Rng(seed).stream("adapter"));
    }

    std::vector<double> train_synthetic(int items, int iterations, int batch_size, uint64_t seed) {
        auto dataset = dataset_from_records(synth_records(items, seed), denoiser_config);
        TrainerConfig trainer;
        trainer.iterations = iterations;
        trainer.batch_size = batch_size;
        trainer.seed = seed;
        return train_adapter(unet, encoder, adapter, dataset, trainer, schedule).loss_curve;
    }

    py::array_t<double> sample(const std::optional<std::string>& caption,
                               const std::optional<std::string>& style,
                               const std::map<std::string, std::string>& poa, int steps,
                               double guidance, uint64_t seed) {
        SamplerConfig sampler;
        sampler.n_steps = steps;
        sampler.guidance_scale = guidance;
        ConditionSet cs = make_condition_set(caption, style, poa);
        return tensor_to_array(ddim_sample(unet, adapter, encoder, cs, sampler, schedule, seed));
    }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Principles-of-art conditioned diffusion toolkit";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    // dataset
    m.def("canonical_principle_order", [] {
        std::vector<std::string> names;
        for (Principle p : canonical_principle_order()) names.emplace_back(principle_name(p));
        return names;
    });
    m.def("style_vocabulary", [] { return style_vocabulary(); });
    m.def("normalize_record", [](const std::string& line) { return write_record(parse_record(line)); },
          py::arg("line"), "Parse one dataset line and re-serialize it in canonical form");
    m.def("validate_record",
          [](const std::string& line) {
              std::vector<std::tuple<std::string, std::string>> out;
              for (const auto& v : validate_record(parse_record(line)))
                  out.emplace_back(std::string(principle_name(v.principle)), v.detail);
              return out;
          },
          py::arg("line"), "Soft-rule violations for one dataset line");
    m.def("split_ids",
          [](const std::vector<std::string>& lines, size_t test_size, uint64_t seed) {
              std::vector<AnnotationRecord> records;
              for (const auto& line : lines) records.push_back(parse_record(line));
              DatasetSplit split = split_dataset(records, test_size, seed);
              return py::make_tuple(split.train, split.test);
          },
          py::arg("lines"), py::arg("test_size"), py::arg("seed"));
    m.def("synth_records",
          [](int count, uint64_t seed) {
              std::vector<std::string> lines;
              for (const auto& r : synth_records(count, seed)) lines.push_back(write_record(r));
              return lines;
          },
          py::arg("count"), py::arg("seed"));

    // conditioning
    m.def("pack_template",
          [](const std::optional<std::string>& caption, const std::optional<std::string>& style,
             const std::map<std::string, std::string>& poa) {
              return pack_template(make_condition_set(caption, style, poa));
          },
          py::arg("caption") = std::nullopt, py::arg("style") = std::nullopt,
          py::arg("poa") = std::map<std::string, std::string>{});
    m.def("sample_drop_mask",
          [](double p_caption, double p_each, double p_drop_all, double p_keep_all,
             uint64_t seed) {
              DropPolicy policy{p_caption, p_each, p_drop_all, p_keep_all};
              Rng rng(seed);
              DropMask mask = sample_drop_mask(policy, rng);
              py::dict out;
              out["drop_caption"] = mask.drop_caption;
              std::vector<bool> flags(mask.drop_poa.begin(), mask.drop_poa.end());
              out["drop_poa"] = flags;
              out["mode"] = mask.mode == DropMode::drop_all
                                ? "drop_all"
                                : mask.mode == DropMode::keep_all ? "keep_all" : "independent";
              return out;
          },
          py::arg("p_caption"), py::arg("p_each_poa"), py::arg("p_drop_all_poa"),
          py::arg("p_keep_all_poa"), py::arg("seed"));
    m.def("encode_text",
          [](const std::string& text, int feature_dim, int max_context, uint64_t vocab_seed) {
              HashedTextEncoder encoder(feature_dim, max_context, vocab_seed);
              return encoder.encode(text).features;
          },
          py::arg("text"), py::arg("feature_dim") = 64, py::arg("max_context") = 512,
          py::arg("vocab_seed") = 0);

    // adapter
    py::class_<AdapterConfig>(m, "AdapterConfig")
        .def(py::init([](int n_blocks, int n_latents, int width, int n_heads, int text_dim,
                         int out_dim, int time_dim) {
                 AdapterConfig c{n_blocks, n_latents, width, n_heads, text_dim, out_dim, time_dim};
                 c.validate();
                 return c;
             }),
             py::arg("n_blocks") = 6, py::arg("n_latents") = 64, py::arg("width") = 64,
             py::arg("n_heads") = 4, py::arg("text_dim") = 64, py::arg("out_dim") = 32,
             py::arg("time_dim") = 64)
        .def_readonly("n_blocks", &AdapterConfig::n_blocks)
        .def_readonly("n_latents", &AdapterConfig::n_latents)
        .def_readonly("width", &AdapterConfig::width)
        .def_readonly("out_dim", &AdapterConfig::out_dim);
    m.def("param_count", &param_count, py::arg("config"));
    py::class_<AdapterParams>(m, "Adapter")
        .def(py::init([](const AdapterConfig& config, uint64_t seed) {
                 return init_params(config, Rng(seed));
             }),
             py::arg("config"), py::arg("seed"))
        .def_property_readonly("config", [](const AdapterParams& p) { return p.config; })
        .def("scalar_count", &AdapterParams::scalar_count)
        .def("checksum", &AdapterParams::checksum)
        .def("forward",
             [](const AdapterParams& p, const Eigen::MatrixXd& features,
                const std::vector<uint8_t>& mask, int t) {
                 return adapter_forward(p, make_features(features, mask), t);
             },
             py::arg("features"), py::arg("mask") = std::vector<uint8_t>{}, py::arg("t") = 0)
        .def("save",
             [](const AdapterParams& p, const std::string& path) { save_adapter(path, p); })
        .def_static("load", [](const std::string& path) { return load_adapter(path).first; });
    m.def("timestep_sinusoid", &timestep_sinusoid, py::arg("t"), py::arg("dim"));

    // diffusion
    py::class_<NoiseSchedule>(m, "NoiseSchedule")
        .def_static("linear", &NoiseSchedule::linear, py::arg("T") = 1000,
                    py::arg("beta_start") = 1e-4, py::arg("beta_end") = 0.02)
        .def_readonly("T", &NoiseSchedule::T)
        .def_readonly("betas", &NoiseSchedule::betas)
        .def_readonly("alphas_cumprod", &NoiseSchedule::alphas_cumprod);
    m.def("forward_noise",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x0, int t,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& eps,
             const NoiseSchedule& schedule) {
              return tensor_to_array(forward_noise(array_to_tensor(x0), t, array_to_tensor(eps),
                                                   schedule));
          },
          py::arg("x0"), py::arg("t"), py::arg("eps"), py::arg("schedule"));
    m.def("cfg_combine",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& cond,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& uncond,
             double s) {
              return tensor_to_array(cfg_combine(array_to_tensor(cond), array_to_tensor(uncond), s));
          },
          py::arg("eps_cond"), py::arg("eps_uncond"), py::arg("scale"));
    m.def("ddim_timesteps", &ddim_timesteps, py::arg("T"), py::arg("n_steps"));

    py::class_<DeskEngine>(m, "DeskEngine")
        .def(py::init<int, int, int, int, int, int, int, uint64_t>(),
             py::arg("base_width") = 16, py::arg("token_dim") = 16, py::arg("adapter_blocks") = 2,
             py::arg("adapter_latents") = 16, py::arg("adapter_width") = 32,
             py::arg("encoder_dim") = 32, py::arg("schedule_steps") = 200, py::arg("seed") = 0)
        .def("train_synthetic", &DeskEngine::train_synthetic, py::arg("items") = 4,
             py::arg("iterations") = 50, py::arg("batch_size") = 2, py::arg("seed") = 0)
        .def("sample", &DeskEngine::sample, py::arg("caption") = std::nullopt,
             py::arg("style") = std::nullopt, py::arg("poa") = std::map<std::string, std::string>{},
             py::arg("steps") = 10, py::arg("guidance") = 7.5, py::arg("seed") = 0);

    // prompts
    m.def("build_annotation_prompt",
          [] { return build_annotation_prompt(AnnotationPromptConfig::defaults()); });
    m.def("parse_annotation_response",
          [](const std::string& reply) {
              RawAnnotation raw = parse_annotation_response(reply);
              py::dict out;
              out["caption"] = raw.caption;
              out["style"] = raw.style;
              py::dict poa;
              for (const auto& [name, entry] : raw.poa) {
                  py::dict e;
                  e["prominence"] = entry.prominence;
                  if (entry.analysis) e["analysis"] = *entry.analysis;
                  poa[py::str(name)] = e;
              }
              out["PoA"] = poa;
              return out;
          },
          py::arg("reply"));
    m.def("build_judge_prompt",
          [](const std::string& caption, const std::map<std::string, std::string>& poa,
             int n_images) {
              return build_judge_prompt(make_condition_set(caption, std::nullopt, poa), n_images);
          },
          py::arg("caption"), py::arg("poa"), py::arg("n_images"));
    m.def("parse_judge_response", &parse_judge_response, py::arg("reply"), py::arg("n_images"),
          py::arg("statement_types"));
    m.def("ir_prompt_principle", &ir_prompt_principle, py::arg("caption"),
          py::arg("principle_text"));

    // tournament
    m.def("run_tournament",
          [](const std::vector<std::string>& card_lines, const std::string& mode,
             bool include_content) {
              std::vector<Scorecard> cards;
              for (const auto& line : card_lines) cards.push_back(parse_scorecard(line));
              AssessmentMode m2 = mode == "alpha" ? AssessmentMode::alpha : AssessmentMode::beta;
              WinTally tally = run_tournament(cards, m2, include_content);
              return emit_report({{mode, tally}}).json;
          },
          py::arg("cards"), py::arg("mode") = "beta", py::arg("include_content") = false,
          "Returns the evaluation report as a JSON string");
    m.def("corpus_stats",
          [](const std::vector<std::string>& lines) {
              std::vector<AnnotationRecord> records;
              for (const auto& line : lines) records.push_back(parse_record(line));
              AnnotationTotals totals = annotation_totals(records);
              py::dict out;
              out["records"] = totals.records;
              out["poa_annotations"] = totals.poa_annotations;
              out["total_words"] = totals.total_words;
              out["avg_caption_words"] = totals.avg_caption_words;
              out["avg_poa_words"] = totals.avg_poa_words;
              return out;
          },
          py::arg("lines"));
}
