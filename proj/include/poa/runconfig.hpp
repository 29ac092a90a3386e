#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "poa/adapter.hpp"
#include "poa/conditioning.hpp"
#include "poa/diffusion.hpp"

namespace poa {

// Flat key-value run configuration: defaults < config file < flag overrides.
// Unknown keys are rejected; the resolved map is logged before every run.
struct RunConfig {
    uint64_t seed = 0;
    int iterations = 2000;
    int batch_size = 4;
    double learning_rate = 1e-3;
    double weight_decay = 0.01;
    DropPolicy drop_policy;

    int schedule_steps = 1000;
    double beta_start = 1e-4;
    double beta_end = 0.02;

    DenoiserConfig denoiser;
    AdapterConfig adapter;
    int encoder_dim = 64;
    int encoder_max_context = 512;
    uint64_t backbone_seed = 7;

    static RunConfig from_file(const std::filesystem::path& path);
    // `line` is "key = value"; bad keys/values throw.
    void apply(const std::string& key, const std::string& value);
    // Fully-resolved key-value view, parseable by from_file.
    std::string resolved() const;

    NoiseSchedule make_schedule() const;
};

}  // namespace poa
