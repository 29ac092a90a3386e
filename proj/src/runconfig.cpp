#include "poa/runconfig.hpp"

#include <charconv>
#include <sstream>

#include "poa/errors.hpp"
#include "poa/io.hpp"
#include "poa/text.hpp"

namespace poa {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigMismatch, "bad numeric value for '" + key + "': " + value);
    }
}

int64_t parse_int(const std::string& key, const std::string& value) {
    int64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw Error(ErrorKind::ConfigMismatch, "bad integer value for '" + key + "': " + value);
    return out;
}

}  // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "seed") seed = static_cast<uint64_t>(parse_int(key, value));
    else if (key == "iterations") iterations = static_cast<int>(parse_int(key, value));
    else if (key == "batch_size") batch_size = static_cast<int>(parse_int(key, value));
    else if (key == "learning_rate") learning_rate = parse_double(key, value);
    else if (key == "weight_decay") weight_decay = parse_double(key, value);
    else if (key == "drop_caption") drop_policy.p_caption = parse_double(key, value);
    else if (key == "drop_each_poa") drop_policy.p_each_poa = parse_double(key, value);
    else if (key == "drop_all_poa") drop_policy.p_drop_all_poa = parse_double(key, value);
    else if (key == "keep_all_poa") drop_policy.p_keep_all_poa = parse_double(key, value);
    else if (key == "schedule_steps") schedule_steps = static_cast<int>(parse_int(key, value));
    else if (key == "beta_start") beta_start = parse_double(key, value);
    else if (key == "beta_end") beta_end = parse_double(key, value);
    else if (key == "latent_channels") denoiser.channels = static_cast<int>(parse_int(key, value));
    else if (key == "latent_height") denoiser.height = static_cast<int>(parse_int(key, value));
    else if (key == "latent_width") denoiser.width = static_cast<int>(parse_int(key, value));
    else if (key == "denoiser_base_width") denoiser.base_width = static_cast<int>(parse_int(key, value));
    else if (key == "denoiser_heads") denoiser.n_heads = static_cast<int>(parse_int(key, value));
    else if (key == "denoiser_time_dim") denoiser.time_dim = static_cast<int>(parse_int(key, value));
    else if (key == "adapter_blocks") adapter.n_blocks = static_cast<int>(parse_int(key, value));
    else if (key == "adapter_latents") adapter.n_latents = static_cast<int>(parse_int(key, value));
    else if (key == "adapter_width") adapter.width = static_cast<int>(parse_int(key, value));
    else if (key == "adapter_heads") adapter.n_heads = static_cast<int>(parse_int(key, value));
    else if (key == "adapter_time_dim") adapter.time_dim = static_cast<int>(parse_int(key, value));
    else if (key == "token_dim") {
        int v = static_cast<int>(parse_int(key, value));
        denoiser.token_dim = v;
        adapter.out_dim = v;
    } else if (key == "encoder_dim") {
        encoder_dim = static_cast<int>(parse_int(key, value));
        adapter.text_dim = encoder_dim;
    } else if (key == "encoder_max_context") {
        encoder_max_context = static_cast<int>(parse_int(key, value));
    } else if (key == "backbone_seed") {
        backbone_seed = static_cast<uint64_t>(parse_int(key, value));
    } else {
        throw Error(ErrorKind::ConfigMismatch, "unknown config key '" + key + "'");
    }
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    RunConfig cfg;
    auto lines = read_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::ConfigMismatch,
                        path.string() + ":" + std::to_string(i + 1) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            cfg.apply(key, value);
        } catch (const Error& e) {
            throw Error(e.kind(), path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return cfg;
}

std::string RunConfig::resolved() const {
    std::ostringstream out;
    out.precision(17);
    out << "seed = " << seed << "\n";
    out << "iterations = " << iterations << "\n";
    out << "batch_size = " << batch_size << "\n";
    out << "learning_rate = " << learning_rate << "\n";
    out << "weight_decay = " << weight_decay << "\n";
    out << "drop_caption = " << drop_policy.p_caption << "\n";
    out << "drop_each_poa = " << drop_policy.p_each_poa << "\n";
    out << "drop_all_poa = " << drop_policy.p_drop_all_poa << "\n";
    out << "keep_all_poa = " << drop_policy.p_keep_all_poa << "\n";
    out << "schedule_steps = " << schedule_steps << "\n";
    out << "beta_start = " << beta_start << "\n";
    out << "beta_end = " << beta_end << "\n";
    out << "latent_channels = " << denoiser.channels << "\n";
    out << "latent_height = " << denoiser.height << "\n";
    out << "latent_width = " << denoiser.width << "\n";
    out << "denoiser_base_width = " << denoiser.base_width << "\n";
    out << "denoiser_heads = " << denoiser.n_heads << "\n";
    out << "denoiser_time_dim = " << denoiser.time_dim << "\n";
    out << "adapter_blocks = " << adapter.n_blocks << "\n";
    out << "adapter_latents = " << adapter.n_latents << "\n";
    out << "adapter_width = " << adapter.width << "\n";
    out << "adapter_heads = " << adapter.n_heads << "\n";
    out << "adapter_time_dim = " << adapter.time_dim << "\n";
    out << "token_dim = " << denoiser.token_dim << "\n";
    out << "encoder_dim = " << encoder_dim << "\n";
    out << "encoder_max_context = " << encoder_max_context << "\n";
    out << "backbone_seed = " << backbone_seed << "\n";
    return out.str();
}

NoiseSchedule RunConfig::make_schedule() const {
    return NoiseSchedule::linear(schedule_steps, beta_start, beta_end);
}

}  // namespace poa
