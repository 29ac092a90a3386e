#include "poa/synth.hpp"

#include <cmath>

#include "poa/rng.hpp"

namespace poa {

Tensor3 synth_latent(const std::string& record_id, int channels, int height, int width,
                     double amplitude) {
    Rng rng(Rng::mix(Rng::fnv1a(record_id) ^ 0x706f61746cull));
    Tensor3 out = Tensor3::zeros(channels, height, width);
    constexpr double kTau = 6.283185307179586476925286766559;
    for (int c = 0; c < channels; ++c) {
        double fx1 = 0.5 + 1.5 * rng.uniform01(), fy1 = 0.5 + 1.5 * rng.uniform01();
        double fx2 = 0.5 + 2.5 * rng.uniform01(), fy2 = 0.5 + 2.5 * rng.uniform01();
        double p1 = kTau * rng.uniform01(), p2 = kTau * rng.uniform01();
        double a1 = 0.6 + 0.4 * rng.uniform01(), a2 = 0.4 + 0.4 * rng.uniform01();
        double offset = 0.6 * (rng.uniform01() - 0.5);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                double u = static_cast<double>(x) / width;
                double v = static_cast<double>(y) / height;
                double value = a1 * std::sin(kTau * (fx1 * u + fy1 * v) + p1) +
                               a2 * std::cos(kTau * (fx2 * u - fy2 * v) + p2) + offset;
                out.at(c, y, x) = amplitude * value;
            }
        }
    }
    return out;
}

namespace {

const std::vector<std::string>& subjects() {
    static const std::vector<std::string> v = {
        "A quiet harbor with moored boats under a pale sky",
        "Rolling hills with a winding river and scattered trees",
        "Two dancers in flowing dresses against a dark backdrop",
        "A cluster of houses with red roofs beside a field",
        "A vase of wildflowers on a wooden table near a window",
        "A stormy coastline with waves breaking over dark rocks",
        "A market square crowded with figures and striped awnings",
        "A lone birch grove with sunlight filtering through leaves",
        "A bridge over a canal with reflections in still water",
        "A mountain ridge at dusk with snow catching the last light",
        "An orchard in bloom with petals drifting over tall grass",
        "A reading figure by lamplight in a cluttered study",
    };
    return v;
}

std::string analysis_for(Principle p, Rng& rng) {
    static const char* kOpeners[kPrincipleCount] = {
        "Balance is achieved",   "Harmony is achieved", "Variety is present",
        "Unity is evident",      "Contrast is created", "Emphasis is placed",
        "Proportion is maintained", "Movement is suggested", "Rhythm is created",
        "Pattern is present",
    };
    static const std::vector<std::string> middles = {
        "through the even distribution of visual weight across the composition",
        "by the repeated use of similar hues and textures across the composition",
        "in the varied shapes and tones placed throughout the composition",
        "as every element supports the central theme of the composition",
        "between the bright focal area and the darker surroundings",
        "on the central figures through placement and lighting",
        "with the relative sizes of foreground and background elements",
        "by diagonal lines that lead the eye across the composition",
        "through the regular spacing of repeated vertical forms",
        "in the recurring motifs arranged across the composition",
    };
    static const std::vector<std::string> effects = {
        "lending the composition a sense of stability",
        "giving the composition a cohesive and ordered feel",
        "holding the viewer's attention across the composition",
        "drawing the eye toward the principal subject",
        "adding a calm and continuous flow to the composition",
        "creating visual interest without overwhelming the composition",
    };
    std::string out = kOpeners[static_cast<int>(p)];
    if (p == Principle::balance) {
        static const char* senses[3] = {"Symmetric", "Asymmetric", "Radial"};
        out = std::string(senses[rng.uniform_int(3)]) + " balance is achieved";
    }
    out += " " + middles[rng.uniform_int(middles.size())] + ", " +
           effects[rng.uniform_int(effects.size())] + ".";
    return out;
}

}  // namespace

std::vector<AnnotationRecord> synth_records(int count, uint64_t seed) {
    std::vector<AnnotationRecord> records;
    Rng root = Rng(seed).stream("synth");
    const auto& vocab = style_vocabulary();
    for (int i = 0; i < count; ++i) {
        Rng rng = root.stream(static_cast<uint64_t>(i));
        AnnotationRecord r;
        r.id = "synth-" + std::to_string(i);
        r.image_ref = "images/" + r.id + ".png";
        r.artist = "generator";
        size_t s0 = rng.uniform_int(vocab.size());
        r.true_style = vocab[s0];
        r.caption = subjects()[rng.uniform_int(subjects().size())] + ".";
        size_t s1 = (s0 + 1 + rng.uniform_int(vocab.size() - 1)) % vocab.size();
        size_t s2 = s1;
        while (s2 == s1 || s2 == s0) s2 = rng.uniform_int(vocab.size());
        // true style leads the predictions most of the time
        if (rng.uniform01() < 0.7) {
            r.predicted_styles = {vocab[s0], vocab[s1], vocab[s2]};
        } else {
            r.predicted_styles = {vocab[s1], vocab[s0], vocab[s2]};
        }
        for (Principle p : canonical_principle_order()) {
            double u = rng.uniform01();
            if (u < 0.45) continue;
            PoaEntry entry;
            if (u < 0.55) {
                entry.prominence = Prominence::mild;
            } else if (u < 0.8) {
                entry.prominence = Prominence::moderate;
            } else {
                entry.prominence = Prominence::strong;
            }
            entry.analysis = analysis_for(p, rng);
            if (p == Principle::balance) entry.balance_sense = extract_balance_sense(*entry.analysis);
            r.poa[p] = std::move(entry);
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<TrainItem> dataset_from_records(const std::vector<AnnotationRecord>& records,
                                            const DenoiserConfig& shape) {
    std::vector<TrainItem> items;
    items.reserve(records.size());
    for (const auto& r : records) {
        TrainItem item;
        item.latent = synth_latent(r.id, shape.channels, shape.height, shape.width);
        item.conditions = condition_set_from_record(r);
        items.push_back(std::move(item));
    }
    return items;
}

}  // namespace poa
