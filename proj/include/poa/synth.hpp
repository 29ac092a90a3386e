#pragma once

#include <string>
#include <vector>

#include "poa/compart.hpp"
#include "poa/diffusion.hpp"

namespace poa {

// Procedural latent for a record id: a few smooth 2D waves per channel with
// id-derived frequencies and phases. Stands in for an encoded image at desk
// scale; deterministic in (id, shape).
Tensor3 synth_latent(const std::string& record_id, int channels, int height, int width,
                     double amplitude = 2.5);

// Deterministic synthetic annotation records for training/sampling demos and
// tests: plausible captions, styles from the vocabulary, and short analyses
// over a random subset of principles.
std::vector<AnnotationRecord> synth_records(int count, uint64_t seed);

// Pairs each record's condition set with its procedural latent.
std::vector<TrainItem> dataset_from_records(const std::vector<AnnotationRecord>& records,
                                            const DenoiserConfig& shape);

}  // namespace poa
