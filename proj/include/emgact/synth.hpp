#ifndef EMGACT_SYNTH_HPP
#define EMGACT_SYNTH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "emgact/refine.hpp"
#include "emgact/signal.hpp"
#include "emgact/stimulus.hpp"

namespace emgact {

// Ground-truth generator configuration.  The signal model is zero-mean
// Gaussian noise whose standard deviation is rest_noise_sigma at rest and
// rest_noise_sigma * activity_gain inside each true activity segment, with
// raised-cosine ramps of envelope_ramp_s just inside each edge: amplitude
// starts rising at the onset and has decayed back to rest by the
// termination, so the truth edges bound all elevation.
//
// Reaction delay and gesture duration are sampled per repetition, uniformly
// within mean +/- jitter, so the true edges drift relative to the stimulus
// the way a human subject's do.
struct SynthConfig {
    StimulusSchedule schedule;
    int channels = 3;
    double rest_noise_sigma = 1.0;
    double activity_gain = 4.0;
    double reaction_delay_mean_s = 0.5;
    double reaction_delay_jitter_s = 0.2;
    double gesture_duration_mean_s = 2.0;
    double gesture_duration_jitter_s = 0.3;
    double envelope_ramp_s = 0.3;
    std::uint64_t seed = 42;

    void validate() const;  // throws std::invalid_argument
};

// One true segment per repetition, ordered and disjoint, in seconds.
using GroundTruth = std::vector<RepetitionSegment>;

// Deterministic given config.seed; identical seeds yield bit-identical
// signals.
std::pair<MultiChannelSignal, GroundTruth> generate(const SynthConfig& config);

}  // namespace emgact

#endif
