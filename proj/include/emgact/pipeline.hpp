#ifndef EMGACT_PIPELINE_HPP
#define EMGACT_PIPELINE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "emgact/hmm.hpp"
#include "emgact/refine.hpp"
#include "emgact/signal.hpp"
#include "emgact/stimulus.hpp"
#include "emgact/validate.hpp"

namespace emgact {

struct DetectionParams {
    std::size_t window_len_samples = 110;  // 100 ms at 1.1 kHz
    std::size_t hop_samples = 55;          // 50% overlap
    int num_levels = 16;
    double smoothing = 1.0;
    double min_activity_s = 0.8;
    bool train_per_recording = false;  // default: one model per repetition
};

struct DetectionResult {
    WindowGrid grid;
    std::vector<double> envelope;  // channel-collapsed RMS stream
    QuantizedSequence symbols;
    StateSequence initial_labels;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::vector<DiscreteHmm> models;  // one per repetition, or one total
    StateSequence raw_states;         // Viterbi output before refinement
    StateSequence refined_states;
    std::vector<RepetitionSegment> segments;
    std::vector<int> failed_repetitions;  // no surviving activity
};

// Full detection chain: RMS envelope -> channel collapse -> quantization ->
// stimulus-derived labels -> supervised estimation -> Viterbi -> duration
// constraint -> first-onset/last-termination consolidation, repetition by
// repetition.
DetectionResult run_detection(const MultiChannelSignal& signal,
                              const StimulusSchedule& schedule,
                              const DetectionParams& params);

struct ValidationParams {
    double half_width_s = 0.25;
    double svm_c = 1.0;
    int folds = 5;
    std::uint64_t seed = 42;
    std::string gesture = "synthetic";
    std::string subject = "s1";
};

struct ValidationResult {
    // Indexed by [source][kind]: stimulus/detected x onset/termination.
    EdgeWindowSet sets[2][2];
    std::vector<AccuracyRecord> records;  // 2 sources x 2 kinds x 2 modes
};

// Edge-window classification experiment comparing stimulus-derived edges with
// detected ones.
ValidationResult run_validation(const MultiChannelSignal& signal,
                                const StimulusSchedule& schedule,
                                const std::vector<RepetitionSegment>& detected,
                                const ValidationParams& params);

// Per-window dump of the detection pipeline (for plotting): window index,
// center time, symbol, stimulus label, raw and refined states, repetition.
void write_states_csv(std::ostream& out, const DetectionResult& result);

}  // namespace emgact

#endif
