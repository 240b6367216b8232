#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "emgact/pipeline.hpp"
#include "emgact/synth.hpp"

using namespace emgact;

namespace {

SynthConfig pipeline_config() {
    SynthConfig c;
    c.schedule.stimulus_len_s = 2.0;
    c.schedule.rest_len_s = 3.0;
    c.schedule.repetitions = 6;
    c.schedule.hardware_delay_s = 0.5;
    c.schedule.rate_hz = 400.0;
    c.channels = 3;
    c.rest_noise_sigma = 0.1;
    c.activity_gain = 5.0;
    c.reaction_delay_mean_s = 0.4;
    c.reaction_delay_jitter_s = 0.1;
    c.gesture_duration_mean_s = 1.2;
    c.gesture_duration_jitter_s = 0.2;
    c.envelope_ramp_s = 0.2;
    c.seed = 7;
    return c;
}

DetectionParams pipeline_params() {
    DetectionParams p;
    p.window_len_samples = 40;  // 100 ms at 400 Hz
    p.hop_samples = 20;
    return p;
}

}  // namespace

TEST_CASE("detection recovers every synthetic repetition") {
    const auto config = pipeline_config();
    const auto [signal, truth] = generate(config);
    const auto result =
        run_detection(signal, config.schedule, pipeline_params());

    CHECK(result.failed_repetitions.empty());
    REQUIRE(result.segments.size() == truth.size());
    for (std::size_t k = 0; k < truth.size(); ++k) {
        CHECK(result.segments[k].repetition == truth[k].repetition);
        CHECK(std::abs(result.segments[k].onset_s - truth[k].onset_s) < 0.25);
        CHECK(std::abs(result.segments[k].termination_s -
                       truth[k].termination_s) < 0.35);
    }

    // One model per repetition, each a valid 2-state HMM.
    REQUIRE(result.models.size() == truth.size());
    for (const auto& m : result.models) {
        CHECK_NOTHROW(m.validate());
    }

    // Every surviving activity run respects the duration constraint.
    for (const auto& seg : result.segments) {
        CHECK(seg.termination_s - seg.onset_s >=
              pipeline_params().min_activity_s);
    }
}

TEST_CASE("detection works with a single whole-recording model") {
    const auto config = pipeline_config();
    const auto [signal, truth] = generate(config);
    auto params = pipeline_params();
    params.train_per_recording = true;
    const auto result = run_detection(signal, config.schedule, params);
    CHECK(result.models.size() == 1);
    CHECK(result.segments.size() == truth.size());
}

TEST_CASE("pure noise yields zero segments under pooled training") {
    auto config = pipeline_config();
    config.activity_gain = 1.0;
    // Pool enough repetitions that one repetition's stimulus block is a
    // small fraction of the training data; see the limitation note below.
    config.schedule.repetitions = 20;
    const auto [signal, truth] = generate(config);
    auto params = pipeline_params();
    params.train_per_recording = true;
    const auto result = run_detection(signal, config.schedule, params);
    CHECK(result.segments.empty());
    CHECK(result.failed_repetitions.size() == truth.size());
}

// Known limitation: with per-repetition training the emissions are estimated
// from the same short sequence that is then decoded, so on featureless noise
// the quantizer spreads the rest cluster over all 16 levels and sampling
// fluctuations in the per-label symbol counts can make Viterbi reproduce the
// stimulus labels.  Pooled training (above) averages those fluctuations away.
// This pins the structural invariant, not segment-free output.
TEST_CASE("pure noise per-repetition accounts for every repetition") {
    auto config = pipeline_config();
    config.activity_gain = 1.0;
    const auto [signal, truth] = generate(config);
    const auto result =
        run_detection(signal, config.schedule, pipeline_params());
    CHECK(result.segments.size() + result.failed_repetitions.size() ==
          truth.size());
}

TEST_CASE("zero reaction delay detects the stimulus intervals themselves") {
    auto config = pipeline_config();
    config.reaction_delay_mean_s = 0.0;
    config.reaction_delay_jitter_s = 0.0;
    config.gesture_duration_mean_s = config.schedule.stimulus_len_s;
    config.gesture_duration_jitter_s = 0.0;
    config.envelope_ramp_s = 0.1;
    const auto [signal, truth] = generate(config);
    const auto result =
        run_detection(signal, config.schedule, pipeline_params());
    REQUIRE(result.segments.size() == truth.size());
    for (const auto& seg : result.segments) {
        CHECK(std::abs(seg.onset_s -
                       config.schedule.stimulus_start_s(seg.repetition)) <
              0.25);
        CHECK(std::abs(seg.termination_s -
                       config.schedule.stimulus_end_s(seg.repetition)) < 0.35);
    }
}

TEST_CASE("raw states come from the models, refined states from the rules") {
    const auto config = pipeline_config();
    const auto [signal, truth] = generate(config);
    const auto result =
        run_detection(signal, config.schedule, pipeline_params());

    REQUIRE(result.raw_states.size() == result.symbols.size());
    REQUIRE(result.refined_states.size() == result.symbols.size());
    for (std::size_t w = 0; w < result.refined_states.size(); ++w) {
        const int v = result.refined_states.states[w];
        CHECK((v == 0 || v == 1));
    }

    // Within each repetition the refined sequence is a single block of 1s.
    for (std::size_t k = 0; k < result.ranges.size(); ++k) {
        const auto [begin, end] = result.ranges[k];
        int transitions = 0;
        for (std::size_t w = begin + 1; w < end; ++w) {
            transitions += result.refined_states.states[w] !=
                           result.refined_states.states[w - 1];
        }
        CHECK(transitions <= 2);
    }
}

TEST_CASE("detection parameter validation") {
    const auto config = pipeline_config();
    const auto [signal, truth] = generate(config);
    auto params = pipeline_params();
    params.num_levels = 1;
    CHECK_THROWS_AS(run_detection(signal, config.schedule, params),
                    std::invalid_argument);
    params = pipeline_params();
    params.smoothing = -1.0;
    CHECK_THROWS_AS(run_detection(signal, config.schedule, params),
                    std::invalid_argument);
    params = pipeline_params();
    params.window_len_samples = signal.samples_per_channel() + 1;
    CHECK_THROWS_AS(run_detection(signal, config.schedule, params),
                    std::invalid_argument);
}

TEST_CASE("validation emits eight records and favors detected edges") {
    const auto config = pipeline_config();
    const auto [signal, truth] = generate(config);
    const auto detection =
        run_detection(signal, config.schedule, pipeline_params());
    REQUIRE_FALSE(detection.segments.empty());

    ValidationParams params;
    params.folds = 3;  // 6 repetitions -> 12 examples per set
    const auto result =
        run_validation(signal, config.schedule, detection.segments, params);

    REQUIRE(result.records.size() == 8);
    int seen[2][2][2] = {};
    for (const auto& rec : result.records) {
        CHECK(rec.gesture == params.gesture);
        CHECK(rec.subject == params.subject);
        CHECK(rec.accuracy_pct >= 0.0);
        CHECK(rec.accuracy_pct <= 100.0);
        const int s = rec.source == EdgeSource::stimulus ? 0 : 1;
        const int k = rec.edge_kind == EdgeKind::onset ? 0 : 1;
        const int m = rec.mode == "half" ? 0 : 1;
        seen[s][k][m] += 1;
    }
    for (int s = 0; s < 2; ++s) {
        for (int k = 0; k < 2; ++k) {
            for (int m = 0; m < 2; ++m) {
                CHECK(seen[s][k][m] == 1);
            }
        }
    }

    // With a 0.3-0.5 s reaction delay the stimulus-centered windows straddle
    // rest on both sides, so detected edges must classify at least as well.
    double stim = 0.0, det = 0.0;
    for (const auto& rec : result.records) {
        if (rec.mode != "half") {
            (rec.source == EdgeSource::stimulus ? stim : det) +=
                rec.accuracy_pct;
        }
    }
    CHECK(det >= stim);

    // Each edge set carries one rest and one activity example per edge.
    for (int s = 0; s < 2; ++s) {
        for (int k = 0; k < 2; ++k) {
            const auto& set = result.sets[s][k];
            CHECK(set.features.size() == set.labels.size());
            CHECK(set.features.size() >= 2);
        }
    }
}

TEST_CASE("validation requires detected segments") {
    const auto config = pipeline_config();
    const auto [signal, truth] = generate(config);
    CHECK_THROWS_AS(
        run_validation(signal, config.schedule, {}, ValidationParams{}),
        std::invalid_argument);
}

TEST_CASE("state csv lists one row per window") {
    const auto config = pipeline_config();
    const auto [signal, truth] = generate(config);
    const auto result =
        run_detection(signal, config.schedule, pipeline_params());

    std::stringstream buf;
    write_states_csv(buf, result);
    std::string line;
    std::getline(buf, line);
    CHECK(line ==
          "window,t_s,symbol,stimulus_label,raw_state,refined_state,"
          "repetition");
    std::size_t rows = 0;
    while (std::getline(buf, line)) {
        ++rows;
    }
    CHECK(rows == result.symbols.size());
}
