#include "emgact/pipeline.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace emgact {

namespace {

QuantizedSequence slice_symbols(const QuantizedSequence& whole,
                                std::size_t begin, std::size_t end) {
    QuantizedSequence out;
    out.symbols.assign(whole.symbols.begin() + begin,
                       whole.symbols.begin() + end);
    out.num_levels = whole.num_levels;
    out.quantizer_min = whole.quantizer_min;
    out.quantizer_max = whole.quantizer_max;
    return out;
}

StateSequence slice_states(const StateSequence& whole, std::size_t begin,
                           std::size_t end) {
    StateSequence out;
    out.states.assign(whole.states.begin() + begin, whole.states.begin() + end);
    out.grid = whole.grid;
    return out;
}

}  // namespace

DetectionResult run_detection(const MultiChannelSignal& signal,
                              const StimulusSchedule& schedule,
                              const DetectionParams& params) {
    signal.validate();
    schedule.validate();
    if (params.num_levels < 2) {
        throw std::invalid_argument("detect: need at least 2 quantizer levels");
    }
    if (params.smoothing < 0.0 || params.min_activity_s < 0.0) {
        throw std::invalid_argument("detect: negative smoothing or duration");
    }

    DetectionResult result;
    const RmsEnvelope envelope = compute_rms_envelope(
        signal, params.window_len_samples, params.hop_samples);
    result.grid = envelope.grid;
    result.envelope = collapse_channels(envelope);
    result.symbols = quantize_uniform(result.envelope, params.num_levels);
    result.initial_labels =
        stimulus_labels(schedule, result.envelope.size(),
                        params.window_len_samples, params.hop_samples);
    result.ranges =
        split_repetitions(result.envelope.size(), schedule, params.hop_samples);

    result.raw_states.states.assign(result.envelope.size(), 0);
    result.raw_states.grid = result.grid;

    if (params.train_per_recording) {
        const DiscreteHmm model = estimate_supervised(
            result.symbols, result.initial_labels, params.smoothing);
        result.models.push_back(model);
        result.raw_states.states =
            viterbi_decode(model, result.symbols).states.states;
    } else {
        for (const auto& [begin, end] : result.ranges) {
            if (end - begin < 2) {
                // Too short to train on; leave the raw states at rest.
                result.models.push_back(DiscreteHmm{});
                continue;
            }
            const auto obs = slice_symbols(result.symbols, begin, end);
            const auto labels = slice_states(result.initial_labels, begin, end);
            const DiscreteHmm model =
                estimate_supervised(obs, labels, params.smoothing);
            result.models.push_back(model);
            const auto decoded = viterbi_decode(model, obs);
            for (std::size_t w = begin; w < end; ++w) {
                result.raw_states.states[w] = decoded.states.states[w - begin];
            }
        }
    }

    // Refinement and consolidation run per repetition, so one repetition's
    // noise never deletes or extends a neighbour's segment.
    result.refined_states.states.assign(result.envelope.size(), 0);
    result.refined_states.grid = result.grid;
    for (std::size_t k = 0; k < result.ranges.size(); ++k) {
        const auto [begin, end] = result.ranges[k];
        if (begin == end) {
            result.failed_repetitions.push_back(static_cast<int>(k));
            continue;
        }
        StateSequence piece = slice_states(result.raw_states, begin, end);
        piece = remove_short_segments(piece, params.min_activity_s,
                                      params.hop_samples, signal.rate_hz);
        const auto segment = consolidate_edges(piece);
        if (!segment) {
            result.failed_repetitions.push_back(static_cast<int>(k));
            continue;
        }
        for (std::size_t w = segment->onset_window;
             w < segment->termination_window; ++w) {
            result.refined_states.states[begin + w] = 1;
        }
        RepetitionSegment rep;
        rep.repetition = static_cast<int>(k);
        rep.onset_s = result.grid.center_s(begin + segment->onset_window);
        rep.termination_s =
            result.grid.center_s(begin + segment->termination_window);
        result.segments.push_back(rep);
    }
    return result;
}

ValidationResult run_validation(const MultiChannelSignal& signal,
                                const StimulusSchedule& schedule,
                                const std::vector<RepetitionSegment>& detected,
                                const ValidationParams& params) {
    if (detected.empty()) {
        throw std::invalid_argument("validate: no detected segments");
    }

    std::vector<Edge> edges[2][2];  // [source][kind]
    for (int k = 0; k < schedule.repetitions; ++k) {
        edges[0][0].push_back({k, schedule.stimulus_start_s(k), EdgeKind::onset});
        edges[0][1].push_back(
            {k, schedule.stimulus_end_s(k), EdgeKind::termination});
    }
    for (const auto& seg : detected) {
        edges[1][0].push_back({seg.repetition, seg.onset_s, EdgeKind::onset});
        edges[1][1].push_back(
            {seg.repetition, seg.termination_s, EdgeKind::termination});
    }

    ValidationResult result;
    for (int s = 0; s < 2; ++s) {
        const auto source = s == 0 ? EdgeSource::stimulus : EdgeSource::detected;
        for (int k = 0; k < 2; ++k) {
            auto& set = result.sets[s][k];
            set = extract_edge_windows(signal, edges[s][k], params.half_width_s,
                                       source);
            set.edge_kind = k == 0 ? EdgeKind::onset : EdgeKind::termination;
            for (int mode = 0; mode < 2; ++mode) {
                AccuracyRecord rec;
                rec.gesture = params.gesture;
                rec.subject = params.subject;
                rec.edge_kind = set.edge_kind;
                rec.source = source;
                if (mode == 0) {
                    rec.mode = "half";
                    rec.accuracy_pct = evaluate_split(
                        set, params.svm_c, SplitMode::half, 0, params.seed);
                } else {
                    rec.mode = "kfold" + std::to_string(params.folds);
                    rec.accuracy_pct =
                        evaluate_split(set, params.svm_c, SplitMode::kfold,
                                       params.folds, params.seed);
                }
                result.records.push_back(std::move(rec));
            }
        }
    }
    return result;
}

void write_states_csv(std::ostream& out, const DetectionResult& result) {
    out << "window,t_s,symbol,stimulus_label,raw_state,refined_state,"
           "repetition\n";
    std::size_t range_idx = 0;
    char buf[40];
    for (std::size_t w = 0; w < result.symbols.size(); ++w) {
        while (range_idx < result.ranges.size() &&
               w >= result.ranges[range_idx].second) {
            ++range_idx;
        }
        const long long rep =
            range_idx < result.ranges.size() ? static_cast<long long>(range_idx)
                                             : -1;
        std::snprintf(buf, sizeof(buf), "%.6f", result.grid.center_s(w));
        out << w << "," << buf << "," << result.symbols.symbols[w] << ","
            << result.initial_labels.states[w] << ","
            << result.raw_states.states[w] << ","
            << result.refined_states.states[w] << "," << rep << "\n";
    }
}

}  // namespace emgact
