#include "emgact/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emgact {

void StimulusSchedule::validate() const {
    if (stimulus_len_s <= 0.0) {
        throw std::invalid_argument("schedule: stimulus_len_s must be > 0");
    }
    if (rest_len_s < 0.0) {
        throw std::invalid_argument("schedule: rest_len_s must be >= 0");
    }
    if (repetitions < 1) {
        throw std::invalid_argument("schedule: repetitions must be >= 1");
    }
    if (hardware_delay_s < 0.0) {
        throw std::invalid_argument("schedule: hardware_delay_s must be >= 0");
    }
    if (rate_hz <= 0.0) {
        throw std::invalid_argument("schedule: rate_hz must be > 0");
    }
}

StateSequence stimulus_labels(const StimulusSchedule& schedule,
                              std::size_t num_windows,
                              std::size_t window_len_samples,
                              std::size_t hop_samples) {
    schedule.validate();
    if (num_windows == 0) {
        throw std::invalid_argument("stimulus_labels: num_windows must be > 0");
    }
    if (hop_samples == 0) {
        throw std::invalid_argument("stimulus_labels: hop must be >= 1");
    }

    StateSequence seq;
    seq.grid = {window_len_samples, hop_samples, schedule.rate_hz};
    seq.states.assign(num_windows, 0);

    const double period = schedule.period_s();
    for (std::size_t w = 0; w < num_windows; ++w) {
        const double t = seq.grid.center_s(w);
        const double since_first = t - schedule.hardware_delay_s;
        if (since_first < 0.0) {
            continue;
        }
        const double k = std::floor(since_first / period);
        if (k >= static_cast<double>(schedule.repetitions)) {
            continue;
        }
        if (since_first - k * period < schedule.stimulus_len_s) {
            seq.states[w] = 1;
        }
    }
    return seq;
}

std::vector<std::pair<std::size_t, std::size_t>> split_repetitions(
    std::size_t seq_len, const StimulusSchedule& schedule,
    std::size_t hop_samples) {
    schedule.validate();
    if (seq_len == 0) {
        throw std::invalid_argument("split_repetitions: seq_len must be > 0");
    }
    if (hop_samples == 0) {
        throw std::invalid_argument("split_repetitions: hop must be >= 1");
    }

    const double windows_per_second = schedule.rate_hz / static_cast<double>(hop_samples);
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    ranges.reserve(static_cast<std::size_t>(schedule.repetitions));

    std::size_t begin = 0;
    for (int k = 1; k <= schedule.repetitions; ++k) {
        std::size_t end = seq_len;
        if (k < schedule.repetitions) {
            const double boundary_s =
                schedule.hardware_delay_s + static_cast<double>(k) * schedule.period_s();
            const double idx = std::ceil(boundary_s * windows_per_second - 1e-9);
            end = std::min<std::size_t>(
                seq_len, idx <= 0.0 ? 0 : static_cast<std::size_t>(idx));
            end = std::max(end, begin);
        }
        ranges.emplace_back(begin, end);
        begin = end;
    }
    return ranges;
}

}  // namespace emgact
