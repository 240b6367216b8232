#ifndef EMGACT_STIMULUS_HPP
#define EMGACT_STIMULUS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "emgact/signal.hpp"

namespace emgact {

// Timing of the cue protocol: repetitions of (stimulus, rest), with the whole
// pattern shifted right by the recording apparatus delay.
struct StimulusSchedule {
    double stimulus_len_s = 3.0;
    double rest_len_s = 5.0;
    int repetitions = 20;
    double hardware_delay_s = 0.5;
    double rate_hz = 1100.0;

    double period_s() const { return stimulus_len_s + rest_len_s; }
    double stimulus_start_s(int k) const {
        return hardware_delay_s + static_cast<double>(k) * period_s();
    }
    double stimulus_end_s(int k) const {
        return stimulus_start_s(k) + stimulus_len_s;
    }
    double total_duration_s() const {
        return hardware_delay_s + static_cast<double>(repetitions) * period_s();
    }

    void validate() const;  // throws std::invalid_argument
};

// Per-window binary state labels, 0 = rest, 1 = activity.  The grid maps
// window indices back to recording seconds.
struct StateSequence {
    std::vector<int> states;
    WindowGrid grid;

    std::size_t size() const { return states.size(); }
};

// Initial-guess labels: window w is 1 iff its center time falls inside a
// delay-compensated stimulus interval.  Throws on num_windows == 0.
StateSequence stimulus_labels(const StimulusSchedule& schedule,
                              std::size_t num_windows,
                              std::size_t window_len_samples,
                              std::size_t hop_samples);

// Half-open window-index ranges, one per repetition (stimulus plus trailing
// rest).  The ranges partition [0, seq_len); the first range absorbs the
// hardware-delay lead-in and the last absorbs any tail.
std::vector<std::pair<std::size_t, std::size_t>> split_repetitions(
    std::size_t seq_len, const StimulusSchedule& schedule,
    std::size_t hop_samples);

}  // namespace emgact

#endif
