#ifndef EMGACT_REFINE_HPP
#define EMGACT_REFINE_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "emgact/stimulus.hpp"

namespace emgact {

// One contiguous activity region, [onset_window, termination_window) in
// window indices with the corresponding window-center times in seconds.
struct ActivitySegment {
    std::size_t onset_window = 0;
    std::size_t termination_window = 0;
    double onset_s = 0.0;
    double termination_s = 0.0;

    double duration_s() const { return termination_s - onset_s; }
};

// Zeroes every maximal run of 1s shorter than min_duration_s; a run whose
// duration equals the threshold survives.  Run duration is run_length * hop /
// rate seconds.
StateSequence remove_short_segments(const StateSequence& states,
                                    double min_duration_s,
                                    std::size_t hop_samples, double rate_hz);

// Collapses a cleaned sequence to one segment spanning the first 0->1
// transition to the last 1->0 transition (sequence end counts as a
// termination).  Returns nullopt when no 1s remain.
std::optional<ActivitySegment> consolidate_edges(const StateSequence& states);

// Signed (onset, termination) differences in seconds, detected minus truth.
std::pair<double, double> segment_error(const ActivitySegment& detected,
                                        const ActivitySegment& truth);

// Detected (or ground-truth) segment for one repetition, exported as JSON
// lines: {"repetition": k, "onset_s": x, "termination_s": y}.
struct RepetitionSegment {
    int repetition = 0;
    double onset_s = 0.0;
    double termination_s = 0.0;
};

void write_segments_jsonl(std::ostream& out,
                          const std::vector<RepetitionSegment>& segments);
void write_segments_jsonl_file(const std::string& path,
                               const std::vector<RepetitionSegment>& segments);
std::vector<RepetitionSegment> read_segments_jsonl(std::istream& in);
std::vector<RepetitionSegment> read_segments_jsonl_file(
    const std::string& path);

}  // namespace emgact

#endif
