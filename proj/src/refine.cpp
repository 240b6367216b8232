#include "emgact/refine.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace emgact {

StateSequence remove_short_segments(const StateSequence& states,
                                    double min_duration_s,
                                    std::size_t hop_samples, double rate_hz) {
    if (hop_samples == 0 || rate_hz <= 0.0) {
        throw std::invalid_argument("refine: hop and rate must be positive");
    }
    if (min_duration_s < 0.0) {
        throw std::invalid_argument("refine: min duration must be >= 0");
    }
    StateSequence out = states;
    const double window_s = hop_samples / rate_hz;
    const std::size_t len = out.states.size();
    std::size_t i = 0;
    while (i < len) {
        if (out.states[i] != 1) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < len && out.states[j] == 1) {
            ++j;
        }
        if ((j - i) * window_s < min_duration_s) {
            for (std::size_t k = i; k < j; ++k) {
                out.states[k] = 0;
            }
        }
        i = j;
    }
    return out;
}

std::optional<ActivitySegment> consolidate_edges(const StateSequence& states) {
    const std::size_t len = states.states.size();
    std::size_t first = len;
    std::size_t last = len;
    for (std::size_t i = 0; i < len; ++i) {
        if (states.states[i] == 1) {
            if (first == len) {
                first = i;
            }
            last = i;
        }
    }
    if (first == len) {
        return std::nullopt;
    }
    ActivitySegment seg;
    seg.onset_window = first;
    seg.termination_window = last + 1;  // first inactive window, may equal len
    seg.onset_s = states.grid.center_s(seg.onset_window);
    seg.termination_s = states.grid.center_s(seg.termination_window);
    return seg;
}

std::pair<double, double> segment_error(const ActivitySegment& detected,
                                        const ActivitySegment& truth) {
    return {detected.onset_s - truth.onset_s,
            detected.termination_s - truth.termination_s};
}

void write_segments_jsonl(std::ostream& out,
                          const std::vector<RepetitionSegment>& segments) {
    for (const auto& seg : segments) {
        nlohmann::ordered_json line;
        line["repetition"] = seg.repetition;
        line["onset_s"] = seg.onset_s;
        line["termination_s"] = seg.termination_s;
        out << line.dump() << "\n";
    }
}

void write_segments_jsonl_file(const std::string& path,
                               const std::vector<RepetitionSegment>& segments) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    write_segments_jsonl(out, segments);
}

std::vector<RepetitionSegment> read_segments_jsonl(std::istream& in) {
    std::vector<RepetitionSegment> segments;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error("segments line " + std::to_string(line_no) +
                                     ": " + e.what());
        }
        RepetitionSegment seg;
        try {
            seg.repetition = parsed.at("repetition").get<int>();
            seg.onset_s = parsed.at("onset_s").get<double>();
            seg.termination_s = parsed.at("termination_s").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("segments line " + std::to_string(line_no) +
                                     ": " + e.what());
        }
        segments.push_back(seg);
    }
    return segments;
}

std::vector<RepetitionSegment> read_segments_jsonl_file(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open: " + path);
    }
    return read_segments_jsonl(in);
}

}  // namespace emgact
