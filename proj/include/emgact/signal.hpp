#ifndef EMGACT_SIGNAL_HPP
#define EMGACT_SIGNAL_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace emgact {

// Mapping between sliding-window indices and recording time.  A window w
// covers samples [w*hop, w*hop + window_len) of the source signal.
struct WindowGrid {
    std::size_t window_len_samples = 0;
    std::size_t hop_samples = 0;
    double rate_hz = 0.0;

    double hop_s() const { return static_cast<double>(hop_samples) / rate_hz; }

    // Center time of window w in seconds.
    double center_s(std::size_t w) const {
        return (static_cast<double>(w) * static_cast<double>(hop_samples) +
                0.5 * static_cast<double>(window_len_samples)) /
               rate_hz;
    }
};

// Raw multi-channel recording, data[c][t], all channels equally long.
struct MultiChannelSignal {
    double rate_hz = 0.0;
    std::vector<std::vector<double>> data;

    std::size_t channels() const { return data.size(); }
    std::size_t samples_per_channel() const {
        return data.empty() ? 0 : data.front().size();
    }
    double duration_s() const {
        return static_cast<double>(samples_per_channel()) / rate_hz;
    }

    // Throws std::invalid_argument on ragged channels or rate <= 0.
    void validate() const;
};

// Sliding-window RMS per channel, values[c][w] >= 0.
struct RmsEnvelope {
    WindowGrid grid;
    std::vector<std::vector<double>> values;

    std::size_t channels() const { return values.size(); }
    std::size_t num_windows() const {
        return values.empty() ? 0 : values.front().size();
    }
};

// Per-window observation symbols in [0, num_levels).
struct QuantizedSequence {
    std::vector<int> symbols;
    int num_levels = 16;
    double quantizer_min = 0.0;
    double quantizer_max = 0.0;

    std::size_t size() const { return symbols.size(); }
};

// Entry (c, w) is sqrt(mean of squares) over samples [w*hop, w*hop + window_len)
// of channel c.  Throws std::invalid_argument if the window is longer than the
// signal or a length is zero.
RmsEnvelope compute_rms_envelope(const MultiChannelSignal& signal,
                                 std::size_t window_len_samples,
                                 std::size_t hop_samples);

// Per-window mean across channels; single observation stream for the HMM.
std::vector<double> collapse_channels(const RmsEnvelope& envelope);

// Uniform quantizer over [min(values), max(values)].  symbol = floor((v - min)
// / (max - min) * M) clamped to M-1; a constant input maps to symbol 0.
QuantizedSequence quantize_uniform(const std::vector<double>& values,
                                   int num_levels);

// CSV format: header "t,ch1,...,chC", one row per sample, '.' decimal
// separator.  The t column is informational; the sample rate is supplied by
// the caller.  Parse errors report the 1-based line number.
MultiChannelSignal read_signal_csv(std::istream& in, double rate_hz,
                                   const std::string& name = "<stream>");
MultiChannelSignal read_signal_csv_file(const std::string& path, double rate_hz);
void write_signal_csv(std::ostream& out, const MultiChannelSignal& signal);
void write_signal_csv_file(const std::string& path,
                           const MultiChannelSignal& signal);

}  // namespace emgact

#endif
