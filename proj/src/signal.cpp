#include "emgact/signal.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace emgact {

void MultiChannelSignal::validate() const {
    if (rate_hz <= 0.0) {
        throw std::invalid_argument("signal: rate_hz must be positive");
    }
    if (data.empty()) {
        throw std::invalid_argument("signal: at least one channel required");
    }
    const std::size_t len = data.front().size();
    for (const auto& channel : data) {
        if (channel.size() != len) {
            throw std::invalid_argument("signal: channels have unequal lengths");
        }
    }
}

RmsEnvelope compute_rms_envelope(const MultiChannelSignal& signal,
                                 std::size_t window_len_samples,
                                 std::size_t hop_samples) {
    signal.validate();
    if (window_len_samples == 0 || hop_samples == 0) {
        throw std::invalid_argument("rms: window and hop must be >= 1");
    }
    const std::size_t total = signal.samples_per_channel();
    if (window_len_samples > total) {
        throw std::invalid_argument("rms: window longer than signal");
    }

    const std::size_t num_windows = (total - window_len_samples) / hop_samples + 1;
    RmsEnvelope envelope;
    envelope.grid = {window_len_samples, hop_samples, signal.rate_hz};
    envelope.values.resize(signal.channels());

    const double inv_len = 1.0 / static_cast<double>(window_len_samples);
    for (std::size_t c = 0; c < signal.channels(); ++c) {
        const auto& samples = signal.data[c];
        auto& out = envelope.values[c];
        out.resize(num_windows);
        for (std::size_t w = 0; w < num_windows; ++w) {
            const std::size_t begin = w * hop_samples;
            double sum_sq = 0.0;
            for (std::size_t i = begin; i < begin + window_len_samples; ++i) {
                sum_sq += samples[i] * samples[i];
            }
            out[w] = std::sqrt(sum_sq * inv_len);
        }
    }
    return envelope;
}

std::vector<double> collapse_channels(const RmsEnvelope& envelope) {
    if (envelope.values.empty()) {
        throw std::invalid_argument("collapse: empty envelope");
    }
    const std::size_t num_windows = envelope.num_windows();
    std::vector<double> out(num_windows, 0.0);
    for (const auto& channel : envelope.values) {
        if (channel.size() != num_windows) {
            throw std::invalid_argument("collapse: ragged envelope");
        }
        for (std::size_t w = 0; w < num_windows; ++w) {
            out[w] += channel[w];
        }
    }
    const double inv_c = 1.0 / static_cast<double>(envelope.channels());
    for (double& v : out) {
        v *= inv_c;
    }
    return out;
}

QuantizedSequence quantize_uniform(const std::vector<double>& values,
                                   int num_levels) {
    if (values.empty()) {
        throw std::invalid_argument("quantize: empty input");
    }
    if (num_levels < 2) {
        throw std::invalid_argument("quantize: need at least 2 levels");
    }

    double lo = values.front();
    double hi = values.front();
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    QuantizedSequence seq;
    seq.num_levels = num_levels;
    seq.quantizer_min = lo;
    seq.quantizer_max = hi;
    seq.symbols.resize(values.size());

    if (hi == lo) {
        // Dead/constant channel: all mass in the lowest bin.
        return seq;
    }
    const double scale = static_cast<double>(num_levels) / (hi - lo);
    for (std::size_t i = 0; i < values.size(); ++i) {
        int s = static_cast<int>(std::floor((values[i] - lo) * scale));
        if (s < 0) s = 0;
        if (s >= num_levels) s = num_levels - 1;
        seq.symbols[i] = s;
    }
    return seq;
}

namespace {

// Splits a CSV line on commas; no quoting, the formats here never need it.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void parse_fail(const std::string& name, std::size_t line_no,
                             const std::string& what) {
    throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& field, const std::string& name,
                    std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) {
            parse_fail(name, line_no, "trailing characters in '" + field + "'");
        }
        return v;
    } catch (const std::invalid_argument&) {
        parse_fail(name, line_no, "not a number: '" + field + "'");
    } catch (const std::out_of_range&) {
        parse_fail(name, line_no, "number out of range: '" + field + "'");
    }
}

}  // namespace

MultiChannelSignal read_signal_csv(std::istream& in, double rate_hz,
                                   const std::string& name) {
    if (rate_hz <= 0.0) {
        throw std::invalid_argument("read_signal_csv: rate_hz must be positive");
    }
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) {
        parse_fail(name, line_no, "missing header row");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto header = split_csv(line);
    if (header.size() < 2 || header.front() != "t") {
        parse_fail(name, line_no, "expected header 't,ch1,...,chC'");
    }
    const std::size_t num_channels = header.size() - 1;

    MultiChannelSignal signal;
    signal.rate_hz = rate_hz;
    signal.data.resize(num_channels);

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != num_channels + 1) {
            parse_fail(name, line_no,
                       "expected " + std::to_string(num_channels + 1) +
                           " fields, got " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < num_channels; ++c) {
            signal.data[c].push_back(parse_double(fields[c + 1], name, line_no));
        }
    }
    if (signal.samples_per_channel() == 0) {
        parse_fail(name, line_no, "no sample rows");
    }
    return signal;
}

MultiChannelSignal read_signal_csv_file(const std::string& path,
                                        double rate_hz) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return read_signal_csv(in, rate_hz, path);
}

void write_signal_csv(std::ostream& out, const MultiChannelSignal& signal) {
    signal.validate();
    out << "t";
    for (std::size_t c = 1; c <= signal.channels(); ++c) {
        out << ",ch" << c;
    }
    out << "\n";

    char buf[64];
    const std::size_t total = signal.samples_per_channel();
    for (std::size_t i = 0; i < total; ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f",
                      static_cast<double>(i) / signal.rate_hz);
        out << buf;
        for (std::size_t c = 0; c < signal.channels(); ++c) {
            std::snprintf(buf, sizeof(buf), ",%.9g", signal.data[c][i]);
            out << buf;
        }
        out << "\n";
    }
}

void write_signal_csv_file(const std::string& path,
                           const MultiChannelSignal& signal) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    write_signal_csv(out, signal);
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace emgact
