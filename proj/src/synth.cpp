#include "emgact/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace emgact {

namespace {

// 53-bit uniform in [0,1).  Fixed mapping from raw engine output so the
// stream is identical across standard library implementations.
double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1p-53; }

// Polar Box-Muller with a cached spare, again to avoid libstdc++-specific
// std::normal_distribution streams.
class GaussianDraw {
  public:
    explicit GaussianDraw(std::mt19937_64& rng) : rng_(rng) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01(rng_) - 1.0;
            v = 2.0 * uniform01(rng_) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

  private:
    std::mt19937_64& rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

constexpr double kPi = 3.14159265358979323846;

double raised_cosine(double x) { return 0.5 * (1.0 - std::cos(kPi * x)); }

// Activation in [0,1].  Ramps sit inside the segment: amplitude starts
// rising from rest exactly at onset_s, holds 1 on the interior plateau, and
// has decayed back to rest exactly at termination_s.  Outside [onset_s,
// termination_s] the signal is pure rest noise, so the truth edges mark the
// first and last instants of any elevation.
double segment_activation(double t, double onset_s, double termination_s,
                          double ramp_s) {
    if (ramp_s <= 0.0) {
        return (t >= onset_s && t < termination_s) ? 1.0 : 0.0;
    }
    const double up = (t - onset_s) / ramp_s;
    const double down = (termination_s - t) / ramp_s;
    const double frac = std::clamp(std::min(up, down), 0.0, 1.0);
    return raised_cosine(frac);
}

}  // namespace

void SynthConfig::validate() const {
    schedule.validate();
    if (channels < 1) {
        throw std::invalid_argument("synth: channels must be >= 1");
    }
    if (rest_noise_sigma <= 0.0) {
        throw std::invalid_argument("synth: rest noise sigma must be > 0");
    }
    if (activity_gain < 1.0) {
        throw std::invalid_argument("synth: activity gain must be >= 1");
    }
    if (reaction_delay_jitter_s < 0.0 || gesture_duration_jitter_s < 0.0) {
        throw std::invalid_argument("synth: jitter must be >= 0");
    }
    if (reaction_delay_mean_s - reaction_delay_jitter_s < 0.0) {
        throw std::invalid_argument("synth: reaction delay can go negative");
    }
    if (gesture_duration_mean_s - gesture_duration_jitter_s <= 0.0) {
        throw std::invalid_argument("synth: gesture duration can reach zero");
    }
    if (envelope_ramp_s < 0.0) {
        throw std::invalid_argument("synth: envelope ramp must be >= 0");
    }
    if (gesture_duration_mean_s - gesture_duration_jitter_s <
        2.0 * envelope_ramp_s) {
        throw std::invalid_argument(
            "synth: gesture duration too short for the envelope ramps");
    }
    const double latest_termination =
        reaction_delay_mean_s + reaction_delay_jitter_s +
        gesture_duration_mean_s + gesture_duration_jitter_s;
    if (latest_termination > schedule.period_s()) {
        throw std::invalid_argument(
            "synth: gesture can outlast the stimulus period");
    }
}

std::pair<MultiChannelSignal, GroundTruth> generate(const SynthConfig& config) {
    config.validate();

    std::mt19937_64 rng(config.seed);

    // Draw order is part of the output contract: all per-repetition jitters
    // first (delay then duration for each repetition), then noise samples
    // channel by channel.
    GroundTruth truth;
    truth.reserve(config.schedule.repetitions);
    for (int k = 0; k < config.schedule.repetitions; ++k) {
        const double delay =
            config.reaction_delay_mean_s +
            config.reaction_delay_jitter_s * (2.0 * uniform01(rng) - 1.0);
        const double duration =
            config.gesture_duration_mean_s +
            config.gesture_duration_jitter_s * (2.0 * uniform01(rng) - 1.0);
        RepetitionSegment seg;
        seg.repetition = k;
        seg.onset_s = config.schedule.stimulus_start_s(k) + delay;
        seg.termination_s = seg.onset_s + duration;
        truth.push_back(seg);
    }

    const auto num_samples = static_cast<std::size_t>(
        std::llround(config.schedule.total_duration_s() * config.schedule.rate_hz));

    // The noise scale is channel-independent, so compute it once.
    std::vector<double> scale(num_samples);
    for (std::size_t t = 0; t < num_samples; ++t) {
        const double time_s = t / config.schedule.rate_hz;
        double activation = 0.0;
        for (const auto& seg : truth) {
            activation = std::max(
                activation, segment_activation(time_s, seg.onset_s,
                                               seg.termination_s,
                                               config.envelope_ramp_s));
        }
        scale[t] = config.rest_noise_sigma *
                   (1.0 + (config.activity_gain - 1.0) * activation);
    }

    MultiChannelSignal signal;
    signal.rate_hz = config.schedule.rate_hz;
    signal.data.assign(config.channels, std::vector<double>(num_samples, 0.0));
    GaussianDraw gauss(rng);
    for (int c = 0; c < config.channels; ++c) {
        for (std::size_t t = 0; t < num_samples; ++t) {
            signal.data[c][t] = gauss() * scale[t];
        }
    }
    return {std::move(signal), std::move(truth)};
}

}  // namespace emgact
