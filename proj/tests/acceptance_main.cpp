// Acceptance gate: one pass/fail line per criterion, exit 0 only if all pass.
// argv[1] must be the path to the command-line binary (used by the
// determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "emgact/pipeline.hpp"
#include "emgact/synth.hpp"

using namespace emgact;

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s %d %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
}

std::vector<double> random_row(std::mt19937_64& rng, int len, bool allow_zero) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> row(len);
    double sum = 0.0;
    do {
        sum = 0.0;
        for (double& v : row) {
            v = unit(rng);
            if (allow_zero && unit(rng) < 0.25) {
                v = 0.0;
            }
            sum += v;
        }
    } while (sum <= 0.0);
    for (double& v : row) {
        v /= sum;
    }
    return row;
}

DiscreteHmm random_model(std::mt19937_64& rng, int num_symbols,
                         bool allow_zero) {
    DiscreteHmm m;
    m.num_states = 2;
    m.num_symbols = num_symbols;
    m.initial = random_row(rng, 2, allow_zero);
    for (int i = 0; i < 2; ++i) {
        m.transition.push_back(random_row(rng, 2, allow_zero));
        m.emission.push_back(random_row(rng, num_symbols, allow_zero));
    }
    return m;
}

// Linear-space path probability, independent of the log-space code under
// test.
double path_probability(const DiscreteHmm& m, const std::vector<int>& obs,
                        const std::vector<int>& states) {
    double p = m.initial[states[0]] * m.emission[states[0]][obs[0]];
    for (std::size_t t = 1; t < obs.size(); ++t) {
        p *= m.transition[states[t - 1]][states[t]] *
             m.emission[states[t]][obs[t]];
    }
    return p;
}

// Criterion 1: Viterbi equals exhaustive maximization over all 2^T paths.
bool criterion_viterbi_oracle() {
    const double t0 = now_s();
    std::mt19937_64 rng(20260815);
    const int trials = 1000;
    int checked = 0;
    double worst_gap = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const int num_symbols = 2 + static_cast<int>(rng() % 15);
        const int t_obs = 1 + static_cast<int>(rng() % 12);
        const auto model = random_model(rng, num_symbols, trial % 4 == 0);
        QuantizedSequence obs;
        obs.num_levels = num_symbols;
        obs.symbols.resize(t_obs);
        for (int& o : obs.symbols) {
            o = static_cast<int>(rng() % num_symbols);
        }

        double best_p = -1.0;
        std::vector<int> states(t_obs, 0);
        while (true) {
            const double p = path_probability(model, obs.symbols, states);
            if (p > best_p) {
                best_p = p;
            }
            std::size_t t = states.size();
            while (t > 0 && states[t - 1] == 1) {
                states[--t] = 0;
            }
            if (t == 0) {
                break;
            }
            states[t - 1] = 1;
        }

        const auto got = viterbi_decode(model, obs);
        const double rescored = sequence_log_likelihood(model, obs, got.states);
        if (best_p == 0.0) {
            if (!std::isinf(got.log_likelihood) || !std::isinf(rescored)) {
                report(1, false, "zero-probability instance not reported as -inf");
                return false;
            }
        } else {
            const double gap = std::abs(got.log_likelihood - std::log(best_p));
            const double self_gap = std::abs(got.log_likelihood - rescored);
            worst_gap = std::max({worst_gap, gap, self_gap});
            if (gap > 1e-9 || self_gap > 1e-9) {
                report(1, false, "log-likelihood mismatch of " +
                                     std::to_string(std::max(gap, self_gap)));
                return false;
            }
        }
        ++checked;
    }
    const double elapsed = now_s() - t0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "viterbi equals brute force on %d/%d instances "
                  "(max gap %.2e, %.2f s)",
                  checked, trials, worst_gap, elapsed);
    report(1, elapsed < 10.0, detail);
    return elapsed < 10.0;
}

// Criterion 2: supervised counting matches hand counts; smoothing keeps rows
// stochastic.
bool criterion_estimation() {
    QuantizedSequence obs;
    obs.num_levels = 16;
    obs.symbols = {0, 1, 2, 3};
    StateSequence labels;
    labels.states = {0, 0, 1, 1};
    const auto m = estimate_supervised(obs, labels, 0.0);
    bool ok = m.transition[0][0] == 1.0 / 2.0 &&
              m.transition[0][1] == 1.0 / 2.0 && m.transition[1][0] == 0.0 &&
              m.transition[1][1] == 1.0 && m.initial[0] == 1.0 &&
              m.initial[1] == 0.0 && m.emission[0][0] == 1.0 / 2.0 &&
              m.emission[0][1] == 1.0 / 2.0 && m.emission[1][2] == 1.0 / 2.0 &&
              m.emission[1][3] == 1.0 / 2.0 && m.emission[0][2] == 0.0;

    QuantizedSequence obs2;
    obs2.num_levels = 16;
    obs2.symbols = {5, 9};
    StateSequence labels2;
    labels2.states = {0, 1};
    const auto m2 = estimate_supervised(obs2, labels2, 0.0);
    ok = ok && m2.emission[0][5] == 1.0 && m2.emission[1][9] == 1.0 &&
         m2.emission[0][9] == 0.0 && m2.emission[1][5] == 0.0;

    // A state absent from the labels with smoothing 0 must be an error.
    StateSequence rest_only;
    rest_only.states = {0, 0, 0, 0};
    bool threw = false;
    try {
        estimate_supervised(obs, rest_only, 0.0);
    } catch (const std::invalid_argument&) {
        threw = true;
    }
    ok = ok && threw;

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> smooth(1e-9, 5.0);
    int valid = 0;
    const int trials = 300;
    for (int trial = 0; trial < trials; ++trial) {
        const int len = 2 + static_cast<int>(rng() % 60);
        QuantizedSequence o;
        o.num_levels = 16;
        o.symbols.resize(len);
        StateSequence l;
        l.states.resize(len);
        for (int i = 0; i < len; ++i) {
            o.symbols[i] = static_cast<int>(rng() % 16);
            l.states[i] = static_cast<int>(rng() % 2);
        }
        try {
            estimate_supervised(o, l, smooth(rng)).validate(1e-9);
            ++valid;
        } catch (const std::exception&) {
        }
    }
    ok = ok && valid == trials;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "hand-counted estimates exact, %d/%d smoothed models "
                  "row-stochastic within 1e-9",
                  valid, trials);
    report(2, ok, detail);
    return ok;
}

// Criterion 3: refinement rules vs a run-length-scan oracle.
bool criterion_refinement() {
    std::mt19937_64 rng(404);
    const int trials = 1000;
    int matched = 0;
    bool ok = true;
    for (int trial = 0; trial < trials && ok; ++trial) {
        const std::size_t len = 1 + rng() % 150;
        StateSequence in;
        in.states.resize(len);
        for (auto& v : in.states) {
            v = static_cast<int>(rng() % 2);
        }
        const std::size_t hop = 1 + rng() % 4;
        const double rate = 5.0 + static_cast<double>(rng() % 200);
        in.grid = {2 * hop, hop, rate};
        const double min_s = (rng() % 120) / 60.0;

        // Oracle: run-length scan with the inclusive boundary.
        std::vector<int> expected = in.states;
        const double per_window = hop / rate;
        std::size_t i = 0;
        while (i < len) {
            if (expected[i] == 1) {
                std::size_t run = 0;
                while (i + run < len && expected[i + run] == 1) {
                    ++run;
                }
                if (static_cast<double>(run) * per_window < min_s) {
                    for (std::size_t j = i; j < i + run; ++j) {
                        expected[j] = 0;
                    }
                }
                i += run;
            } else {
                ++i;
            }
        }

        const auto once = remove_short_segments(in, min_s, hop, rate);
        const auto twice = remove_short_segments(once, min_s, hop, rate);
        ok = once.states == expected && twice.states == once.states;

        // First-onset/last-termination oracle.
        const auto seg = consolidate_edges(once);
        std::size_t first = len, last = len;
        for (std::size_t w = 0; w < len; ++w) {
            if (once.states[w] == 1) {
                if (first == len) {
                    first = w;
                }
                last = w;
            }
        }
        if (first == len) {
            ok = ok && !seg.has_value();
        } else {
            ok = ok && seg.has_value() && seg->onset_window == first &&
                 seg->termination_window == last + 1;
        }
        if (ok) {
            ++matched;
        }
    }

    // Inclusive boundary: a run of exactly min_duration survives.
    StateSequence boundary;
    boundary.states.assign(24, 0);
    for (int i = 4; i < 12; ++i) {
        boundary.states[i] = 1;  // 8 windows * 0.1 s = 0.8 s exactly
    }
    boundary.grid = {2, 1, 10.0};
    const auto kept = remove_short_segments(boundary, 0.8, 1, 10.0);
    ok = ok && kept.states == boundary.states;

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%d/%d random sequences match the run-length oracle, "
                  "0.8 s boundary inclusive",
                  matched, trials);
    report(3, ok, detail);
    return ok;
}

// Criterion 4: end-to-end detection accuracy on a synthetic recording made
// with the default experiment protocol.
bool criterion_detection() {
    const double t0 = now_s();
    SynthConfig config;  // default protocol
    const auto [signal, truth] = generate(config);
    const auto result =
        run_detection(signal, config.schedule, DetectionParams{});

    int onset_hits = 0, termination_hits = 0;
    std::vector<double> onset_errs, term_errs;
    for (const auto& seg : result.segments) {
        const auto& tr = truth[static_cast<std::size_t>(seg.repetition)];
        const double onset_err = seg.onset_s - tr.onset_s;
        const double term_err = seg.termination_s - tr.termination_s;
        if (std::abs(onset_err) <= 0.15) {
            ++onset_hits;
        }
        if (std::abs(term_err) <= 0.30) {
            ++termination_hits;
        }
    }
    const double elapsed = now_s() - t0;
    const int reps = config.schedule.repetitions;
    const bool ok = onset_hits >= (9 * reps + 9) / 10 &&
                    termination_hits >= (8 * reps + 9) / 10 &&
                    elapsed < 30.0;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "onsets within 0.15 s: %d/%d, terminations within 0.30 s: "
                  "%d/%d (%.2f s)",
                  onset_hits, reps, termination_hits, reps, elapsed);
    report(4, ok, detail);
    return ok;
}

struct SuiteMeans {
    double stim_onset = 0.0;
    double det_onset = 0.0;
    double stim_term = 0.0;
    double det_term = 0.0;
};

// Shared by criteria 5 and 6: mean 5-fold accuracies over 20 seeded
// recordings.
SuiteMeans validation_suite_means() {
    SuiteMeans means;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        SynthConfig config;
        config.seed = 1000 + static_cast<std::uint64_t>(s);
        // The classifier trains on raw (unstandardized) RMS features with
        // C = 1, so its accuracy depends on the absolute signal units: at
        // tiny amplitudes the margin penalty dominates the hinge loss and
        // the weights collapse toward zero.  Unit-variance rest noise keeps
        // the suite in the sane operating regime; detection itself is
        // scale-invariant so this only affects the classifier experiment.
        config.rest_noise_sigma = 1.0;
        const auto [signal, truth] = generate(config);
        const auto detection =
            run_detection(signal, config.schedule, DetectionParams{});
        ValidationParams params;
        const auto result = run_validation(signal, config.schedule,
                                           detection.segments, params);
        for (const auto& rec : result.records) {
            if (rec.mode != "kfold5") {
                continue;
            }
            if (rec.edge_kind == EdgeKind::onset) {
                (rec.source == EdgeSource::stimulus ? means.stim_onset
                                                    : means.det_onset) +=
                    rec.accuracy_pct;
            } else {
                (rec.source == EdgeSource::stimulus ? means.stim_term
                                                    : means.det_term) +=
                    rec.accuracy_pct;
            }
        }
    }
    means.stim_onset /= seeds;
    means.det_onset /= seeds;
    means.stim_term /= seeds;
    means.det_term /= seeds;
    return means;
}

bool criterion_claim_direction(const SuiteMeans& means) {
    const bool ok = means.det_onset > means.stim_onset &&
                    means.det_term > means.stim_term &&
                    means.det_term - means.stim_term >= 5.0;
    char detail[220];
    std::snprintf(detail, sizeof(detail),
                  "detected vs stimulus means: onset %.2f%% vs %.2f%%, "
                  "termination %.2f%% vs %.2f%% (gap %.2f)",
                  means.det_onset, means.stim_onset, means.det_term,
                  means.stim_term, means.det_term - means.stim_term);
    report(5, ok, detail);
    return ok;
}

bool criterion_magnitudes(const SuiteMeans& means) {
    const bool ok = means.det_onset >= 90.0 && means.det_onset <= 100.0 &&
                    means.det_term >= 80.0 && means.det_term <= 100.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "detected-edge means: onset %.2f%% in [90,100], "
                  "termination %.2f%% in [80,100]",
                  means.det_onset, means.det_term);
    report(6, ok, detail);
    return ok;
}

// Criterion 7: classifier unit suite.
bool criterion_classifier() {
    bool ok = true;

    EdgeWindowSet separable;
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const int label = i % 2;
        separable.features.push_back(
            {label * 4.0 + unit(rng), label * 4.0 + unit(rng)});
        separable.labels.push_back(label);
    }
    const double half_acc =
        evaluate_split(separable, 1.0, SplitMode::half, 0, 11);
    const double fold_acc =
        evaluate_split(separable, 1.0, SplitMode::kfold, 5, 11);
    ok = ok && half_acc == 100.0 && fold_acc == 100.0;

    EdgeWindowSet coin;
    const int n = 400;
    for (int i = 0; i < n; ++i) {
        coin.features.push_back({1.0, 2.0, 3.0});
        coin.labels.push_back(static_cast<int>(rng() % 2));
    }
    const double coin_acc = evaluate_split(coin, 1.0, SplitMode::half, 0, 11);
    const double ci99 = 2.576 * 100.0 * std::sqrt(0.25 / (n / 2));
    ok = ok && std::abs(coin_acc - 50.0) <= ci99;

    ClassifierModel model;
    model.weights = {0.8, -1.3, 0.2};
    model.bias = 0.4;
    std::vector<std::vector<double>> points;
    std::normal_distribution<double> noise(0.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        points.push_back({noise(rng), noise(rng), noise(rng)});
    }
    const auto base = classify(model, points);
    bool invariant = true;
    for (double scale : {1e-3, 0.5, 7.0, 1e4}) {
        auto scaled = model;
        for (double& w : scaled.weights) {
            w *= scale;
        }
        scaled.bias *= scale;
        invariant = invariant && classify(scaled, points) == base;
    }
    ok = ok && invariant;

    char detail[220];
    std::snprintf(detail, sizeof(detail),
                  "separable half %.1f%%, 5-fold %.1f%%; coin-flip %.1f%% "
                  "within +/-%.1f; scaling invariance %s",
                  half_acc, fold_acc, coin_acc, ci99,
                  invariant ? "holds" : "broken");
    report(7, ok, detail);
    return ok;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Criterion 8: two identical-seed CLI runs produce byte-identical outputs.
bool criterion_determinism(const std::string& cli) {
    namespace fs = std::filesystem;
    const fs::path base = fs::path("acceptance_tmp");
    std::error_code ec;
    fs::remove_all(base, ec);

    auto run_once = [&cli](const fs::path& dir) -> bool {
        fs::create_directories(dir);
        const std::string d = dir.string();
        const std::string synth = "\"" + cli + "\" synth --out " + d +
                                  "/signal.csv --truth " + d +
                                  "/truth.jsonl --seed 5 > /dev/null";
        const std::string detect = "\"" + cli + "\" detect --signal " + d +
                                   "/signal.csv --out-segments " + d +
                                   "/segments.jsonl --out-states " + d +
                                   "/states.csv --out-models " + d +
                                   "/models.txt > /dev/null";
        const std::string validate = "\"" + cli + "\" validate --signal " + d +
                                     "/signal.csv --segments " + d +
                                     "/segments.jsonl --out " + d +
                                     "/accuracy.jsonl --scatter-prefix " + d +
                                     "/scatter > /dev/null";
        return std::system(synth.c_str()) == 0 &&
               std::system(detect.c_str()) == 0 &&
               std::system(validate.c_str()) == 0;
    };

    if (!run_once(base / "run1") || !run_once(base / "run2")) {
        report(8, false, "a pipeline command exited nonzero");
        return false;
    }

    const char* files[] = {"signal.csv",        "truth.jsonl",
                           "segments.jsonl",    "states.csv",
                           "models.txt",        "accuracy.jsonl",
                           "scatter_onset.csv", "scatter_termination.csv"};
    for (const char* f : files) {
        const auto a = read_file(base / "run1" / f);
        const auto b = read_file(base / "run2" / f);
        if (a.empty() || a != b) {
            report(8, false, std::string(f) + " differs between identical runs");
            return false;
        }
    }

    // Outputs must round-trip through their own parsers.
    try {
        const auto dir = base / "run1";
        read_signal_csv_file((dir / "signal.csv").string(), 1100.0);
        read_segments_jsonl_file((dir / "truth.jsonl").string());
        const auto segs =
            read_segments_jsonl_file((dir / "segments.jsonl").string());
        read_accuracy_jsonl_file((dir / "accuracy.jsonl").string());
        std::ifstream models(dir / "models.txt");
        int model_count = 0;
        while (models >> std::ws, !models.eof()) {
            read_model_txt(models).validate(1e-6);
            ++model_count;
        }
        if (segs.empty() || model_count == 0) {
            report(8, false, "round-trip produced empty data");
            return false;
        }
    } catch (const std::exception& e) {
        report(8, false, std::string("round-trip failed: ") + e.what());
        return false;
    }

    report(8, true,
           "synth+detect+validate twice with one seed: all 8 outputs "
           "byte-identical and parse back");
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
        return 2;
    }
    int failures = 0;
    failures += !criterion_viterbi_oracle();
    failures += !criterion_estimation();
    failures += !criterion_refinement();
    failures += !criterion_detection();
    const auto means = validation_suite_means();
    failures += !criterion_claim_direction(means);
    failures += !criterion_magnitudes(means);
    failures += !criterion_classifier();
    failures += !criterion_determinism(argv[1]);
    if (failures > 0) {
        std::fprintf(stderr, "%d acceptance criteria failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
