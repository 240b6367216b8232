// Command-line front end: synth, detect, validate, report.
//
// Exit codes: 0 success, 2 usage error, 3 data/file error, 4 detection ran
// but produced zero segments.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "emgact/pipeline.hpp"
#include "emgact/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNoSegments = 4;

void add_schedule_options(CLI::App* cmd, emgact::StimulusSchedule& schedule) {
    cmd->add_option("--rate", schedule.rate_hz, "Sample rate in Hz")
        ->capture_default_str();
    cmd->add_option("--stim-s", schedule.stimulus_len_s,
                    "Stimulus length in seconds")
        ->capture_default_str();
    cmd->add_option("--rest-s", schedule.rest_len_s, "Rest length in seconds")
        ->capture_default_str();
    cmd->add_option("--reps", schedule.repetitions,
                    "Number of stimulus repetitions")
        ->capture_default_str();
    cmd->add_option("--hw-delay-s", schedule.hardware_delay_s,
                    "Recording apparatus delay in seconds")
        ->capture_default_str();
}

struct SynthArgs {
    emgact::SynthConfig config;
    std::string out_signal;
    std::string out_truth;
};

int run_synth(const SynthArgs& args) {
    const auto [signal, truth] = emgact::generate(args.config);
    emgact::write_signal_csv_file(args.out_signal, signal);
    emgact::write_segments_jsonl_file(args.out_truth, truth);
    std::cout << "wrote " << signal.samples_per_channel() << " samples x "
              << signal.channels() << " channels to " << args.out_signal
              << ", " << truth.size() << " truth segments to " << args.out_truth
              << "\n";
    return kExitOk;
}

struct DetectArgs {
    std::string signal_path;
    std::string out_segments;
    std::string out_states;
    std::string out_models;
    emgact::StimulusSchedule schedule;
    emgact::DetectionParams params;
};

int run_detect(const DetectArgs& args) {
    const auto signal =
        emgact::read_signal_csv_file(args.signal_path, args.schedule.rate_hz);
    const auto result =
        emgact::run_detection(signal, args.schedule, args.params);

    emgact::write_segments_jsonl_file(args.out_segments, result.segments);
    if (!args.out_states.empty()) {
        std::ofstream out(args.out_states);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " +
                                     args.out_states);
        }
        emgact::write_states_csv(out, result);
    }
    if (!args.out_models.empty()) {
        std::ofstream out(args.out_models);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " +
                                     args.out_models);
        }
        for (const auto& model : result.models) {
            if (model.num_states > 0) {
                emgact::write_model_txt(out, model);
            }
        }
    }

    std::cout << "detected " << result.segments.size() << "/"
              << args.schedule.repetitions << " segments";
    if (!result.failed_repetitions.empty()) {
        std::cout << " (no activity in repetitions:";
        for (int k : result.failed_repetitions) {
            std::cout << " " << k;
        }
        std::cout << ")";
    }
    std::cout << "\n";
    if (result.segments.empty()) {
        std::cerr << "error: detection produced zero segments\n";
        return kExitNoSegments;
    }
    return kExitOk;
}

struct ValidateArgs {
    std::string signal_path;
    std::string segments_path;
    std::string out_accuracy;
    std::string scatter_prefix;
    emgact::StimulusSchedule schedule;
    emgact::ValidationParams params;
};

int run_validate(const ValidateArgs& args) {
    const auto signal =
        emgact::read_signal_csv_file(args.signal_path, args.schedule.rate_hz);
    const auto detected = emgact::read_segments_jsonl_file(args.segments_path);
    const auto result =
        emgact::run_validation(signal, args.schedule, detected, args.params);

    emgact::write_accuracy_jsonl_file(args.out_accuracy, result.records);
    if (!args.scatter_prefix.empty()) {
        for (int k = 0; k < 2; ++k) {
            const auto kind =
                k == 0 ? emgact::EdgeKind::onset : emgact::EdgeKind::termination;
            const std::string path = args.scatter_prefix + "_" +
                                     emgact::to_string(kind) + ".csv";
            std::ofstream out(path);
            if (!out) {
                throw std::runtime_error("cannot open for writing: " + path);
            }
            emgact::scatter_export(out, result.sets[0][k], true);
            emgact::scatter_export(out, result.sets[1][k], false);
        }
    }

    for (const auto& rec : result.records) {
        std::printf("%-12s %-11s %-7s %6.2f%%\n", emgact::to_string(rec.source),
                    emgact::to_string(rec.edge_kind), rec.mode.c_str(),
                    rec.accuracy_pct);
    }
    return kExitOk;
}

struct ReportArgs {
    std::vector<std::string> inputs;
    std::string out_path;
};

int run_report(const ReportArgs& args) {
    // Mean accuracy per (gesture, edge kind, mode), stimulus vs detected.
    struct Bucket {
        double sum[2] = {0.0, 0.0};
        int count[2] = {0, 0};
    };
    std::map<std::tuple<std::string, std::string, std::string>, Bucket> buckets;
    for (const auto& path : args.inputs) {
        for (const auto& rec : emgact::read_accuracy_jsonl_file(path)) {
            auto& bucket = buckets[{rec.gesture, emgact::to_string(rec.edge_kind),
                                    rec.mode}];
            const int s = rec.source == emgact::EdgeSource::stimulus ? 0 : 1;
            bucket.sum[s] += rec.accuracy_pct;
            bucket.count[s] += 1;
        }
    }

    std::ostringstream table;
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %-11s %-7s %4s %9s %9s %8s\n",
                  "gesture", "edge", "mode", "n", "stimulus", "detected",
                  "gap");
    table << line;
    for (const auto& [key, bucket] : buckets) {
        const auto& [gesture, kind, mode] = key;
        const double stim =
            bucket.count[0] > 0 ? bucket.sum[0] / bucket.count[0] : 0.0;
        const double det =
            bucket.count[1] > 0 ? bucket.sum[1] / bucket.count[1] : 0.0;
        std::snprintf(line, sizeof(line),
                      "%-12s %-11s %-7s %4d %9.2f %9.2f %+8.2f\n",
                      gesture.c_str(), kind.c_str(), mode.c_str(),
                      std::max(bucket.count[0], bucket.count[1]), stim, det,
                      det - stim);
        table << line;
    }

    if (args.out_path.empty()) {
        std::cout << table.str();
    } else {
        std::ofstream out(args.out_path);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " +
                                     args.out_path);
        }
        out << table.str();
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surface-EMG activity detection via a supervised 2-state HMM"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "INI config file with one section per subcommand");
    // Let `emgact detect --config f.ini` reach the parent-level option.
    app.fallthrough();

    SynthArgs synth_args;
    auto* synth = app.add_subcommand(
        "synth", "Generate a synthetic recording with ground-truth segments");
    synth->add_option("--out", synth_args.out_signal, "Output signal CSV")
        ->required();
    synth->add_option("--truth", synth_args.out_truth,
                      "Output ground-truth JSONL")
        ->required();
    add_schedule_options(synth, synth_args.config.schedule);
    synth->add_option("--channels", synth_args.config.channels,
                      "Number of channels")
        ->capture_default_str();
    synth->add_option("--seed", synth_args.config.seed, "RNG seed")
        ->capture_default_str();
    synth->add_option("--rest-sigma", synth_args.config.rest_noise_sigma,
                      "Noise sigma at rest")
        ->capture_default_str();
    synth->add_option("--gain", synth_args.config.activity_gain,
                      "Amplitude gain during activity")
        ->capture_default_str();
    synth
        ->add_option("--reaction-mean-s", synth_args.config.reaction_delay_mean_s,
                     "Mean reaction delay after the stimulus")
        ->capture_default_str();
    synth
        ->add_option("--reaction-jitter-s",
                     synth_args.config.reaction_delay_jitter_s,
                     "Uniform reaction delay jitter")
        ->capture_default_str();
    synth
        ->add_option("--duration-mean-s",
                     synth_args.config.gesture_duration_mean_s,
                     "Mean gesture duration")
        ->capture_default_str();
    synth
        ->add_option("--duration-jitter-s",
                     synth_args.config.gesture_duration_jitter_s,
                     "Uniform gesture duration jitter")
        ->capture_default_str();
    synth->add_option("--ramp-s", synth_args.config.envelope_ramp_s,
                      "Raised-cosine ramp width at segment edges")
        ->capture_default_str();

    DetectArgs detect_args;
    auto* detect = app.add_subcommand(
        "detect", "Detect activity segments in a recording");
    detect->add_option("--signal", detect_args.signal_path, "Input signal CSV")
        ->required();
    detect
        ->add_option("--out-segments", detect_args.out_segments,
                     "Output segments JSONL")
        ->required();
    detect->add_option("--out-states", detect_args.out_states,
                       "Optional per-window state CSV");
    detect->add_option("--out-models", detect_args.out_models,
                       "Optional trained model dump");
    add_schedule_options(detect, detect_args.schedule);
    detect
        ->add_option("--window", detect_args.params.window_len_samples,
                     "RMS window length in samples")
        ->capture_default_str();
    detect->add_option("--hop", detect_args.params.hop_samples,
                       "RMS hop in samples")
        ->capture_default_str();
    detect->add_option("--levels", detect_args.params.num_levels,
                       "Quantizer levels")
        ->capture_default_str();
    detect->add_option("--smoothing", detect_args.params.smoothing,
                       "Additive smoothing for estimation")
        ->capture_default_str();
    detect
        ->add_option("--min-activity-s", detect_args.params.min_activity_s,
                     "Shorter activity runs are discarded")
        ->capture_default_str();
    detect->add_flag("--per-recording", detect_args.params.train_per_recording,
                     "Train one model on the whole recording instead of one "
                     "per repetition");

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand(
        "validate",
        "Classify edge windows from stimulus-derived vs detected edges");
    validate
        ->add_option("--signal", validate_args.signal_path, "Input signal CSV")
        ->required();
    validate
        ->add_option("--segments", validate_args.segments_path,
                     "Detected segments JSONL (from detect)")
        ->required();
    validate
        ->add_option("--out", validate_args.out_accuracy,
                     "Output accuracy JSONL")
        ->required();
    validate->add_option("--scatter-prefix", validate_args.scatter_prefix,
                         "Write <prefix>_onset.csv and <prefix>_termination.csv");
    add_schedule_options(validate, validate_args.schedule);
    validate
        ->add_option("--half-width-s", validate_args.params.half_width_s,
                     "Edge window half width in seconds")
        ->capture_default_str();
    validate->add_option("--svm-c", validate_args.params.svm_c,
                         "SVM regularization constant")
        ->capture_default_str();
    validate->add_option("--folds", validate_args.params.folds,
                         "Cross-validation folds")
        ->capture_default_str();
    validate->add_option("--seed", validate_args.params.seed,
                         "Shuffle seed for the splits")
        ->capture_default_str();
    validate->add_option("--gesture", validate_args.params.gesture,
                         "Gesture name recorded in the report")
        ->capture_default_str();
    validate->add_option("--subject", validate_args.params.subject,
                         "Subject name recorded in the report")
        ->capture_default_str();

    ReportArgs report_args;
    auto* report = app.add_subcommand(
        "report", "Aggregate accuracy reports into a comparison table");
    report->add_option("--in", report_args.inputs, "Accuracy JSONL files")
        ->required()
        ->expected(-1);
    report->add_option("--out", report_args.out_path,
                       "Output table path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(synth)) {
            return run_synth(synth_args);
        }
        if (app.got_subcommand(detect)) {
            return run_detect(detect_args);
        }
        if (app.got_subcommand(validate)) {
            return run_validate(validate_args);
        }
        return run_report(report_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
