#ifndef EMGACT_VALIDATE_HPP
#define EMGACT_VALIDATE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "emgact/signal.hpp"

namespace emgact {

enum class EdgeKind { onset, termination };
enum class EdgeSource { stimulus, detected };

const char* to_string(EdgeKind kind);
const char* to_string(EdgeSource source);
EdgeKind edge_kind_from_string(const std::string& s);
EdgeSource edge_source_from_string(const std::string& s);

// A transition instant to classify around.
struct Edge {
    int repetition = 0;
    double time_s = 0.0;
    EdgeKind kind = EdgeKind::onset;
};

// Labeled rest/activity feature vectors extracted around edges.  Every edge
// contributes two examples: per-channel RMS over [t - half_width, t) labeled
// with the pre-edge state and over [t, t + half_width) labeled with the
// post-edge state (onset: 0 then 1, termination: 1 then 0).
struct EdgeWindowSet {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    EdgeKind edge_kind = EdgeKind::onset;
    EdgeSource source = EdgeSource::detected;
    std::size_t skipped_edges = 0;  // edges too close to a recording boundary
};

// All edges must share one kind.  Edges whose windows fall outside the
// recording are skipped and counted.
EdgeWindowSet extract_edge_windows(const MultiChannelSignal& signal,
                                   const std::vector<Edge>& edges,
                                   double half_width_s, EdgeSource source);

// Linear max-margin classifier; label 1 iff weights . x + bias > 0.
struct ClassifierModel {
    std::vector<double> weights;
    double bias = 0.0;
    double c = 1.0;
};

// Soft-margin linear SVM via dual coordinate descent on
//   min_w 1/2 ||w||^2 + C * sum_i max(0, 1 - y_i (w . x_i + b)),
// with the bias folded into the weight vector as a constant feature.  Runs to
// a 1e-6 objective tolerance.  Throws if the training set has one class.
ClassifierModel train_linear_svm(const EdgeWindowSet& train, double c);

// Deterministic: an exactly-zero decision value maps to 0.
std::vector<int> classify(const ClassifierModel& model,
                          const std::vector<std::vector<double>>& features);

enum class SplitMode { half, kfold };

// Accuracy percentage under the requested protocol.  half: seeded shuffle,
// first half train / second half test.  kfold: seeded shuffle, mean accuracy
// over the k folds.
double evaluate_split(const EdgeWindowSet& set, double c, SplitMode mode,
                      int folds, std::uint64_t seed);

// CSV rows for external plotting: one row per example, columns = features,
// label, source.
void scatter_export(std::ostream& out, const EdgeWindowSet& set,
                    bool header = true);

// One accuracy measurement, serialized as JSON lines.
struct AccuracyRecord {
    std::string gesture;
    std::string subject;
    EdgeKind edge_kind = EdgeKind::onset;
    EdgeSource source = EdgeSource::stimulus;
    std::string mode;  // "half" or "kfold<k>"
    double accuracy_pct = 0.0;
};

void write_accuracy_jsonl(std::ostream& out,
                          const std::vector<AccuracyRecord>& records);
void write_accuracy_jsonl_file(const std::string& path,
                               const std::vector<AccuracyRecord>& records);
std::vector<AccuracyRecord> read_accuracy_jsonl(std::istream& in);
std::vector<AccuracyRecord> read_accuracy_jsonl_file(const std::string& path);

}  // namespace emgact

#endif
