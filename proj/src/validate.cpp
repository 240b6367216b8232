#include "emgact/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace emgact {

const char* to_string(EdgeKind kind) {
    return kind == EdgeKind::onset ? "onset" : "termination";
}

const char* to_string(EdgeSource source) {
    return source == EdgeSource::stimulus ? "stimulus" : "detected";
}

EdgeKind edge_kind_from_string(const std::string& s) {
    if (s == "onset") {
        return EdgeKind::onset;
    }
    if (s == "termination") {
        return EdgeKind::termination;
    }
    throw std::invalid_argument("unknown edge kind: " + s);
}

EdgeSource edge_source_from_string(const std::string& s) {
    if (s == "stimulus") {
        return EdgeSource::stimulus;
    }
    if (s == "detected") {
        return EdgeSource::detected;
    }
    throw std::invalid_argument("unknown edge source: " + s);
}

namespace {

std::vector<double> window_rms(const MultiChannelSignal& signal,
                               std::size_t begin, std::size_t end) {
    std::vector<double> rms(signal.channels(), 0.0);
    const auto len = static_cast<double>(end - begin);
    for (std::size_t c = 0; c < signal.channels(); ++c) {
        double sum_sq = 0.0;
        for (std::size_t t = begin; t < end; ++t) {
            sum_sq += signal.data[c][t] * signal.data[c][t];
        }
        rms[c] = std::sqrt(sum_sq / len);
    }
    return rms;
}

}  // namespace

EdgeWindowSet extract_edge_windows(const MultiChannelSignal& signal,
                                   const std::vector<Edge>& edges,
                                   double half_width_s, EdgeSource source) {
    signal.validate();
    if (half_width_s <= 0.0) {
        throw std::invalid_argument("edge windows: half width must be > 0");
    }
    EdgeWindowSet set;
    set.source = source;
    if (!edges.empty()) {
        set.edge_kind = edges.front().kind;
        for (const auto& e : edges) {
            if (e.kind != set.edge_kind) {
                throw std::invalid_argument("edge windows: mixed edge kinds");
            }
        }
    }

    const auto num_samples =
        static_cast<long long>(signal.samples_per_channel());
    for (const auto& edge : edges) {
        const long long mid = std::llround(edge.time_s * signal.rate_hz);
        const long long lo =
            std::llround((edge.time_s - half_width_s) * signal.rate_hz);
        const long long hi =
            std::llround((edge.time_s + half_width_s) * signal.rate_hz);
        if (lo < 0 || hi > num_samples || lo >= mid || mid >= hi) {
            ++set.skipped_edges;
            continue;
        }
        const int pre = edge.kind == EdgeKind::onset ? 0 : 1;
        set.features.push_back(window_rms(signal, static_cast<std::size_t>(lo),
                                          static_cast<std::size_t>(mid)));
        set.labels.push_back(pre);
        set.features.push_back(window_rms(signal, static_cast<std::size_t>(mid),
                                          static_cast<std::size_t>(hi)));
        set.labels.push_back(1 - pre);
    }
    return set;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Primal objective with the bias folded into w (so the bias is regularized
// like any other weight).
double primal_objective(const std::vector<std::vector<double>>& x,
                        const std::vector<double>& y,
                        const std::vector<double>& w, double c) {
    double obj = 0.5 * dot(w, w);
    for (std::size_t i = 0; i < x.size(); ++i) {
        obj += c * std::max(0.0, 1.0 - y[i] * dot(w, x[i]));
    }
    return obj;
}

}  // namespace

ClassifierModel train_linear_svm(const EdgeWindowSet& train, double c) {
    if (c <= 0.0) {
        throw std::invalid_argument("svm: C must be > 0");
    }
    const std::size_t n = train.features.size();
    if (n == 0 || train.labels.size() != n) {
        throw std::invalid_argument("svm: empty or inconsistent training set");
    }
    const std::size_t dim = train.features.front().size();
    if (dim == 0) {
        throw std::invalid_argument("svm: zero-dimensional features");
    }
    bool saw[2] = {false, false};
    for (int label : train.labels) {
        if (label != 0 && label != 1) {
            throw std::invalid_argument("svm: labels must be 0 or 1");
        }
        saw[label] = true;
    }
    if (!saw[0] || !saw[1]) {
        throw std::invalid_argument("svm: training set has a single class");
    }

    // Augment with a constant feature so the bias rides inside w.
    std::vector<std::vector<double>> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (train.features[i].size() != dim) {
            throw std::invalid_argument("svm: ragged feature matrix");
        }
        x[i] = train.features[i];
        x[i].push_back(1.0);
        y[i] = train.labels[i] == 1 ? 1.0 : -1.0;
    }

    // Dual coordinate descent on the L1-loss SVM dual, one full deterministic
    // sweep per pass, stopping when the primal objective settles.
    std::vector<double> q_ii(n);
    for (std::size_t i = 0; i < n; ++i) {
        q_ii[i] = dot(x[i], x[i]);  // >= 1 thanks to the constant feature
    }
    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(dim + 1, 0.0);

    constexpr int kMaxPasses = 1000;
    constexpr double kTol = 1e-6;
    double prev_obj = primal_objective(x, y, w, c);
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        for (std::size_t i = 0; i < n; ++i) {
            const double g = y[i] * dot(w, x[i]) - 1.0;
            double pg = g;
            if (alpha[i] == 0.0) {
                pg = std::min(g, 0.0);
            } else if (alpha[i] == c) {
                pg = std::max(g, 0.0);
            }
            if (pg == 0.0) {
                continue;
            }
            const double old = alpha[i];
            alpha[i] = std::clamp(old - g / q_ii[i], 0.0, c);
            const double delta = (alpha[i] - old) * y[i];
            if (delta != 0.0) {
                for (std::size_t d = 0; d <= dim; ++d) {
                    w[d] += delta * x[i][d];
                }
            }
        }
        const double obj = primal_objective(x, y, w, c);
        if (std::abs(prev_obj - obj) <= kTol * std::max(1.0, std::abs(obj))) {
            break;
        }
        prev_obj = obj;
    }

    ClassifierModel model;
    model.weights.assign(w.begin(), w.end() - 1);
    model.bias = w.back();
    model.c = c;
    return model;
}

std::vector<int> classify(const ClassifierModel& model,
                          const std::vector<std::vector<double>>& features) {
    std::vector<int> labels;
    labels.reserve(features.size());
    for (const auto& f : features) {
        if (f.size() != model.weights.size()) {
            throw std::invalid_argument("classify: feature dimension mismatch");
        }
        labels.push_back(dot(model.weights, f) + model.bias > 0.0 ? 1 : 0);
    }
    return labels;
}

namespace {

// Hand-rolled Fisher-Yates so the permutation is identical across standard
// library implementations.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

EdgeWindowSet subset(const EdgeWindowSet& set,
                     const std::vector<std::size_t>& indices) {
    EdgeWindowSet out;
    out.edge_kind = set.edge_kind;
    out.source = set.source;
    for (std::size_t i : indices) {
        out.features.push_back(set.features[i]);
        out.labels.push_back(set.labels[i]);
    }
    return out;
}

double accuracy_pct(const EdgeWindowSet& train, const EdgeWindowSet& test,
                    double c) {
    // A single-class training split degenerates to a constant predictor.
    bool saw[2] = {false, false};
    for (int label : train.labels) {
        saw[label] = true;
    }
    std::vector<int> predicted;
    if (saw[0] && saw[1]) {
        predicted = classify(train_linear_svm(train, c), test.features);
    } else {
        predicted.assign(test.labels.size(), saw[1] ? 1 : 0);
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == test.labels[i]) {
            ++correct;
        }
    }
    return 100.0 * static_cast<double>(correct) /
           static_cast<double>(predicted.size());
}

}  // namespace

double evaluate_split(const EdgeWindowSet& set, double c, SplitMode mode,
                      int folds, std::uint64_t seed) {
    const std::size_t n = set.features.size();
    if (set.labels.size() != n) {
        throw std::invalid_argument("evaluate: inconsistent set");
    }
    const auto order = shuffled_indices(n, seed);

    if (mode == SplitMode::half) {
        if (n < 2) {
            throw std::invalid_argument("evaluate: need at least 2 examples");
        }
        const std::size_t n_train = n / 2;
        std::vector<std::size_t> train_idx(order.begin(),
                                           order.begin() + n_train);
        std::vector<std::size_t> test_idx(order.begin() + n_train, order.end());
        return accuracy_pct(subset(set, train_idx), subset(set, test_idx), c);
    }

    if (folds < 2) {
        throw std::invalid_argument("evaluate: need at least 2 folds");
    }
    if (n < static_cast<std::size_t>(folds)) {
        throw std::invalid_argument("evaluate: fewer examples than folds");
    }
    double total = 0.0;
    for (int f = 0; f < folds; ++f) {
        const std::size_t lo = n * static_cast<std::size_t>(f) /
                               static_cast<std::size_t>(folds);
        const std::size_t hi = n * static_cast<std::size_t>(f + 1) /
                               static_cast<std::size_t>(folds);
        std::vector<std::size_t> test_idx(order.begin() + lo, order.begin() + hi);
        std::vector<std::size_t> train_idx(order.begin(), order.begin() + lo);
        train_idx.insert(train_idx.end(), order.begin() + hi, order.end());
        total += accuracy_pct(subset(set, train_idx), subset(set, test_idx), c);
    }
    return total / folds;
}

void scatter_export(std::ostream& out, const EdgeWindowSet& set, bool header) {
    const std::size_t dim =
        set.features.empty() ? 0 : set.features.front().size();
    if (header) {
        for (std::size_t d = 0; d < dim; ++d) {
            out << "f" << (d + 1) << ",";
        }
        out << "label,source\n";
    }
    char buf[40];
    for (std::size_t i = 0; i < set.features.size(); ++i) {
        for (double v : set.features[i]) {
            std::snprintf(buf, sizeof(buf), "%.9g", v);
            out << buf << ",";
        }
        out << set.labels[i] << "," << to_string(set.source) << "\n";
    }
}

void write_accuracy_jsonl(std::ostream& out,
                          const std::vector<AccuracyRecord>& records) {
    for (const auto& rec : records) {
        nlohmann::ordered_json line;
        line["gesture"] = rec.gesture;
        line["subject"] = rec.subject;
        line["edge_kind"] = to_string(rec.edge_kind);
        line["source"] = to_string(rec.source);
        line["mode"] = rec.mode;
        line["accuracy_pct"] = rec.accuracy_pct;
        out << line.dump() << "\n";
    }
}

void write_accuracy_jsonl_file(const std::string& path,
                               const std::vector<AccuracyRecord>& records) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    write_accuracy_jsonl(out, records);
}

std::vector<AccuracyRecord> read_accuracy_jsonl(std::istream& in) {
    std::vector<AccuracyRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            const auto parsed = nlohmann::json::parse(line);
            AccuracyRecord rec;
            rec.gesture = parsed.at("gesture").get<std::string>();
            rec.subject = parsed.at("subject").get<std::string>();
            rec.edge_kind =
                edge_kind_from_string(parsed.at("edge_kind").get<std::string>());
            rec.source =
                edge_source_from_string(parsed.at("source").get<std::string>());
            rec.mode = parsed.at("mode").get<std::string>();
            rec.accuracy_pct = parsed.at("accuracy_pct").get<double>();
            records.push_back(std::move(rec));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("accuracy line " + std::to_string(line_no) +
                                     ": " + e.what());
        }
    }
    return records;
}

std::vector<AccuracyRecord> read_accuracy_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open: " + path);
    }
    return read_accuracy_jsonl(in);
}

}  // namespace emgact
