#include "emgact/hmm.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace emgact {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kNumStates = 2;  // 0 = rest, 1 = activity

void check_row(const std::vector<double>& row, std::size_t len, double tol,
               const char* what) {
    if (row.size() != len) {
        throw std::invalid_argument(std::string("hmm: bad ") + what + " row size");
    }
    double sum = 0.0;
    for (double p : row) {
        if (p < 0.0) {
            throw std::invalid_argument(std::string("hmm: negative ") + what +
                                        " probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw std::invalid_argument(std::string("hmm: ") + what +
                                    " row does not sum to 1");
    }
}

void check_observations(const DiscreteHmm& model,
                        const QuantizedSequence& observations) {
    for (int s : observations.symbols) {
        if (s < 0 || s >= model.num_symbols) {
            throw std::invalid_argument("hmm: observation symbol out of range");
        }
    }
}

}  // namespace

void DiscreteHmm::validate(double tol) const {
    if (num_states < 1 || num_symbols < 1) {
        throw std::invalid_argument("hmm: empty state or symbol space");
    }
    const auto n = static_cast<std::size_t>(num_states);
    const auto m = static_cast<std::size_t>(num_symbols);
    if (transition.size() != n || emission.size() != n) {
        throw std::invalid_argument("hmm: matrix row count mismatch");
    }
    check_row(initial, n, tol, "initial");
    for (const auto& row : transition) {
        check_row(row, n, tol, "transition");
    }
    for (const auto& row : emission) {
        check_row(row, m, tol, "emission");
    }
}

DiscreteHmm estimate_supervised(const QuantizedSequence& observations,
                                const StateSequence& labels,
                                double smoothing) {
    if (observations.size() != labels.size()) {
        throw std::invalid_argument("estimate: observation/label length mismatch");
    }
    if (labels.size() < 2) {
        throw std::invalid_argument("estimate: need at least 2 labeled windows");
    }
    if (smoothing < 0.0) {
        throw std::invalid_argument("estimate: smoothing must be >= 0");
    }
    const int num_symbols = observations.num_levels;
    if (num_symbols < 1) {
        throw std::invalid_argument("estimate: num_levels must be >= 1");
    }
    for (int s : observations.symbols) {
        if (s < 0 || s >= num_symbols) {
            throw std::invalid_argument("estimate: symbol out of range");
        }
    }
    for (int q : labels.states) {
        if (q != 0 && q != 1) {
            throw std::invalid_argument("estimate: labels must be 0 or 1");
        }
    }

    const std::size_t len = labels.size();
    double state_count[kNumStates] = {0.0, 0.0};
    double pair_from[kNumStates] = {0.0, 0.0};
    double pair_count[kNumStates][kNumStates] = {{0.0, 0.0}, {0.0, 0.0}};
    std::vector<std::vector<double>> emit_count(
        kNumStates, std::vector<double>(num_symbols, 0.0));

    for (std::size_t t = 0; t < len; ++t) {
        const int q = labels.states[t];
        state_count[q] += 1.0;
        emit_count[q][observations.symbols[t]] += 1.0;
        if (t + 1 < len) {
            pair_from[q] += 1.0;
            pair_count[q][labels.states[t + 1]] += 1.0;
        }
    }

    if (smoothing == 0.0) {
        for (int i = 0; i < kNumStates; ++i) {
            if (state_count[i] == 0.0) {
                throw std::invalid_argument(
                    "estimate: state " + std::to_string(i) +
                    " absent from labels and smoothing is 0 (degenerate row)");
            }
        }
    }

    DiscreteHmm model;
    model.num_states = kNumStates;
    model.num_symbols = num_symbols;
    model.initial.assign(kNumStates, 0.0);
    model.transition.assign(kNumStates, std::vector<double>(kNumStates, 0.0));
    model.emission.assign(kNumStates, std::vector<double>(num_symbols, 0.0));

    const double pi_denominator = 1.0 + kNumStates * smoothing;
    for (int i = 0; i < kNumStates; ++i) {
        const double hit = labels.states.front() == i ? 1.0 : 0.0;
        model.initial[i] = (hit + smoothing) / pi_denominator;
    }

    for (int i = 0; i < kNumStates; ++i) {
        const double denom = pair_from[i] + kNumStates * smoothing;
        if (denom == 0.0) {
            // State observed only at the sequence end: no outgoing pair to
            // count, so leave the row uninformative.
            for (int j = 0; j < kNumStates; ++j) {
                model.transition[i][j] = 1.0 / kNumStates;
            }
        } else {
            for (int j = 0; j < kNumStates; ++j) {
                model.transition[i][j] = (pair_count[i][j] + smoothing) / denom;
            }
        }
    }

    for (int i = 0; i < kNumStates; ++i) {
        const double denom = state_count[i] + num_symbols * smoothing;
        for (int k = 0; k < num_symbols; ++k) {
            model.emission[i][k] = (emit_count[i][k] + smoothing) / denom;
        }
    }
    return model;
}

ViterbiResult viterbi_decode(const DiscreteHmm& model,
                             const QuantizedSequence& observations) {
    if (observations.size() == 0) {
        throw std::invalid_argument("viterbi: empty observation sequence");
    }
    if (model.num_states < 1 ||
        model.initial.size() != static_cast<std::size_t>(model.num_states) ||
        model.transition.size() != static_cast<std::size_t>(model.num_states) ||
        model.emission.size() != static_cast<std::size_t>(model.num_states)) {
        throw std::invalid_argument("viterbi: malformed model");
    }
    check_observations(model, observations);

    const int n = model.num_states;
    const std::size_t len = observations.size();

    std::vector<double> prev(n), cur(n);
    std::vector<std::vector<int>> backptr(len, std::vector<int>(n, 0));

    for (int i = 0; i < n; ++i) {
        prev[i] = std::log(model.initial[i]) +
                  std::log(model.emission[i][observations.symbols[0]]);
    }

    for (std::size_t t = 1; t < len; ++t) {
        const int symbol = observations.symbols[t];
        for (int j = 0; j < n; ++j) {
            // Strict > keeps the lowest predecessor index on ties.
            int best_i = 0;
            double best = prev[0] + std::log(model.transition[0][j]);
            for (int i = 1; i < n; ++i) {
                const double score = prev[i] + std::log(model.transition[i][j]);
                if (score > best) {
                    best = score;
                    best_i = i;
                }
            }
            cur[j] = best + std::log(model.emission[j][symbol]);
            backptr[t][j] = best_i;
        }
        prev.swap(cur);
    }

    int last = 0;
    for (int i = 1; i < n; ++i) {
        if (prev[i] > prev[last]) {
            last = i;
        }
    }

    ViterbiResult result;
    result.log_likelihood = prev[last];
    result.states.states.assign(len, 0);
    result.states.states[len - 1] = last;
    for (std::size_t t = len - 1; t > 0; --t) {
        last = backptr[t][last];
        result.states.states[t - 1] = last;
    }
    return result;
}

double sequence_log_likelihood(const DiscreteHmm& model,
                               const QuantizedSequence& observations,
                               const StateSequence& states) {
    if (observations.size() != states.size()) {
        throw std::invalid_argument("loglik: observation/state length mismatch");
    }
    if (observations.size() == 0) {
        throw std::invalid_argument("loglik: empty sequence");
    }
    check_observations(model, observations);
    for (int q : states.states) {
        if (q < 0 || q >= model.num_states) {
            throw std::invalid_argument("loglik: state out of range");
        }
    }

    double total = std::log(model.initial[states.states[0]]) +
                   std::log(model.emission[states.states[0]][observations.symbols[0]]);
    for (std::size_t t = 1; t < states.size(); ++t) {
        const int from = states.states[t - 1];
        const int to = states.states[t];
        total += std::log(model.transition[from][to]) +
                 std::log(model.emission[to][observations.symbols[t]]);
    }
    return std::isnan(total) ? kNegInf : total;
}

void write_model_txt(std::ostream& out, const DiscreteHmm& model) {
    char buf[64];
    out << "N " << model.num_states << "\n";
    out << "M " << model.num_symbols << "\n";
    out << "pi";
    for (double p : model.initial) {
        std::snprintf(buf, sizeof(buf), " %.17g", p);
        out << buf;
    }
    out << "\n";
    for (const auto& row : model.transition) {
        out << "T";
        for (double p : row) {
            std::snprintf(buf, sizeof(buf), " %.17g", p);
            out << buf;
        }
        out << "\n";
    }
    for (const auto& row : model.emission) {
        out << "E";
        for (double p : row) {
            std::snprintf(buf, sizeof(buf), " %.17g", p);
            out << buf;
        }
        out << "\n";
    }
}

namespace {

void expect_key(std::istream& in, const char* key) {
    std::string token;
    if (!(in >> token) || token != key) {
        throw std::runtime_error(std::string("model parse: expected '") + key +
                                 "', got '" + token + "'");
    }
}

double read_number(std::istream& in, const char* what) {
    double v = 0.0;
    if (!(in >> v)) {
        throw std::runtime_error(std::string("model parse: bad ") + what);
    }
    return v;
}

}  // namespace

DiscreteHmm read_model_txt(std::istream& in) {
    DiscreteHmm model;
    expect_key(in, "N");
    model.num_states = static_cast<int>(read_number(in, "N"));
    expect_key(in, "M");
    model.num_symbols = static_cast<int>(read_number(in, "M"));
    if (model.num_states < 1 || model.num_symbols < 1) {
        throw std::runtime_error("model parse: non-positive N or M");
    }

    expect_key(in, "pi");
    model.initial.resize(model.num_states);
    for (double& p : model.initial) {
        p = read_number(in, "pi entry");
    }
    model.transition.assign(model.num_states,
                            std::vector<double>(model.num_states, 0.0));
    for (auto& row : model.transition) {
        expect_key(in, "T");
        for (double& p : row) {
            p = read_number(in, "T entry");
        }
    }
    model.emission.assign(model.num_states,
                          std::vector<double>(model.num_symbols, 0.0));
    for (auto& row : model.emission) {
        expect_key(in, "E");
        for (double& p : row) {
            p = read_number(in, "E entry");
        }
    }
    return model;
}

}  // namespace emgact
