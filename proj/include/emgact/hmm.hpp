#ifndef EMGACT_HMM_HPP
#define EMGACT_HMM_HPP

#include <iosfwd>
#include <vector>

#include "emgact/signal.hpp"
#include "emgact/stimulus.hpp"

namespace emgact {

// Discrete first-order HMM: initial distribution pi, row-stochastic N x N
// transition matrix and N x M emission matrix.
struct DiscreteHmm {
    int num_states = 0;
    int num_symbols = 0;
    std::vector<double> initial;                  // pi[i]
    std::vector<std::vector<double>> transition;  // T[i][j]
    std::vector<std::vector<double>> emission;    // E[i][k]

    // Checks shapes and that every row sums to 1 within tol.
    void validate(double tol = 1e-9) const;
};

struct ViterbiResult {
    StateSequence states;    // grid left empty; callers attach window alignment
    double log_likelihood = 0.0;  // natural log of joint P(best path, obs)
};

// Supervised counting estimation from labeled sequences with additive
// (Laplace) smoothing:
//   T[i][j] = (#(i->j) + s) / (#(i->*) + N*s)
//   E[i][k] = (#(symbol k under label i) + s) / (#(label i) + M*s)
//   pi[i]   = (1{first label = i} + s) / (1 + N*s)
// With s = 0, a state absent from the labels leaves its rows 0/0 and is an
// error; a state that never starts a transition gets a uniform row.
DiscreteHmm estimate_supervised(const QuantizedSequence& observations,
                                const StateSequence& labels,
                                double smoothing);

// Most probable state path in natural-log space, ties broken toward the
// lower state index.  A model whose paths all have zero probability yields
// log_likelihood == -inf and the all-ties path.
ViterbiResult viterbi_decode(const DiscreteHmm& model,
                             const QuantizedSequence& observations);

// Log of the joint probability of the given path and observations; -inf if
// any factor is zero.
double sequence_log_likelihood(const DiscreteHmm& model,
                               const QuantizedSequence& observations,
                               const StateSequence& states);

// Plain-text key/value serialization (lines: N, M, pi, one T line per row,
// one E line per row) so trained models can be inspected and diffed.
void write_model_txt(std::ostream& out, const DiscreteHmm& model);
DiscreteHmm read_model_txt(std::istream& in);

}  // namespace emgact

#endif
