#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "cqcap/channel.hpp"
#include "cqcap/codebook.hpp"
#include "cqcap/config.hpp"
#include "cqcap/operator_core.hpp"
#include "cqcap/typical.hpp"

namespace cqcap {

// Square-root-measurement decoder over the typical subspace of the average
// state. All operators live in the compressed orthonormal basis of that
// subspace; elements vanish off it by construction.
class SqmDecoder {
  public:
    static SqmDecoder build(const Codebook& codebook, const Prior& prior, double delta,
                            int max_dim = kDefaultMaxDim);

    int codebook_size() const;
    int word_length() const;
    double delta() const;

    // Dimension |B| of the compressed basis.
    int compressed_dim() const;
    const TypicalSubspace& global_subspace() const;
    const TypicalSubspace& word_subspace(int u) const;

    // POVM element for word u in compressed coordinates (|B| x |B|).
    Matrix povm_element(int u) const;
    // Sum of all word elements in compressed coordinates; <= identity.
    Matrix povm_sum() const;
    // Isometry from compressed coordinates into the product space
    // (columns are the basis vectors of the typical subspace).
    Matrix embedding(int max_dim = 1024) const;

    // Probability of decoding word u correctly when word u was sent.
    double success_probability(int u) const;

    bool matches(const Codebook& codebook) const;

  private:
    struct Impl;
    explicit SqmDecoder(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// Mean over words of the exact misdecoding probability, the inconclusive
// outcome counting as an error.
double average_error_probability(const Codebook& codebook, const SqmDecoder& decoder);

// Per-word pieces of the deterministic error bound. The bound holds for the
// same delta and codebook as the decoder it certifies.
struct ErrorBoundBreakdown {
    std::vector<double> atypical_global;  // weight of S_u off the global subspace
    std::vector<double> cross;            // overlap with the other words' subspaces
    std::vector<double> atypical_word;    // weight of S_u off its own subspace
    double total_bound = 0.0;             // mean of 3*atypical_global + cross + atypical_word
};

ErrorBoundBreakdown deterministic_error_bound(const Codebook& codebook,
                                              const Prior& prior, double delta,
                                              int max_dim = kDefaultMaxDim);

// Analytic expected-error bound for a random codebook: 4*epsilon plus
// (N-1) * 2^{-n(chi - 2*delta)} with chi the entropy gap between the average
// state and the mean letter entropy. May exceed 1; reported as-is.
double random_coding_bound(double avg_state_entropy, double avg_letter_entropy, int n,
                           int N, double delta, double epsilon);

// Gram matrix of the projected word eigenvectors, with their eigenvalue
// weights. Labels are (word index, position in that word's index set).
struct GramData {
    Matrix gram;
    RealVector lambda;
    std::vector<std::pair<int, int>> labels;
};

GramData build_gram(const Codebook& codebook, const Prior& prior, double delta,
                    int max_dim = kDefaultMaxDim, int max_gram_dim = kDefaultMaxGramDim);

// Both sides of the weighted trace inequality comparing the square root of a
// Gram matrix against the Gram matrix itself.
struct TraceInequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

TraceInequalityCheck trace_inequality_check(const Matrix& gram, const RealVector& lambda);

// Error probability computed twice: through the operator-form decoder and
// through Gram-matrix coefficients. The two routes must agree.
struct GramCrossCheck {
    double p_err_operator = 0.0;
    double p_err_gram = 0.0;
    double max_diff = 0.0;
    TraceInequalityCheck trace_check;
};

GramCrossCheck gram_cross_check(const Codebook& codebook, const Prior& prior, double delta,
                                int max_dim = kDefaultMaxDim,
                                int max_gram_dim = kDefaultMaxGramDim);

} // namespace cqcap
