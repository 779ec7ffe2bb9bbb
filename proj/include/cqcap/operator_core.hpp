#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cqcap/config.hpp"
#include "cqcap/errors.hpp"

namespace cqcap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Max |a_ij - conj(a_ji)| over all entries; 0 for exactly Hermitian input.
double hermitian_defect(const Matrix& m);

bool is_hermitian(const Matrix& m, double tol = default_tolerances().hermitian);

// Eigensystem of a Hermitian matrix. Eigenvalues are sorted descending;
// ties are broken by lexicographic order of the eigenvector real parts so
// the decomposition is reproducible.
struct SpectralDecomposition {
    RealVector eigenvalues; // descending
    Matrix eigenvectors;    // columns, same order as eigenvalues

    int dim() const { return static_cast<int>(eigenvalues.size()); }

    // Sum_j lambda_j |e_j><e_j|
    Matrix reconstruct() const;
};

// Throws ValidationError (naming the max asymmetry) if the input is not
// Hermitian within tolerance.
SpectralDecomposition spectral_decompose(const Matrix& hermitian,
                                         const Tolerances& tol = default_tolerances());

// Kronecker product of an ordered factor list. The first factor owns the
// most significant index block, so indices read like words: the joint
// index (i_1,...,i_n) maps to i_1 * d_2*...*d_n + ... + i_n.
Matrix tensor_product(const std::vector<Matrix>& factors);
Matrix tensor_product(const Matrix& a, const Matrix& b);

enum class Subsystem { First, Second };

// Partial trace of an operator on H_1 (x) H_2 with dims (d1, d2).
// Tracing out First returns a d2 x d2 matrix, Second a d1 x d1 one.
Matrix partial_trace(const Matrix& joint, Subsystem traced_out, int dim_first,
                     int dim_second);

// Positive unit-trace operator. Construction validates Hermiticity,
// positivity and trace; failures throw ValidationError with the offending
// magnitude.
class DensityOperator {
public:
    explicit DensityOperator(Matrix m, const Tolerances& tol = default_tolerances());

    const Matrix& matrix() const { return matrix_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }

private:
    Matrix matrix_;
};

// -Sum_i p_i log2 p_i with 0 log 0 = 0. Entries below the psd tolerance
// are treated as exact zeros. The input does not have to be normalized.
double shannon_entropy_bits(const RealVector& probs,
                            const Tolerances& tol = default_tolerances());

// Von Neumann entropy in bits: H(S) = -Tr S log2 S.
double von_neumann_entropy(const DensityOperator& s,
                           const Tolerances& tol = default_tolerances());

// Relative entropy D(S||T) = Tr S (log2 S - log2 T) in bits, evaluated on
// supports. Returns +infinity when the support of S leaks outside the
// support of T by more than the kernel tolerance.
double quantum_relative_entropy(const DensityOperator& s, const DensityOperator& t,
                                const Tolerances& tol = default_tolerances());

// Generalized inverse square root: eigenvalues below kernel * lambda_max
// map to 0, the rest to lambda^(-1/2). The result vanishes on the kernel
// of the input. Throws ValidationError on eigenvalues below -psd.
Matrix gen_inv_sqrt(const Matrix& psd, const Tolerances& tol = default_tolerances());

// Projector onto the support of a PSD matrix (same kernel cut as
// gen_inv_sqrt).
Matrix support_projector(const Matrix& psd,
                         const Tolerances& tol = default_tolerances());

// Family of positive operators with Sum_j X_j <= I. A completion element
// X_0 = I - Sum X_j makes it a full resolution of identity.
struct ResolutionOfIdentity {
    std::vector<Matrix> elements;
    int dim = 0;

    // Validates each element (PSD) and the completion (I - Sum X_j PSD).
    static ResolutionOfIdentity validated(std::vector<Matrix> elements,
                                          const Tolerances& tol = default_tolerances());

    bool complete(const Tolerances& tol = default_tolerances()) const;
};

} // namespace cqcap
