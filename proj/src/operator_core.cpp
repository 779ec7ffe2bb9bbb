#include "cqcap/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace cqcap {

namespace {

void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream msg;
        msg << who << ": expected a non-empty square matrix, got " << m.rows()
            << "x" << m.cols();
        throw ArgumentError(msg.str());
    }
}

// Rotate each column so its first non-negligible component is real and
// positive. Removes the arbitrary phase of eigenvectors, making tie-breaks
// and repeated runs reproducible.
void normalize_column_phases(Matrix& vecs) {
    for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
        for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
            const double mag = std::abs(vecs(r, c));
            if (mag > 1e-12) {
                vecs.col(c) *= std::conj(vecs(r, c)) / mag;
                break;
            }
        }
    }
}

bool column_lex_less(const Matrix& vecs, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
        const double ra = vecs(r, a).real();
        const double rb = vecs(r, b).real();
        if (ra != rb) return ra < rb;
    }
    return false;
}

RealVector hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

} // namespace

double hermitian_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && hermitian_defect(m) <= tol;
}

Matrix SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral_decompose(const Matrix& hermitian, const Tolerances& tol) {
    require_square(hermitian, "spectral_decompose");
    const double defect = hermitian_defect(hermitian);
    if (defect > tol.hermitian) {
        std::ostringstream msg;
        msg << "spectral_decompose: input is not Hermitian, max asymmetry "
            << defect;
        throw ValidationError(msg.str());
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
    if (solver.info() != Eigen::Success) {
        throw ValidationError("spectral_decompose: eigensolver failed to converge");
    }

    Matrix vecs = solver.eigenvectors();
    normalize_column_phases(vecs);
    const RealVector& vals = solver.eigenvalues();

    std::vector<Eigen::Index> order(static_cast<size_t>(vals.size()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (vals[a] != vals[b]) return vals[a] > vals[b];
        return column_lex_less(vecs, a, b);
    });

    SpectralDecomposition out;
    out.eigenvalues.resize(vals.size());
    out.eigenvectors.resize(vecs.rows(), vecs.cols());
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        out.eigenvalues[k] = vals[order[static_cast<size_t>(k)]];
        out.eigenvectors.col(k) = vecs.col(order[static_cast<size_t>(k)]);
    }
    return out;
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix tensor_product(const std::vector<Matrix>& factors) {
    if (factors.empty()) {
        throw ArgumentError("tensor_product: factor list is empty");
    }
    Matrix out = factors.front();
    for (size_t k = 1; k < factors.size(); ++k) {
        out = tensor_product(out, factors[k]);
    }
    return out;
}

Matrix partial_trace(const Matrix& joint, Subsystem traced_out, int dim_first,
                     int dim_second) {
    require_square(joint, "partial_trace");
    if (dim_first <= 0 || dim_second <= 0 ||
        joint.rows() != static_cast<Eigen::Index>(dim_first) * dim_second) {
        std::ostringstream msg;
        msg << "partial_trace: dimension mismatch, matrix is " << joint.rows()
            << "x" << joint.cols() << " but factors are " << dim_first << " * "
            << dim_second;
        throw ArgumentError(msg.str());
    }

    if (traced_out == Subsystem::First) {
        Matrix out = Matrix::Zero(dim_second, dim_second);
        for (int i = 0; i < dim_first; ++i) {
            out += joint.block(i * dim_second, i * dim_second, dim_second, dim_second);
        }
        return out;
    }
    Matrix out = Matrix::Zero(dim_first, dim_first);
    for (int i = 0; i < dim_first; ++i) {
        for (int j = 0; j < dim_first; ++j) {
            Complex sum = 0.0;
            for (int k = 0; k < dim_second; ++k) {
                sum += joint(i * dim_second + k, j * dim_second + k);
            }
            out(i, j) = sum;
        }
    }
    return out;
}

DensityOperator::DensityOperator(Matrix m, const Tolerances& tol) : matrix_(std::move(m)) {
    require_square(matrix_, "DensityOperator");

    const double defect = hermitian_defect(matrix_);
    if (defect > tol.hermitian) {
        std::ostringstream msg;
        msg << "density operator is not Hermitian, max asymmetry " << defect;
        throw ValidationError(msg.str());
    }

    const double tr_err = std::abs(matrix_.trace() - Complex(1.0, 0.0));
    if (tr_err > tol.trace) {
        std::ostringstream msg;
        msg << "density operator trace differs from 1 by " << tr_err;
        throw ValidationError(msg.str());
    }

    const RealVector vals = hermitian_eigenvalues(matrix_);
    if (vals.minCoeff() < -tol.psd) {
        std::ostringstream msg;
        msg << "density operator is not positive semidefinite, min eigenvalue "
            << vals.minCoeff();
        throw ValidationError(msg.str());
    }
}

double shannon_entropy_bits(const RealVector& probs, const Tolerances& tol) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        const double p = probs[i];
        if (p > tol.psd) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

double von_neumann_entropy(const DensityOperator& s, const Tolerances& tol) {
    return shannon_entropy_bits(hermitian_eigenvalues(s.matrix()), tol);
}

double quantum_relative_entropy(const DensityOperator& s, const DensityOperator& t,
                                const Tolerances& tol) {
    if (s.dim() != t.dim()) {
        std::ostringstream msg;
        msg << "quantum_relative_entropy: dimension mismatch " << s.dim()
            << " vs " << t.dim();
        throw ArgumentError(msg.str());
    }

    const SpectralDecomposition sd = spectral_decompose(s.matrix());
    const SpectralDecomposition td = spectral_decompose(t.matrix());

    double tr_s_log_s = 0.0;
    for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
        const double p = sd.eigenvalues[i];
        if (p > tol.psd) tr_s_log_s += p * std::log2(p);
    }

    // <t_j|S|t_j> splits S across the eigenbasis of T; mass landing on the
    // kernel of T means the support condition fails.
    const double mu_max = td.eigenvalues.size() > 0 ? td.eigenvalues[0] : 0.0;
    const double cut = tol.kernel * mu_max;
    double tr_s_log_t = 0.0;
    double kernel_mass = 0.0;
    for (Eigen::Index j = 0; j < td.eigenvalues.size(); ++j) {
        const double mu = td.eigenvalues[j];
        const double mass =
            (td.eigenvectors.col(j).adjoint() * s.matrix() * td.eigenvectors.col(j))(0).real();
        if (mu > cut) {
            tr_s_log_t += mass * std::log2(mu);
        } else {
            kernel_mass += std::max(mass, 0.0);
        }
    }
    if (kernel_mass > tol.kernel) {
        return std::numeric_limits<double>::infinity();
    }
    return tr_s_log_s - tr_s_log_t;
}

Matrix gen_inv_sqrt(const Matrix& psd, const Tolerances& tol) {
    if (psd.rows() == 0) return Matrix(0, 0);
    const SpectralDecomposition d = spectral_decompose(psd, tol);
    const double lambda_max = d.eigenvalues.size() > 0 ? d.eigenvalues[0] : 0.0;
    if (d.eigenvalues.minCoeff() < -tol.psd) {
        std::ostringstream msg;
        msg << "gen_inv_sqrt: input is not positive semidefinite, min eigenvalue "
            << d.eigenvalues.minCoeff();
        throw ValidationError(msg.str());
    }

    const double cut = tol.kernel * std::max(lambda_max, 0.0);
    RealVector mapped = RealVector::Zero(d.eigenvalues.size());
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
        const double lambda = d.eigenvalues[i];
        if (lambda > cut) mapped[i] = 1.0 / std::sqrt(lambda);
    }
    return d.eigenvectors * mapped.asDiagonal() * d.eigenvectors.adjoint();
}

Matrix support_projector(const Matrix& psd, const Tolerances& tol) {
    const SpectralDecomposition d = spectral_decompose(psd, tol);
    const double lambda_max = d.eigenvalues.size() > 0 ? d.eigenvalues[0] : 0.0;
    if (d.eigenvalues.minCoeff() < -tol.psd) {
        std::ostringstream msg;
        msg << "support_projector: input is not positive semidefinite, min eigenvalue "
            << d.eigenvalues.minCoeff();
        throw ValidationError(msg.str());
    }

    const double cut = tol.kernel * std::max(lambda_max, 0.0);
    RealVector mapped = RealVector::Zero(d.eigenvalues.size());
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
        if (d.eigenvalues[i] > cut) mapped[i] = 1.0;
    }
    return d.eigenvectors * mapped.asDiagonal() * d.eigenvectors.adjoint();
}

ResolutionOfIdentity ResolutionOfIdentity::validated(std::vector<Matrix> elements,
                                                     const Tolerances& tol) {
    if (elements.empty()) {
        throw ArgumentError("ResolutionOfIdentity: element list is empty");
    }
    const Eigen::Index dim = elements.front().rows();
    for (size_t j = 0; j < elements.size(); ++j) {
        const Matrix& x = elements[j];
        require_square(x, "ResolutionOfIdentity");
        if (x.rows() != dim) {
            std::ostringstream msg;
            msg << "ResolutionOfIdentity: element " << j << " has dimension "
                << x.rows() << ", expected " << dim;
            throw ArgumentError(msg.str());
        }
        const double defect = hermitian_defect(x);
        if (defect > tol.hermitian) {
            std::ostringstream msg;
            msg << "ResolutionOfIdentity: element " << j
                << " is not Hermitian, max asymmetry " << defect;
            throw ValidationError(msg.str());
        }
        const double min_eig = hermitian_eigenvalues(x).minCoeff();
        if (min_eig < -tol.psd) {
            std::ostringstream msg;
            msg << "ResolutionOfIdentity: element " << j
                << " is not positive semidefinite, min eigenvalue " << min_eig;
            throw ValidationError(msg.str());
        }
    }

    Matrix completion = Matrix::Identity(dim, dim);
    for (const Matrix& x : elements) completion -= x;
    const double min_eig = hermitian_eigenvalues(completion).minCoeff();
    if (min_eig < -tol.psd) {
        std::ostringstream msg;
        msg << "ResolutionOfIdentity: elements exceed identity, completion "
               "min eigenvalue " << min_eig;
        throw ValidationError(msg.str());
    }

    ResolutionOfIdentity out;
    out.elements = std::move(elements);
    out.dim = static_cast<int>(dim);
    return out;
}

bool ResolutionOfIdentity::complete(const Tolerances& tol) const {
    Matrix sum = Matrix::Zero(dim, dim);
    for (const Matrix& x : elements) sum += x;
    return (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= tol.hermitian;
}

} // namespace cqcap
