#include <doctest.h>

#include <cmath>
#include <limits>

#include "cqcap/operator_core.hpp"
#include "test_support.hpp"

using namespace cqcap;
using testsup::h2;

namespace {

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_CASE("spectral decomposition of simple matrices") {
    SUBCASE("identity has a flat spectrum") {
        const SpectralDecomposition d = spectral_decompose(Matrix::Identity(2, 2));
        CHECK(d.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("diagonal input sorts descending with standard-basis vectors") {
        const SpectralDecomposition d = spectral_decompose(diag2(0.3, 0.7));
        CHECK(d.eigenvalues[0] == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(d.eigenvalues[1] == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(std::abs(d.eigenvectors(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(d.eigenvectors(0, 1)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("flip matrix has eigenvalues +1 and -1") {
        Matrix flip(2, 2);
        flip << 0, 1, 1, 0;
        const SpectralDecomposition d = spectral_decompose(flip);
        CHECK(d.eigenvalues[0] == doctest::Approx(1.0));
        CHECK(d.eigenvalues[1] == doctest::Approx(-1.0));
    }
    SUBCASE("non-Hermitian input is rejected with the asymmetry magnitude") {
        Matrix bad(2, 2);
        bad << 0.0, 1.0, 0.0, 0.0;
        CHECK_THROWS_AS(spectral_decompose(bad), ValidationError);
    }
}

TEST_CASE("spectral decomposition round-trips random Hermitian matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 5);
        const Matrix h = testsup::random_hermitian(dim, rng);
        const SpectralDecomposition d = spectral_decompose(h);
        CHECK((d.reconstruct() - h).cwiseAbs().maxCoeff() <
              default_tolerances().reconstruction);
        const Matrix gram = d.eigenvectors.adjoint() * d.eigenvectors;
        CHECK((gram - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <
              default_tolerances().orthonormal);
        for (int j = 0; j + 1 < d.dim(); ++j) CHECK(d.eigenvalues[j] >= d.eigenvalues[j + 1]);
    }
}

TEST_CASE("tensor product structure") {
    SUBCASE("identities") {
        CHECK((tensor_product(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) -
               Matrix::Identity(4, 4))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
    SUBCASE("diagonal factors, first factor most significant") {
        const Matrix t = tensor_product(diag2(2.0, 3.0), diag2(5.0, 7.0));
        CHECK(t(0, 0).real() == doctest::Approx(10.0));
        CHECK(t(1, 1).real() == doctest::Approx(14.0));
        CHECK(t(2, 2).real() == doctest::Approx(15.0));
        CHECK(t(3, 3).real() == doctest::Approx(21.0));
    }
    SUBCASE("trace is multiplicative") {
        Rng rng(12);
        const Matrix a = testsup::random_complex_matrix(2, rng);
        const Matrix b = testsup::random_complex_matrix(3, rng);
        const Complex lhs = tensor_product(a, b).trace();
        const Complex rhs = a.trace() * b.trace();
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
    SUBCASE("empty factor list is rejected") {
        CHECK_THROWS_AS(tensor_product(std::vector<Matrix>{}), ArgumentError);
    }
}

TEST_CASE("partial trace") {
    Rng rng(13);
    SUBCASE("product input collapses to the kept factor") {
        const Matrix a = testsup::random_density(2, rng);
        const Matrix b = testsup::random_density(3, rng);
        const Matrix joint = tensor_product(a, b);
        CHECK((partial_trace(joint, Subsystem::Second, 2, 3) - a).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK((partial_trace(joint, Subsystem::First, 2, 3) - b).cwiseAbs().maxCoeff() <
              1e-12);
    }
    SUBCASE("maximally entangled pair reduces to the mixed qubit both ways") {
        Vector bell(4);
        bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
        const Matrix joint = bell * bell.adjoint();
        const Matrix half = 0.5 * Matrix::Identity(2, 2);
        CHECK((partial_trace(joint, Subsystem::First, 2, 2) - half).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK((partial_trace(joint, Subsystem::Second, 2, 2) - half).cwiseAbs().maxCoeff() <
              1e-12);
    }
    SUBCASE("trace is preserved") {
        const Matrix s = testsup::random_density(6, rng);
        CHECK(partial_trace(s, Subsystem::First, 2, 3).trace().real() ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(partial_trace(s, Subsystem::Second, 2, 3).trace().real() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(partial_trace(Matrix::Identity(5, 5), Subsystem::First, 2, 3),
                        ArgumentError);
    }
}

TEST_CASE("density operator validation") {
    CHECK_NOTHROW(DensityOperator(diag2(0.5, 0.5)));
    SUBCASE("trace failure") {
        CHECK_THROWS_AS(DensityOperator(diag2(0.5, 0.49)), ValidationError);
    }
    SUBCASE("negative eigenvalue") {
        CHECK_THROWS_AS(DensityOperator(diag2(1.05, -0.05)), ValidationError);
    }
    SUBCASE("non-Hermitian") {
        Matrix bad(2, 2);
        bad << 0.5, 0.1, 0.3, 0.5;
        CHECK_THROWS_AS(DensityOperator{bad}, ValidationError);
    }
}

TEST_CASE("von Neumann entropy values") {
    CHECK(von_neumann_entropy(DensityOperator(diag2(0.5, 0.5))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    Rng rng(14);
    CHECK(von_neumann_entropy(DensityOperator(testsup::random_pure_density(3, rng))) ==
          doctest::Approx(0.0).epsilon(1e-9));
    // Matches the scalar oracle, not a hardcoded constant.
    CHECK(von_neumann_entropy(DensityOperator(diag2(0.25, 0.75))) ==
          doctest::Approx(h2(0.25)).epsilon(1e-12));
    CHECK(h2(0.25) == doctest::Approx(0.811278).epsilon(1e-6));
}

TEST_CASE("entropy bounds, additivity and subadditivity on random states") {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const int d1 = 2 + static_cast<int>(rng.next_u64() % 2);
        const int d2 = 2 + static_cast<int>(rng.next_u64() % 2);
        const DensityOperator s(testsup::random_density(d1, rng));
        const DensityOperator t(testsup::random_density(d2, rng));

        const double hs = von_neumann_entropy(s);
        CHECK(hs >= -1e-9);
        CHECK(hs <= std::log2(static_cast<double>(d1)) + 1e-9);

        const DensityOperator joint(tensor_product(s.matrix(), t.matrix()));
        CHECK(von_neumann_entropy(joint) ==
              doctest::Approx(hs + von_neumann_entropy(t)).epsilon(1e-9));

        const DensityOperator mixed(testsup::random_density(d1 * d2, rng));
        const DensityOperator left(partial_trace(mixed.matrix(), Subsystem::Second, d1, d2));
        const DensityOperator right(partial_trace(mixed.matrix(), Subsystem::First, d1, d2));
        CHECK(von_neumann_entropy(mixed) <=
              von_neumann_entropy(left) + von_neumann_entropy(right) + 1e-9);
    }
}

TEST_CASE("relative entropy") {
    const DensityOperator half(diag2(0.5, 0.5));
    SUBCASE("vanishes on identical arguments") {
        Rng rng(16);
        const DensityOperator s(testsup::random_density(3, rng));
        CHECK(quantum_relative_entropy(s, s) == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("pure versus maximally mixed") {
        CHECK(quantum_relative_entropy(DensityOperator(diag2(1.0, 0.0)), half) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("matches the scalar oracle") {
        const double oracle = 1.0 - h2(0.25);
        CHECK(quantum_relative_entropy(DensityOperator(diag2(0.25, 0.75)), half) ==
              doctest::Approx(oracle).epsilon(1e-12));
        CHECK(oracle == doctest::Approx(0.188722).epsilon(1e-5));
    }
    SUBCASE("support leak gives infinity") {
        const double d = quantum_relative_entropy(half, DensityOperator(diag2(1.0, 0.0)));
        CHECK(std::isinf(d));
    }
    SUBCASE("dimension mismatch is rejected") {
        const DensityOperator third(Matrix::Identity(3, 3) / 3.0);
        CHECK_THROWS_AS(quantum_relative_entropy(half, third), ArgumentError);
    }
}

TEST_CASE("generalized inverse square root") {
    SUBCASE("identity maps to itself") {
        CHECK((gen_inv_sqrt(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
    SUBCASE("kernel stays kernel") {
        const Matrix r = gen_inv_sqrt(diag2(4.0, 0.0));
        CHECK(r(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::abs(r(1, 1)) < 1e-12);
    }
    SUBCASE("defining identity reproduces the support projector") {
        Rng rng(17);
        Vector v = testsup::random_complex_vector(3, rng);
        v.normalize();
        const Matrix x = 2.5 * (v * v.adjoint());
        const Matrix g = gen_inv_sqrt(x);
        CHECK((g * x * g - support_projector(x)).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("applying twice to a projector returns the projector") {
        Rng rng(18);
        Vector v = testsup::random_complex_vector(4, rng);
        v.normalize();
        const Matrix p = v * v.adjoint();
        CHECK((gen_inv_sqrt(gen_inv_sqrt(p)) - p).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("indefinite input is rejected") {
        CHECK_THROWS_AS(gen_inv_sqrt(diag2(1.0, -0.5)), ValidationError);
    }
}

TEST_CASE("resolution of identity validation") {
    Rng rng(19);
    const ResolutionOfIdentity povm = testsup::random_complete_povm(3, 4, rng);
    CHECK(povm.complete());
    Matrix total = Matrix::Zero(3, 3);
    for (const Matrix& x : povm.elements) {
        total += x;
        const SpectralDecomposition d = spectral_decompose(x);
        CHECK(d.eigenvalues.minCoeff() > -default_tolerances().psd);
    }
    CHECK((total - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);

    SUBCASE("sum exceeding identity is rejected") {
        CHECK_THROWS_AS(ResolutionOfIdentity::validated(
                            {Matrix::Identity(2, 2), Matrix::Identity(2, 2)}),
                        ValidationError);
    }
    SUBCASE("partial families are accepted but incomplete") {
        const ResolutionOfIdentity partial =
            ResolutionOfIdentity::validated({0.5 * Matrix::Identity(2, 2)});
        CHECK_FALSE(partial.complete());
    }
}

TEST_CASE("shannon entropy helper on unnormalized spectra") {
    RealVector probs(3);
    probs << 0.5, 0.5, 0.0;
    CHECK(shannon_entropy_bits(probs) == doctest::Approx(1.0).epsilon(1e-12));
}
