#include <doctest.h>

#include <cmath>

#include "opconvex/linalg.hpp"
#include "opconvex/sampling.hpp"

using namespace opconvex;

namespace {

GeneralMatrix reconstruct(const EigenDecomposition& ed) {
    std::vector<Complex> lambda(ed.values.begin(), ed.values.end());
    return ed.vectors * GeneralMatrix::diagonal(lambda) * ed.vectors.adjoint();
}

} // namespace

// ===========================================================================
// Dense matrix basics
// ===========================================================================

TEST_CASE("matrix arithmetic and shape guards") {
    const GeneralMatrix a = GeneralMatrix::from_real({{1, 2}, {3, 4}});
    const GeneralMatrix b = GeneralMatrix::from_real({{0, 1}, {1, 0}});

    const GeneralMatrix ab = a * b;
    CHECK(ab(0, 0) == Complex(2.0));
    CHECK(ab(0, 1) == Complex(1.0));
    CHECK(ab(1, 0) == Complex(4.0));
    CHECK(ab(1, 1) == Complex(3.0));

    CHECK((a + b)(0, 1) == Complex(3.0));
    CHECK((a - b)(1, 0) == Complex(2.0));
    CHECK(a.trace() == Complex(5.0));

    const GeneralMatrix rect(2, 3);
    CHECK_THROWS_AS((void)(a * GeneralMatrix(3, 2) * rect), ShapeError);
    CHECK_THROWS_AS((void)(a + rect), ShapeError);
    CHECK_THROWS_AS((void)rect.trace(), ShapeError);
}

TEST_CASE("adjoint conjugates and transposes") {
    const GeneralMatrix m = GeneralMatrix::from_complex({{Complex(1, 2), Complex(3, -1)},
                                                         {Complex(0, 5), Complex(-2, 0)}});
    const GeneralMatrix ms = m.adjoint();
    CHECK(ms(0, 0) == Complex(1, -2));
    CHECK(ms(0, 1) == Complex(0, -5));
    CHECK(ms(1, 0) == Complex(3, 1));
    CHECK(frobenius_distance(m.adjoint().adjoint(), m) == doctest::Approx(0.0));
    CHECK(frobenius_distance(m.conjugate().transpose(), ms) == doctest::Approx(0.0));
}

TEST_CASE("hs_inner of a matrix with itself is its squared Frobenius norm") {
    TrialRng rng(11);
    const GeneralMatrix x = random_gaussian_matrix(rng, 3, 4);
    double sum_sq = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) sum_sq += std::norm(x(i, j));
    const Complex self = hs_inner(x, x);
    CHECK(std::abs(self.real() - sum_sq) <= 1e-12 * (1.0 + sum_sq));
    CHECK(std::abs(self.imag()) <= 1e-12 * (1.0 + sum_sq));
    CHECK(std::abs(x.frobenius_norm() - std::sqrt(sum_sq)) <= 1e-12 * (1.0 + sum_sq));
}

TEST_CASE("hermitian constructor validates and symmetrizes") {
    const GeneralMatrix good = GeneralMatrix::from_complex(
        {{Complex(2, 0), Complex(1, 1)}, {Complex(1, -1), Complex(3, 0)}});
    const HermitianMatrix h(good);
    CHECK(h(0, 1) == Complex(1, 1));
    CHECK(h(1, 0) == Complex(1, -1));
    CHECK(h(0, 0).imag() == 0.0);

    GeneralMatrix bad = good;
    bad(0, 1) = Complex(1, 1.5); // defect 0.5, way past tolerance
    CHECK_THROWS_AS(HermitianMatrix{bad}, DomainError);
    CHECK_THROWS_AS(HermitianMatrix{GeneralMatrix(2, 3)}, ShapeError);
}

// ===========================================================================
// Eigensolver
// ===========================================================================

TEST_CASE("eigensolver handles diagonal input exactly") {
    const HermitianMatrix d = HermitianMatrix::diagonal({3.0, -1.0, 2.0});
    const EigenDecomposition ed = jacobi_eigh(d);
    CHECK(ed.values[0] == doctest::Approx(-1.0));
    CHECK(ed.values[1] == doctest::Approx(2.0));
    CHECK(ed.values[2] == doctest::Approx(3.0));
}

TEST_CASE("eigenvalues of [[2,-1],[-1,2]] are 1 and 3") {
    // Characteristic polynomial (2-t)^2 - 1 has roots 1 and 3.
    const HermitianMatrix m = HermitianMatrix::from_real({{2, -1}, {-1, 2}});
    const EigenDecomposition ed = jacobi_eigh(m);
    CHECK(std::abs(ed.values[0] - 1.0) <= 1e-12);
    CHECK(std::abs(ed.values[1] - 3.0) <= 1e-12);
    CHECK(min_eigenvalue(m) == doctest::Approx(1.0));
    CHECK(max_eigenvalue(m) == doctest::Approx(3.0));
}

TEST_CASE("random hermitian matrices are reconstructed from their eigensystem") {
    TrialRng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + rng.uniform_int(6);
        const HermitianMatrix m = random_hermitian_in_window(rng, n, -5.0, 5.0);
        const EigenDecomposition ed = jacobi_eigh(m);

        const double scale = 1.0 + m.frobenius_norm();
        CHECK(frobenius_distance(reconstruct(ed), m.matrix()) <= 1e-9 * scale);
        // Eigenvector matrix is unitary.
        CHECK(frobenius_distance(ed.vectors.adjoint() * ed.vectors,
                                 GeneralMatrix::identity(n)) <= 1e-10 * scale);
        // Ascending order.
        for (int k = 1; k < n; ++k) CHECK(ed.values[k - 1] <= ed.values[k]);
    }
}

TEST_CASE("spectral projections form a resolution of the identity") {
    TrialRng rng(13);
    for (int n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const HermitianMatrix m = random_hermitian_in_window(rng, n, -2.0, 2.0);
            const SpectralData sd = spectral_decompose(m);

            GeneralMatrix sum(n, n);
            GeneralMatrix weighted(n, n);
            for (size_t k = 0; k < sd.eigenvalues.size(); ++k) {
                const GeneralMatrix& p = sd.projections[k].matrix();
                sum = sum + p;
                weighted = weighted + p * Complex(sd.eigenvalues[k]);
                // Idempotent and mutually orthogonal.
                CHECK(frobenius_distance(p * p, p) <= 1e-10);
                for (size_t l = 0; l < k; ++l)
                    CHECK((p * sd.projections[l].matrix()).frobenius_norm() <= 1e-10);
            }
            CHECK(frobenius_distance(sum, GeneralMatrix::identity(n)) <= 1e-10);
            CHECK(frobenius_distance(weighted, m.matrix()) <= 1e-9 * (1.0 + m.frobenius_norm()));
        }
    }
}

TEST_CASE("repeated eigenvalues are merged into one projection") {
    TrialRng rng(17);
    const GeneralMatrix q = random_unitary(rng, 4);
    const GeneralMatrix d = GeneralMatrix::diagonal({2.0, 2.0, 5.0, 5.0});
    const HermitianMatrix m(q * d * q.adjoint());
    const SpectralData sd = spectral_decompose(m);
    REQUIRE(sd.eigenvalues.size() == 2);
    CHECK(sd.eigenvalues[0] == doctest::Approx(2.0));
    CHECK(sd.eigenvalues[1] == doctest::Approx(5.0));
    CHECK(sd.projections[0].matrix().trace().real() == doctest::Approx(2.0));
    CHECK(sd.projections[1].matrix().trace().real() == doctest::Approx(2.0));
}

// ===========================================================================
// Functional calculus in one variable
// ===========================================================================

TEST_CASE("applying t -> 1/t inverts a positive definite matrix") {
    TrialRng rng(19);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + rng.uniform_int(5);
        const HermitianMatrix m = random_hermitian_in_window(rng, n, 0.5, 4.0);
        const HermitianMatrix inv = apply_scalar_function(m, [](double t) { return 1.0 / t; });
        CHECK(frobenius_distance(m * inv, GeneralMatrix::identity(n)) <= 1e-9);
    }
}

TEST_CASE("applying t -> t^2 agrees with the matrix square") {
    TrialRng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + rng.uniform_int(5);
        const HermitianMatrix m = random_hermitian_in_window(rng, n, -3.0, 3.0);
        const HermitianMatrix sq = apply_scalar_function(m, [](double t) { return t * t; });
        CHECK(frobenius_distance(sq.matrix(), m * m) <= 1e-9 * (1.0 + std::pow(m.frobenius_norm(), 2)));
    }
}

TEST_CASE("scalar function undefined on the spectrum is rejected") {
    const HermitianMatrix m = HermitianMatrix::diagonal({1.0, 0.0});
    CHECK_THROWS_AS(apply_scalar_function(m, [](double t) { return 1.0 / t; }), DomainError);
    CHECK_THROWS_AS(apply_scalar_function(m, [](double t) { return std::sqrt(t - 1.0); }),
                    DomainError);
}

// ===========================================================================
// Kronecker, Hadamard, blocks
// ===========================================================================

TEST_CASE("kronecker product satisfies the mixed product identity") {
    TrialRng rng(29);
    const GeneralMatrix a = random_gaussian_matrix(rng, 2, 3);
    const GeneralMatrix c = random_gaussian_matrix(rng, 3, 2);
    const GeneralMatrix b = random_gaussian_matrix(rng, 3, 2);
    const GeneralMatrix d = random_gaussian_matrix(rng, 2, 4);

    const GeneralMatrix lhs = kronecker_product(a, b) * kronecker_product(c, d);
    const GeneralMatrix rhs = kronecker_product(a * c, b * d);
    CHECK(frobenius_distance(lhs, rhs) <= 1e-12 * (1.0 + rhs.frobenius_norm()));

    // Identity factors embed blocks on the diagonal.
    const GeneralMatrix e = kronecker_product(GeneralMatrix::identity(2), a);
    CHECK(e.rows() == 4);
    CHECK(e.cols() == 6);
    CHECK(e(0, 0) == a(0, 0));
    CHECK(e(2, 3) == a(0, 0));
    CHECK(e(0, 3) == Complex(0.0));
}

TEST_CASE("hadamard product of positive semidefinite matrices stays positive") {
    TrialRng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + rng.uniform_int(4);
        const HermitianMatrix a = random_hermitian_in_window(rng, n, 0.0, 3.0);
        const HermitianMatrix b = random_hermitian_in_window(rng, n, 0.0, 3.0);
        const HermitianMatrix h = hadamard_product(a, b);
        CHECK(min_eigenvalue(h) >= -1e-10);
        CHECK(is_psd(h));
    }
}

TEST_CASE("two by two block assembly places corners as expected") {
    const HermitianMatrix a = HermitianMatrix::from_real({{2, 0}, {0, 3}});
    const HermitianMatrix b = HermitianMatrix::from_real({{5}});
    // The off-diagonal corner is a general 2x1 block, so use the raw overload.
    const GeneralMatrix corner = GeneralMatrix::from_complex({{Complex(0, 1)}, {Complex(1, 0)}});
    const GeneralMatrix blk = block2x2(a.matrix(), corner, b.matrix());
    CHECK(blk.rows() == 3);
    CHECK(blk(0, 0) == Complex(2.0));
    CHECK(blk(1, 1) == Complex(3.0));
    CHECK(blk(2, 2) == Complex(5.0));
    CHECK(blk(0, 2) == Complex(0, 1));
    CHECK(blk(2, 0) == Complex(0, -1)); // adjoint corner
    CHECK(blk.hermiticity_defect() <= 1e-15);
}
