#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "opconvex/errors.hpp"

namespace opconvex {

using Complex = std::complex<double>;

/// Central tolerance record. Every routine that needs a tolerance takes it as a
/// defaulted argument, so callers can override per call.
struct Tolerances {
    double hermiticity = 1e-12;   // max |M(i,j) - conj(M(j,i))| accepted at construction
    double psd = 1e-10;           // min eigenvalue >= -psd declares positive semi-definite
    double reconstruction = 1e-9; // Frobenius error allowed in sum(lambda_i P_i) - M
    double cluster = 1e-8;        // eigenvalues closer than this share a spectral projection
    double divided_diff = 1e-7;   // node separation below which divided differences
                                  // switch to derivative callbacks
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tols{};
    return tols;
}

// ---------------------------------------------------------------------------
// Dense complex matrices
// ---------------------------------------------------------------------------

/// Dense complex matrix, row-major. The workhorse for rectangular operators K
/// and for all intermediate products.
class GeneralMatrix {
public:
    GeneralMatrix() = default;
    GeneralMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
        if (rows < 1 || cols < 1) throw ShapeError("matrix dimensions must be positive");
    }

    static GeneralMatrix identity(int n);
    /// Real entries, one inner vector per row.
    static GeneralMatrix from_real(const std::vector<std::vector<double>>& rows);
    static GeneralMatrix from_complex(const std::vector<std::vector<Complex>>& rows);
    static GeneralMatrix diagonal(const std::vector<Complex>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Complex& operator()(int i, int j) const {
        return data_[static_cast<size_t>(i) * cols_ + j];
    }

    GeneralMatrix operator+(const GeneralMatrix& other) const;
    GeneralMatrix operator-(const GeneralMatrix& other) const;
    GeneralMatrix operator*(const GeneralMatrix& other) const;
    GeneralMatrix operator*(Complex scalar) const;
    GeneralMatrix operator-() const { return *this * Complex(-1.0, 0.0); }

    std::vector<Complex> apply(const std::vector<Complex>& x) const;

    GeneralMatrix adjoint() const;
    GeneralMatrix transpose() const;
    GeneralMatrix conjugate() const;

    Complex trace() const;
    double frobenius_norm() const;
    /// Largest |M(i,j) - conj(M(j,i))| over all entries; 0 for exactly Hermitian input.
    double hermiticity_defect() const;

    const std::vector<Complex>& data() const { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> data_;
};

inline GeneralMatrix operator*(Complex scalar, const GeneralMatrix& m) { return m * scalar; }

double frobenius_distance(const GeneralMatrix& a, const GeneralMatrix& b);

/// Square complex matrix kept Hermitian by construction: the constructor
/// verifies the defect is below the hermiticity tolerance and stores the
/// symmetrized (M + M*)/2.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const GeneralMatrix& m,
                             double hermiticity_tol = default_tolerances().hermiticity);

    static HermitianMatrix identity(int n);
    static HermitianMatrix zero(int n);
    static HermitianMatrix diagonal(const std::vector<double>& d);
    static HermitianMatrix from_real(const std::vector<std::vector<double>>& rows);

    int dim() const { return matrix_.rows(); }
    const Complex& operator()(int i, int j) const { return matrix_(i, j); }
    const GeneralMatrix& matrix() const { return matrix_; }

    HermitianMatrix operator+(const HermitianMatrix& other) const;
    HermitianMatrix operator-(const HermitianMatrix& other) const;
    HermitianMatrix operator*(double scalar) const;
    GeneralMatrix operator*(const GeneralMatrix& other) const { return matrix_ * other; }
    GeneralMatrix operator*(const HermitianMatrix& other) const {
        return matrix_ * other.matrix();
    }

    /// Entrywise conjugate (= transpose); represents the same operator acting
    /// on the conjugate Hilbert space.
    HermitianMatrix conjugate() const;

    double frobenius_norm() const { return matrix_.frobenius_norm(); }

private:
    struct Trusted {};
    HermitianMatrix(GeneralMatrix m, Trusted) : matrix_(std::move(m)) {}

    GeneralMatrix matrix_;
};

inline HermitianMatrix operator*(double scalar, const HermitianMatrix& m) { return m * scalar; }

/// Eigenvalues (ascending) and the matching unitary of eigenvector columns.
struct EigenDecomposition {
    std::vector<double> values;
    GeneralMatrix vectors;
};

/// Distinct eigenvalues after clustering, with orthogonal spectral projections:
/// P_i P_j = 0 for i != j, sum P_i = I, sum(lambda_i P_i) reconstructs the source.
struct SpectralData {
    std::vector<double> eigenvalues;
    std::vector<HermitianMatrix> projections;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Cyclic Jacobi diagonalization for complex Hermitian matrices. Converges when
/// the off-diagonal Frobenius mass drops below 1e-13 * ||M||_F; throws
/// ConvergenceError with the residual after the sweep cap.
EigenDecomposition jacobi_eigh(const HermitianMatrix& m, int max_sweeps = 100,
                               double off_tolerance_factor = 1e-13);

SpectralData spectral_decompose(const HermitianMatrix& m,
                                double cluster_tol = default_tolerances().cluster);

/// sum g(lambda_i) P_i. Throws DomainError naming the eigenvalue if g returns
/// a non-finite value there.
HermitianMatrix apply_scalar_function(const HermitianMatrix& m,
                                      const std::function<double(double)>& g,
                                      double cluster_tol = default_tolerances().cluster);

GeneralMatrix kronecker_product(const GeneralMatrix& x, const GeneralMatrix& y);

GeneralMatrix hadamard_product(const GeneralMatrix& x, const GeneralMatrix& y);
HermitianMatrix hadamard_product(const HermitianMatrix& x, const HermitianMatrix& y);

double min_eigenvalue(const HermitianMatrix& m);
double max_eigenvalue(const HermitianMatrix& m);

inline bool is_psd(const HermitianMatrix& m, double psd_tol = default_tolerances().psd) {
    return min_eigenvalue(m) >= -psd_tol;
}

/// Hilbert-Schmidt inner product tr(X Y*).
Complex hs_inner(const GeneralMatrix& x, const GeneralMatrix& y);

/// [[A, C], [C*, B]] for square A (n x n), B (m x m), C (n x m).
GeneralMatrix block2x2(const GeneralMatrix& a, const GeneralMatrix& c, const GeneralMatrix& b);
HermitianMatrix block2x2(const HermitianMatrix& a, const HermitianMatrix& c,
                         const HermitianMatrix& b);

} // namespace opconvex
