#include "opconvex/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace opconvex {

// ---------------------------------------------------------------------------
// GeneralMatrix
// ---------------------------------------------------------------------------

GeneralMatrix GeneralMatrix::identity(int n) {
    GeneralMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

GeneralMatrix GeneralMatrix::from_real(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) throw ShapeError("empty initializer");
    GeneralMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows(); ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols())
            throw ShapeError("ragged initializer rows");
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

GeneralMatrix GeneralMatrix::from_complex(const std::vector<std::vector<Complex>>& rows) {
    if (rows.empty() || rows.front().empty()) throw ShapeError("empty initializer");
    GeneralMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows(); ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols())
            throw ShapeError("ragged initializer rows");
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

GeneralMatrix GeneralMatrix::diagonal(const std::vector<Complex>& d) {
    GeneralMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < m.rows(); ++i) m(i, i) = d[i];
    return m;
}

GeneralMatrix GeneralMatrix::operator+(const GeneralMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw ShapeError("matrix addition shape mismatch");
    GeneralMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + other.data_[k];
    return out;
}

GeneralMatrix GeneralMatrix::operator-(const GeneralMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw ShapeError("matrix subtraction shape mismatch");
    GeneralMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - other.data_[k];
    return out;
}

GeneralMatrix GeneralMatrix::operator*(const GeneralMatrix& other) const {
    if (cols_ != other.rows_) throw ShapeError("matrix product shape mismatch");
    GeneralMatrix out(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const Complex aik = (*this)(i, k);
            if (aik == Complex{}) continue;
            for (int j = 0; j < other.cols_; ++j) out(i, j) += aik * other(k, j);
        }
    }
    return out;
}

GeneralMatrix GeneralMatrix::operator*(Complex scalar) const {
    GeneralMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * scalar;
    return out;
}

std::vector<Complex> GeneralMatrix::apply(const std::vector<Complex>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw ShapeError("matrix-vector shape mismatch");
    std::vector<Complex> y(rows_);
    for (int i = 0; i < rows_; ++i) {
        Complex acc{};
        for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

GeneralMatrix GeneralMatrix::adjoint() const {
    GeneralMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

GeneralMatrix GeneralMatrix::transpose() const {
    GeneralMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

GeneralMatrix GeneralMatrix::conjugate() const {
    GeneralMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = std::conj(data_[k]);
    return out;
}

Complex GeneralMatrix::trace() const {
    if (!is_square()) throw ShapeError("trace of non-square matrix");
    Complex acc{};
    for (int i = 0; i < rows_; ++i) acc += (*this)(i, i);
    return acc;
}

double GeneralMatrix::frobenius_norm() const {
    double acc = 0.0;
    for (const Complex& z : data_) acc += std::norm(z);
    return std::sqrt(acc);
}

double GeneralMatrix::hermiticity_defect() const {
    if (!is_square()) throw ShapeError("hermiticity defect of non-square matrix");
    double worst = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
}

double frobenius_distance(const GeneralMatrix& a, const GeneralMatrix& b) {
    return (a - b).frobenius_norm();
}

// ---------------------------------------------------------------------------
// HermitianMatrix
// ---------------------------------------------------------------------------

HermitianMatrix::HermitianMatrix(const GeneralMatrix& m, double hermiticity_tol) {
    if (!m.is_square()) throw ShapeError("Hermitian matrix must be square");
    const double defect = m.hermiticity_defect();
    if (defect > hermiticity_tol) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian: defect " << defect << " exceeds tolerance "
            << hermiticity_tol;
        throw DomainError(msg.str());
    }
    GeneralMatrix sym(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        sym(i, i) = Complex(m(i, i).real(), 0.0);
        for (int j = i + 1; j < m.cols(); ++j) {
            const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            sym(i, j) = v;
            sym(j, i) = std::conj(v);
        }
    }
    matrix_ = std::move(sym);
}

HermitianMatrix HermitianMatrix::identity(int n) {
    return HermitianMatrix(GeneralMatrix::identity(n), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(int n) {
    return HermitianMatrix(GeneralMatrix(n, n), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
    GeneralMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < m.rows(); ++i) m(i, i) = d[i];
    return HermitianMatrix(std::move(m), Trusted{});
}

HermitianMatrix HermitianMatrix::from_real(const std::vector<std::vector<double>>& rows) {
    return HermitianMatrix(GeneralMatrix::from_real(rows));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
    return HermitianMatrix(matrix_ + other.matrix_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
    return HermitianMatrix(matrix_ - other.matrix_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator*(double scalar) const {
    return HermitianMatrix(matrix_ * Complex(scalar, 0.0), Trusted{});
}

HermitianMatrix HermitianMatrix::conjugate() const {
    return HermitianMatrix(matrix_.conjugate(), Trusted{});
}

// ---------------------------------------------------------------------------
// Eigensolver
// ---------------------------------------------------------------------------

namespace {

double off_diagonal_norm(const GeneralMatrix& w) {
    double acc = 0.0;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j)
            if (i != j) acc += std::norm(w(i, j));
    return std::sqrt(acc);
}

} // namespace

EigenDecomposition jacobi_eigh(const HermitianMatrix& m, int max_sweeps,
                               double off_tolerance_factor) {
    const int n = m.dim();
    GeneralMatrix w = m.matrix();
    GeneralMatrix v = GeneralMatrix::identity(n);
    const double off_target = off_tolerance_factor * w.frobenius_norm();

    double off = off_diagonal_norm(w);
    int sweep = 0;
    while (off > off_target && sweep < max_sweeps) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = w(p, q);
                const double r = std::abs(apq);
                if (r < 1e-300) continue;
                const Complex phase = apq / r;
                const double app = w(p, p).real();
                const double aqq = w(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                double t;
                if (std::abs(tau) > 1e154) {
                    t = 1.0 / (2.0 * tau);
                } else {
                    const double sign = tau >= 0.0 ? 1.0 : -1.0;
                    t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex s_phase = s * phase;
                const Complex s_phase_conj = std::conj(s_phase);

                // W <- J* W J with the plane rotation
                //   J(p,p)=c, J(p,q)=s*phase, J(q,p)=-s*conj(phase), J(q,q)=c.
                for (int i = 0; i < n; ++i) { // columns p, q
                    const Complex wip = w(i, p);
                    const Complex wiq = w(i, q);
                    w(i, p) = c * wip - s_phase_conj * wiq;
                    w(i, q) = s_phase * wip + c * wiq;
                }
                for (int j = 0; j < n; ++j) { // rows p, q
                    const Complex wpj = w(p, j);
                    const Complex wqj = w(q, j);
                    w(p, j) = c * wpj - s_phase * wqj;
                    w(q, j) = s_phase_conj * wpj + c * wqj;
                }
                w(p, q) = 0.0;
                w(q, p) = 0.0;
                w(p, p) = Complex(w(p, p).real(), 0.0);
                w(q, q) = Complex(w(q, q).real(), 0.0);

                for (int i = 0; i < n; ++i) { // V <- V J
                    const Complex vip = v(i, p);
                    const Complex viq = v(i, q);
                    v(i, p) = c * vip - s_phase_conj * viq;
                    v(i, q) = s_phase * vip + c * viq;
                }
            }
        }
        ++sweep;
        off = off_diagonal_norm(w);
    }
    if (off > off_target) {
        std::ostringstream msg;
        msg << "Jacobi eigensolver did not converge in " << max_sweeps
            << " sweeps; off-diagonal residual " << off;
        throw ConvergenceError(msg.str(), off);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return w(a, a).real() < w(b, b).real(); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = GeneralMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = w(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

SpectralData spectral_decompose(const HermitianMatrix& m, double cluster_tol) {
    if (cluster_tol < 0.0) throw ConfigError("cluster tolerance must be non-negative");
    const EigenDecomposition ed = jacobi_eigh(m);
    const int n = m.dim();

    SpectralData out;
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && ed.values[end] - ed.values[end - 1] <= cluster_tol) ++end;

        double mean = 0.0;
        for (int k = start; k < end; ++k) mean += ed.values[k];
        mean /= static_cast<double>(end - start);

        GeneralMatrix proj(n, n);
        for (int k = start; k < end; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    proj(i, j) += ed.vectors(i, k) * std::conj(ed.vectors(j, k));

        out.eigenvalues.push_back(mean);
        out.projections.emplace_back(proj);
        start = end;
    }
    return out;
}

HermitianMatrix apply_scalar_function(const HermitianMatrix& m,
                                      const std::function<double(double)>& g,
                                      double cluster_tol) {
    const SpectralData sd = spectral_decompose(m, cluster_tol);
    GeneralMatrix acc(m.dim(), m.dim());
    for (size_t k = 0; k < sd.eigenvalues.size(); ++k) {
        const double y = g(sd.eigenvalues[k]);
        if (!std::isfinite(y)) {
            std::ostringstream msg;
            msg << "scalar function undefined at eigenvalue " << sd.eigenvalues[k];
            throw DomainError(msg.str());
        }
        acc = acc + sd.projections[k].matrix() * Complex(y, 0.0);
    }
    return HermitianMatrix(acc);
}

GeneralMatrix kronecker_product(const GeneralMatrix& x, const GeneralMatrix& y) {
    GeneralMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (int i1 = 0; i1 < x.rows(); ++i1)
        for (int j1 = 0; j1 < x.cols(); ++j1) {
            const Complex xij = x(i1, j1);
            if (xij == Complex{}) continue;
            for (int i2 = 0; i2 < y.rows(); ++i2)
                for (int j2 = 0; j2 < y.cols(); ++j2)
                    out(i1 * y.rows() + i2, j1 * y.cols() + j2) = xij * y(i2, j2);
        }
    return out;
}

GeneralMatrix hadamard_product(const GeneralMatrix& x, const GeneralMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw ShapeError("Hadamard product shape mismatch");
    GeneralMatrix out(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) * y(i, j);
    return out;
}

HermitianMatrix hadamard_product(const HermitianMatrix& x, const HermitianMatrix& y) {
    return HermitianMatrix(hadamard_product(x.matrix(), y.matrix()));
}

double min_eigenvalue(const HermitianMatrix& m) { return jacobi_eigh(m).values.front(); }

double max_eigenvalue(const HermitianMatrix& m) { return jacobi_eigh(m).values.back(); }

Complex hs_inner(const GeneralMatrix& x, const GeneralMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw ShapeError("Hilbert-Schmidt inner product shape mismatch");
    Complex acc{};
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) acc += x(i, j) * std::conj(y(i, j));
    return acc;
}

GeneralMatrix block2x2(const GeneralMatrix& a, const GeneralMatrix& c, const GeneralMatrix& b) {
    if (!a.is_square() || !b.is_square()) throw ShapeError("block corners must be square");
    if (c.rows() != a.rows() || c.cols() != b.cols())
        throw ShapeError("off-diagonal block shape mismatch");
    const int n = a.rows();
    const int m = b.rows();
    GeneralMatrix out(n + m, n + m);
    const GeneralMatrix cstar = c.adjoint();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = a(i, j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) out(i, n + j) = c(i, j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) out(n + i, j) = cstar(i, j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out(n + i, n + j) = b(i, j);
    return out;
}

HermitianMatrix block2x2(const HermitianMatrix& a, const HermitianMatrix& c,
                         const HermitianMatrix& b) {
    return HermitianMatrix(block2x2(a.matrix(), c.matrix(), b.matrix()));
}

} // namespace opconvex
