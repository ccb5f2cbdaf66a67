#include "opconvex/sampling.hpp"

#include <cmath>

namespace opconvex {

GeneralMatrix random_gaussian_matrix(TrialRng& rng, int rows, int cols) {
    GeneralMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.cgauss();
    return m;
}

GeneralMatrix random_unitary(TrialRng& rng, int n) {
    GeneralMatrix q = random_gaussian_matrix(rng, n, n);
    for (int j = 0; j < n; ++j) {
        // Modified Gram-Schmidt against the already orthonormalized columns.
        for (int k = 0; k < j; ++k) {
            Complex dot{};
            for (int i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
            for (int i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
        }
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += std::norm(q(i, j));
        norm = std::sqrt(norm);
        if (norm < 1e-8) {
            // Degenerate draw (essentially never happens); replace the column
            // with fresh noise and redo it.
            for (int i = 0; i < n; ++i) q(i, j) = rng.cgauss();
            --j;
            continue;
        }
        for (int i = 0; i < n; ++i) q(i, j) /= norm;
    }
    return q;
}

HermitianMatrix random_hermitian_in_window(TrialRng& rng, int n, double lo, double hi) {
    if (!(lo <= hi)) throw ConfigError("eigenvalue window is empty");
    const GeneralMatrix q = random_unitary(rng, n);
    std::vector<Complex> lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = rng.uniform(lo, hi);
    return HermitianMatrix(q * GeneralMatrix::diagonal(lambda) * q.adjoint());
}

GeneralMatrix random_unit_hs(TrialRng& rng, int rows, int cols) {
    GeneralMatrix m = random_gaussian_matrix(rng, rows, cols);
    const double norm = m.frobenius_norm();
    if (norm < 1e-12) return random_unit_hs(rng, rows, cols);
    return m * Complex(1.0 / norm, 0.0);
}

std::vector<double> random_values(TrialRng& rng, int n, double lo, double hi) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
    return v;
}

} // namespace opconvex
