#pragma once

#include <cstdint>
#include <vector>

#include "opconvex/funcalc.hpp"
#include "opconvex/linalg.hpp"
#include "opconvex/report.hpp"

namespace opconvex {

/// A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}.  Square roots are
/// taken spectrally.  Both arguments must be positive definite.
HermitianMatrix geometric_mean(const HermitianMatrix& a, const HermitianMatrix& b,
                               double psd_tol = default_tolerances().psd);

/// Samples Hermitian C = A#B + delta*|A#B|_F*H near the mean and, for every
/// C whose block [[A,C],[C,B]] stays PSD, measures min_eig(A#B - C).  The
/// mean is the maximal admissible C, so negative margins past tolerance are
/// violations.  A pass is reported as CONCAVE-consistent (upper-bound
/// direction); extra carries {"tested", "admissible"}.
ConvexityReport gm_maximality_probe(const HermitianMatrix& a, const HermitianMatrix& b,
                                    long trials, uint64_t seed, double delta = 0.05);

/// 2 (A^{-1} + B^{-1})^{-1} for positive definite A, B.
HermitianMatrix harmonic_mean(const HermitianMatrix& a, const HermitianMatrix& b);

/// Min eigenvalues of the two block characterizations of the harmonic mean:
///   mean_form:    2 diag(A,B) - [[C,C],[C,C]]        with C the harmonic mean
///   inverse_form: diag(A^{-1},B^{-1}) - [[S,S],[S,S]] with S = (A+B)^{-1}
/// Both are >= -1e-10 for positive definite inputs.
struct HarmonicBlockMargins {
    double mean_form;
    double inverse_form;
};
HarmonicBlockMargins harmonic_block_check(const HermitianMatrix& a, const HermitianMatrix& b);

/// Midpoint-concavity margin of F(X) = g.m. of the two tensor calculi:
///   F(X) := func_calc_tensor(f, X) # func_calc_tensor(g, X),
/// returns min_eig( F((X+Y)/2) - (F(X)+F(Y))/2 ).  Nonnegative (within
/// tolerance) when f and g are themselves of concave kinds.
double product_mean_check(const FunctionSpec& f, const FunctionSpec& g,
                          const std::vector<HermitianMatrix>& xs,
                          const std::vector<HermitianMatrix>& ys);

} // namespace opconvex
