#pragma once

#include <vector>

#include "opconvex/linalg.hpp"

namespace opconvex {

/// Pole vector of the fraction-product family; the membership matrix and
/// the Hessian formulas below all refer to the same mu.
struct DomainSpec {
    std::vector<double> mu;

    explicit DomainSpec(std::vector<double> mu_in);
    int k() const { return static_cast<int>(mu.size()); }
};

/// Real symmetric k x k matrix with diagonal 2 t_i / mu_i and every
/// off-diagonal entry -1.  Positive semidefiniteness of this matrix is the
/// membership criterion.
HermitianMatrix build_Ak(const DomainSpec& d, const std::vector<double>& t);

struct MembershipResult {
    bool member;
    double margin; // min eigenvalue of the membership matrix
};

/// t belongs to the domain iff the membership matrix is PSD (min eigenvalue
/// >= -psd_tol); margin reports that eigenvalue either way.
MembershipResult domain_contains(const DomainSpec& d, const std::vector<double>& t,
                                 double psd_tol = default_tolerances().psd);

/// k = 2 shortcut: membership reduces to t1 t2 >= mu1 mu2 / 4.  Kept as an
/// independent cross-check of the eigenvalue test, not as its
/// implementation.
bool d2_closed_form(double mu1, double mu2, double t1, double t2);

/// Hessian of f(t) = prod t_i/(t_i + mu_i) at t, together with the rank-one
/// factor P with entries f(t) mu_i mu_j / (t_i t_j (t_i+mu_i)(t_j+mu_j)).
/// The identity hessian = -(membership matrix) (Hadamard) factor holds to
/// rounding, and the factor is PSD.
struct ClassicalHessian {
    HermitianMatrix hessian; // H_f, k x k real symmetric
    HermitianMatrix factor;  // P, rank one, PSD
};
ClassicalHessian classical_hessian(const DomainSpec& d, const std::vector<double>& t);

} // namespace opconvex
