#include "opconvex/domain.hpp"

#include <sstream>

#include "opconvex/funcalc.hpp"

namespace opconvex {

namespace {

void require_positive(const std::vector<double>& t, int k) {
    if (static_cast<int>(t.size()) != k) throw ShapeError("point arity does not match mu");
    for (double x : t) {
        if (!(x > 0.0)) {
            std::ostringstream msg;
            msg << "point coordinates must be positive; got " << x;
            throw DomainError(msg.str());
        }
    }
}

} // namespace

DomainSpec::DomainSpec(std::vector<double> mu_in) : mu(std::move(mu_in)) {
    if (mu.empty()) throw ConfigError("domain needs at least one pole");
    for (double m : mu)
        if (!(m > 0.0)) throw ConfigError("domain poles must be positive");
}

HermitianMatrix build_Ak(const DomainSpec& d, const std::vector<double>& t) {
    const int k = d.k();
    require_positive(t, k);
    GeneralMatrix a(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) a(i, j) = (i == j) ? 2.0 * t[i] / d.mu[i] : -1.0;
    }
    return HermitianMatrix(a);
}

MembershipResult domain_contains(const DomainSpec& d, const std::vector<double>& t,
                                 double psd_tol) {
    const double margin = min_eigenvalue(build_Ak(d, t));
    return {margin >= -psd_tol, margin};
}

bool d2_closed_form(double mu1, double mu2, double t1, double t2) {
    if (!(mu1 > 0.0 && mu2 > 0.0 && t1 > 0.0 && t2 > 0.0))
        throw DomainError("closed form needs positive inputs");
    return t1 * t2 >= mu1 * mu2 / 4.0;
}

ClassicalHessian classical_hessian(const DomainSpec& d, const std::vector<double>& t) {
    const int k = d.k();
    require_positive(t, k);
    const FunctionSpec f = FunctionSpec::fraction_product(d.mu);
    const double fval = f.eval(t);

    GeneralMatrix h(k, k);
    GeneralMatrix p(k, k);
    for (int i = 0; i < k; ++i) {
        const double vi = d.mu[i] / (t[i] * (t[i] + d.mu[i]));
        for (int j = 0; j < k; ++j) {
            const double vj = d.mu[j] / (t[j] * (t[j] + d.mu[j]));
            h(i, j) = f.partial2(i, j, t);
            p(i, j) = fval * vi * vj;
        }
    }
    return {HermitianMatrix(h), HermitianMatrix(p)};
}

} // namespace opconvex
