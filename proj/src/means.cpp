#include "opconvex/means.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "opconvex/io.hpp"
#include "opconvex/sampling.hpp"
#include "opconvex/util.hpp"

namespace opconvex {

namespace {

void require_pd(const HermitianMatrix& m, const char* name, double psd_tol) {
    const double lo = min_eigenvalue(m);
    if (lo <= psd_tol) {
        std::ostringstream msg;
        msg << name << " must be positive definite; min eigenvalue " << lo;
        throw DomainError(msg.str());
    }
}

HermitianMatrix spectral_sqrt(const HermitianMatrix& m) {
    return apply_scalar_function(m, [](double t) { return std::sqrt(t); });
}

HermitianMatrix spectral_inverse(const HermitianMatrix& m) {
    return apply_scalar_function(m, [](double t) { return 1.0 / t; });
}

} // namespace

HermitianMatrix geometric_mean(const HermitianMatrix& a, const HermitianMatrix& b,
                               double psd_tol) {
    if (a.dim() != b.dim()) throw ShapeError("geometric mean needs equal dimensions");
    require_pd(a, "first argument", psd_tol);
    require_pd(b, "second argument", psd_tol);

    const HermitianMatrix a_half = spectral_sqrt(a);
    const HermitianMatrix a_ihalf =
        apply_scalar_function(a, [](double t) { return 1.0 / std::sqrt(t); });
    const HermitianMatrix pivot(a_ihalf * b * a_ihalf.matrix());
    const HermitianMatrix pivot_root = spectral_sqrt(pivot);
    return HermitianMatrix(a_half * pivot_root * a_half.matrix());
}

ConvexityReport gm_maximality_probe(const HermitianMatrix& a, const HermitianMatrix& b,
                                    long trials, uint64_t seed, double delta) {
    if (trials < 1) throw ConfigError("probe needs at least one trial");
    const HermitianMatrix g = geometric_mean(a, b);
    const double scale = delta * g.frobenius_norm();
    const int n = a.dim();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    // NaN marks trials whose sampled C fell outside the admissible block set.
    std::vector<double> margins(static_cast<size_t>(trials), nan);
    parallel_for(trials, [&](long trial) {
        TrialRng rng(seed, static_cast<uint64_t>(trial) + 1);
        HermitianMatrix h = random_hermitian_in_window(rng, n, -1.0, 1.0);
        const double hn = h.frobenius_norm();
        if (hn > 0.0) h = h * (1.0 / hn);
        const HermitianMatrix c = g + h * scale;
        if (min_eigenvalue(block2x2(a, c, b)) < -1e-10) return; // inadmissible, skip
        margins[static_cast<size_t>(trial)] = min_eigenvalue(g - c);
    });

    ConvexityReport report;
    report.trials = trials;
    report.seed = seed;
    long admissible = 0;
    long worst_trial = -1;
    double worst = 0.0;
    for (long t = 0; t < trials; ++t) {
        const double m = margins[static_cast<size_t>(t)];
        if (std::isnan(m)) continue;
        ++admissible;
        if (worst_trial < 0 || m < worst) {
            worst = m;
            worst_trial = t;
        }
    }
    report.worst_margin = worst_trial >= 0 ? worst : 0.0;
    report.verdict = report.worst_margin < -1e-9 ? Verdict::Violation
                                                 : Verdict::ConcaveConsistent;
    report.extra = {{"tested", trials}, {"admissible", admissible}};
    if (worst_trial >= 0) {
        // Regenerate the worst C deterministically from its trial index.
        TrialRng rng(seed, static_cast<uint64_t>(worst_trial) + 1);
        HermitianMatrix h = random_hermitian_in_window(rng, n, -1.0, 1.0);
        const double hn = h.frobenius_norm();
        if (hn > 0.0) h = h * (1.0 / hn);
        report.witness = {{"trial", worst_trial},
                          {"C", matrix_to_json(g + h * scale)},
                          {"margin", worst}};
    }
    return report;
}

HermitianMatrix harmonic_mean(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw ShapeError("harmonic mean needs equal dimensions");
    require_pd(a, "first argument", default_tolerances().psd);
    require_pd(b, "second argument", default_tolerances().psd);
    const HermitianMatrix sum = spectral_inverse(a) + spectral_inverse(b);
    return spectral_inverse(sum) * 2.0;
}

HarmonicBlockMargins harmonic_block_check(const HermitianMatrix& a, const HermitianMatrix& b) {
    const HermitianMatrix c = harmonic_mean(a, b);
    const HermitianMatrix mean_gap = block2x2(a * 2.0 - c, c * -1.0, b * 2.0 - c);

    const HermitianMatrix s = spectral_inverse(a + b);
    const HermitianMatrix inv_gap =
        block2x2(spectral_inverse(a) - s, s * -1.0, spectral_inverse(b) - s);

    return {min_eigenvalue(mean_gap), min_eigenvalue(inv_gap)};
}

double product_mean_check(const FunctionSpec& f, const FunctionSpec& g,
                          const std::vector<HermitianMatrix>& xs,
                          const std::vector<HermitianMatrix>& ys) {
    if (xs.size() != ys.size()) throw ShapeError("tuples must have equal length");
    for (size_t i = 0; i < xs.size(); ++i)
        if (xs[i].dim() != ys[i].dim()) throw ShapeError("tuple dimensions must match slotwise");

    const auto value = [&](const std::vector<HermitianMatrix>& t) {
        return geometric_mean(func_calc_tensor(f, t), func_calc_tensor(g, t));
    };
    std::vector<HermitianMatrix> mid;
    mid.reserve(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) mid.push_back((xs[i] + ys[i]) * 0.5);

    const HermitianMatrix gap = value(mid) - (value(xs) + value(ys)) * 0.5;
    return min_eigenvalue(gap);
}

} // namespace opconvex
