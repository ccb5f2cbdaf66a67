#include <doctest.h>

#include <cmath>

#include "opconvex/means.hpp"
#include "opconvex/sampling.hpp"

using namespace opconvex;

namespace {

HermitianMatrix random_pd(TrialRng& rng, int n, double lo = 0.3, double hi = 3.0) {
    return random_hermitian_in_window(rng, n, lo, hi);
}

} // namespace

// ===========================================================================
// Geometric mean
// ===========================================================================

TEST_CASE("geometric mean of a matrix with itself is the matrix") {
    TrialRng rng(13);
    const HermitianMatrix a = random_pd(rng, 3);
    const HermitianMatrix g = geometric_mean(a, a);
    CHECK(frobenius_distance(g.matrix(), a.matrix()) <= 1e-10 * (1.0 + a.frobenius_norm()));
}

TEST_CASE("geometric mean of commuting matrices is the entrywise one") {
    const HermitianMatrix a = HermitianMatrix::diagonal({4.0, 1.0});
    const HermitianMatrix b = HermitianMatrix::diagonal({9.0, 1.0});
    const HermitianMatrix g = geometric_mean(a, b);
    CHECK(g(0, 0).real() == doctest::Approx(6.0));
    CHECK(g(1, 1).real() == doctest::Approx(1.0));
    CHECK(std::abs(g(0, 1)) <= 1e-12);
}

TEST_CASE("geometric mean block matrix is positive semidefinite") {
    TrialRng rng(13);
    const HermitianMatrix a = random_pd(rng, 3);
    const HermitianMatrix b = random_pd(rng, 3);
    const HermitianMatrix g = geometric_mean(a, b);
    CHECK(min_eigenvalue(block2x2(a, g, b)) >= -1e-9);
    CHECK(min_eigenvalue(g) > 0.0);
}

TEST_CASE("geometric mean rejects non positive definite input") {
    const HermitianMatrix pd = HermitianMatrix::diagonal({1.0, 2.0});
    const HermitianMatrix psd = HermitianMatrix::diagonal({1.0, 0.0});
    const HermitianMatrix indef = HermitianMatrix::diagonal({1.0, -1.0});
    CHECK_THROWS_AS(geometric_mean(pd, indef), DomainError);
    CHECK_THROWS_AS(geometric_mean(psd, pd), DomainError);
    CHECK_THROWS_AS(geometric_mean(pd, HermitianMatrix::identity(3)), ShapeError);
}

TEST_CASE("geometric mean is symmetric in its arguments") {
    TrialRng rng(43);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 1 + rng.uniform_int(4);
        const HermitianMatrix a = random_pd(rng, n);
        const HermitianMatrix b = random_pd(rng, n);
        const HermitianMatrix g1 = geometric_mean(a, b);
        const HermitianMatrix g2 = geometric_mean(b, a);
        CHECK(frobenius_distance(g1.matrix(), g2.matrix()) <=
              1e-9 * (1.0 + g1.frobenius_norm()));
    }
}

TEST_CASE("geometric mean is monotone, midpoint concave, and block certified") {
    TrialRng rng(47);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + rng.uniform_int(3);
        const HermitianMatrix a1 = random_pd(rng, n);
        const HermitianMatrix b1 = random_pd(rng, n);
        const HermitianMatrix a2 = a1 + random_hermitian_in_window(rng, n, 0.0, 1.0);
        const HermitianMatrix b2 = b1 + random_hermitian_in_window(rng, n, 0.0, 1.0);

        // Monotone in both slots.
        CHECK(min_eigenvalue(geometric_mean(a2, b2) - geometric_mean(a1, b1)) >= -1e-9);

        // Midpoint concave.
        const HermitianMatrix mid = geometric_mean((a1 + a2) * 0.5, (b1 + b2) * 0.5);
        const HermitianMatrix avg = (geometric_mean(a1, b1) + geometric_mean(a2, b2)) * 0.5;
        CHECK(min_eigenvalue(mid - avg) >= -1e-9);

        // Block certificate.
        CHECK(min_eigenvalue(block2x2(a1, geometric_mean(a1, b1), b1)) >= -1e-9);
    }
}

// ===========================================================================
// Maximality probe
// ===========================================================================

TEST_CASE("maximality probe with zero perturbation sits at the mean") {
    TrialRng rng(51);
    const HermitianMatrix a = random_pd(rng, 3);
    const HermitianMatrix b = random_pd(rng, 3);
    const ConvexityReport r = gm_maximality_probe(a, b, 10, 21, 0.0);
    CHECK(r.extra.at("admissible").get<long>() == 10);
    CHECK(std::abs(r.worst_margin) <= 1e-10);
    CHECK(r.verdict == Verdict::ConcaveConsistent);
}

TEST_CASE("shifting the mean down stays admissible and dominated") {
    TrialRng rng(53);
    const HermitianMatrix a = random_pd(rng, 3, 1.0, 3.0);
    const HermitianMatrix b = random_pd(rng, 3, 1.0, 3.0);
    const HermitianMatrix g = geometric_mean(a, b);
    const HermitianMatrix c = g - HermitianMatrix::identity(3) * 0.1;
    if (min_eigenvalue(block2x2(a, c, b)) >= -1e-10) {
        CHECK(min_eigenvalue(g - c) == doctest::Approx(0.1));
        CHECK(is_psd(g - c));
    }
}

TEST_CASE("maximality probe finds no admissible C above the mean") {
    TrialRng rng(21);
    const HermitianMatrix a = random_pd(rng, 3);
    const HermitianMatrix b = random_pd(rng, 3);
    const ConvexityReport r = gm_maximality_probe(a, b, 1000, 21, 0.05);
    CHECK(r.verdict == Verdict::ConcaveConsistent);
    CHECK(r.worst_margin >= -1e-9);
    CHECK(r.extra.at("admissible").get<long>() >= 1);
    CHECK(r.trials == 1000);
}

// ===========================================================================
// Harmonic mean
// ===========================================================================

TEST_CASE("harmonic mean basics") {
    CHECK(harmonic_mean(HermitianMatrix::diagonal({1.0}), HermitianMatrix::diagonal({1.0}))(0, 0)
              .real() == doctest::Approx(1.0));
    CHECK(harmonic_mean(HermitianMatrix::diagonal({1.0}), HermitianMatrix::diagonal({3.0}))(0, 0)
              .real() == doctest::Approx(1.5));

    TrialRng rng(55);
    const HermitianMatrix a = random_pd(rng, 3);
    CHECK(frobenius_distance(harmonic_mean(a, a).matrix(), a.matrix()) <=
          1e-10 * (1.0 + a.frobenius_norm()));
    CHECK_THROWS_AS(harmonic_mean(a, HermitianMatrix::diagonal({1.0, -1.0, 1.0})), DomainError);
}

TEST_CASE("harmonic block check at the identity is tight") {
    const HermitianMatrix id = HermitianMatrix::identity(2);
    const HarmonicBlockMargins m = harmonic_block_check(id, id);
    CHECK(std::abs(m.mean_form) <= 1e-12);
    CHECK(m.inverse_form >= -1e-12);
}

TEST_CASE("harmonic block check on scalars matches the 2x2 eigen oracle") {
    // A=1, B=3: C = 1.5 and the gap block is [[0.5,-1.5],[-1.5,4.5]].
    const HermitianMatrix a = HermitianMatrix::diagonal({1.0});
    const HermitianMatrix b = HermitianMatrix::diagonal({3.0});
    const HarmonicBlockMargins m = harmonic_block_check(a, b);
    const double tr = 0.5 + 4.5;
    const double det = 0.5 * 4.5 - 1.5 * 1.5;
    const double lo = (tr - std::sqrt(tr * tr - 4.0 * det)) / 2.0;
    CHECK(std::abs(m.mean_form - lo) <= 1e-12);
    CHECK(m.mean_form >= -1e-12);
}

TEST_CASE("harmonic block margins are nonnegative on random pairs") {
    TrialRng rng(17);
    const HermitianMatrix a4 = random_pd(rng, 4);
    const HermitianMatrix b4 = random_pd(rng, 4);
    const HarmonicBlockMargins m4 = harmonic_block_check(a4, b4);
    CHECK(m4.mean_form >= -1e-10);
    CHECK(m4.inverse_form >= -1e-10);

    for (int rep = 0; rep < 100; ++rep) {
        const int n = 1 + rng.uniform_int(4);
        const HarmonicBlockMargins m = harmonic_block_check(random_pd(rng, n), random_pd(rng, n));
        CHECK(m.mean_form >= -1e-10);
        CHECK(m.inverse_form >= -1e-10);
    }
}

// ===========================================================================
// Product mean
// ===========================================================================

TEST_CASE("product mean margin vanishes when the tuples agree") {
    TrialRng rng(57);
    const std::vector<HermitianMatrix> xs{random_pd(rng, 2), random_pd(rng, 2)};
    const FunctionSpec f = FunctionSpec::exponent_product({1.0, 0.0});
    const FunctionSpec g = FunctionSpec::exponent_product({0.0, 1.0});
    CHECK(std::abs(product_mean_check(f, g, xs, xs)) <= 1e-10);
}

TEST_CASE("product mean with linear factors is exactly linear") {
    TrialRng rng(59);
    const FunctionSpec t = FunctionSpec::exponent_product({1.0});
    for (int rep = 0; rep < 10; ++rep) {
        const std::vector<HermitianMatrix> xs{random_pd(rng, 3)};
        const std::vector<HermitianMatrix> ys{random_pd(rng, 3)};
        CHECK(std::abs(product_mean_check(t, t, xs, ys)) <= 1e-9);
    }
}

TEST_CASE("geometric mean of the two marginal calculi is the half-power calculus") {
    // t (x) I  #  I (x) s  =  t^{1/2} (x) s^{1/2}: the means route and the
    // direct calculus route must produce the same matrix.
    TrialRng rng(61);
    const FunctionSpec f = FunctionSpec::exponent_product({1.0, 0.0});
    const FunctionSpec g = FunctionSpec::exponent_product({0.0, 1.0});
    const FunctionSpec h = FunctionSpec::exponent_product({0.5, 0.5});
    for (int rep = 0; rep < 10; ++rep) {
        const std::vector<HermitianMatrix> xs{random_pd(rng, 2), random_pd(rng, 3)};
        const HermitianMatrix lhs = geometric_mean(func_calc_tensor(f, xs),
                                                   func_calc_tensor(g, xs));
        const HermitianMatrix rhs = func_calc_tensor(h, xs);
        CHECK(frobenius_distance(lhs.matrix(), rhs.matrix()) <=
              1e-9 * (1.0 + rhs.frobenius_norm()));
    }

    // And the composite map stays midpoint concave.
    for (int rep = 0; rep < 50; ++rep) {
        const std::vector<HermitianMatrix> xs{random_pd(rng, 2), random_pd(rng, 2)};
        const std::vector<HermitianMatrix> ys{random_pd(rng, 2), random_pd(rng, 2)};
        CHECK(product_mean_check(f, g, xs, ys) >= -1e-9);
    }
}
