#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "opconvex/certify.hpp"
#include "opconvex/domain.hpp"
#include "opconvex/io.hpp"

using namespace opconvex;

namespace {

MapSpec trace_spec(double p, double q, int n, int m) {
    MapSpec s;
    s.target = TargetKind::TraceForm;
    s.f = FunctionSpec::exponent_product({p, q});
    s.dims = {n, m};
    s.windows = {{0.2, 2.0}, {0.2, 2.0}};
    s.concave = true;
    return s;
}

} // namespace

// ===========================================================================
// Quadrature
// ===========================================================================

TEST_CASE("gauss legendre integrates polynomials exactly") {
    const Quadrature q = gauss_legendre(5);
    double sum8 = 0.0, sum9 = 0.0, sum0 = 0.0;
    for (int i = 0; i < 5; ++i) {
        sum0 += q.weights[i];
        sum8 += q.weights[i] * std::pow(q.nodes[i], 8);
        sum9 += q.weights[i] * std::pow(q.nodes[i], 9);
    }
    CHECK(sum0 == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(sum8 == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
    CHECK(std::abs(sum9) <= 1e-13);
    CHECK_THROWS_AS(gauss_legendre(0), ConfigError);
}

TEST_CASE("half line rule reproduces the log divided difference") {
    // int_0^inf du / ((l+u)(m+u)) = (log l - log m) / (l - m).
    const Quadrature q = half_line_quadrature(20);
    for (double w : q.weights) CHECK(w > 0.0);
    auto kernel = [&](double l, double m) {
        double acc = 0.0;
        for (std::size_t j = 0; j < q.nodes.size(); ++j)
            acc += q.weights[j] / ((l + q.nodes[j]) * (m + q.nodes[j]));
        return acc;
    };
    CHECK(kernel(1.0, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(kernel(0.3, 1.7) ==
          doctest::Approx((std::log(0.3) - std::log(1.7)) / (0.3 - 1.7)).epsilon(1e-11));
}

// ===========================================================================
// Map values
// ===========================================================================

TEST_CASE("quadratic form value against the diagonal formula") {
    const HermitianMatrix a = HermitianMatrix::diagonal({1.0, 2.0, 4.0});
    const std::vector<Complex> xi = {Complex(1.0, 0.0), Complex(0.0, 2.0), Complex(1.0, 1.0)};
    const FunctionSpec inv = FunctionSpec::resolvent_sum(0.0, {0.0}, {1.0});
    // Sum of |xi_i|^2 / lambda_i.
    CHECK(quadratic_form_value(inv, a, xi) == doctest::Approx(1.0 + 4.0 / 2.0 + 2.0 / 4.0));

    const FunctionSpec sq = FunctionSpec::custom(
        1, [](const std::vector<double>& t) { return t[0] * t[0]; },
        [](const std::vector<double>&) { return true; });
    CHECK(quadratic_form_value(sq, a, xi) == doctest::Approx(1.0 + 4.0 * 4.0 + 2.0 * 16.0));

    CHECK(quadratic_form_value(inv, a, {Complex(0, 0), Complex(0, 0), Complex(0, 0)}) == 0.0);
    CHECK_THROWS_AS(quadratic_form_value(inv, a, {Complex(1, 0)}), ShapeError);
}

TEST_CASE("resolvent trace value matches the trace form of the product kernel") {
    TrialRng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const double u = rng.uniform(0.3, 2.0), v = rng.uniform(0.3, 2.0);
        const HermitianMatrix a = random_hermitian_in_window(rng, 3, 0.2, 2.0);
        const HermitianMatrix b = random_hermitian_in_window(rng, 2, 0.2, 2.0);
        const GeneralMatrix k = random_unit_hs(rng, 2, 3);
        const FunctionSpec f = FunctionSpec::custom(
            2,
            [u, v](const std::vector<double>& t) { return 1.0 / ((t[0] + u) * (t[1] + v)); },
            [u, v](const std::vector<double>& t) { return t[0] > -u && t[1] > -v; });
        const double direct = resolvent_trace_value(u, v, a, b, k);
        CHECK(direct == doctest::Approx(trace_form(f, a, b, k)).epsilon(1e-10));
        CHECK(direct > 0.0);
    }
}

TEST_CASE("integral value is the weighted sum of resolvent traces") {
    TrialRng rng(19);
    const HermitianMatrix a = random_hermitian_in_window(rng, 2, 0.2, 2.0);
    const HermitianMatrix b = random_hermitian_in_window(rng, 2, 0.2, 2.0);
    const GeneralMatrix k = random_unit_hs(rng, 2, 2);
    const double direct = integral_trace_value({0.5, 1.5}, {2.0, 3.0}, a, b, k);
    const double byhand = 2.0 * resolvent_trace_value(0.5, 0.5, a, b, k) +
                          3.0 * resolvent_trace_value(1.5, 1.5, a, b, k);
    CHECK(direct == doctest::Approx(byhand).epsilon(1e-13));
}

// ===========================================================================
// Exact counterexample
// ===========================================================================

TEST_CASE("squaring counterexample value") {
    CHECK(std::abs(t2_counterexample(0.0) - (-0.0625)) <= 1e-12);
    CHECK(t2_counterexample(0.01) < 0.0);
    CHECK(std::isfinite(t2_counterexample(10.0)));
    CHECK_THROWS_AS(t2_counterexample(-0.1), ConfigError);
}

TEST_CASE("squaring counterexample agrees with the quadratic form machinery") {
    const FunctionSpec sq = FunctionSpec::custom(
        1, [](const std::vector<double>& t) { return t[0] * t[0]; },
        [](const std::vector<double>&) { return true; });
    const HermitianMatrix a1 = HermitianMatrix::from_real({{0.0, 0.0}, {0.0, 1.0}});
    const HermitianMatrix a2 = HermitianMatrix::from_real({{0.5, -0.5}, {-0.5, 0.5}});
    const std::vector<Complex> xi1 = {Complex(1, 0), Complex(0, 0)};
    const std::vector<Complex> xi2 = {Complex(0, 0), Complex(-1, 0)};
    const HermitianMatrix m = (a1 + a2) * 0.5;
    const std::vector<Complex> eta = {Complex(0.5, 0.0), Complex(-0.5, 0.0)};
    const double gap = 0.5 * (quadratic_form_value(sq, a1, xi1) + quadratic_form_value(sq, a2, xi2)) -
                       quadratic_form_value(sq, m, eta);
    CHECK(std::abs(gap - t2_counterexample(0.0)) <= 1e-12);
}

// ===========================================================================
// Trial engine basics
// ===========================================================================

TEST_CASE("identical tuples give zero margin on every target") {
    TrialRng rng(23);
    const HermitianMatrix a = random_hermitian_in_window(rng, 3, 0.3, 2.0);
    const HermitianMatrix b = random_hermitian_in_window(rng, 3, 0.3, 2.0);
    const GeneralMatrix k = random_unit_hs(rng, 3, 3);
    const FunctionSpec f = FunctionSpec::exponent_product({0.5, 0.5});

    const HermitianMatrix am = (a + a) * 0.5;
    CHECK(trace_form(f, am, (b + b) * 0.5, k) - trace_form(f, a, b, k) == 0.0);

    const double r = resolvent_trace_value(1.0, 1.0, a, b, k);
    CHECK(0.5 * (r + r) - r == 0.0);

    const std::vector<Complex> xi = {Complex(1, 0), Complex(0, 1), Complex(0.5, 0)};
    const FunctionSpec inv = FunctionSpec::resolvent_sum(0.0, {0.0}, {1.0});
    const double q = quadratic_form_value(inv, a, xi);
    CHECK(0.5 * (q + q) - q == 0.0);
}

TEST_CASE("spec validation rejects inconsistent configurations") {
    MapSpec s = trace_spec(0.5, 0.5, 3, 3);
    s.f = FunctionSpec::resolvent_sum(0.0, {0.0}, {1.0});
    CHECK_THROWS_AS(validate_spec(s), ConfigError);

    s = trace_spec(0.5, 0.5, 3, 3);
    s.windows = {{0.2, 2.0}};
    CHECK_THROWS_AS(validate_spec(s), ConfigError);

    s = trace_spec(0.5, 0.5, 3, 3);
    s.windows[1] = {2.0, 0.2};
    CHECK_THROWS_AS(validate_spec(s), ConfigError);

    s = trace_spec(0.5, 0.5, 3, 3);
    s.windows[0].lo = -0.5;
    CHECK_THROWS_AS(validate_spec(s), ConfigError);

    s = trace_spec(0.5, 0.5, 3, 3);
    s.f = FunctionSpec::fraction_product({1.0, 1.0});
    s.windows = {{0.3, 2.0}, {0.3, 2.0}}; // corner product 0.09 < 1/4
    CHECK_THROWS_AS(validate_spec(s), ConfigError);
    s.windows = {{0.6, 2.0}, {0.6, 2.0}};
    CHECK_NOTHROW(validate_spec(s));

    MapSpec t;
    t.target = TargetKind::TwoOfThree;
    t.dims = {2, 2};
    t.windows = {{0.2, 2.0}, {0.2, 2.0}};
    t.shift_u = 0.0;
    CHECK_THROWS_AS(validate_spec(t), ConfigError);

    MapSpec qf;
    qf.target = TargetKind::QuadraticForm;
    qf.f = FunctionSpec::resolvent_sum(0.0, {0.0}, {1.0});
    qf.dims = {2, 2};
    qf.windows = {{0.2, 2.0}, {0.2, 2.0}};
    CHECK_THROWS_AS(validate_spec(qf), ConfigError);

    MapSpec in;
    in.target = TargetKind::IntegralForm;
    in.dims = {2, 2};
    in.windows = {{0.2, 2.0}, {0.2, 2.0}};
    in.quad_nodes = {1.0};
    in.quad_weights = {-1.0};
    CHECK_THROWS_AS(validate_spec(in), ConfigError);
}

TEST_CASE("tensor certification of the square root product is concave") {
    MapSpec s;
    s.target = TargetKind::TensorCalculus;
    s.f = FunctionSpec::exponent_product({0.5, 0.5});
    s.dims = {3, 3};
    s.windows = {{0.2, 2.0}, {0.2, 2.0}};
    s.concave = true;
    const ConvexityReport r = certify_map(s, 1000, 42);
    CHECK(r.verdict == Verdict::ConcaveConsistent);
    CHECK(r.worst_margin >= -1e-9);
    CHECK(r.trials == 1000);
}

TEST_CASE("trace violation for exponents past the simplex is found quickly") {
    MapSpec s = trace_spec(0.6, 0.6, 3, 3);
    s.scalar_mix = 2;
    const ConvexityReport r = violation_search(s, 10000, 5);
    CHECK(r.verdict == Verdict::Violation);
    CHECK(r.worst_margin < -1e-9);
    CHECK(r.trials <= 10000);

    // The witness replays to the recorded raw margin.
    const auto& w = r.witness;
    const HermitianMatrix a1(matrix_from_json(w.at("a1")));
    const HermitianMatrix b1(matrix_from_json(w.at("b1")));
    const HermitianMatrix a2(matrix_from_json(w.at("a2")));
    const HermitianMatrix b2(matrix_from_json(w.at("b2")));
    const GeneralMatrix k = matrix_from_json(w.at("k"));
    const FunctionSpec f = FunctionSpec::exponent_product({0.6, 0.6});
    const double fm = trace_form(f, (a1 + a2) * 0.5, (b1 + b2) * 0.5, k);
    const double replay = fm - 0.5 * (trace_form(f, a1, b1, k) + trace_form(f, a2, b2, k));
    CHECK(std::abs(replay - w.at("raw_margin").get<double>()) <= 1e-12);
}

TEST_CASE("reports are reproducible and independent of the thread budget") {
    const MapSpec s = trace_spec(0.5, 0.5, 3, 2);
    setenv("OPCONVEX_THREADS", "4", 1);
    const ConvexityReport parallel_run = certify_map(s, 200, 11);
    setenv("OPCONVEX_THREADS", "1", 1);
    const ConvexityReport sequential_run = certify_map(s, 200, 11);
    unsetenv("OPCONVEX_THREADS");
    CHECK(parallel_run.to_json().dump() == sequential_run.to_json().dump());

    const ConvexityReport again = certify_map(s, 200, 11);
    CHECK(again.to_json().dump() == sequential_run.to_json().dump());
}

TEST_CASE("trace margins scale with the exponent degree under window doubling") {
    const double p = 0.4, q = 0.3;
    const MapSpec base = trace_spec(p, q, 3, 3);
    MapSpec doubled = base;
    doubled.windows = {{0.4, 4.0}, {0.4, 4.0}};
    const double factor = std::pow(2.0, p + q);
    for (std::uint64_t t = 0; t < 50; ++t) {
        TrialRng r1(13, t), r2(13, t);
        const double m1 = midpoint_trial(base, r1);
        const double m2 = midpoint_trial(doubled, r2);
        CHECK(std::abs(m2 - factor * m1) <= 1e-8 * (1.0 + std::abs(m1) + std::abs(m2)));
    }
}

// ===========================================================================
// Named certifiers
// ===========================================================================

TEST_CASE("exponent sweep splits along the simplex boundary") {
    const std::vector<LiebCell> cells =
        lieb_sweep({0.5, 1.0}, {0.2, 0.5}, {3, 3}, 400, 3);
    REQUIRE(cells.size() == 4);
    for (const LiebCell& c : cells) {
        if (c.p + c.q <= 1.0) {
            CHECK(c.report.verdict == Verdict::ConcaveConsistent);
            CHECK(c.report.worst_margin >= -1e-9);
        } else {
            CHECK(c.report.verdict == Verdict::Violation);
        }
    }
}

TEST_CASE("the linear cell of the sweep has vanishing margins") {
    const std::vector<LiebCell> cells = lieb_sweep({1.0}, {0.0}, {3, 3}, 200, 7);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].report.verdict == Verdict::ConcaveConsistent);
    CHECK(std::abs(cells[0].report.worst_margin) <= 1e-10);
}

TEST_CASE("fraction trace map is concave on an in-domain box") {
    const ConvexityReport r =
        fraction_trace_concavity(1.0, 1.0, {0.6, 2.0}, {0.6, 2.0}, {3, 3}, 300, 8);
    CHECK(r.verdict == Verdict::ConcaveConsistent);
    CHECK(r.worst_margin >= -1e-9);
    const auto& search = r.extra.at("out_of_domain_search");
    CHECK(search.at("found").get<bool>());
    CHECK(search.at("relative_margin").get<double>() < -1e-9);

    CHECK_THROWS_AS(fraction_trace_concavity(1.0, 1.0, {0.3, 2.0}, {0.3, 2.0}, {3, 3}, 10, 8),
                    ConfigError);
}

TEST_CASE("reciprocal calculus is convex for one to three variables") {
    const ConvexityReport one = reciprocal_convexity(1, {3}, 200, 31);
    CHECK(one.verdict == Verdict::ConvexConsistent);
    CHECK(one.worst_margin >= -1e-9);
    const ConvexityReport two = reciprocal_convexity(2, {2, 2}, 200, 32);
    CHECK(two.verdict == Verdict::ConvexConsistent);
    const ConvexityReport three = reciprocal_convexity(3, {2, 2, 2}, 100, 33);
    CHECK(three.verdict == Verdict::ConvexConsistent);
    CHECK_THROWS_AS(reciprocal_convexity(2, {2}, 10, 0), ConfigError);
}

TEST_CASE("constant reciprocal exponents give zero margins") {
    MapSpec s;
    s.target = TargetKind::TensorCalculus;
    s.f = FunctionSpec::reciprocal_product({0.0, 0.0});
    s.dims = {2, 2};
    s.windows = {{0.2, 2.0}, {0.2, 2.0}};
    s.concave = false;
    const ConvexityReport r = certify_map(s, 20, 1);
    CHECK(r.verdict == Verdict::ConvexConsistent);
    CHECK(std::abs(r.worst_margin) <= 1e-12);
}

TEST_CASE("inverse quadratic form is jointly convex") {
    const FunctionSpec inv = FunctionSpec::resolvent_sum(0.0, {0.0}, {1.0});
    const ConvexityReport r = quadratic_form_convexity(inv, 3, 300, 14);
    CHECK(r.verdict == Verdict::ConvexConsistent);
    CHECK(r.worst_margin >= -1e-9);
}

TEST_CASE("discretized half line integral is jointly convex in all three slots") {
    const Quadrature q = half_line_quadrature(20);
    const ConvexityReport r = lieb_integral_convexity({2, 2}, q.nodes, q.weights, 300, 25);
    CHECK(r.verdict == Verdict::ConvexConsistent);
    CHECK(r.worst_margin >= -1e-9);
}

TEST_CASE("resolvent trace is convex whenever one slot is frozen") {
    for (Slot frozen : {Slot::A, Slot::B, Slot::K}) {
        const ConvexityReport r = two_of_three(frozen, 1.0, 1.0, {2, 2}, 300, 26);
        CHECK(r.verdict == Verdict::ConvexConsistent);
        CHECK(r.worst_margin >= -1e-9);
    }
}

TEST_CASE("resolvent trace is not convex in all three slots at once") {
    const ConvexityReport r = two_of_three(Slot::None, 1.0, 1.0, {2, 2}, 10000, 27);
    CHECK(r.verdict == Verdict::Violation);
    CHECK(r.worst_margin < -1e-6);
}

// ===========================================================================
// Bridge
// ===========================================================================

TEST_CASE("bridge margins agree on both sides for a concave exponent pair") {
    const ConvexityReport r =
        theorem1_bridge(FunctionSpec::exponent_product({0.5, 0.5}), {3, 3}, 300, 91);
    CHECK(r.verdict == Verdict::ConcaveConsistent);
    CHECK(r.extra.at("max_transfer_gap").get<double>() <= 1e-10);
    CHECK(r.extra.at("trace_violations").get<long>() == 0);
    CHECK(r.extra.at("tensor_violations").get<long>() == 0);
}

TEST_CASE("bridge transfers violations for exponents past the simplex") {
    const ConvexityReport r =
        theorem1_bridge(FunctionSpec::exponent_product({0.7, 0.7}), {3, 3}, 2000, 92);
    CHECK(r.verdict == Verdict::Violation);
    CHECK(r.extra.at("max_transfer_gap").get<double>() <= 1e-10);
    CHECK(r.extra.at("trace_violations").get<long>() > 0);
    CHECK(r.extra.at("tensor_violations").get<long>() > 0);
}

TEST_CASE("basis tensors transfer to matrix units with equal margins") {
    TrialRng rng(37);
    const int n = 3, m = 2;
    const HermitianMatrix a1 = random_hermitian_in_window(rng, n, 0.2, 2.0);
    const HermitianMatrix b1 = random_hermitian_in_window(rng, m, 0.2, 2.0);
    const HermitianMatrix a2 = random_hermitian_in_window(rng, n, 0.2, 2.0);
    const HermitianMatrix b2 = random_hermitian_in_window(rng, m, 0.2, 2.0);
    const FunctionSpec f = FunctionSpec::exponent_product({0.5, 0.5});

    for (int slot = 0; slot < n * m; ++slot) {
        TensorVector phi({n, m});
        phi.coeffs[slot] = Complex(1.0, 0.0);
        const GeneralMatrix k = phi_map(phi).adjoint();
        // K is a matrix unit: a single entry equal to one.
        double total = 0.0;
        for (int i = 0; i < k.rows(); ++i)
            for (int j = 0; j < k.cols(); ++j) total += std::abs(k(i, j));
        CHECK(total == doctest::Approx(1.0));

        const HermitianMatrix am = (a1 + a2) * 0.5, bm = (b1 + b2) * 0.5;
        const double trace_gap =
            trace_form(f, am, bm, k) -
            0.5 * (trace_form(f, a1, b1, k) + trace_form(f, a2, b2, k));
        const double tensor_gap =
            l2_quadratic_form(func_calc_tensor_conj(f, am, bm), phi.coeffs) -
            0.5 * (l2_quadratic_form(func_calc_tensor_conj(f, a1, b1), phi.coeffs) +
                   l2_quadratic_form(func_calc_tensor_conj(f, a2, b2), phi.coeffs));
        CHECK(std::abs(trace_gap - tensor_gap) <= 1e-12);
    }
}
