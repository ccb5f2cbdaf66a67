#include "opconvex/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "opconvex/certify.hpp"
#include "opconvex/domain.hpp"
#include "opconvex/hessian.hpp"
#include "opconvex/io.hpp"
#include "opconvex/means.hpp"
#include "opconvex/sampling.hpp"

namespace opconvex {

namespace {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::uint64_t salt_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t state = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    return splitmix64(state);
}

CheckResult from_report(std::string id, std::string anchor, const ConvexityReport& r,
                        bool pass) {
    CheckResult c;
    c.id = std::move(id);
    c.paper_anchor = std::move(anchor);
    c.verdict = verdict_name(r.verdict);
    c.margin = r.worst_margin;
    c.pass = pass;
    c.witness = r.witness;
    return c;
}

HermitianMatrix random_real_symmetric(TrialRng& rng, int n, double lo, double hi) {
    // Orthogonal conjugation of a real diagonal: strip the imaginary parts
    // of a sampled Hermitian matrix and resymmetrize.
    const HermitianMatrix h = random_hermitian_in_window(rng, n, lo, hi);
    GeneralMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(h(i, j).real(), 0.0);
    return HermitianMatrix((g + g.adjoint()) * Complex(0.5, 0.0));
}

std::vector<double> ascending_nodes(TrialRng& rng, int count, double lo, double hi) {
    while (true) {
        std::vector<double> v = random_values(rng, count, lo, hi);
        std::sort(v.begin(), v.end());
        bool ok = true;
        for (int p = 1; p < count; ++p)
            if (v[p] - v[p - 1] < 1e-3) ok = false;
        if (ok) return v;
    }
}

DataSetGrid sample_grid(TrialRng& rng, int k, int max_order, double lo, double hi) {
    std::vector<std::vector<double>> nodes(k);
    for (int i = 0; i < k; ++i)
        nodes[i] = ascending_nodes(rng, 1 + rng.uniform_int(max_order), lo, hi);
    return DataSetGrid(nodes);
}

} // namespace

// ===========================================================================
// Result plumbing
// ===========================================================================

nlohmann::json CheckResult::to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["paper_anchor"] = paper_anchor;
    j["verdict"] = verdict;
    j["margin"] = margin;
    j["pass"] = pass;
    if (!witness.is_null()) j["witness"] = witness;
    if (extra.is_object())
        for (const auto& [key, value] : extra.items()) j[key] = value;
    return j;
}

bool SuiteResult::pass() const {
    for (const CheckResult& c : checks)
        if (!c.pass) return false;
    return true;
}

nlohmann::json emit_report(const std::vector<SuiteResult>& suites, std::uint64_t seed) {
    nlohmann::json j;
    j["suites"] = nlohmann::json::array();
    if (suites.empty()) return j;
    j["tool_version"] = kToolVersion;
    j["seed"] = seed;
    for (const SuiteResult& s : suites) {
        nlohmann::json js;
        js["name"] = s.name;
        js["pass"] = s.pass();
        js["checks"] = nlohmann::json::array();
        for (const CheckResult& c : s.checks) js["checks"].push_back(c.to_json());
        j["suites"].push_back(js);
    }
    return j;
}

// ===========================================================================
// Squaring gap
// ===========================================================================

std::vector<CheckResult> check_squaring_gap() {
    std::vector<CheckResult> out;

    CheckResult exact;
    exact.id = "t2_counterexample";
    exact.paper_anchor = "1/2[(A1^2 xi1|xi1) + (A2^2 xi2|xi2)] - (M^2 eta|eta) = -1/16";
    exact.margin = t2_counterexample(0.0);
    exact.pass = std::abs(exact.margin + 0.0625) <= 1e-12;
    exact.verdict = exact.pass ? "PASS" : "FAIL";
    out.push_back(exact);

    CheckResult perturbed;
    perturbed.id = "t2_perturbed";
    perturbed.paper_anchor = "the squaring midpoint gap stays negative under A_i + eps";
    perturbed.margin = t2_counterexample(0.01);
    perturbed.pass = perturbed.margin < 0.0;
    perturbed.verdict = perturbed.pass ? "PASS" : "FAIL";
    out.push_back(perturbed);

    return out;
}

// ===========================================================================
// Domain cross-check
// ===========================================================================

std::vector<CheckResult> check_domain_crosscheck(std::uint64_t seed) {
    const std::vector<std::vector<double>> mu_choices = {
        {1.0, 1.0}, {0.5, 2.0}, {1.5, 0.7}};
    const long points = 10000;

    std::vector<CheckResult> out;
    for (std::size_t choice = 0; choice < mu_choices.size(); ++choice) {
        const std::vector<double>& mu = mu_choices[choice];
        const DomainSpec d(mu);
        TrialRng rng(seed, choice);
        long mismatches = 0;
        double closest = std::numeric_limits<double>::infinity();
        std::vector<double> last{1.0, 1.0};
        for (long i = 0; i < points; ++i) {
            // (0, 3]^2: map [0,1) away from zero.
            const double t1 = 3.0 * (1.0 - rng.uniform01());
            const double t2 = 3.0 * (1.0 - rng.uniform01());
            const MembershipResult mr = domain_contains(d, {t1, t2});
            if (d2_closed_form(mu[0], mu[1], t1, t2) != mr.member) ++mismatches;
            closest = std::min(closest, std::abs(mr.margin));
            last = {t1, t2};
        }
        CheckResult c;
        c.id = "d2_crosscheck_mu_" + format_value(mu[0]) + "_" + format_value(mu[1]);
        c.paper_anchor = "t1 t2 >= mu1 mu2 / 4  <=>  [[2t1/mu1, -1], [-1, 2t2/mu2]] psd";
        c.margin = closest;
        c.pass = mismatches == 0;
        c.verdict = c.pass ? "PASS" : "FAIL";
        c.extra["points"] = points;
        c.extra["mismatches"] = mismatches;
        c.extra["a_k_example"] = {{"t", last}, {"matrix", matrix_to_json(build_Ak(d, last))}};
        out.push_back(c);
    }
    return out;
}

// ===========================================================================
// Trace and intertwining identities
// ===========================================================================

std::vector<CheckResult> check_trace_identities(std::uint64_t seed) {
    const FunctionSpec resolvent =
        FunctionSpec::resolvent_sum(0.2, {0.5, 2.0}, {1.0, 0.5});
    double worst_trace = 0.0, worst_intertwine = 0.0;

    for (long i = 0; i < 500; ++i) {
        TrialRng rng(seed, static_cast<std::uint64_t>(i));
        const int n = 1 + rng.uniform_int(4);
        const int m = 1 + rng.uniform_int(4);

        FunctionSpec f = FunctionSpec::exponent_product({0.5, 0.5});
        switch (i % 4) {
            case 0:
                f = FunctionSpec::exponent_product(
                    {rng.uniform(0.0, 1.2), rng.uniform(0.0, 1.2)});
                break;
            case 1:
                f = FunctionSpec::fraction_product(
                    {rng.uniform(0.3, 2.0), rng.uniform(0.3, 2.0)});
                break;
            case 2:
                f = FunctionSpec::reciprocal_product({rng.uniform01(), rng.uniform01()});
                break;
            case 3:
                // Separable product of one-variable resolvent values.
                f = FunctionSpec::custom(
                    2,
                    [resolvent](const std::vector<double>& t) {
                        return resolvent.eval({t[0]}) * resolvent.eval({t[1]});
                    },
                    [](const std::vector<double>& t) { return t[0] > 0.0 && t[1] > 0.0; });
                break;
        }

        const bool real_data = (i % 3) == 0;
        const HermitianMatrix a = real_data ? random_real_symmetric(rng, n, 0.2, 2.5)
                                            : random_hermitian_in_window(rng, n, 0.2, 2.5);
        const HermitianMatrix b = real_data ? random_real_symmetric(rng, m, 0.2, 2.5)
                                            : random_hermitian_in_window(rng, m, 0.2, 2.5);
        const GeneralMatrix k = random_unit_hs(rng, m, n);
        const TensorVector phi = phi_inverse(k.adjoint());

        const double lhs = trace_form(f, a, b, k);
        const double rhs = l2_quadratic_form(func_calc_tensor_conj(f, a, b), phi.coeffs);
        worst_trace = std::max(worst_trace, std::abs(lhs - rhs));
        worst_intertwine = std::max(worst_intertwine, intertwine_check(f, a, b, phi));
    }

    std::vector<CheckResult> out;
    CheckResult trace;
    trace.id = "trace_identity";
    trace.paper_anchor = "tr f(A,B)(K*) K = (f(A,B) phi | phi), K = (Phi phi)*";
    trace.margin = worst_trace;
    trace.pass = worst_trace <= 1e-10;
    trace.verdict = trace.pass ? "PASS" : "FAIL";
    trace.extra["instances"] = 500;
    out.push_back(trace);

    CheckResult inter;
    inter.id = "intertwining_identity";
    inter.paper_anchor = "Phi(f(A,B) phi) = sum f(lambda_i, mu_j) P_i (Phi phi) Q_j";
    inter.margin = worst_intertwine;
    inter.pass = worst_intertwine <= 1e-10;
    inter.verdict = inter.pass ? "PASS" : "FAIL";
    inter.extra["instances"] = 500;
    out.push_back(inter);
    return out;
}

// ===========================================================================
// Trace concavity across exponent cells
// ===========================================================================

namespace {

MapSpec lieb_trace_spec(double p, double q, int n, int m) {
    MapSpec s;
    s.target = TargetKind::TraceForm;
    s.f = FunctionSpec::exponent_product({p, q});
    s.dims = {n, m};
    s.windows = {{0.2, 2.0}, {0.2, 2.0}};
    s.concave = true;
    return s;
}

} // namespace

std::vector<CheckResult> check_trace_concavity(std::uint64_t seed) {
    const std::vector<std::pair<double, double>> cells = {
        {0.5, 0.5}, {0.3, 0.6}, {1.0, 0.0}, {0.0, 1.0}, {0.2, 0.2}};
    const std::vector<std::pair<int, int>> shapes = {{3, 3}, {4, 2}};

    std::vector<CheckResult> out;
    std::uint64_t salt = 0;
    for (const auto& [p, q] : cells) {
        for (const auto& [n, m] : shapes) {
            const ConvexityReport r =
                certify_map(lieb_trace_spec(p, q, n, m), 1000, salt_seed(seed, salt++));
            const bool pass = r.verdict == Verdict::ConcaveConsistent && r.worst_margin >= -1e-9;
            CheckResult c = from_report("lieb_trace_" + format_value(p) + "_" + format_value(q) +
                                            "_" + std::to_string(n) + "x" + std::to_string(m),
                                        "tr A^p K* B^q K concave for p+q <= 1", r, pass);
            c.extra["p"] = p;
            c.extra["q"] = q;
            out.push_back(c);
        }
    }

    for (const double e : {0.7, 0.6}) {
        MapSpec s = lieb_trace_spec(e, e, 3, 3);
        s.scalar_mix = 2;
        const ConvexityReport r = violation_search(s, 10000, salt_seed(seed, salt++));
        const bool pass = r.verdict == Verdict::Violation && r.worst_margin < -1e-6;
        CheckResult c = from_report("lieb_violation_" + format_value(e) + "_" + format_value(e),
                                    "tr A^p K* B^q K not concave past p+q = 1", r, pass);
        c.extra["p"] = e;
        c.extra["q"] = e;
        out.push_back(c);
    }
    return out;
}

// ===========================================================================
// Generalized Hessian battery
// ===========================================================================

std::vector<CheckResult> check_hessian_battery(std::uint64_t seed) {
    std::vector<CheckResult> out;

    // Engine vs closed forms on random grids, every anchor.
    {
        TrialRng rng(seed, 101);
        double worst_fraction = 0.0, worst_reciprocal = 0.0;
        double worst_hadamard = 0.0, worst_factor = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const int k = 1 + rng.uniform_int(3);
            const DataSetGrid grid = sample_grid(rng, k, 4, 0.2, 3.0);
            const std::vector<double> mu = random_values(rng, k, 0.3, 2.0);
            const FunctionSpec frac = FunctionSpec::fraction_product(mu);
            const FunctionSpec recip =
                FunctionSpec::reciprocal_product(std::vector<double>(k, 1.0));
            for (long flat = 0; flat < grid.index_count(); ++flat) {
                const std::vector<int> m = grid.unflatten(flat);
                const FractionHessian cf = closed_form_hessian_fraction(mu, grid, m);
                const GeneralizedHessian eng = generalized_hessian(frac, grid, m);
                worst_fraction = std::max(
                    worst_fraction,
                    frobenius_distance(eng.matrix.matrix(), cf.hessian.matrix.matrix()));

                const GeneralizedHessian cr = closed_form_hessian_reciprocal(grid, m);
                const GeneralizedHessian engr = generalized_hessian(recip, grid, m);
                worst_reciprocal = std::max(
                    worst_reciprocal,
                    frobenius_distance(engr.matrix.matrix(), cr.matrix.matrix()));

                const HermitianMatrix had = hadamard_product(cf.psd_factor, cf.neg_ak);
                for (int r = 0; r < had.dim(); ++r)
                    for (int c = 0; c < had.dim(); ++c)
                        worst_hadamard = std::max(
                            worst_hadamard, std::abs(had(r, c) - cf.hessian.matrix(r, c)));
                worst_factor = std::min(worst_factor, min_eigenvalue(cf.psd_factor));
            }
        }

        CheckResult frac_check;
        frac_check.id = "hessian_engine_vs_fraction";
        frac_check.paper_anchor = "divided-difference blocks of prod t_i/(t_i+mu_i)";
        frac_check.margin = worst_fraction;
        frac_check.pass = worst_fraction <= 1e-9;
        frac_check.verdict = frac_check.pass ? "PASS" : "FAIL";
        frac_check.extra["grids"] = 100;
        out.push_back(frac_check);

        CheckResult recip_check;
        recip_check.id = "hessian_engine_vs_reciprocal";
        recip_check.paper_anchor = "divided-difference blocks of 1/(t_1...t_k)";
        recip_check.margin = worst_reciprocal;
        recip_check.pass = worst_reciprocal <= 1e-9;
        recip_check.verdict = recip_check.pass ? "PASS" : "FAIL";
        out.push_back(recip_check);

        CheckResult hadamard;
        hadamard.id = "hessian_hadamard_identity";
        hadamard.paper_anchor = "H = P o (-A_k expanded blockwise), P psd";
        hadamard.margin = worst_hadamard;
        hadamard.pass = worst_hadamard <= 1e-12 && worst_factor >= -1e-10;
        hadamard.verdict = hadamard.pass ? "PASS" : "FAIL";
        hadamard.extra["factor_min_eigenvalue"] = worst_factor;
        out.push_back(hadamard);
    }

    // NSD scans on grids whose every tuple stays in the concavity domain:
    // nodes at least the poles keep the membership matrix diagonally
    // dominant for k <= 3.
    {
        TrialRng rng(seed, 102);
        double worst = std::numeric_limits<double>::infinity();
        bool all_pass = true;
        for (int rep = 0; rep < 20; ++rep) {
            const int k = 1 + rng.uniform_int(3);
            const std::vector<double> mu = random_values(rng, k, 0.2, 0.6);
            const DataSetGrid grid = sample_grid(rng, k, 3, 0.7, 2.5);
            const ConvexityReport r =
                hessian_scan(FunctionSpec::fraction_product(mu), grid, ScanMode::NSD);
            worst = std::min(worst, r.worst_margin);
            all_pass = all_pass && r.verdict == Verdict::ConcaveConsistent;
        }
        CheckResult c;
        c.id = "hessian_nsd_inside_domain";
        c.paper_anchor = "H(m) <= 0 on every anchor when the grid lies in D_k";
        c.margin = worst;
        c.pass = all_pass && worst >= -1e-10;
        c.verdict = c.pass ? "PASS" : "FAIL";
        c.extra["grids"] = 20;
        out.push_back(c);
    }

    // PSD scans for reciprocal powers on arbitrary positive grids.
    {
        TrialRng rng(seed, 103);
        double worst = std::numeric_limits<double>::infinity();
        bool all_pass = true;
        for (int rep = 0; rep < 20; ++rep) {
            const int k = 1 + rng.uniform_int(3);
            const DataSetGrid grid = sample_grid(rng, k, 3, 0.1, 3.0);
            const ConvexityReport r = hessian_scan(
                FunctionSpec::reciprocal_product(std::vector<double>(k, 1.0)), grid,
                ScanMode::PSD);
            worst = std::min(worst, r.worst_margin);
            all_pass = all_pass && r.verdict == Verdict::ConvexConsistent;
        }
        CheckResult c;
        c.id = "hessian_psd_reciprocal";
        c.paper_anchor = "H(m) >= 0 for 1/(t_1...t_k) on positive grids";
        c.margin = worst;
        c.pass = all_pass && worst >= -1e-10;
        c.verdict = c.pass ? "PASS" : "FAIL";
        c.extra["grids"] = 20;
        out.push_back(c);
    }

    // Far outside the domain a single anchor already carries a positive
    // eigenvalue.
    {
        TrialRng rng(seed, 104);
        int seen = 0;
        bool all_indefinite = true;
        double weakest = std::numeric_limits<double>::infinity();
        while (seen < 25) {
            const int k = 2 + rng.uniform_int(2);
            const std::vector<double> mu = random_values(rng, k, 0.5, 2.0);
            const std::vector<double> t = random_values(rng, k, 0.05, 3.0);
            if (domain_contains(DomainSpec(mu), t).margin >= -0.1) continue;
            ++seen;
            std::vector<std::vector<double>> nodes(k);
            for (int i = 0; i < k; ++i) nodes[i] = {t[i]};
            const ConvexityReport r = hessian_scan(FunctionSpec::fraction_product(mu),
                                                   DataSetGrid(nodes), ScanMode::NSD);
            const double top = r.extra.at("worst_eigenvalue").get<double>();
            weakest = std::min(weakest, top);
            all_indefinite = all_indefinite && r.verdict == Verdict::Violation && top > 1e-9;
        }
        CheckResult c;
        c.id = "hessian_indefinite_outside_domain";
        c.paper_anchor = "membership margin < -0.1 forces a positive Hessian eigenvalue";
        c.margin = weakest;
        c.pass = all_indefinite;
        c.verdict = c.pass ? "PASS" : "FAIL";
        c.extra["points"] = 25;
        out.push_back(c);
    }

    return out;
}

// ===========================================================================
// Fraction trace window
// ===========================================================================

std::vector<CheckResult> check_fraction_window(std::uint64_t seed) {
    const ConvexityReport r =
        fraction_trace_concavity(1.0, 1.0, {0.6, 2.0}, {0.6, 2.0}, {3, 3}, 500, seed);

    std::vector<CheckResult> out;
    const bool pass = r.verdict == Verdict::ConcaveConsistent && r.worst_margin >= -1e-9;
    out.push_back(from_report("fraction_trace_in_domain",
                              "tr [A/(A+mu1)] K* [B/(B+mu2)] K concave on D_2", r, pass));

    const auto& search = r.extra.at("out_of_domain_search");
    CheckResult s;
    s.id = "fraction_trace_outside_domain";
    s.paper_anchor = "the same trace map stops being concave below t1 t2 = mu1 mu2 / 4";
    s.pass = search.at("found").get<bool>();
    s.verdict = s.pass ? "VIOLATION" : "FAIL";
    s.margin = s.pass ? search.at("relative_margin").get<double>() : 0.0;
    s.extra["search"] = search;
    out.push_back(s);
    return out;
}

// ===========================================================================
// Means battery
// ===========================================================================

std::vector<CheckResult> check_means_battery(std::uint64_t seed) {
    std::vector<CheckResult> out;

    double worst_monotone = std::numeric_limits<double>::infinity();
    double worst_concave = std::numeric_limits<double>::infinity();
    double worst_block = std::numeric_limits<double>::infinity();
    for (long i = 0; i < 500; ++i) {
        TrialRng rng(seed, 200 + static_cast<std::uint64_t>(i));
        const int n = 2 + rng.uniform_int(3);
        const HermitianMatrix a1 = random_hermitian_in_window(rng, n, 0.3, 2.5);
        const HermitianMatrix b1 = random_hermitian_in_window(rng, n, 0.3, 2.5);
        const HermitianMatrix a2 = random_hermitian_in_window(rng, n, 0.3, 2.5);
        const HermitianMatrix b2 = random_hermitian_in_window(rng, n, 0.3, 2.5);
        const HermitianMatrix bump_a = random_hermitian_in_window(rng, n, 0.0, 0.8);
        const HermitianMatrix bump_b = random_hermitian_in_window(rng, n, 0.0, 0.8);

        const HermitianMatrix g11 = geometric_mean(a1, b1);
        worst_monotone = std::min(
            worst_monotone,
            min_eigenvalue(geometric_mean(a1 + bump_a, b1 + bump_b) - g11));
        const HermitianMatrix gm =
            geometric_mean((a1 + a2) * 0.5, (b1 + b2) * 0.5);
        worst_concave = std::min(
            worst_concave, min_eigenvalue(gm - (g11 + geometric_mean(a2, b2)) * 0.5));
        worst_block = std::min(worst_block, min_eigenvalue(block2x2(a1, g11, b1)));
    }

    CheckResult mono;
    mono.id = "gm_monotone";
    mono.paper_anchor = "A <= A', B <= B'  =>  A # B <= A' # B'";
    mono.margin = worst_monotone;
    mono.pass = worst_monotone >= -1e-9;
    mono.verdict = mono.pass ? "PASS" : "FAIL";
    mono.extra["pairs"] = 500;
    out.push_back(mono);

    CheckResult conc;
    conc.id = "gm_midpoint_concave";
    conc.paper_anchor = "(A1+A2)/2 # (B1+B2)/2 >= (A1#B1 + A2#B2)/2";
    conc.margin = worst_concave;
    conc.pass = worst_concave >= -1e-9;
    conc.verdict = conc.pass ? "PASS" : "FAIL";
    conc.extra["pairs"] = 500;
    out.push_back(conc);

    CheckResult block;
    block.id = "gm_block_psd";
    block.paper_anchor = "[[A, A#B], [A#B, B]] >= 0";
    block.margin = worst_block;
    block.pass = worst_block >= -1e-9;
    block.verdict = block.pass ? "PASS" : "FAIL";
    block.extra["pairs"] = 500;
    out.push_back(block);

    // Maximality probe: C near A#B with a PSD block stays below the mean.
    {
        TrialRng rng(seed, 300);
        const HermitianMatrix a = random_hermitian_in_window(rng, 3, 0.4, 2.0);
        const HermitianMatrix b = random_hermitian_in_window(rng, 3, 0.4, 2.0);
        long tested = 0, admissible = 0;
        ConvexityReport probe;
        // Grow the sample until at least 1000 perturbations were admissible.
        for (long budget = 2000; budget <= 64000; budget *= 2) {
            probe = gm_maximality_probe(a, b, budget, salt_seed(seed, 17));
            tested = probe.extra.at("tested").get<long>();
            admissible = probe.extra.at("admissible").get<long>();
            if (admissible >= 1000) break;
        }
        const bool pass =
            admissible >= 1000 && probe.verdict == Verdict::ConcaveConsistent;
        CheckResult c = from_report("gm_maximality_probe",
                                    "A # B is the largest C with [[A,C],[C,B]] >= 0", probe,
                                    pass);
        c.extra["tested"] = tested;
        c.extra["admissible"] = admissible;
        out.push_back(c);
    }

    // Harmonic mean block characterizations.
    {
        double worst = std::numeric_limits<double>::infinity();
        for (long i = 0; i < 500; ++i) {
            TrialRng rng(seed, 400 + static_cast<std::uint64_t>(i));
            const int n = 2 + rng.uniform_int(3);
            const HermitianMatrix a = random_hermitian_in_window(rng, n, 0.3, 2.5);
            const HermitianMatrix b = random_hermitian_in_window(rng, n, 0.3, 2.5);
            const HarmonicBlockMargins m = harmonic_block_check(a, b);
            worst = std::min({worst, m.mean_form, m.inverse_form});
        }
        CheckResult c;
        c.id = "harmonic_block";
        c.paper_anchor = "2 diag(A,B) >= [[C,C],[C,C]] and diag(A^-1,B^-1) >= [[S,S],[S,S]]";
        c.margin = worst;
        c.pass = worst >= -1e-10;
        c.verdict = c.pass ? "PASS" : "FAIL";
        c.extra["pairs"] = 500;
        out.push_back(c);
    }

    // Product mean: the # of the two coordinate calculi is the tensor
    // calculus of t^{1/2} s^{1/2}.
    {
        const FunctionSpec ft = FunctionSpec::exponent_product({1.0, 0.0});
        const FunctionSpec fs = FunctionSpec::exponent_product({0.0, 1.0});
        const FunctionSpec half = FunctionSpec::exponent_product({0.5, 0.5});
        double worst_identity = 0.0;
        double worst_midpoint = std::numeric_limits<double>::infinity();
        for (long i = 0; i < 50; ++i) {
            TrialRng rng(seed, 500 + static_cast<std::uint64_t>(i));
            const std::vector<HermitianMatrix> xs = {
                random_hermitian_in_window(rng, 3, 0.3, 2.5),
                random_hermitian_in_window(rng, 2, 0.3, 2.5)};
            const std::vector<HermitianMatrix> ys = {
                random_hermitian_in_window(rng, 3, 0.3, 2.5),
                random_hermitian_in_window(rng, 2, 0.3, 2.5)};
            const HermitianMatrix mixed =
                geometric_mean(func_calc_tensor(ft, xs), func_calc_tensor(fs, xs));
            worst_identity = std::max(
                worst_identity,
                frobenius_distance(mixed.matrix(), func_calc_tensor(half, xs).matrix()));
            worst_midpoint = std::min(worst_midpoint, product_mean_check(ft, fs, xs, ys));
        }
        CheckResult c;
        c.id = "product_mean_identity";
        c.paper_anchor = "(A (x) I) # (I (x) B) = A^{1/2} (x) B^{1/2}";
        c.margin = worst_identity;
        c.pass = worst_identity <= 1e-9 && worst_midpoint >= -1e-9;
        c.verdict = c.pass ? "PASS" : "FAIL";
        c.extra["midpoint_margin"] = worst_midpoint;
        out.push_back(c);
    }

    return out;
}

// ===========================================================================
// Convexity battery: inverse-power maps, resolvent forms, partial freezes
// ===========================================================================

std::vector<CheckResult> check_convexity_battery(std::uint64_t seed) {
    std::vector<CheckResult> out;

    for (int k = 1; k <= 3; ++k) {
        const ConvexityReport r = reciprocal_convexity(
            k, std::vector<int>(k, 3), 500, salt_seed(seed, 600 + k));
        const bool pass = r.verdict == Verdict::ConvexConsistent && r.worst_margin >= -1e-9;
        out.push_back(from_report("reciprocal_convexity_k" + std::to_string(k),
                                  "1/(t_1^{p_1}...t_k^{p_k}) operator convex, p in [0,1]^k",
                                  r, pass));
    }

    {
        TrialRng rng(seed, 700);
        for (int rep = 0; rep < 3; ++rep) {
            const int count = 1 + rng.uniform_int(3);
            std::vector<double> nodes(count), weights(count);
            for (int i = 0; i < count; ++i) {
                nodes[i] = rng.uniform(0.0, 2.0);
                weights[i] = rng.uniform(0.3, 2.0);
            }
            const FunctionSpec f =
                FunctionSpec::resolvent_sum(rng.uniform(0.0, 1.0), nodes, weights);
            const ConvexityReport r =
                quadratic_form_convexity(f, 3, 500, salt_seed(seed, 710 + rep));
            const bool pass = r.verdict == Verdict::ConvexConsistent && r.worst_margin >= -1e-9;
            CheckResult c = from_report("quadratic_form_resolvent_" + std::to_string(rep),
                                        "(A, xi) -> (f(A) xi | xi) jointly convex", r, pass);
            c.extra["function"] = f.to_json();
            out.push_back(c);
        }
    }

    for (Slot frozen : {Slot::A, Slot::B, Slot::K}) {
        const ConvexityReport r = two_of_three(frozen, 1.0, 1.0, {2, 2}, 500,
                                               salt_seed(seed, 720 + static_cast<int>(frozen)));
        const bool pass = r.verdict == Verdict::ConvexConsistent && r.worst_margin >= -1e-9;
        out.push_back(from_report(std::string("two_of_three_frozen_") + slot_name(frozen),
                                  "tr[(A+u)^-1 K* (B+v)^-1 K] convex in the free two slots",
                                  r, pass));
    }
    {
        const ConvexityReport r =
            two_of_three(Slot::None, 1.0, 1.0, {2, 2}, 10000, salt_seed(seed, 730));
        const bool pass = r.verdict == Verdict::Violation;
        out.push_back(from_report("two_of_three_all_free",
                                  "the same trace map is not jointly convex in all three",
                                  r, pass));
    }

    {
        const ConvexityReport r = theorem1_bridge(FunctionSpec::exponent_product({0.5, 0.5}),
                                                  {3, 3}, 500, salt_seed(seed, 740));
        const double gap = r.extra.at("max_transfer_gap").get<double>();
        const bool pass = r.verdict == Verdict::ConcaveConsistent && gap <= 1e-10;
        CheckResult c = from_report(
            "bridge_simplex", "(f(A,B) phi | phi) and tr f(A,B)(K*) K share margins", r, pass);
        c.margin = gap;
        c.extra["max_transfer_gap"] = gap;
        out.push_back(c);
    }
    {
        const ConvexityReport r = theorem1_bridge(FunctionSpec::exponent_product({0.7, 0.7}),
                                                  {3, 3}, 2000, salt_seed(seed, 741));
        const double gap = r.extra.at("max_transfer_gap").get<double>();
        const bool pass = r.verdict == Verdict::Violation &&
                          r.extra.at("trace_violations").get<long>() > 0 &&
                          r.extra.at("tensor_violations").get<long>() > 0 && gap <= 1e-10;
        CheckResult c = from_report(
            "bridge_violation_transfer",
            "every violation transfers between the tensor and trace forms", r, pass);
        c.margin = gap;
        c.extra["max_transfer_gap"] = gap;
        c.extra["trace_violations"] = r.extra.at("trace_violations");
        c.extra["tensor_violations"] = r.extra.at("tensor_violations");
        out.push_back(c);
    }

    return out;
}

// ===========================================================================
// Suite dispatch
// ===========================================================================

std::vector<SuiteResult> run_suite(const std::string& name, std::uint64_t seed) {
    std::vector<SuiteResult> suites;
    auto add = [&](const std::string& suite_name, std::vector<CheckResult> checks) {
        suites.push_back(SuiteResult{suite_name, std::move(checks)});
    };

    if (name == "funcalc" || name == "all") add("funcalc", check_trace_identities(seed));
    if (name == "means" || name == "all") add("means", check_means_battery(seed));
    if (name == "domain" || name == "all") add("domain", check_domain_crosscheck(seed));
    if (name == "hessian" || name == "all") add("hessian", check_hessian_battery(seed));
    if (name == "certify" || name == "all") {
        std::vector<CheckResult> checks = check_squaring_gap();
        for (auto& c : check_trace_concavity(seed)) checks.push_back(std::move(c));
        for (auto& c : check_fraction_window(seed)) checks.push_back(std::move(c));
        for (auto& c : check_convexity_battery(seed)) checks.push_back(std::move(c));
        add("certify", std::move(checks));
    }

    if (suites.empty()) throw ConfigError("unknown suite '" + name + "'");
    return suites;
}

} // namespace opconvex
