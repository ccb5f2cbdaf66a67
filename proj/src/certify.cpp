#include "opconvex/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opconvex/domain.hpp"
#include "opconvex/errors.hpp"
#include "opconvex/io.hpp"
#include "opconvex/util.hpp"

namespace opconvex {

namespace {

constexpr int kMaxResamples = 64;

// Golden-ratio stride, same constant the per-trial streams use, so derived
// seeds (sweep cells, searches) never collide with trial streams.
constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ull;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + kSeedStride * (salt + 1);
    return splitmix64(x);
}

bool collapsed(const MapSpec& s, long index) {
    return s.scalar_mix > 0 && (index % s.scalar_mix) == s.scalar_mix - 1;
}

HermitianMatrix midpoint(const HermitianMatrix& x, const HermitianMatrix& y) {
    return (x + y) * 0.5;
}

GeneralMatrix midpoint(const GeneralMatrix& x, const GeneralMatrix& y) {
    return (x + y) * Complex(0.5, 0.0);
}

std::vector<Complex> midpoint(const std::vector<Complex>& x, const std::vector<Complex>& y) {
    std::vector<Complex> m(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) m[i] = 0.5 * (x[i] + y[i]);
    return m;
}

double signed_margin(bool concave, double at_mid, double avg) {
    return concave ? at_mid - avg : avg - at_mid;
}

// Every eigenvalue tuple of the sampled operators must sit in the
// concavity domain of the fraction kind.  A breach here is a broken
// invariant (the window box was validated), so it is not resampled away.
void assert_tuples_in_domain(const std::vector<double>& mu,
                             const std::vector<const HermitianMatrix*>& ops) {
    const DomainSpec d(mu);
    std::vector<std::vector<double>> spectra;
    spectra.reserve(ops.size());
    for (const HermitianMatrix* op : ops) spectra.push_back(jacobi_eigh(*op).values);

    std::vector<int> idx(ops.size(), 0);
    while (true) {
        std::vector<double> tuple(ops.size());
        for (std::size_t i = 0; i < ops.size(); ++i) tuple[i] = spectra[i][idx[i]];
        if (domain_contains(d, tuple).margin < -1e-8)
            throw Error("sampled spectra escaped the concavity domain; window box invalid");
        int pos = static_cast<int>(ops.size()) - 1;
        while (pos >= 0 && ++idx[pos] == static_cast<int>(spectra[pos].size())) idx[pos--] = 0;
        if (pos < 0) break;
    }
}

struct TrialResult {
    double margin = 0.0;
    double scale = 1.0;
};

// ---------------------------------------------------------------------------
// Per-target trials.  Sampling order inside a trial is fixed (X tuple, then
// Y tuple, then K-type data) so that window rescaling maps streams onto each
// other draw for draw.
// ---------------------------------------------------------------------------

TrialResult tensor_trial(const MapSpec& s, long index, TrialRng& rng, nlohmann::json* w) {
    const int k = s.f.arity();
    const bool tiny = collapsed(s, index);
    std::vector<HermitianMatrix> x, y, mid;
    for (int i = 0; i < k; ++i)
        x.push_back(random_hermitian_in_window(rng, tiny ? 1 : s.dims[i], s.windows[i].lo,
                                               s.windows[i].hi));
    for (int i = 0; i < k; ++i)
        y.push_back(random_hermitian_in_window(rng, tiny ? 1 : s.dims[i], s.windows[i].lo,
                                               s.windows[i].hi));
    for (int i = 0; i < k; ++i) mid.push_back(midpoint(x[i], y[i]));

    if (s.f.kind() == FunctionKind::FractionProduct) {
        for (const auto* set : {&x, &y, &mid}) {
            std::vector<const HermitianMatrix*> one;
            for (const auto& op : *set) one.push_back(&op);
            assert_tuples_in_domain(s.f.poles(), one);
        }
    }

    const HermitianMatrix fx = func_calc_tensor(s.f, x);
    const HermitianMatrix fy = func_calc_tensor(s.f, y);
    const HermitianMatrix fm = func_calc_tensor(s.f, mid);
    const HermitianMatrix avg = (fx + fy) * 0.5;
    const HermitianMatrix diff = s.concave ? fm - avg : avg - fm;

    TrialResult r;
    r.margin = min_eigenvalue(diff);
    r.scale = 1.0 + fx.frobenius_norm() + fy.frobenius_norm();
    if (w) {
        nlohmann::json jx = nlohmann::json::array(), jy = nlohmann::json::array();
        for (const auto& op : x) jx.push_back(matrix_to_json(op));
        for (const auto& op : y) jy.push_back(matrix_to_json(op));
        (*w)["x"] = jx;
        (*w)["y"] = jy;
    }
    return r;
}

TrialResult trace_trial(const MapSpec& s, long index, TrialRng& rng, nlohmann::json* w) {
    const bool tiny = collapsed(s, index);
    const int n = tiny ? 1 : s.dims[0];
    const int m = tiny ? 1 : s.dims[1];
    const HermitianMatrix a1 = random_hermitian_in_window(rng, n, s.windows[0].lo, s.windows[0].hi);
    const HermitianMatrix b1 = random_hermitian_in_window(rng, m, s.windows[1].lo, s.windows[1].hi);
    const HermitianMatrix a2 = random_hermitian_in_window(rng, n, s.windows[0].lo, s.windows[0].hi);
    const HermitianMatrix b2 = random_hermitian_in_window(rng, m, s.windows[1].lo, s.windows[1].hi);
    GeneralMatrix k = random_unit_hs(rng, m, n);
    if (s.free_k_scale) k = k * Complex(rng.uniform(0.25, 2.0), 0.0);

    const HermitianMatrix am = midpoint(a1, a2);
    const HermitianMatrix bm = midpoint(b1, b2);
    if (s.f.kind() == FunctionKind::FractionProduct) {
        assert_tuples_in_domain(s.f.poles(), {&a1, &b1});
        assert_tuples_in_domain(s.f.poles(), {&a2, &b2});
        assert_tuples_in_domain(s.f.poles(), {&am, &bm});
    }

    const double f1 = trace_form(s.f, a1, b1, k);
    const double f2 = trace_form(s.f, a2, b2, k);
    const double fm = trace_form(s.f, am, bm, k);

    TrialResult r;
    r.margin = signed_margin(s.concave, fm, 0.5 * (f1 + f2));
    r.scale = 1.0 + std::abs(f1) + std::abs(f2);
    if (w) {
        (*w)["a1"] = matrix_to_json(a1);
        (*w)["b1"] = matrix_to_json(b1);
        (*w)["a2"] = matrix_to_json(a2);
        (*w)["b2"] = matrix_to_json(b2);
        (*w)["k"] = matrix_to_json(k);
    }
    return r;
}

TrialResult quadratic_trial(const MapSpec& s, long index, TrialRng& rng, nlohmann::json* w) {
    const bool tiny = collapsed(s, index);
    const int n = tiny ? 1 : s.dims[0];
    const HermitianMatrix a1 = random_hermitian_in_window(rng, n, s.windows[0].lo, s.windows[0].hi);
    std::vector<Complex> xi1(n), xi2(n);
    for (auto& c : xi1) c = rng.cgauss();
    const HermitianMatrix a2 = random_hermitian_in_window(rng, n, s.windows[0].lo, s.windows[0].hi);
    for (auto& c : xi2) c = rng.cgauss();

    const double q1 = quadratic_form_value(s.f, a1, xi1);
    const double q2 = quadratic_form_value(s.f, a2, xi2);
    const double qm = quadratic_form_value(s.f, midpoint(a1, a2), midpoint(xi1, xi2));

    TrialResult r;
    r.margin = signed_margin(s.concave, qm, 0.5 * (q1 + q2));
    r.scale = 1.0 + std::abs(q1) + std::abs(q2);
    if (w) {
        auto vec_json = [](const std::vector<Complex>& v) {
            nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
            for (const Complex& c : v) {
                re.push_back(c.real());
                im.push_back(c.imag());
            }
            return nlohmann::json{{"re", re}, {"im", im}};
        };
        (*w)["a1"] = matrix_to_json(a1);
        (*w)["a2"] = matrix_to_json(a2);
        (*w)["xi1"] = vec_json(xi1);
        (*w)["xi2"] = vec_json(xi2);
    }
    return r;
}

TrialResult integral_trial(const MapSpec& s, long index, TrialRng& rng, nlohmann::json* w) {
    const bool tiny = collapsed(s, index);
    const int n = tiny ? 1 : s.dims[0];
    const int m = tiny ? 1 : s.dims[1];
    const HermitianMatrix a1 = random_hermitian_in_window(rng, n, s.windows[0].lo, s.windows[0].hi);
    const HermitianMatrix b1 = random_hermitian_in_window(rng, m, s.windows[1].lo, s.windows[1].hi);
    const GeneralMatrix k1 = random_unit_hs(rng, m, n);
    const HermitianMatrix a2 = random_hermitian_in_window(rng, n, s.windows[0].lo, s.windows[0].hi);
    const HermitianMatrix b2 = random_hermitian_in_window(rng, m, s.windows[1].lo, s.windows[1].hi);
    const GeneralMatrix k2 = random_unit_hs(rng, m, n);

    const double f1 = integral_trace_value(s.quad_nodes, s.quad_weights, a1, b1, k1);
    const double f2 = integral_trace_value(s.quad_nodes, s.quad_weights, a2, b2, k2);
    const double fm = integral_trace_value(s.quad_nodes, s.quad_weights, midpoint(a1, a2),
                                           midpoint(b1, b2), midpoint(k1, k2));

    TrialResult r;
    r.margin = signed_margin(s.concave, fm, 0.5 * (f1 + f2));
    r.scale = 1.0 + std::abs(f1) + std::abs(f2);
    if (w) {
        (*w)["a1"] = matrix_to_json(a1);
        (*w)["b1"] = matrix_to_json(b1);
        (*w)["k1"] = matrix_to_json(k1);
        (*w)["a2"] = matrix_to_json(a2);
        (*w)["b2"] = matrix_to_json(b2);
        (*w)["k2"] = matrix_to_json(k2);
    }
    return r;
}

TrialResult two_of_three_trial(const MapSpec& s, long index, TrialRng& rng, nlohmann::json* w) {
    const bool tiny = collapsed(s, index);
    const int n = tiny ? 1 : s.dims[0];
    const int m = tiny ? 1 : s.dims[1];
    auto draw_k = [&](TrialRng& r) {
        GeneralMatrix k = random_unit_hs(r, m, n);
        if (s.free_k_scale) k = k * Complex(r.uniform(0.25, 2.0), 0.0);
        return k;
    };
    const HermitianMatrix a1 = random_hermitian_in_window(rng, n, s.windows[0].lo, s.windows[0].hi);
    const HermitianMatrix b1 = random_hermitian_in_window(rng, m, s.windows[1].lo, s.windows[1].hi);
    const GeneralMatrix k1 = draw_k(rng);
    const HermitianMatrix a2 = s.frozen == Slot::A
                                   ? a1
                                   : random_hermitian_in_window(rng, n, s.windows[0].lo,
                                                                s.windows[0].hi);
    const HermitianMatrix b2 = s.frozen == Slot::B
                                   ? b1
                                   : random_hermitian_in_window(rng, m, s.windows[1].lo,
                                                                s.windows[1].hi);
    const GeneralMatrix k2 = s.frozen == Slot::K ? k1 : draw_k(rng);

    const double g1 = resolvent_trace_value(s.shift_u, s.shift_v, a1, b1, k1);
    const double g2 = resolvent_trace_value(s.shift_u, s.shift_v, a2, b2, k2);
    const double gm = resolvent_trace_value(s.shift_u, s.shift_v, midpoint(a1, a2),
                                            midpoint(b1, b2), midpoint(k1, k2));

    TrialResult r;
    r.margin = signed_margin(s.concave, gm, 0.5 * (g1 + g2));
    r.scale = 1.0 + std::abs(g1) + std::abs(g2);
    if (w) {
        (*w)["a1"] = matrix_to_json(a1);
        (*w)["b1"] = matrix_to_json(b1);
        (*w)["k1"] = matrix_to_json(k1);
        (*w)["a2"] = matrix_to_json(a2);
        (*w)["b2"] = matrix_to_json(b2);
        (*w)["k2"] = matrix_to_json(k2);
        (*w)["frozen"] = slot_name(s.frozen);
    }
    return r;
}

TrialResult dispatch_trial(const MapSpec& s, long index, TrialRng& rng, nlohmann::json* w) {
    switch (s.target) {
        case TargetKind::TensorCalculus: return tensor_trial(s, index, rng, w);
        case TargetKind::TraceForm: return trace_trial(s, index, rng, w);
        case TargetKind::QuadraticForm: return quadratic_trial(s, index, rng, w);
        case TargetKind::IntegralForm: return integral_trial(s, index, rng, w);
        case TargetKind::TwoOfThree: return two_of_three_trial(s, index, rng, w);
    }
    throw ConfigError("unknown certification target");
}

// Domain errors during sampling (an eigenvalue grazing the function's
// domain edge) abort the attempt and redraw from the same stream, which
// keeps witness regeneration exact.
TrialResult run_one(const MapSpec& s, long index, TrialRng& rng, nlohmann::json* w) {
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        try {
            return dispatch_trial(s, index, rng, w);
        } catch (const DomainError&) {
        }
    }
    throw DomainError("trial sampling kept leaving the function domain; check the windows");
}

} // namespace

// ===========================================================================
// MapSpec
// ===========================================================================

const char* target_name(TargetKind t) {
    switch (t) {
        case TargetKind::TensorCalculus: return "tensor_calculus";
        case TargetKind::TraceForm: return "trace_form";
        case TargetKind::QuadraticForm: return "quadratic_form";
        case TargetKind::IntegralForm: return "integral_form";
        case TargetKind::TwoOfThree: return "two_of_three";
    }
    return "unknown";
}

const char* slot_name(Slot s) {
    switch (s) {
        case Slot::None: return "none";
        case Slot::A: return "A";
        case Slot::B: return "B";
        case Slot::K: return "K";
    }
    return "unknown";
}

nlohmann::json MapSpec::to_json() const {
    nlohmann::json j;
    j["target"] = target_name(target);
    if (target != TargetKind::IntegralForm && target != TargetKind::TwoOfThree)
        j["function"] = f.to_json();
    j["dims"] = dims;
    nlohmann::json w = nlohmann::json::array();
    for (const Window& win : windows) w.push_back({win.lo, win.hi});
    j["windows"] = w;
    j["claim"] = concave ? "concave" : "convex";
    if (target == TargetKind::TwoOfThree) {
        j["frozen"] = slot_name(frozen);
        j["u"] = shift_u;
        j["v"] = shift_v;
    }
    if (target == TargetKind::IntegralForm) {
        j["quad_nodes"] = quad_nodes;
        j["quad_weights"] = quad_weights;
    }
    if (scalar_mix > 0) j["scalar_mix"] = scalar_mix;
    if (free_k_scale) j["free_k_scale"] = true;
    return j;
}

void validate_spec(const MapSpec& spec) {
    const int vars = static_cast<int>(spec.dims.size());
    if (vars == 0) throw ConfigError("map spec has no operator variables");
    if (spec.windows.size() != spec.dims.size())
        throw ConfigError("map spec needs one sampling window per operator variable");
    for (int d : spec.dims)
        if (d < 1) throw ConfigError("matrix dimensions must be at least 1");
    for (const Window& w : spec.windows)
        if (!(w.lo < w.hi)) throw ConfigError("sampling window is empty");
    if (spec.scalar_mix < 0) throw ConfigError("scalar_mix must be nonnegative");

    switch (spec.target) {
        case TargetKind::TensorCalculus:
            if (spec.f.arity() != vars)
                throw ConfigError("tensor target: function arity does not match dims");
            break;
        case TargetKind::TraceForm:
            if (vars != 2 || spec.f.arity() != 2)
                throw ConfigError("trace target needs two variables and an arity-2 function");
            break;
        case TargetKind::QuadraticForm:
            if (vars != 1 || spec.f.arity() != 1)
                throw ConfigError("quadratic target needs one variable and an arity-1 function");
            break;
        case TargetKind::IntegralForm: {
            if (vars != 2) throw ConfigError("integral target needs dims for A and B");
            if (spec.quad_nodes.empty() || spec.quad_nodes.size() != spec.quad_weights.size())
                throw ConfigError("integral target needs matching node and weight lists");
            for (double u : spec.quad_nodes)
                if (u < 0.0) throw ConfigError("quadrature nodes must be nonnegative");
            for (double w : spec.quad_weights)
                if (w <= 0.0) throw ConfigError("quadrature weights must be positive");
            break;
        }
        case TargetKind::TwoOfThree:
            if (vars != 2) throw ConfigError("two_of_three needs dims for A and B");
            if (spec.shift_u <= 0.0 || spec.shift_v <= 0.0)
                throw ConfigError("resolvent shifts must be positive");
            break;
    }

    const bool uses_f = spec.target == TargetKind::TensorCalculus ||
                        spec.target == TargetKind::TraceForm ||
                        spec.target == TargetKind::QuadraticForm;
    if (uses_f && spec.f.kind() != FunctionKind::Custom) {
        for (const Window& w : spec.windows)
            if (w.lo <= 0.0)
                throw ConfigError("sampling windows must stay inside the positive orthant");
    }
    if (uses_f && spec.f.kind() == FunctionKind::FractionProduct) {
        // The whole window box must sit in the concavity domain; by
        // monotonicity of the membership matrix it suffices that the lower
        // corner is a member.
        std::vector<double> corner;
        for (const Window& w : spec.windows) corner.push_back(w.lo);
        if (!domain_contains(DomainSpec(spec.f.poles()), corner).member)
            throw ConfigError("window box leaves the concavity domain; lower the poles "
                              "or raise the windows");
    }
}

// ===========================================================================
// Map evaluation
// ===========================================================================

double quadratic_form_value(const FunctionSpec& f, const HermitianMatrix& a,
                            const std::vector<Complex>& xi) {
    if (f.arity() != 1) throw ShapeError("quadratic form needs an arity-1 function");
    if (static_cast<int>(xi.size()) != a.dim())
        throw ShapeError("vector length does not match the matrix dimension");
    const HermitianMatrix fa =
        apply_scalar_function(a, [&f](double t) { return f.eval({t}); });
    const std::vector<Complex> v = fa.matrix().apply(xi);
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < xi.size(); ++i) acc += std::conj(xi[i]) * v[i];
    return acc.real();
}

double l2_quadratic_form(const HermitianMatrix& t, const std::vector<Complex>& v) {
    if (static_cast<int>(v.size()) != t.dim())
        throw ShapeError("vector length does not match the operator dimension");
    const std::vector<Complex> w = t.matrix().apply(v);
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) acc += std::conj(v[i]) * w[i];
    return acc.real();
}

double resolvent_trace_value(double u, double v, const HermitianMatrix& a,
                             const HermitianMatrix& b, const GeneralMatrix& k) {
    if (k.rows() != b.dim() || k.cols() != a.dim())
        throw ShapeError("K must map the space of A into the space of B");
    const HermitianMatrix ra = apply_scalar_function(a, [u](double t) { return 1.0 / (t + u); });
    const HermitianMatrix rb = apply_scalar_function(b, [v](double t) { return 1.0 / (t + v); });
    return (ra.matrix() * k.adjoint() * rb.matrix() * k).trace().real();
}

double integral_trace_value(const std::vector<double>& nodes, const std::vector<double>& weights,
                            const HermitianMatrix& a, const HermitianMatrix& b,
                            const GeneralMatrix& k) {
    if (nodes.size() != weights.size())
        throw ShapeError("quadrature nodes and weights differ in length");
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
        acc += weights[j] * resolvent_trace_value(nodes[j], nodes[j], a, b, k);
    return acc;
}

// ===========================================================================
// Trial engine
// ===========================================================================

double midpoint_trial(const MapSpec& spec, TrialRng& rng) {
    validate_spec(spec);
    return run_one(spec, 0, rng, nullptr).margin;
}

namespace {

ConvexityReport reduce_trials(const MapSpec& spec, long trials, std::uint64_t seed,
                              double violation_tol, const std::vector<TrialResult>& results) {
    long worst = 0;
    double worst_rel = std::numeric_limits<double>::infinity();
    for (long i = 0; i < trials; ++i) {
        const double rel = results[i].margin / results[i].scale;
        if (rel < worst_rel) {
            worst_rel = rel;
            worst = i;
        }
    }
    ConvexityReport report;
    report.trials = trials;
    report.seed = seed;
    report.worst_margin = worst_rel;
    report.verdict = worst_rel < -violation_tol
                         ? Verdict::Violation
                         : (spec.concave ? Verdict::ConcaveConsistent : Verdict::ConvexConsistent);
    TrialRng rng(seed, static_cast<std::uint64_t>(worst));
    nlohmann::json w;
    run_one(spec, worst, rng, &w);
    w["trial"] = worst;
    w["raw_margin"] = results[worst].margin;
    report.witness = w;
    return report;
}

} // namespace

ConvexityReport certify_map(const MapSpec& spec, long trials, std::uint64_t seed,
                            double violation_tol) {
    validate_spec(spec);
    if (trials < 1) throw ConfigError("certification needs at least one trial");
    std::vector<TrialResult> results(trials);
    parallel_for(trials, [&](long i) {
        TrialRng rng(seed, static_cast<std::uint64_t>(i));
        results[i] = run_one(spec, i, rng, nullptr);
    });
    return reduce_trials(spec, trials, seed, violation_tol, results);
}

ConvexityReport violation_search(const MapSpec& spec, long max_trials, std::uint64_t seed,
                                 double violation_tol) {
    validate_spec(spec);
    if (max_trials < 1) throw ConfigError("search needs at least one trial");
    double worst_rel = std::numeric_limits<double>::infinity();
    double worst_raw = 0.0;
    long worst = 0;
    for (long i = 0; i < max_trials; ++i) {
        TrialRng rng(seed, static_cast<std::uint64_t>(i));
        const TrialResult r = run_one(spec, i, rng, nullptr);
        const double rel = r.margin / r.scale;
        if (rel < worst_rel) {
            worst_rel = rel;
            worst_raw = r.margin;
            worst = i;
        }
        if (rel < -violation_tol) {
            ConvexityReport report;
            report.trials = i + 1;
            report.seed = seed;
            report.worst_margin = rel;
            report.verdict = Verdict::Violation;
            TrialRng wrng(seed, static_cast<std::uint64_t>(i));
            nlohmann::json w;
            run_one(spec, i, wrng, &w);
            w["trial"] = i;
            w["raw_margin"] = r.margin;
            report.witness = w;
            return report;
        }
    }
    ConvexityReport report;
    report.trials = max_trials;
    report.seed = seed;
    report.worst_margin = worst_rel;
    report.verdict = spec.concave ? Verdict::ConcaveConsistent : Verdict::ConvexConsistent;
    TrialRng wrng(seed, static_cast<std::uint64_t>(worst));
    nlohmann::json w;
    run_one(spec, worst, wrng, &w);
    w["trial"] = worst;
    w["raw_margin"] = worst_raw;
    report.witness = w;
    return report;
}

// ===========================================================================
// Named certifiers
// ===========================================================================

std::vector<LiebCell> lieb_sweep(const std::vector<double>& ps, const std::vector<double>& qs,
                                 std::pair<int, int> dims, long trials_per_cell,
                                 std::uint64_t seed) {
    for (double p : ps)
        if (p < 0.0) throw ConfigError("exponents must be nonnegative");
    for (double q : qs)
        if (q < 0.0) throw ConfigError("exponents must be nonnegative");

    std::vector<LiebCell> cells;
    std::uint64_t salt = 0;
    for (double p : ps) {
        for (double q : qs) {
            MapSpec spec;
            spec.target = TargetKind::TraceForm;
            spec.f = FunctionSpec::exponent_product({p, q});
            spec.dims = {dims.first, dims.second};
            spec.windows = {{0.2, 2.0}, {0.2, 2.0}};
            spec.concave = true;
            spec.scalar_mix = 4;
            LiebCell cell;
            cell.p = p;
            cell.q = q;
            cell.report = certify_map(spec, trials_per_cell, derive_seed(seed, salt++));
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

ConvexityReport fraction_trace_concavity(double mu1, double mu2, Window w1, Window w2,
                                         std::pair<int, int> dims, long trials,
                                         std::uint64_t seed) {
    if (mu1 <= 0.0 || mu2 <= 0.0) throw ConfigError("poles must be positive");
    if (!d2_closed_form(mu1, mu2, w1.lo, w2.lo))
        throw ConfigError("window corner product below the domain threshold mu1*mu2/4");

    MapSpec spec;
    spec.target = TargetKind::TraceForm;
    spec.f = FunctionSpec::fraction_product({mu1, mu2});
    spec.dims = {dims.first, dims.second};
    spec.windows = {w1, w2};
    spec.concave = true;
    ConvexityReport report = certify_map(spec, trials, seed);

    // Scalar probe outside the domain: products capped at mu1*mu2/8, where
    // the map must stop being concave.
    const double hi = 0.35 * std::sqrt(mu1 * mu2);
    const double lo = 1e-3 * std::sqrt(mu1 * mu2);
    auto value = [&](double t, double s) {
        return (t / (t + mu1)) * (s / (s + mu2));
    };
    const std::uint64_t search_seed = derive_seed(seed, 0x0f);
    const long budget = std::max(trials, 10000L);
    nlohmann::json search;
    search["found"] = false;
    for (long i = 0; i < budget; ++i) {
        TrialRng rng(search_seed, static_cast<std::uint64_t>(i));
        const double t1 = rng.uniform(lo, hi), s1 = rng.uniform(lo, hi);
        const double t2 = rng.uniform(lo, hi), s2 = rng.uniform(lo, hi);
        const double f1 = value(t1, s1), f2 = value(t2, s2);
        const double fm = value(0.5 * (t1 + t2), 0.5 * (s1 + s2));
        const double margin = fm - 0.5 * (f1 + f2);
        const double rel = margin / (1.0 + std::abs(f1) + std::abs(f2));
        if (rel < -1e-9) {
            search["found"] = true;
            search["trials_used"] = i + 1;
            search["relative_margin"] = rel;
            search["witness"] = {{"x", {t1, s1}}, {"y", {t2, s2}}};
            break;
        }
    }
    report.extra["out_of_domain_search"] = search;
    return report;
}

ConvexityReport reciprocal_convexity(int k, const std::vector<int>& dims, long trials,
                                     std::uint64_t seed) {
    if (k < 1) throw ConfigError("need at least one variable");
    if (static_cast<int>(dims.size()) != k)
        throw ConfigError("need one matrix dimension per variable");
    if (trials < 1) throw ConfigError("certification needs at least one trial");
    const Window window{0.2, 3.0};

    // Even trials pin the full reciprocal (exponents all one); odd trials
    // draw exponents from [0,1]^k before any matrix data, so the stream
    // layout stays reproducible.
    auto trial_at = [&](long i, TrialRng& rng, nlohmann::json* w) {
        std::vector<double> p(k, 1.0);
        if (i % 2 == 1)
            for (double& e : p) e = rng.uniform01();
        MapSpec spec;
        spec.target = TargetKind::TensorCalculus;
        spec.f = FunctionSpec::reciprocal_product(p);
        spec.dims = dims;
        spec.windows.assign(k, window);
        spec.concave = false;
        const TrialResult r = run_one(spec, i, rng, w);
        if (w) (*w)["exponents"] = p;
        return r;
    };

    std::vector<TrialResult> results(trials);
    parallel_for(trials, [&](long i) {
        TrialRng rng(seed, static_cast<std::uint64_t>(i));
        results[i] = trial_at(i, rng, nullptr);
    });

    long worst = 0;
    double worst_rel = std::numeric_limits<double>::infinity();
    for (long i = 0; i < trials; ++i) {
        const double rel = results[i].margin / results[i].scale;
        if (rel < worst_rel) {
            worst_rel = rel;
            worst = i;
        }
    }
    ConvexityReport report;
    report.trials = trials;
    report.seed = seed;
    report.worst_margin = worst_rel;
    report.verdict = worst_rel < -1e-9 ? Verdict::Violation : Verdict::ConvexConsistent;
    TrialRng rng(seed, static_cast<std::uint64_t>(worst));
    nlohmann::json w;
    trial_at(worst, rng, &w);
    w["trial"] = worst;
    w["raw_margin"] = results[worst].margin;
    report.witness = w;
    return report;
}

ConvexityReport quadratic_form_convexity(const FunctionSpec& f, int dim, long trials,
                                         std::uint64_t seed, Window window) {
    MapSpec spec;
    spec.target = TargetKind::QuadraticForm;
    spec.f = f;
    spec.dims = {dim};
    spec.windows = {window};
    spec.concave = false;
    return certify_map(spec, trials, seed);
}

double t2_counterexample(double eps) {
    if (eps < 0.0) throw ConfigError("perturbation must be nonnegative");
    const HermitianMatrix a1 =
        HermitianMatrix::from_real({{0.0, 0.0}, {0.0, 1.0}}) + HermitianMatrix::identity(2) * eps;
    const HermitianMatrix a2 =
        HermitianMatrix::from_real({{0.5, -0.5}, {-0.5, 0.5}}) + HermitianMatrix::identity(2) * eps;
    const std::vector<Complex> xi1 = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
    const std::vector<Complex> xi2 = {Complex(0.0, 0.0), Complex(-1.0, 0.0)};
    const HermitianMatrix m = midpoint(a1, a2);
    const std::vector<Complex> eta = midpoint(xi1, xi2);

    auto square_form = [](const HermitianMatrix& h, const std::vector<Complex>& v) {
        const std::vector<Complex> hv = (h.matrix() * h.matrix()).apply(v);
        Complex acc(0.0, 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) acc += std::conj(v[i]) * hv[i];
        return acc.real();
    };
    return 0.5 * (square_form(a1, xi1) + square_form(a2, xi2)) - square_form(m, eta);
}

ConvexityReport lieb_integral_convexity(std::pair<int, int> dims,
                                        const std::vector<double>& nodes,
                                        const std::vector<double>& weights, long trials,
                                        std::uint64_t seed) {
    MapSpec spec;
    spec.target = TargetKind::IntegralForm;
    spec.dims = {dims.first, dims.second};
    spec.windows = {{0.2, 2.0}, {0.2, 2.0}};
    spec.concave = false;
    spec.quad_nodes = nodes;
    spec.quad_weights = weights;
    return certify_map(spec, trials, seed);
}

ConvexityReport two_of_three(Slot frozen, double u, double v, std::pair<int, int> dims,
                             long trials, std::uint64_t seed) {
    MapSpec spec;
    spec.target = TargetKind::TwoOfThree;
    spec.dims = {dims.first, dims.second};
    spec.windows = {{0.2, 2.0}, {0.2, 2.0}};
    spec.concave = false;
    spec.frozen = frozen;
    spec.shift_u = u;
    spec.shift_v = v;
    if (frozen == Slot::None) {
        // Three free variables: no convexity is claimed, and the violation
        // only shows when the K scale can track the (A,B) level, so mix in
        // scalar trials and unpin the Frobenius norm.
        spec.scalar_mix = 2;
        spec.free_k_scale = true;
    }
    return certify_map(spec, trials, seed);
}

ConvexityReport theorem1_bridge(const FunctionSpec& f, std::pair<int, int> dims, long trials,
                                std::uint64_t seed) {
    if (f.arity() != 2) throw ConfigError("the bridge is a two-variable statement");
    if (trials < 1) throw ConfigError("certification needs at least one trial");
    const int n = dims.first, m = dims.second;
    const Window window{0.2, 2.0};

    struct BridgeResult {
        double trace_margin = 0.0;
        double tensor_margin = 0.0;
        double scale = 1.0;
        double gap = 0.0;
    };

    auto trial_at = [&](long i, TrialRng& rng, nlohmann::json* w) {
        const bool degenerate = (i % 8) == 7;
        auto draw_op = [&](int d) {
            if (degenerate) {
                const double a = rng.uniform(window.lo, window.hi);
                return HermitianMatrix::identity(d) * a;
            }
            return random_hermitian_in_window(rng, d, window.lo, window.hi);
        };
        const HermitianMatrix a1 = draw_op(n), b1 = draw_op(m);
        const HermitianMatrix a2 = draw_op(n), b2 = draw_op(m);

        // Alternate which side the witness is born on; the other is the
        // transported image.
        TensorVector phi({n, m});
        GeneralMatrix k(1, 1);
        if (i % 2 == 0) {
            for (Complex& c : phi.coeffs) c = rng.cgauss();
            const double norm = phi.norm();
            for (Complex& c : phi.coeffs) c /= norm;
            k = phi_map(phi).adjoint();
        } else {
            k = random_unit_hs(rng, m, n);
            phi = phi_inverse(k.adjoint());
        }

        const HermitianMatrix am = midpoint(a1, a2), bm = midpoint(b1, b2);
        const double tf1 = trace_form(f, a1, b1, k);
        const double tf2 = trace_form(f, a2, b2, k);
        const double tfm = trace_form(f, am, bm, k);
        const double t1 = l2_quadratic_form(func_calc_tensor_conj(f, a1, b1), phi.coeffs);
        const double t2 = l2_quadratic_form(func_calc_tensor_conj(f, a2, b2), phi.coeffs);
        const double tm = l2_quadratic_form(func_calc_tensor_conj(f, am, bm), phi.coeffs);

        BridgeResult r;
        r.trace_margin = tfm - 0.5 * (tf1 + tf2);
        r.tensor_margin = tm - 0.5 * (t1 + t2);
        r.scale = 1.0 + std::abs(tf1) + std::abs(tf2);
        r.gap = std::abs(r.trace_margin - r.tensor_margin);
        if (w) {
            (*w)["a1"] = matrix_to_json(a1);
            (*w)["b1"] = matrix_to_json(b1);
            (*w)["a2"] = matrix_to_json(a2);
            (*w)["b2"] = matrix_to_json(b2);
            (*w)["k"] = matrix_to_json(k);
            (*w)["trace_margin"] = r.trace_margin;
            (*w)["tensor_margin"] = r.tensor_margin;
        }
        return r;
    };

    std::vector<BridgeResult> results(trials);
    parallel_for(trials, [&](long i) {
        TrialRng rng(seed, static_cast<std::uint64_t>(i));
        results[i] = trial_at(i, rng, nullptr);
    });

    long worst = 0;
    double worst_rel = std::numeric_limits<double>::infinity();
    double max_gap = 0.0;
    long trace_violations = 0, tensor_violations = 0;
    for (long i = 0; i < trials; ++i) {
        const double rel = results[i].trace_margin / results[i].scale;
        if (rel < worst_rel) {
            worst_rel = rel;
            worst = i;
        }
        max_gap = std::max(max_gap, results[i].gap);
        if (rel < -1e-9) ++trace_violations;
        if (results[i].tensor_margin / results[i].scale < -1e-9) ++tensor_violations;
    }

    ConvexityReport report;
    report.trials = trials;
    report.seed = seed;
    report.worst_margin = worst_rel;
    report.verdict = worst_rel < -1e-9 ? Verdict::Violation : Verdict::ConcaveConsistent;
    TrialRng rng(seed, static_cast<std::uint64_t>(worst));
    nlohmann::json w;
    trial_at(worst, rng, &w);
    w["trial"] = worst;
    report.witness = w;
    report.extra["max_transfer_gap"] = max_gap;
    report.extra["trace_violations"] = trace_violations;
    report.extra["tensor_violations"] = tensor_violations;
    return report;
}

// ===========================================================================
// Quadrature
// ===========================================================================

Quadrature gauss_legendre(int n) {
    if (n < 1) throw ConfigError("quadrature needs at least one node");
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-flavored initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[n - 1 - i] = x;
        q.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

Quadrature half_line_quadrature(int n) {
    const Quadrature gl = gauss_legendre(n);
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double s = 0.5 * (gl.nodes[i] + 1.0);
        q.nodes[i] = s / (1.0 - s);
        q.weights[i] = 0.5 * gl.weights[i] / ((1.0 - s) * (1.0 - s));
    }
    return q;
}

} // namespace opconvex
