#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "opconvex/funcalc.hpp"
#include "opconvex/linalg.hpp"
#include "opconvex/report.hpp"
#include "opconvex/sampling.hpp"

namespace opconvex {

// ===========================================================================
// Describing the map under test
// ===========================================================================

enum class TargetKind { TensorCalculus, TraceForm, QuadraticForm, IntegralForm, TwoOfThree };
enum class Slot { None, A, B, K };

const char* target_name(TargetKind t);
const char* slot_name(Slot s);

/// Eigenvalue sampling window for one operator variable.
struct Window {
    double lo = 0.2;
    double hi = 2.0;
};

/// Everything a midpoint trial needs: which map, which function, matrix
/// sizes, where the spectra live, and the claimed curvature direction.
/// Margins are signed against the claim, so >= 0 always means consistent.
struct MapSpec {
    TargetKind target = TargetKind::TraceForm;
    FunctionSpec f = FunctionSpec::exponent_product({0.5, 0.5});
    std::vector<int> dims;
    std::vector<Window> windows;
    bool concave = true;

    // two_of_three only: which slot stays fixed within a trial, and the
    // resolvent shifts u, v.
    Slot frozen = Slot::None;
    double shift_u = 1.0;
    double shift_v = 1.0;

    // integral_form only.
    std::vector<double> quad_nodes;
    std::vector<double> quad_weights;

    // Violation hunting: every scalar_mix-th trial (indices with
    // index % scalar_mix == scalar_mix - 1) collapses all matrix dimensions
    // to 1, where indefinite scalar Hessians surface quickly.  0 disables.
    int scalar_mix = 0;

    // By default K is normalized to unit Frobenius norm.  Searches that
    // need the quadratic K-dependence to interact with the (A,B) curvature
    // must let the scale float.
    bool free_k_scale = false;

    nlohmann::json to_json() const;
};

/// ConfigError on inconsistent target/function/dims combinations; for the
/// fraction kind also enforces that the window box lies inside the
/// concavity domain (its lower corner must be a member).
void validate_spec(const MapSpec& spec);

// ===========================================================================
// Map evaluation
// ===========================================================================

/// Re (f(A) xi | xi) for an arity-1 function of a Hermitian matrix.
double quadratic_form_value(const FunctionSpec& f, const HermitianMatrix& a,
                            const std::vector<Complex>& xi);

/// Re (T v | v) in coefficient space; the tensor-side quadratic form.
double l2_quadratic_form(const HermitianMatrix& t, const std::vector<Complex>& v);

/// Re tr[(A+u)^-1 K* (B+v)^-1 K], the resolvent trace constituent.
double resolvent_trace_value(double u, double v, const HermitianMatrix& a,
                             const HermitianMatrix& b, const GeneralMatrix& k);

/// Sum of w_j tr[(A+u_j)^-1 K* (B+u_j)^-1 K] over the quadrature rule.
double integral_trace_value(const std::vector<double>& nodes, const std::vector<double>& weights,
                            const HermitianMatrix& a, const HermitianMatrix& b,
                            const GeneralMatrix& k);

// ===========================================================================
// Trial engine
// ===========================================================================

/// One midpoint comparison: samples two in-window input tuples from rng,
/// evaluates the target at both and at their midpoint, and returns the raw
/// margin signed against the claimed direction (negative = violation).
/// Domain errors inside a trial trigger a bounded resample.
double midpoint_trial(const MapSpec& spec, TrialRng& rng);

/// Runs `trials` independent midpoint trials with per-trial RNG streams
/// derived from (seed, index) and reduces to a report.  worst_margin is
/// relative: raw margin / (1 + |F(X)| + |F(Y)|); verdict is VIOLATION iff
/// it falls below -violation_tol.  The witness is regenerated from the
/// worst trial's stream, so reports are bit-identical regardless of the
/// thread budget.
ConvexityReport certify_map(const MapSpec& spec, long trials, std::uint64_t seed,
                            double violation_tol = 1e-9);

/// Sequential early-stopping scan over the same trial streams; returns on
/// the first relative margin below -violation_tol.  Pair with
/// MapSpec::scalar_mix to seed the search from scalar instances.
ConvexityReport violation_search(const MapSpec& spec, long max_trials, std::uint64_t seed,
                                 double violation_tol = 1e-9);

// ===========================================================================
// Named certifiers
// ===========================================================================

/// Per-exponent-cell concavity reports for (A,B) -> tr A^p K* B^q K.
/// Cells mix scalar trials in so that indefinite cells (p+q past 1) are
/// actually caught, not just sampled around.
struct LiebCell {
    double p = 0.0;
    double q = 0.0;
    ConvexityReport report;
};
std::vector<LiebCell> lieb_sweep(const std::vector<double>& ps, const std::vector<double>& qs,
                                 std::pair<int, int> dims, long trials_per_cell,
                                 std::uint64_t seed);

/// Concavity of the fraction trace map on a window box inside the
/// concavity domain (ConfigError otherwise), plus a scalar search outside
/// the domain recorded under extra["out_of_domain_search"]; every sampled
/// spectral tuple, including midpoints, is asserted to stay in the domain.
ConvexityReport fraction_trace_concavity(double mu1, double mu2, Window w1, Window w2,
                                         std::pair<int, int> dims, long trials,
                                         std::uint64_t seed);

/// Convexity of the tensor calculus of reciprocal powers in k variables:
/// even trials use exponents (1,...,1), odd trials draw exponents from
/// [0,1]^k out of the trial stream.
ConvexityReport reciprocal_convexity(int k, const std::vector<int>& dims, long trials,
                                     std::uint64_t seed);

/// Joint convexity of (A, xi) -> (f(A) xi | xi) over PD A and random xi.
ConvexityReport quadratic_form_convexity(const FunctionSpec& f, int dim, long trials,
                                         std::uint64_t seed, Window window = {0.2, 3.0});

/// Midpoint gap of the squaring map at the fixed rank-one construction
/// that shows t^2 lacks the joint convexity property: returns
/// 1/2[((A1+eps)^2 xi1|xi1) + ((A2+eps)^2 xi2|xi2)] - ((M^2) eta|eta)
/// with M the midpoint of the perturbed pair; exactly -1/16 at eps = 0.
double t2_counterexample(double eps);

/// Joint convexity in (A,B,K) of the positively weighted resolvent trace
/// sum; ConfigError on empty rules or nonpositive weights.
ConvexityReport lieb_integral_convexity(std::pair<int, int> dims,
                                        const std::vector<double>& nodes,
                                        const std::vector<double>& weights, long trials,
                                        std::uint64_t seed);

/// Convexity of tr[(A+u)^-1 K* (B+v)^-1 K] in the two unfrozen slots.
/// Slot::None frees all three; no consistency is expected there and the
/// trial schedule (scalar mixing, floating K scale) is tuned to surface
/// the three-variable violation.
ConvexityReport two_of_three(Slot frozen, double u, double v, std::pair<int, int> dims,
                             long trials, std::uint64_t seed);

/// Two-sided margin transfer between the tensor-space quadratic form at
/// phi and the trace form at K, linked by K = (phi_map phi)^*.  Each trial
/// evaluates both pipelines on the same instance; the largest absolute
/// margin disagreement lands in extra["max_transfer_gap"], violation
/// counts per side in extra as well.  Even trials sample phi first, odd
/// trials sample K first; every 8th trial uses scalar multiples of the
/// identity so that exponent pairs past the simplex actually violate.
ConvexityReport theorem1_bridge(const FunctionSpec& f, std::pair<int, int> dims, long trials,
                                std::uint64_t seed);

// ===========================================================================
// Quadrature
// ===========================================================================

struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
Quadrature gauss_legendre(int n);

/// Rule for integrals over (0, infinity) via u = s/(1-s): Gauss-Legendre
/// on (0,1) with the Jacobian folded into the (positive) weights.
Quadrature half_line_quadrature(int n = 20);

} // namespace opconvex
