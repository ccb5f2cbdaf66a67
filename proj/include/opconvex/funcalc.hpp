#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opconvex/linalg.hpp"

namespace opconvex {

// ===========================================================================
// FunctionSpec: symbolic description of a scalar function of k variables.
//
// The analytic kinds carry exact first and second partial derivatives, which
// the divided-difference machinery falls back on at coincident nodes.  A
// custom spec wraps arbitrary callables and may optionally supply derivative
// callbacks of its own.
// ===========================================================================

enum class FunctionKind {
    ExponentProduct,   // prod t_i^{p_i},            p_i >= 0,  t_i > 0
    FractionProduct,   // prod t_i/(t_i + mu_i),     mu_i > 0,  t_i > 0
    ReciprocalProduct, // prod t_i^{-p_i},           p_i in [0,1], t_i > 0
    ResolventSum,      // beta + sum w_i/(t + s_i),  w_i > 0,   t > 0   (arity 1)
    Custom,
};

class FunctionSpec {
public:
    using EvalFn = std::function<double(const std::vector<double>&)>;
    using DomainFn = std::function<bool(const std::vector<double>&)>;
    using Partial1Fn = std::function<double(int, const std::vector<double>&)>;
    using Partial2Fn = std::function<double(int, int, const std::vector<double>&)>;

    static FunctionSpec exponent_product(std::vector<double> p);
    static FunctionSpec fraction_product(std::vector<double> mu);
    static FunctionSpec reciprocal_product(std::vector<double> p);
    static FunctionSpec resolvent_sum(double beta, std::vector<double> nodes,
                                      std::vector<double> weights);
    static FunctionSpec custom(int arity, EvalFn eval, DomainFn domain,
                               Partial1Fn d1 = nullptr, Partial2Fn d2 = nullptr);

    FunctionKind kind() const { return kind_; }
    int arity() const { return arity_; }

    /// True when t lies in the declared natural domain.
    bool contains(const std::vector<double>& t) const;
    double eval(const std::vector<double>& t) const;

    bool has_derivatives() const;
    double partial(int i, const std::vector<double>& t) const;
    double partial2(int i, int j, const std::vector<double>& t) const;

    const std::vector<double>& exponents() const { return p_; }
    const std::vector<double>& poles() const { return mu_; }
    double beta() const { return beta_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Short human-readable formula, e.g. "t1^0.5 * t2^0.5".
    std::string describe() const;

    nlohmann::json to_json() const; // Custom kind is not serializable
    static FunctionSpec from_json(const nlohmann::json& j);
    /// "pow:0.5,0.5" | "frac:1,1" | "recip:1,1" | "resolvent:beta=0;s=1,2;w=1,1"
    static FunctionSpec parse_flag(const std::string& text);

private:
    FunctionSpec() = default;

    FunctionKind kind_ = FunctionKind::Custom;
    int arity_ = 0;
    std::vector<double> p_;       // exponent/reciprocal kinds
    std::vector<double> mu_;      // fraction kind
    double beta_ = 0.0;           // resolvent kind
    std::vector<double> nodes_;
    std::vector<double> weights_;
    EvalFn eval_;                 // Custom
    DomainFn domain_;
    Partial1Fn d1_;
    Partial2Fn d2_;
};

// ===========================================================================
// Tensors and the two functional calculi
// ===========================================================================

/// Coefficients of a vector in a k-fold tensor product space, stored
/// row-major over the factors: for dims (n1, n2) the coefficient of
/// e1_i (x) e2_j sits at index i*n2 + j.
struct TensorVector {
    std::vector<int> dims;
    std::vector<Complex> coeffs;

    explicit TensorVector(std::vector<int> dims_in);
    TensorVector(std::vector<int> dims_in, std::vector<Complex> coeffs_in);

    int total_dim() const { return static_cast<int>(coeffs.size()); }
    double norm() const;
};

/// Largest tensor space we agree to materialize operators on.
inline constexpr long kTensorDimCap = 4096;

/// Multivariate calculus on the tensor product: for spectral decompositions
/// X_r = sum_j lambda_j P_j returns
///   sum f(lambda_{j_1}, ..., lambda_{j_k}) P_{j_1} (x) ... (x) P_{j_k}.
HermitianMatrix func_calc_tensor(const FunctionSpec& f, const std::vector<HermitianMatrix>& xs,
                                 double cluster_tol = default_tolerances().cluster);

/// Two-variable version with the second factor acting on the conjugate
/// space: sum f(lambda_i, mu_j) P_i (x) conj(Q_j).  This is the operator
/// whose matrix form is transported through phi_map.
HermitianMatrix func_calc_tensor_conj(const FunctionSpec& f, const HermitianMatrix& a,
                                      const HermitianMatrix& b,
                                      double cluster_tol = default_tolerances().cluster);

/// Variant calculus on matrices: sum f(lambda_i, mu_j) P_i K Q_j with
/// A acting on the left and B on the right of K (shape n x m).
GeneralMatrix func_calc_variant(const FunctionSpec& f, const HermitianMatrix& a,
                                const HermitianMatrix& b, const GeneralMatrix& k,
                                double cluster_tol = default_tolerances().cluster);

/// Unitary identification of a two-factor tensor with an n1 x n2 matrix:
/// entry (i,j) of the output is the coefficient of e1_i (x) e2_j.
GeneralMatrix phi_map(const TensorVector& phi);
TensorVector phi_inverse(const GeneralMatrix& k);

/// Residual of the intertwining identity: the operator built on the tensor
/// space, pushed through phi_map, must agree with the variant calculus
/// applied to phi_map of the argument.  Small values (<= 1e-10) certify the
/// conjugate-space convention.
double intertwine_check(const FunctionSpec& f, const HermitianMatrix& a, const HermitianMatrix& b,
                        const TensorVector& phi);

/// Real number tr[f(A,B)(K*) K] for K of shape m x n (A is n x n, B m x m).
double trace_form(const FunctionSpec& f, const HermitianMatrix& a, const HermitianMatrix& b,
                  const GeneralMatrix& k);

} // namespace opconvex
