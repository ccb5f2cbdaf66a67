#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

#include "opconvex/funcalc.hpp"
#include "opconvex/linalg.hpp"
#include "opconvex/report.hpp"

namespace opconvex {

// ===========================================================================
// Divided differences
// ===========================================================================

/// One-variable function with optional derivative callbacks.  The divided
/// differences fall back on the derivatives when nodes (nearly) coincide;
/// a missing callback at a coincidence is an error, not a NaN.
struct ScalarFunction {
    std::function<double(double)> value;
    std::function<double(double)> deriv1;
    std::function<double(double)> deriv2;
};

/// [x,y]_g = (g(x)-g(y))/(x-y), or g'(x) when |x-y| <= dd_tol.
double divided_diff_1(const ScalarFunction& g, double x, double y,
                      double dd_tol = default_tolerances().divided_diff);

/// [x,y,z]_g via nested first-order differences.  Nodes are sorted first so
/// the result is exactly permutation invariant, the outermost denominator is
/// the widest gap, and full coincidence returns g''/2 at the mean node.
double divided_diff_2(const ScalarFunction& g, double x, double y, double z,
                      double dd_tol = default_tolerances().divided_diff);

// ===========================================================================
// Grids and generalized Hessians
// ===========================================================================

/// Per-variable node lists, strictly ascending.  The tuples of the grid are
/// the cartesian product of the lists.
class DataSetGrid {
public:
    explicit DataSetGrid(std::vector<std::vector<double>> nodes);

    int arity() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes(int i) const { return nodes_.at(i); }
    int order(int i) const { return static_cast<int>(nodes_.at(i).size()); }
    std::vector<int> orders() const;
    long index_count() const; // product of the orders

    /// Row-major multi-index decode (last variable fastest), zero-based.
    std::vector<int> unflatten(long flat) const;
    /// The grid tuple at a zero-based multi-index.
    std::vector<double> tuple_at(const std::vector<int>& m) const;

    nlohmann::json to_json() const;
    static DataSetGrid from_json(const nlohmann::json& j);

private:
    std::vector<std::vector<double>> nodes_;
};

/// Symmetric block matrix of second-order partial divided differences,
/// anchored at the zero-based multi-index `index`.  Block (u,s) has shape
/// n_u x n_s; the whole matrix has size n_1 + ... + n_k.
struct GeneralizedHessian {
    std::vector<int> order;
    std::vector<int> index;
    HermitianMatrix matrix;

    GeneralizedHessian() : matrix(HermitianMatrix::zero(1)) {}
};

/// Assembles the generalized Hessian of f on the grid at anchor m
/// (zero-based).  Diagonal blocks hold doubled second divided differences in
/// one variable; off-diagonal blocks hold mixed first-order differences in
/// two variables; all remaining variables sit at their anchor nodes.
GeneralizedHessian generalized_hessian(const FunctionSpec& f, const DataSetGrid& grid,
                                       const std::vector<int>& m,
                                       double dd_tol = default_tolerances().divided_diff);

/// Closed form for the fraction family prod t_i/(t_i+mu_i), which factors
/// through the vectors a(i) = (mu_i/(node+mu_i))_nodes.  Also carries the
/// Hadamard factorization: hessian = psd_factor (entrywise *) neg_ak, where
/// neg_ak is the blockwise expansion of minus the domain membership matrix
/// at the anchor tuple and psd_factor is a PSD outer-product block matrix.
struct FractionHessian {
    GeneralizedHessian hessian;
    HermitianMatrix psd_factor;
    HermitianMatrix neg_ak;

    FractionHessian()
        : psd_factor(HermitianMatrix::zero(1)), neg_ak(HermitianMatrix::zero(1)) {}
};
FractionHessian closed_form_hessian_fraction(const std::vector<double>& mu,
                                             const DataSetGrid& grid, const std::vector<int>& m);

/// Closed form for 1/(t_1...t_k): blocks a(u)^t a(s) with doubled diagonal,
/// overall factor f at the anchor, a(i) = (1/node)_nodes.  Always PSD.
GeneralizedHessian closed_form_hessian_reciprocal(const DataSetGrid& grid,
                                                  const std::vector<int>& m);

enum class ScanMode { PSD, NSD };

/// Runs generalized_hessian at every anchor of the grid and checks the
/// claimed sign.  Margins are signed against the claim (min eigenvalue for
/// PSD, minus the max eigenvalue for NSD), so negative past psd_tol means
/// VIOLATION.  extra carries worst_index / worst_eigenvalue and a per_index
/// array; for the fraction kind each record also reports membership of its
/// anchor tuple in the concavity domain.
ConvexityReport hessian_scan(const FunctionSpec& f, const DataSetGrid& grid, ScanMode mode,
                             double psd_tol = default_tolerances().psd);

} // namespace opconvex
