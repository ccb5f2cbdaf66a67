#include "opconvex/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opconvex/domain.hpp"
#include "opconvex/io.hpp"
#include "opconvex/util.hpp"

namespace opconvex {

// ---------------------------------------------------------------------------
// Divided differences
// ---------------------------------------------------------------------------

double divided_diff_1(const ScalarFunction& g, double x, double y, double dd_tol) {
    if (!g.value) throw ConfigError("scalar function has no value callback");
    if (std::abs(x - y) > dd_tol) return (g.value(x) - g.value(y)) / (x - y);
    if (!g.deriv1)
        throw ConfigError("coincident nodes need a first-derivative callback");
    return g.deriv1(x);
}

double divided_diff_2(const ScalarFunction& g, double x, double y, double z, double dd_tol) {
    double a = x, b = y, c = z;
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    if (c - a <= dd_tol) {
        if (!g.deriv2)
            throw ConfigError("coincident nodes need a second-derivative callback");
        return 0.5 * g.deriv2((a + b + c) / 3.0);
    }
    // Outer denominator is the widest gap by construction; the inner
    // differences handle their own coincidences.
    return (divided_diff_1(g, a, b, dd_tol) - divided_diff_1(g, b, c, dd_tol)) / (a - c);
}

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

DataSetGrid::DataSetGrid(std::vector<std::vector<double>> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw ConfigError("grid needs at least one variable");
    for (const auto& list : nodes_) {
        if (list.empty()) throw ConfigError("grid variables need at least one node");
        for (size_t p = 1; p < list.size(); ++p)
            if (!(list[p - 1] < list[p]))
                throw ConfigError("grid nodes must be strictly increasing");
    }
}

std::vector<int> DataSetGrid::orders() const {
    std::vector<int> out(nodes_.size());
    for (size_t i = 0; i < nodes_.size(); ++i) out[i] = static_cast<int>(nodes_[i].size());
    return out;
}

long DataSetGrid::index_count() const {
    long total = 1;
    for (const auto& list : nodes_) total *= static_cast<long>(list.size());
    return total;
}

std::vector<int> DataSetGrid::unflatten(long flat) const {
    std::vector<int> m(nodes_.size());
    for (int i = arity() - 1; i >= 0; --i) {
        const long n = static_cast<long>(nodes_[i].size());
        m[i] = static_cast<int>(flat % n);
        flat /= n;
    }
    return m;
}

std::vector<double> DataSetGrid::tuple_at(const std::vector<int>& m) const {
    if (static_cast<int>(m.size()) != arity()) throw ShapeError("multi-index arity mismatch");
    std::vector<double> t(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 0 || m[i] >= static_cast<int>(nodes_[i].size()))
            throw ShapeError("multi-index out of range");
        t[i] = nodes_[i][m[i]];
    }
    return t;
}

nlohmann::json DataSetGrid::to_json() const { return grid_nodes_to_json(nodes_); }

DataSetGrid DataSetGrid::from_json(const nlohmann::json& j) {
    return DataSetGrid(grid_nodes_from_json(j));
}

// ---------------------------------------------------------------------------
// Generalized Hessian engine
// ---------------------------------------------------------------------------

namespace {

void check_anchor(const FunctionSpec& f, const DataSetGrid& grid, const std::vector<int>& m) {
    if (grid.arity() != f.arity())
        throw ShapeError("grid arity does not match the function arity");
    (void)grid.tuple_at(m); // range check
}

void check_grid_in_domain(const FunctionSpec& f, const DataSetGrid& grid) {
    const long total = grid.index_count();
    for (long flat = 0; flat < total; ++flat) {
        const std::vector<double> t = grid.tuple_at(grid.unflatten(flat));
        if (!f.contains(t)) {
            std::ostringstream msg;
            msg << "grid tuple at flat index " << flat << " lies outside the function domain";
            throw DomainError(msg.str());
        }
    }
}

// Mixed second-order difference: first-order in variable u at (xu1, xu2) of
// the first-order difference in variable s at (xs1, xs2), all remaining
// variables pinned to the anchor tuple.
double mixed_divided_diff(const FunctionSpec& f, std::vector<double> base, int u, double xu1,
                          double xu2, int s, double xs1, double xs2, double dd_tol) {
    const bool cu = std::abs(xu1 - xu2) <= dd_tol;
    const bool cs = std::abs(xs1 - xs2) <= dd_tol;
    const auto at = [&](double a, double b) -> std::vector<double>& {
        base[u] = a;
        base[s] = b;
        return base;
    };
    if (!cu && !cs) {
        const double v11 = f.eval(at(xu1, xs1));
        const double v12 = f.eval(at(xu1, xs2));
        const double v21 = f.eval(at(xu2, xs1));
        const double v22 = f.eval(at(xu2, xs2));
        return (v11 - v12 - v21 + v22) / ((xu1 - xu2) * (xs1 - xs2));
    }
    if (cu && !cs) {
        const double d1 = f.partial(u, at(xu1, xs1));
        const double d2 = f.partial(u, at(xu1, xs2));
        return (d1 - d2) / (xs1 - xs2);
    }
    if (!cu && cs) {
        const double d1 = f.partial(s, at(xu1, xs1));
        const double d2 = f.partial(s, at(xu2, xs1));
        return (d1 - d2) / (xu1 - xu2);
    }
    return f.partial2(u, s, at(xu1, xs1));
}

} // namespace

GeneralizedHessian generalized_hessian(const FunctionSpec& f, const DataSetGrid& grid,
                                       const std::vector<int>& m, double dd_tol) {
    check_anchor(f, grid, m);
    check_grid_in_domain(f, grid);

    const int k = grid.arity();
    const std::vector<int> orders = grid.orders();
    std::vector<int> offset(k, 0);
    int total = 0;
    for (int i = 0; i < k; ++i) {
        offset[i] = total;
        total += orders[i];
    }

    const std::vector<double> anchor = grid.tuple_at(m);
    GeneralMatrix h(total, total);

    // Diagonal blocks: doubled second differences in a single variable.
    for (int s = 0; s < k; ++s) {
        std::vector<double> base = anchor;
        ScalarFunction slice{
            [&f, &base, s](double x) {
                std::vector<double> t = base;
                t[s] = x;
                return f.eval(t);
            },
            [&f, &base, s](double x) {
                std::vector<double> t = base;
                t[s] = x;
                return f.partial(s, t);
            },
            [&f, &base, s](double x) {
                std::vector<double> t = base;
                t[s] = x;
                return f.partial2(s, s, t);
            }};
        const std::vector<double>& ns = grid.nodes(s);
        for (int p = 0; p < orders[s]; ++p) {
            for (int j = p; j < orders[s]; ++j) {
                const double entry = 2.0 * divided_diff_2(slice, anchor[s], ns[p], ns[j], dd_tol);
                h(offset[s] + p, offset[s] + j) = entry;
                h(offset[s] + j, offset[s] + p) = entry;
            }
        }
    }

    // Off-diagonal blocks: mixed differences; row node pairs with the anchor
    // of u, column node pairs with the anchor of s.
    for (int u = 0; u < k; ++u) {
        for (int s = u + 1; s < k; ++s) {
            const std::vector<double>& nu = grid.nodes(u);
            const std::vector<double>& ns = grid.nodes(s);
            for (int p = 0; p < orders[u]; ++p) {
                for (int j = 0; j < orders[s]; ++j) {
                    const double entry = mixed_divided_diff(f, anchor, u, nu[p], anchor[u], s,
                                                            anchor[s], ns[j], dd_tol);
                    h(offset[u] + p, offset[s] + j) = entry;
                    h(offset[s] + j, offset[u] + p) = entry;
                }
            }
        }
    }

    GeneralizedHessian out;
    out.order = orders;
    out.index = m;
    out.matrix = HermitianMatrix(h);
    return out;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

namespace {

void check_positive_grid(const DataSetGrid& grid) {
    for (int i = 0; i < grid.arity(); ++i)
        for (double x : grid.nodes(i))
            if (!(x > 0.0)) throw DomainError("grid nodes must be positive for this family");
}

} // namespace

FractionHessian closed_form_hessian_fraction(const std::vector<double>& mu,
                                             const DataSetGrid& grid,
                                             const std::vector<int>& m) {
    const int k = grid.arity();
    if (static_cast<int>(mu.size()) != k) throw ShapeError("mu arity does not match the grid");
    for (double v : mu)
        if (!(v > 0.0)) throw ConfigError("poles must be positive");
    check_positive_grid(grid);
    const std::vector<double> anchor = grid.tuple_at(m);

    const std::vector<int> orders = grid.orders();
    std::vector<int> offset(k, 0);
    int total = 0;
    for (int i = 0; i < k; ++i) {
        offset[i] = total;
        total += orders[i];
    }

    std::vector<std::vector<double>> a(k);
    for (int i = 0; i < k; ++i) {
        a[i].resize(orders[i]);
        for (int p = 0; p < orders[i]; ++p) a[i][p] = mu[i] / (grid.nodes(i)[p] + mu[i]);
    }
    double fm = 1.0;
    for (int i = 0; i < k; ++i) fm *= anchor[i] / (anchor[i] + mu[i]);

    GeneralMatrix h(total, total);
    GeneralMatrix psd(total, total);
    GeneralMatrix neg_ak(total, total);
    for (int u = 0; u < k; ++u) {
        for (int s = 0; s < k; ++s) {
            const double outer = fm / (anchor[u] * anchor[s]);
            const double ak_entry = (u == s) ? -2.0 * anchor[s] / mu[s] : 1.0;
            for (int p = 0; p < orders[u]; ++p) {
                for (int j = 0; j < orders[s]; ++j) {
                    const double rank_one = outer * a[u][p] * a[s][j];
                    psd(offset[u] + p, offset[s] + j) = rank_one;
                    neg_ak(offset[u] + p, offset[s] + j) = ak_entry;
                    h(offset[u] + p, offset[s] + j) = rank_one * ak_entry;
                }
            }
        }
    }

    FractionHessian out;
    out.hessian.order = orders;
    out.hessian.index = m;
    out.hessian.matrix = HermitianMatrix(h);
    out.psd_factor = HermitianMatrix(psd);
    out.neg_ak = HermitianMatrix(neg_ak);
    return out;
}

GeneralizedHessian closed_form_hessian_reciprocal(const DataSetGrid& grid,
                                                  const std::vector<int>& m) {
    const int k = grid.arity();
    check_positive_grid(grid);
    const std::vector<double> anchor = grid.tuple_at(m);

    const std::vector<int> orders = grid.orders();
    std::vector<int> offset(k, 0);
    int total = 0;
    for (int i = 0; i < k; ++i) {
        offset[i] = total;
        total += orders[i];
    }

    double fm = 1.0;
    for (int i = 0; i < k; ++i) fm /= anchor[i];

    GeneralMatrix h(total, total);
    for (int u = 0; u < k; ++u) {
        for (int s = 0; s < k; ++s) {
            const double factor = (u == s) ? 2.0 * fm : fm;
            for (int p = 0; p < orders[u]; ++p)
                for (int j = 0; j < orders[s]; ++j)
                    h(offset[u] + p, offset[s] + j) =
                        factor / (grid.nodes(u)[p] * grid.nodes(s)[j]);
        }
    }

    GeneralizedHessian out;
    out.order = orders;
    out.index = m;
    out.matrix = HermitianMatrix(h);
    return out;
}

// ---------------------------------------------------------------------------
// Scan
// ---------------------------------------------------------------------------

ConvexityReport hessian_scan(const FunctionSpec& f, const DataSetGrid& grid, ScanMode mode,
                             double psd_tol) {
    const long total = grid.index_count();
    std::vector<double> mins(static_cast<size_t>(total));
    std::vector<double> maxs(static_cast<size_t>(total));
    parallel_for(total, [&](long flat) {
        const GeneralizedHessian gh = generalized_hessian(f, grid, grid.unflatten(flat));
        const EigenDecomposition ed = jacobi_eigh(gh.matrix);
        mins[static_cast<size_t>(flat)] = ed.values.front();
        maxs[static_cast<size_t>(flat)] = ed.values.back();
    });

    // Margins are signed against the claimed cone so the reduction below is
    // a plain minimum in both modes.
    const auto margin_of = [&](long flat) {
        return mode == ScanMode::PSD ? mins[static_cast<size_t>(flat)]
                                     : -maxs[static_cast<size_t>(flat)];
    };

    long worst_flat = 0;
    for (long flat = 1; flat < total; ++flat)
        if (margin_of(flat) < margin_of(worst_flat)) worst_flat = flat;

    const bool fraction = f.kind() == FunctionKind::FractionProduct;
    nlohmann::json per_index = nlohmann::json::array();
    for (long flat = 0; flat < total; ++flat) {
        const std::vector<int> m = grid.unflatten(flat);
        std::vector<int> one_based(m.size());
        for (size_t i = 0; i < m.size(); ++i) one_based[i] = m[i] + 1;
        nlohmann::json rec{{"index", one_based},
                           {"tuple", grid.tuple_at(m)},
                           {"min_eigenvalue", mins[static_cast<size_t>(flat)]},
                           {"max_eigenvalue", maxs[static_cast<size_t>(flat)]},
                           {"margin", margin_of(flat)}};
        if (fraction) {
            const MembershipResult mem =
                domain_contains(DomainSpec(f.poles()), grid.tuple_at(m), psd_tol);
            rec["in_domain"] = mem.member;
            rec["domain_margin"] = mem.margin;
        }
        per_index.push_back(std::move(rec));
    }

    ConvexityReport report;
    report.trials = total;
    report.worst_margin = margin_of(worst_flat);
    if (report.worst_margin < -psd_tol) {
        report.verdict = Verdict::Violation;
    } else {
        report.verdict =
            mode == ScanMode::PSD ? Verdict::ConvexConsistent : Verdict::ConcaveConsistent;
    }
    const std::vector<int> wm = grid.unflatten(worst_flat);
    std::vector<int> wm_one(wm.size());
    for (size_t i = 0; i < wm.size(); ++i) wm_one[i] = wm[i] + 1;
    const double worst_eig = mode == ScanMode::PSD ? mins[static_cast<size_t>(worst_flat)]
                                                   : maxs[static_cast<size_t>(worst_flat)];
    report.witness = {{"index", wm_one},
                      {"tuple", grid.tuple_at(wm)},
                      {"eigenvalue", worst_eig}};
    report.extra = {{"mode", mode == ScanMode::PSD ? "PSD" : "NSD"},
                    {"worst_index", wm_one},
                    {"worst_eigenvalue", worst_eig},
                    {"per_index", per_index}};
    return report;
}

} // namespace opconvex
