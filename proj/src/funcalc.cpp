#include "opconvex/funcalc.hpp"

#include <cmath>
#include <sstream>

namespace opconvex {

namespace {

std::string format_number(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string format_tuple(const std::vector<double>& t) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) os << ", ";
        os << t[i];
    }
    os << ")";
    return os.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& piece : split(text, ',')) {
        try {
            size_t used = 0;
            const double v = std::stod(piece, &used);
            if (used != piece.size()) throw std::invalid_argument(piece);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("could not parse number '" + piece + "'");
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// FunctionSpec
// ---------------------------------------------------------------------------

FunctionSpec FunctionSpec::exponent_product(std::vector<double> p) {
    if (p.empty()) throw ConfigError("exponent product needs at least one exponent");
    for (double e : p)
        if (!(e >= 0.0)) throw ConfigError("exponent product requires exponents >= 0");
    FunctionSpec f;
    f.kind_ = FunctionKind::ExponentProduct;
    f.arity_ = static_cast<int>(p.size());
    f.p_ = std::move(p);
    return f;
}

FunctionSpec FunctionSpec::fraction_product(std::vector<double> mu) {
    if (mu.empty()) throw ConfigError("fraction product needs at least one pole");
    for (double m : mu)
        if (!(m > 0.0)) throw ConfigError("fraction product requires poles > 0");
    FunctionSpec f;
    f.kind_ = FunctionKind::FractionProduct;
    f.arity_ = static_cast<int>(mu.size());
    f.mu_ = std::move(mu);
    return f;
}

FunctionSpec FunctionSpec::reciprocal_product(std::vector<double> p) {
    if (p.empty()) throw ConfigError("reciprocal product needs at least one exponent");
    for (double e : p)
        if (!(e >= 0.0 && e <= 1.0))
            throw ConfigError("reciprocal product requires exponents in [0, 1]");
    FunctionSpec f;
    f.kind_ = FunctionKind::ReciprocalProduct;
    f.arity_ = static_cast<int>(p.size());
    f.p_ = std::move(p);
    return f;
}

FunctionSpec FunctionSpec::resolvent_sum(double beta, std::vector<double> nodes,
                                         std::vector<double> weights) {
    if (nodes.size() != weights.size())
        throw ConfigError("resolvent sum needs one weight per node");
    for (double s : nodes)
        if (!(s >= 0.0)) throw ConfigError("resolvent sum requires nodes >= 0");
    for (double w : weights)
        if (!(w > 0.0)) throw ConfigError("resolvent sum requires weights > 0");
    FunctionSpec f;
    f.kind_ = FunctionKind::ResolventSum;
    f.arity_ = 1;
    f.beta_ = beta;
    f.nodes_ = std::move(nodes);
    f.weights_ = std::move(weights);
    return f;
}

FunctionSpec FunctionSpec::custom(int arity, EvalFn eval, DomainFn domain, Partial1Fn d1,
                                  Partial2Fn d2) {
    if (arity < 1) throw ConfigError("custom function needs arity >= 1");
    if (!eval || !domain) throw ConfigError("custom function needs eval and domain callables");
    FunctionSpec f;
    f.kind_ = FunctionKind::Custom;
    f.arity_ = arity;
    f.eval_ = std::move(eval);
    f.domain_ = std::move(domain);
    f.d1_ = std::move(d1);
    f.d2_ = std::move(d2);
    return f;
}

bool FunctionSpec::contains(const std::vector<double>& t) const {
    if (static_cast<int>(t.size()) != arity_) throw ShapeError("argument count mismatch");
    switch (kind_) {
    case FunctionKind::ExponentProduct:
    case FunctionKind::FractionProduct:
    case FunctionKind::ReciprocalProduct:
        for (double x : t)
            if (!(x > 0.0)) return false;
        return true;
    case FunctionKind::ResolventSum:
        return t[0] > 0.0;
    case FunctionKind::Custom:
        return domain_(t);
    }
    return false;
}

double FunctionSpec::eval(const std::vector<double>& t) const {
    if (static_cast<int>(t.size()) != arity_) throw ShapeError("argument count mismatch");
    switch (kind_) {
    case FunctionKind::ExponentProduct: {
        double acc = 1.0;
        for (int i = 0; i < arity_; ++i) acc *= std::pow(t[i], p_[i]);
        return acc;
    }
    case FunctionKind::FractionProduct: {
        double acc = 1.0;
        for (int i = 0; i < arity_; ++i) acc *= t[i] / (t[i] + mu_[i]);
        return acc;
    }
    case FunctionKind::ReciprocalProduct: {
        double acc = 1.0;
        for (int i = 0; i < arity_; ++i) acc *= std::pow(t[i], -p_[i]);
        return acc;
    }
    case FunctionKind::ResolventSum: {
        double acc = beta_;
        for (size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] / (t[0] + nodes_[i]);
        return acc;
    }
    case FunctionKind::Custom:
        return eval_(t);
    }
    throw ConfigError("unreachable function kind");
}

bool FunctionSpec::has_derivatives() const {
    if (kind_ == FunctionKind::Custom) return static_cast<bool>(d1_) && static_cast<bool>(d2_);
    return true;
}

double FunctionSpec::partial(int i, const std::vector<double>& t) const {
    if (i < 0 || i >= arity_) throw ShapeError("partial derivative index out of range");
    switch (kind_) {
    case FunctionKind::ExponentProduct:
        return p_[i] / t[i] * eval(t);
    case FunctionKind::ReciprocalProduct:
        return -p_[i] / t[i] * eval(t);
    case FunctionKind::FractionProduct:
        return eval(t) * mu_[i] / (t[i] * (t[i] + mu_[i]));
    case FunctionKind::ResolventSum: {
        double acc = 0.0;
        for (size_t j = 0; j < nodes_.size(); ++j) {
            const double d = t[0] + nodes_[j];
            acc -= weights_[j] / (d * d);
        }
        return acc;
    }
    case FunctionKind::Custom:
        if (!d1_) throw ConfigError("custom function has no first-derivative callback");
        return d1_(i, t);
    }
    throw ConfigError("unreachable function kind");
}

double FunctionSpec::partial2(int i, int j, const std::vector<double>& t) const {
    if (i < 0 || i >= arity_ || j < 0 || j >= arity_)
        throw ShapeError("partial derivative index out of range");
    switch (kind_) {
    case FunctionKind::ExponentProduct: {
        const double f = eval(t);
        if (i == j) return p_[i] * (p_[i] - 1.0) / (t[i] * t[i]) * f;
        return p_[i] * p_[j] / (t[i] * t[j]) * f;
    }
    case FunctionKind::ReciprocalProduct: {
        const double f = eval(t);
        if (i == j) return -p_[i] * (-p_[i] - 1.0) / (t[i] * t[i]) * f;
        return p_[i] * p_[j] / (t[i] * t[j]) * f;
    }
    case FunctionKind::FractionProduct: {
        const double f = eval(t);
        if (i == j) {
            const double d = t[i] + mu_[i];
            return -2.0 * f * mu_[i] / (t[i] * d * d);
        }
        return f * mu_[i] * mu_[j] / (t[i] * t[j] * (t[i] + mu_[i]) * (t[j] + mu_[j]));
    }
    case FunctionKind::ResolventSum: {
        double acc = 0.0;
        for (size_t l = 0; l < nodes_.size(); ++l) {
            const double d = t[0] + nodes_[l];
            acc += 2.0 * weights_[l] / (d * d * d);
        }
        return acc;
    }
    case FunctionKind::Custom:
        if (!d2_) throw ConfigError("custom function has no second-derivative callback");
        return d2_(i, j, t);
    }
    throw ConfigError("unreachable function kind");
}

std::string FunctionSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case FunctionKind::ExponentProduct:
        for (int i = 0; i < arity_; ++i) {
            if (i) os << " * ";
            os << "t" << (i + 1) << "^" << format_number(p_[i]);
        }
        return os.str();
    case FunctionKind::ReciprocalProduct:
        for (int i = 0; i < arity_; ++i) {
            if (i) os << " * ";
            os << "t" << (i + 1) << "^-" << format_number(p_[i]);
        }
        return os.str();
    case FunctionKind::FractionProduct:
        for (int i = 0; i < arity_; ++i) {
            if (i) os << " * ";
            os << "t" << (i + 1) << "/(t" << (i + 1) << "+" << format_number(mu_[i]) << ")";
        }
        return os.str();
    case FunctionKind::ResolventSum:
        os << format_number(beta_);
        for (size_t i = 0; i < nodes_.size(); ++i)
            os << " + " << format_number(weights_[i]) << "/(t+" << format_number(nodes_[i]) << ")";
        return os.str();
    case FunctionKind::Custom:
        os << "custom(k=" << arity_ << ")";
        return os.str();
    }
    return "?";
}

nlohmann::json FunctionSpec::to_json() const {
    switch (kind_) {
    case FunctionKind::ExponentProduct:
        return {{"kind", "exponent_product"}, {"p", p_}};
    case FunctionKind::FractionProduct:
        return {{"kind", "fraction_product"}, {"mu", mu_}};
    case FunctionKind::ReciprocalProduct:
        return {{"kind", "reciprocal_product"}, {"p", p_}};
    case FunctionKind::ResolventSum:
        return {{"kind", "resolvent_sum"}, {"beta", beta_}, {"nodes", nodes_},
                {"weights", weights_}};
    case FunctionKind::Custom:
        throw ConfigError("custom function specs cannot be serialized");
    }
    throw ConfigError("unreachable function kind");
}

FunctionSpec FunctionSpec::from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "exponent_product")
            return exponent_product(j.at("p").get<std::vector<double>>());
        if (kind == "fraction_product")
            return fraction_product(j.at("mu").get<std::vector<double>>());
        if (kind == "reciprocal_product")
            return reciprocal_product(j.at("p").get<std::vector<double>>());
        if (kind == "resolvent_sum")
            return resolvent_sum(j.value("beta", 0.0), j.at("nodes").get<std::vector<double>>(),
                                 j.at("weights").get<std::vector<double>>());
        throw ConfigError("unknown function kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed function spec: ") + e.what());
    }
}

FunctionSpec FunctionSpec::parse_flag(const std::string& text) {
    const size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw ConfigError("function flag must look like pow:..., frac:..., recip:... or "
                          "resolvent:...; got '" + text + "'");
    const std::string head = text.substr(0, colon);
    const std::string body = text.substr(colon + 1);
    if (head == "pow") return exponent_product(parse_number_list(body));
    if (head == "frac") return fraction_product(parse_number_list(body));
    if (head == "recip") return reciprocal_product(parse_number_list(body));
    if (head == "resolvent") {
        double beta = 0.0;
        std::vector<double> nodes;
        std::vector<double> weights;
        bool have_s = false, have_w = false;
        for (const std::string& piece : split(body, ';')) {
            const size_t eq = piece.find('=');
            if (eq == std::string::npos)
                throw ConfigError("resolvent flag pieces must look like key=values; got '" +
                                  piece + "'");
            const std::string key = piece.substr(0, eq);
            const std::string val = piece.substr(eq + 1);
            if (key == "beta") {
                beta = parse_number_list(val).at(0);
            } else if (key == "s") {
                nodes = parse_number_list(val);
                have_s = true;
            } else if (key == "w") {
                weights = parse_number_list(val);
                have_w = true;
            } else {
                throw ConfigError("unknown resolvent key '" + key + "'");
            }
        }
        if (!have_s || !have_w) throw ConfigError("resolvent flag needs s=... and w=...");
        return resolvent_sum(beta, std::move(nodes), std::move(weights));
    }
    throw ConfigError("unknown function flag prefix '" + head + "'");
}

// ---------------------------------------------------------------------------
// Tensor calculi
// ---------------------------------------------------------------------------

namespace {

long checked_total_dim(const std::vector<int>& dims) {
    if (dims.empty()) throw ShapeError("tensor needs at least one factor");
    long total = 1;
    for (int n : dims) {
        if (n < 1) throw ShapeError("tensor factor dimensions must be >= 1");
        total *= n;
        if (total > kTensorDimCap) {
            std::ostringstream msg;
            msg << "tensor space dimension exceeds the cap of " << kTensorDimCap;
            throw ConfigError(msg.str());
        }
    }
    return total;
}

HermitianMatrix tensor_calc_impl(const FunctionSpec& f, const std::vector<HermitianMatrix>& xs,
                                 const std::vector<bool>& conj_factor, double cluster_tol) {
    const int k = f.arity();
    if (static_cast<int>(xs.size()) != k)
        throw ShapeError("number of matrix arguments does not match function arity");

    std::vector<int> dims;
    dims.reserve(xs.size());
    for (const HermitianMatrix& x : xs) dims.push_back(x.dim());
    const long total = checked_total_dim(dims);

    std::vector<SpectralData> sd;
    sd.reserve(xs.size());
    for (const HermitianMatrix& x : xs) sd.push_back(spectral_decompose(x, cluster_tol));

    GeneralMatrix acc(static_cast<int>(total), static_cast<int>(total));
    std::vector<double> tuple(k);
    std::function<void(int, const GeneralMatrix&)> recurse = [&](int idx,
                                                                 const GeneralMatrix& part) {
        if (idx == k) {
            if (!f.contains(tuple))
                throw DomainError("eigenvalue tuple " + format_tuple(tuple) +
                                  " lies outside the function domain");
            acc = acc + part * Complex(f.eval(tuple), 0.0);
            return;
        }
        for (size_t j = 0; j < sd[idx].eigenvalues.size(); ++j) {
            tuple[idx] = sd[idx].eigenvalues[j];
            GeneralMatrix proj = sd[idx].projections[j].matrix();
            if (conj_factor[idx]) proj = proj.conjugate();
            recurse(idx + 1, kronecker_product(part, proj));
        }
    };
    recurse(0, GeneralMatrix::identity(1));
    return HermitianMatrix(acc);
}

} // namespace

TensorVector::TensorVector(std::vector<int> dims_in) : dims(std::move(dims_in)) {
    coeffs.assign(static_cast<size_t>(checked_total_dim(dims)), Complex{});
}

TensorVector::TensorVector(std::vector<int> dims_in, std::vector<Complex> coeffs_in)
    : dims(std::move(dims_in)), coeffs(std::move(coeffs_in)) {
    if (static_cast<long>(coeffs.size()) != checked_total_dim(dims))
        throw ShapeError("tensor coefficient count does not match the factor dimensions");
}

double TensorVector::norm() const {
    double acc = 0.0;
    for (const Complex& c : coeffs) acc += std::norm(c);
    return std::sqrt(acc);
}

HermitianMatrix func_calc_tensor(const FunctionSpec& f, const std::vector<HermitianMatrix>& xs,
                                 double cluster_tol) {
    return tensor_calc_impl(f, xs, std::vector<bool>(xs.size(), false), cluster_tol);
}

HermitianMatrix func_calc_tensor_conj(const FunctionSpec& f, const HermitianMatrix& a,
                                      const HermitianMatrix& b, double cluster_tol) {
    if (f.arity() != 2) throw ShapeError("conjugate-space tensor calculus requires arity 2");
    return tensor_calc_impl(f, {a, b}, {false, true}, cluster_tol);
}

GeneralMatrix func_calc_variant(const FunctionSpec& f, const HermitianMatrix& a,
                                const HermitianMatrix& b, const GeneralMatrix& k,
                                double cluster_tol) {
    if (f.arity() != 2) throw ShapeError("variant calculus requires arity 2");
    if (k.rows() != a.dim() || k.cols() != b.dim())
        throw ShapeError("argument matrix must have shape dim(A) x dim(B)");

    const SpectralData sa = spectral_decompose(a, cluster_tol);
    const SpectralData sb = spectral_decompose(b, cluster_tol);

    GeneralMatrix acc(k.rows(), k.cols());
    for (size_t i = 0; i < sa.eigenvalues.size(); ++i) {
        const GeneralMatrix pik = sa.projections[i].matrix() * k;
        for (size_t j = 0; j < sb.eigenvalues.size(); ++j) {
            const std::vector<double> tuple{sa.eigenvalues[i], sb.eigenvalues[j]};
            if (!f.contains(tuple))
                throw DomainError("eigenvalue tuple " + format_tuple(tuple) +
                                  " lies outside the function domain");
            acc = acc + pik * sb.projections[j].matrix() * Complex(f.eval(tuple), 0.0);
        }
    }
    return acc;
}

GeneralMatrix phi_map(const TensorVector& phi) {
    if (phi.dims.size() != 2) throw ShapeError("phi_map requires a two-factor tensor");
    const int n1 = phi.dims[0];
    const int n2 = phi.dims[1];
    GeneralMatrix out(n1, n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) out(i, j) = phi.coeffs[static_cast<size_t>(i) * n2 + j];
    return out;
}

TensorVector phi_inverse(const GeneralMatrix& k) {
    TensorVector phi({k.rows(), k.cols()});
    for (int i = 0; i < k.rows(); ++i)
        for (int j = 0; j < k.cols(); ++j)
            phi.coeffs[static_cast<size_t>(i) * k.cols() + j] = k(i, j);
    return phi;
}

double intertwine_check(const FunctionSpec& f, const HermitianMatrix& a, const HermitianMatrix& b,
                        const TensorVector& phi) {
    if (phi.dims.size() != 2 || phi.dims[0] != a.dim() || phi.dims[1] != b.dim())
        throw ShapeError("tensor dimensions must match the matrix arguments");
    const HermitianMatrix op = func_calc_tensor_conj(f, a, b);
    const TensorVector mapped(phi.dims, op.matrix().apply(phi.coeffs));
    const GeneralMatrix lhs = phi_map(mapped);
    const GeneralMatrix rhs = func_calc_variant(f, a, b, phi_map(phi));
    return frobenius_distance(lhs, rhs);
}

double trace_form(const FunctionSpec& f, const HermitianMatrix& a, const HermitianMatrix& b,
                  const GeneralMatrix& k) {
    if (k.rows() != b.dim() || k.cols() != a.dim())
        throw ShapeError("trace form expects K of shape dim(B) x dim(A)");
    const GeneralMatrix kstar = k.adjoint();
    const GeneralMatrix v = func_calc_variant(f, a, b, kstar);
    return (v * k).trace().real();
}

} // namespace opconvex
