// Command-line front end: suite orchestration, single-map certification,
// exponent sweeps, Hessian scans, domain queries, and pinned reproductions.
// All randomness flows from --seed; reports are deterministic given
// (version, seed, flags).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opconvex/certify.hpp"
#include "opconvex/domain.hpp"
#include "opconvex/errors.hpp"
#include "opconvex/hessian.hpp"
#include "opconvex/io.hpp"
#include "opconvex/suite.hpp"

namespace {

using nlohmann::json;

// Exit codes: 0 contract holds, 1 a check or certification failed,
// 2 usage/config problems, 3 runtime failures (I/O, convergence).
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw opconvex::ConfigError("cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

// Optional config file with the same keys as the long flags; explicit flags
// win over file values.
json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    const json j = load_json_file(path);
    if (!j.is_object()) throw opconvex::ConfigError("config file must hold a JSON object");
    return j;
}

template <typename T>
void config_fallback(const CLI::App& cmd, const std::string& flag, const json& cfg,
                     const std::string& key, T& value) {
    if (cmd.count(flag) == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

void emit(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw opconvex::ConfigError("cannot write '" + out_path + "'");
        out << text << '\n';
    }
    std::cout << text << '\n';
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw opconvex::ConfigError("bad number '" + item + "' in '" + text + "'");
        }
    }
    if (out.empty()) throw opconvex::ConfigError("empty number list '" + text + "'");
    return out;
}

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, 'x')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw opconvex::ConfigError("bad dimension list '" + text + "'");
        }
    }
    if (out.empty()) throw opconvex::ConfigError("bad dimension list '" + text + "'");
    return out;
}

// "0.2:2.0,0.2:2.0"; a single "lo:hi" is replicated across all variables.
std::vector<opconvex::Window> parse_windows(const std::string& text, std::size_t arity) {
    std::vector<opconvex::Window> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw opconvex::ConfigError("window '" + item + "' is not lo:hi");
        out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    }
    if (out.size() == 1) out.resize(arity, out[0]);
    return out;
}

// "p=0:1.4:0.1" -> inclusive arithmetic progression.
std::vector<double> parse_range(const std::string& text) {
    const std::vector<double> parts = parse_csv_doubles([&] {
        std::string t = text;
        for (char& c : t)
            if (c == ':') c = ',';
        return t;
    }());
    if (parts.size() != 3 || parts[2] <= 0.0)
        throw opconvex::ConfigError("range '" + text + "' is not start:stop:step");
    std::vector<double> out;
    for (double v = parts[0]; v <= parts[1] + parts[2] * 1e-9; v += parts[2]) out.push_back(v);
    return out;
}

bool claims_concavity(const opconvex::FunctionSpec& f) {
    switch (f.kind()) {
        case opconvex::FunctionKind::ExponentProduct:
        case opconvex::FunctionKind::FractionProduct:
            return true;
        default:
            return false;
    }
}

// ---------------------------------------------------------------------------
// suite / means
// ---------------------------------------------------------------------------

int cmd_suite(const std::string& name, std::uint64_t seed, const std::string& out_path) {
    const std::vector<opconvex::SuiteResult> suites = opconvex::run_suite(name, seed);
    emit(opconvex::emit_report(suites, seed), out_path);
    for (const opconvex::SuiteResult& s : suites) {
        for (const opconvex::CheckResult& c : s.checks)
            if (!c.pass)
                std::cerr << "check failed: " << s.name << "/" << c.id << " ("
                          << c.verdict << ", margin " << c.margin << ")\n";
        if (!s.pass()) return kExitCheckFailed;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

int cmd_certify(const std::string& target, const std::string& function_flag,
                const std::string& dims_flag, const std::string& window_flag, long trials,
                std::uint64_t seed, const std::string& out_path) {
    opconvex::MapSpec spec;
    spec.f = opconvex::FunctionSpec::parse_flag(function_flag);
    spec.dims = parse_dims(dims_flag);
    spec.concave = claims_concavity(spec.f);

    if (target == "tensor") {
        spec.target = opconvex::TargetKind::TensorCalculus;
    } else if (target == "trace") {
        spec.target = opconvex::TargetKind::TraceForm;
    } else if (target == "quadratic") {
        spec.target = opconvex::TargetKind::QuadraticForm;
        spec.windows = {{0.2, 3.0}};
    } else {
        throw opconvex::ConfigError("unknown target '" + target +
                                    "' (expected tensor, trace or quadratic)");
    }
    if (spec.windows.empty())
        spec.windows.assign(static_cast<std::size_t>(spec.f.arity()), {0.2, 2.0});
    if (!window_flag.empty())
        spec.windows = parse_windows(window_flag, static_cast<std::size_t>(spec.f.arity()));

    const opconvex::ConvexityReport report = opconvex::certify_map(spec, trials, seed);
    json j = report.to_json();
    j["config"] = spec.to_json();
    emit(j, out_path);
    return report.verdict == opconvex::Verdict::Violation ? kExitCheckFailed : kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cmd_sweep(const std::string& grid_flag, const std::string& dims_flag, long trials,
              std::uint64_t seed, const std::string& out_path) {
    std::vector<double> ps, qs;
    std::stringstream ss(grid_flag);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw opconvex::ConfigError("grid item '" + item + "' is not name=start:stop:step");
        const std::string axis = item.substr(0, eq);
        if (axis == "p")
            ps = parse_range(item.substr(eq + 1));
        else if (axis == "q")
            qs = parse_range(item.substr(eq + 1));
        else
            throw opconvex::ConfigError("unknown sweep axis '" + axis + "'");
    }
    if (ps.empty() || qs.empty())
        throw opconvex::ConfigError("--grid must define both p and q ranges");
    const std::vector<int> dims = parse_dims(dims_flag);
    if (dims.size() != 2) throw opconvex::ConfigError("sweep needs two dimensions, e.g. 3x3");

    const std::vector<opconvex::LiebCell> cells =
        opconvex::lieb_sweep(ps, qs, {dims[0], dims[1]}, trials, seed);

    bool pass = true;
    json jcells = json::array();
    for (const opconvex::LiebCell& cell : cells) {
        json jc;
        jc["p"] = cell.p;
        jc["q"] = cell.q;
        jc["verdict"] = opconvex::verdict_name(cell.report.verdict);
        jc["worst_margin"] = cell.report.worst_margin;
        jcells.push_back(jc);
        const double total = cell.p + cell.q;
        if (total <= 1.0 + 1e-12 &&
            cell.report.verdict != opconvex::Verdict::ConcaveConsistent)
            pass = false;
        if (total >= 1.2 - 1e-12 && cell.report.verdict != opconvex::Verdict::Violation)
            pass = false;
    }
    json j;
    j["seed"] = seed;
    j["trials_per_cell"] = trials;
    j["dims"] = dims;
    j["cells"] = jcells;
    j["pass"] = pass;
    emit(j, out_path);
    return pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// hessian
// ---------------------------------------------------------------------------

int cmd_hessian(const std::string& function_flag, const std::string& grid_path,
                const std::string& mode_flag, const std::string& out_path) {
    const opconvex::FunctionSpec f = opconvex::FunctionSpec::parse_flag(function_flag);
    const opconvex::DataSetGrid grid = opconvex::DataSetGrid::from_json(load_json_file(grid_path));
    opconvex::ScanMode mode;
    if (mode_flag == "nsd")
        mode = opconvex::ScanMode::NSD;
    else if (mode_flag == "psd")
        mode = opconvex::ScanMode::PSD;
    else
        throw opconvex::ConfigError("unknown mode '" + mode_flag + "' (expected nsd or psd)");

    const opconvex::ConvexityReport report = opconvex::hessian_scan(f, grid, mode);
    json j;
    j["verdict"] = opconvex::verdict_name(report.verdict);
    j["worst_index"] = report.extra.at("worst_index");
    j["worst_eigenvalue"] = report.extra.at("worst_eigenvalue");
    j["per_index"] = report.extra.at("per_index");
    emit(j, out_path);
    return report.verdict == opconvex::Verdict::Violation ? kExitCheckFailed : kExitOk;
}

// ---------------------------------------------------------------------------
// domain
// ---------------------------------------------------------------------------

int cmd_domain(const std::string& mu_flag, const std::string& point_flag,
               const std::string& out_path) {
    const opconvex::DomainSpec d(parse_csv_doubles(mu_flag));
    const std::vector<double> t = parse_csv_doubles(point_flag);
    const opconvex::MembershipResult r = opconvex::domain_contains(d, t);
    json j;
    j["member"] = r.member;
    j["margin"] = r.margin;
    j["A_k"] = opconvex::matrix_to_json(opconvex::build_Ak(d, t));
    emit(j, out_path);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// repro
// ---------------------------------------------------------------------------

int cmd_repro(const std::string& what, double eps, const std::string& out_path) {
    if (what != "t2")
        throw opconvex::ConfigError("unknown reproduction '" + what + "' (available: t2)");
    const double value = opconvex::t2_counterexample(eps);
    const bool ok = eps == 0.0 ? std::abs(value + 0.0625) <= 1e-12 : value < 0.0;
    json j;
    j["id"] = "t2_counterexample";
    j["eps"] = eps;
    j["value"] = value;
    if (eps == 0.0) j["matches_reference"] = ok;
    emit(j, out_path);
    return ok ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for multivariate matrix calculi and convexity claims"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON file with the same keys as the long flags");

    // suite / means -----------------------------------------------------
    std::string suite_name;
    CLI::App* suite_cmd = app.add_subcommand("suite", "run a named acceptance battery");
    suite_cmd->add_option("name", suite_name, "all, funcalc, means, domain, hessian or certify")
        ->required();
    suite_cmd->add_option("--seed", seed, "master random seed");
    suite_cmd->add_option("--out", out_path, "write the JSON report here as well");

    CLI::App* means_cmd = app.add_subcommand("means", "alias for 'suite means'");
    means_cmd->add_option("--seed", seed, "master random seed");
    means_cmd->add_option("--out", out_path, "write the JSON report here as well");

    // certify ------------------------------------------------------------
    std::string target = "trace", function_flag, dims_flag = "3x3", window_flag;
    long trials = 1000;
    CLI::App* certify_cmd =
        app.add_subcommand("certify", "randomized midpoint certification of one map");
    certify_cmd->add_option("--target", target, "tensor, trace or quadratic");
    certify_cmd->add_option("--function", function_flag,
                            "pow:p,q | frac:mu1,mu2 | recip:p,q | resolvent:beta=..;s=..;w=..")
        ->required();
    certify_cmd->add_option("--dims", dims_flag, "matrix sizes, e.g. 3x3");
    certify_cmd->add_option("--window", window_flag, "spectral windows lo:hi[,lo:hi...]");
    certify_cmd->add_option("--trials", trials, "midpoint trials");
    certify_cmd->add_option("--seed", seed, "master random seed");
    certify_cmd->add_option("--out", out_path, "write the JSON report here as well");

    // sweep ----------------------------------------------------------------
    std::string grid_flag;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "exponent grid of trace certifications");
    sweep_cmd->add_option("--grid", grid_flag, "p=start:stop:step,q=start:stop:step")->required();
    sweep_cmd->add_option("--dims", dims_flag, "matrix sizes, e.g. 3x3");
    sweep_cmd->add_option("--trials", trials, "midpoint trials per cell");
    sweep_cmd->add_option("--seed", seed, "master random seed");
    sweep_cmd->add_option("--out", out_path, "write the JSON report here as well");

    // hessian ----------------------------------------------------------------
    std::string grid_path, mode_flag = "nsd";
    CLI::App* hessian_cmd =
        app.add_subcommand("hessian", "definiteness scan of generalized Hessians on a grid");
    hessian_cmd->add_option("--function", function_flag, "function flag, e.g. frac:1,1")
        ->required();
    hessian_cmd->add_option("--grid", grid_path, "JSON file {\"nodes\": [[...],...]}")->required();
    hessian_cmd->add_option("--mode", mode_flag, "nsd or psd");
    hessian_cmd->add_option("--out", out_path, "write the JSON report here as well");

    // domain --------------------------------------------------------------
    std::string mu_flag, point_flag;
    CLI::App* domain_cmd = app.add_subcommand("domain", "concavity-domain membership query");
    domain_cmd->add_option("--mu", mu_flag, "pole list, e.g. 1,1")->required();
    domain_cmd->add_option("--point", point_flag, "tuple to test, e.g. 0.5,0.5")->required();
    domain_cmd->add_option("--out", out_path, "write the JSON report here as well");

    // repro ------------------------------------------------------------------
    std::string repro_what;
    double eps = 0.0;
    CLI::App* repro_cmd = app.add_subcommand("repro", "pinned reference reproductions");
    repro_cmd->add_option("what", repro_what, "reproduction id (t2)")->required();
    repro_cmd->add_option("--eps", eps, "diagonal perturbation of the pinned instance");
    repro_cmd->add_option("--out", out_path, "write the JSON report here as well");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const json cfg = load_config(config_path);
        if (app.got_subcommand(suite_cmd)) {
            config_fallback(*suite_cmd, "--seed", cfg, "seed", seed);
            config_fallback(*suite_cmd, "--out", cfg, "out", out_path);
            return cmd_suite(suite_name, seed, out_path);
        }
        if (app.got_subcommand(means_cmd)) {
            config_fallback(*means_cmd, "--seed", cfg, "seed", seed);
            config_fallback(*means_cmd, "--out", cfg, "out", out_path);
            return cmd_suite("means", seed, out_path);
        }
        if (app.got_subcommand(certify_cmd)) {
            config_fallback(*certify_cmd, "--target", cfg, "target", target);
            config_fallback(*certify_cmd, "--dims", cfg, "dims", dims_flag);
            config_fallback(*certify_cmd, "--window", cfg, "window", window_flag);
            config_fallback(*certify_cmd, "--trials", cfg, "trials", trials);
            config_fallback(*certify_cmd, "--seed", cfg, "seed", seed);
            return cmd_certify(target, function_flag, dims_flag, window_flag, trials, seed,
                               out_path);
        }
        if (app.got_subcommand(sweep_cmd)) {
            config_fallback(*sweep_cmd, "--dims", cfg, "dims", dims_flag);
            config_fallback(*sweep_cmd, "--trials", cfg, "trials", trials);
            config_fallback(*sweep_cmd, "--seed", cfg, "seed", seed);
            return cmd_sweep(grid_flag, dims_flag, trials, seed, out_path);
        }
        if (app.got_subcommand(hessian_cmd)) {
            config_fallback(*hessian_cmd, "--mode", cfg, "mode", mode_flag);
            return cmd_hessian(function_flag, grid_path, mode_flag, out_path);
        }
        if (app.got_subcommand(domain_cmd)) return cmd_domain(mu_flag, point_flag, out_path);
        if (app.got_subcommand(repro_cmd)) {
            config_fallback(*repro_cmd, "--eps", cfg, "eps", eps);
            return cmd_repro(repro_what, eps, out_path);
        }
    } catch (const opconvex::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        std::cerr << app.help() << '\n';
        return kExitUsage;
    } catch (const opconvex::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
