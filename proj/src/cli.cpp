#include "saext/cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "saext/anomaly.hpp"
#include "saext/classical.hpp"
#include "saext/deficiency.hpp"
#include "saext/discrete.hpp"
#include "saext/extension.hpp"
#include "saext/geometry.hpp"
#include "saext/io.hpp"
#include "saext/spectral.hpp"

namespace saext::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxSweepPoints = 1'000'000;

const std::vector<std::string> kSubcommands = {"deficiency", "extend",  "spectrum",
                                               "boundstate", "scatter", "anomaly",
                                               "paradox",    "classical", "geometry",
                                               "sweep"};

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

double parse_real(std::string_view text) {
    std::string s(text);
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "inf" || s == "+inf" || s == "infinity" || s == "dirichlet") return infinity;
    if (s == "-inf" || s == "-infinity") return -infinity;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw CLI::ValidationError("not a number: " + std::string(text));
    }
    if (used != s.size()) throw CLI::ValidationError("not a number: " + std::string(text));
    return v;
}

Interval parse_interval(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
        throw CLI::ValidationError("--interval expects a,b");
    }
    const double a = parse_real(text.substr(0, comma));
    const double b = parse_real(text.substr(comma + 1));
    if (std::isinf(a) && a < 0 && std::isinf(b) && b > 0) return Interval::full_line();
    if (std::isinf(b) && b > 0) return Interval::half_line(a);
    return Interval::finite(a, b);
}

json interval_json(const Interval& iv) {
    json j{{"kind", to_string(iv.kind())}};
    j["a"] = std::isfinite(iv.a()) ? json(iv.a()) : json(nullptr);
    j["b"] = std::isfinite(iv.b()) ? json(iv.b()) : json(nullptr);
    return j;
}

UnitSystem parse_units(const std::string& text) {
    UnitSystem u;
    if (text.empty()) return u;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--units expects key=value pairs");
        const std::string key = item.substr(0, eq);
        const double v = parse_real(item.substr(eq + 1));
        if (key == "hbar") {
            u.hbar = v;
        } else if (key == "two_m") {
            u.two_m = v;
        } else {
            throw CLI::ValidationError("unknown unit key: " + key);
        }
    }
    return UnitSystem::make(u.hbar, u.two_m);
}

// Every value lives here so CLI11 can bind to it; each subcommand reads the
// fields it declares.
struct Options {
    bool json_out = false;
    bool csv_out = false;
    std::string units;
    std::optional<double> tol;
    std::size_t grid_n = 0;
    std::uint64_t seed = 0;
    std::string out;

    std::string op;
    std::string interval;
    double lambda = 1.0;
    std::size_t basis_samples = 11;

    double gamma = 0.0;

    double theta = 0.0;
    int n_min = -5;
    int n_max = 5;
    double length = 1.0;
    std::string alpha = "-1";

    bool shooting = false;
    double k = 1.0;
    double t = 0.0;

    int id = 1;
    std::size_t n = 0;
    double l = 1.0;
    int trials = 100;
    int m = 12;

    std::string s = "-2";
    double g = 1.0;
    double q0 = 1.0;
    double p0 = 0.3;
    double t_end = 5.0;

    std::string metric = "polar";
    std::string probe = "bump:1,2";

    std::string target;
    std::vector<std::string> sweeps;
};

struct Resolved {
    UnitSystem units;
    double tol = 0.0;
    std::string tol_source;
};

double default_tolerance(std::string_view cmd) {
    if (cmd == "deficiency") return 1e-4;
    if (cmd == "extend") return 1e-12;
    if (cmd == "spectrum") return 1e-8;
    if (cmd == "boundstate") return 1e-6;
    if (cmd == "scatter") return 1e-14;
    if (cmd == "anomaly") return 1e-6;
    if (cmd == "paradox") return 1e-8;
    if (cmd == "classical") return 1e-10;
    if (cmd == "geometry") return 1e-8;
    return 1e-6;
}

Resolved resolve(const Options& o, std::string_view cmd) {
    Resolved r;
    r.units = parse_units(o.units);
    if (o.tol) {
        r.tol = *o.tol;
        r.tol_source = "flag";
    } else if (const char* env = std::getenv("SAEXT_TOL"); env && *env) {
        r.tol = parse_real(env);
        r.tol_source = "env";
    } else {
        r.tol = default_tolerance(cmd);
        r.tol_source = "default";
    }
    if (!(r.tol > 0.0)) throw CLI::ValidationError("tolerance must be positive");
    return r;
}

std::size_t grid_or(const Options& o, std::size_t fallback) {
    if (o.grid_n == 0) return fallback;
    if (o.grid_n < 5) throw CLI::ValidationError("--grid-n must be at least 5");
    return o.grid_n;
}

json decimated(const GridFunction& f, std::size_t samples) {
    const std::size_t n = f.size();
    const std::size_t count = std::min(std::max<std::size_t>(samples, 2), n);
    json xs = json::array(), re = json::array(), im = json::array();
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t idx = (count == 1) ? 0 : i * (n - 1) / (count - 1);
        xs.push_back(f.xs()[idx]);
        re.push_back(f[idx].real());
        im.push_back(f[idx].imag());
    }
    return {{"xs", xs}, {"re", re}, {"im", im}};
}

OperatorKind parse_operator(const std::string& op) {
    if (op == "momentum") return OperatorKind::momentum;
    if (op == "hamiltonian") return OperatorKind::free_hamiltonian;
    if (op == "time") return OperatorKind::time_operator;
    throw CLI::ValidationError("unknown operator " + op);
}

// ---------------------------------------------------------------------------
// Subcommands

json run_deficiency(const Options& o, const Resolved& r) {
    const OperatorKind kind = parse_operator(o.op);
    std::string iv_text = o.interval;
    if (iv_text.empty()) iv_text = kind == OperatorKind::momentum ? "0,1" : "0,inf";
    const auto spec = OperatorSpec::make(kind, parse_interval(iv_text), r.units);
    DeficiencyOptions opts;
    opts.grid_points = grid_or(o, opts.grid_points);
    const auto rep = solve_deficiency(spec, o.lambda, opts);
    const double residual = verify_deficiency_numerically(spec, rep);
    json candidates = json::array();
    for (const auto& c : rep.candidates) {
        candidates.push_back({{"sign", c.sign}, {"tag", c.tag}, {"square_integrable", c.square_integrable}});
    }
    json basis = json::array();
    auto add_basis = [&](const std::vector<GridFunction>& fns, int sign) {
        for (const auto& f : fns) {
            json b = decimated(f, o.basis_samples);
            b["sign"] = sign;
            b["tag"] = f.closed_form() ? f.closed_form()->tag : "";
            basis.push_back(std::move(b));
        }
    };
    add_basis(rep.basis_plus, +1);
    add_basis(rep.basis_minus, -1);
    return {{"op", to_string(kind)},
            {"interval", interval_json(spec.interval())},
            {"lambda", rep.lambda},
            {"n_plus", rep.n_plus},
            {"n_minus", rep.n_minus},
            {"classification",
             {{"kind", to_string(rep.classification.kind)},
              {"param_dim", rep.classification.param_dim}}},
            {"candidates", candidates},
            {"residual", residual},
            {"residual_ok", residual <= r.tol},
            {"basis", basis}};
}

json run_extend(const Options& o, const Resolved& r) {
    BoundaryCondition bc;
    if (o.op == "momentum") {
        bc = momentum_bc_from_unitary(o.gamma, Interval::finite(0.0, 1.0), 1.0 / r.units.hbar);
    } else if (o.op == "hamiltonian") {
        bc = halfline_bc_from_unitary(o.gamma, r.units);
    } else {
        throw Error(Errc::unsupported_extension, "no extension family for this operator", o.op);
    }
    json j{{"gamma", wrap_angle(o.gamma)}, {"bc_variant", variant_name(bc)}, {"dirichlet_limit", false}};
    if (const auto* p = std::get_if<PhaseCondition>(&bc)) {
        j["value"] = p->theta;
    } else if (const auto* rb = std::get_if<RobinCondition>(&bc)) {
        j["dirichlet_limit"] = rb->is_dirichlet_limit();
        j["value"] = rb->is_dirichlet_limit() ? json(nullptr) : json(rb->alpha);
    }
    return j;
}

json phase_samples(double alpha) {
    json samples = json::array();
    for (int i = 1; i <= 20; ++i) {
        const double k = 0.25 * i;
        samples.push_back({{"k", k}, {"theta", reflection_coefficient(k, alpha).phase}});
    }
    return samples;
}

json run_spectrum(const Options& o, const Resolved& r) {
    SpectrumResult res;
    json params{{"op", o.op}};
    const std::size_t n_grid = grid_or(o, 2001);
    std::optional<double> alpha;
    if (o.op == "momentum") {
        res = momentum_spectrum(o.theta, Interval::finite(0.0, o.length), o.n_min, o.n_max, n_grid);
        for (auto& e : res.discrete) e.value *= r.units.hbar;
        params["theta"] = o.theta;
        params["length"] = o.length;
    } else if (o.op == "well") {
        res = well_spectrum(o.length, o.n_min, o.n_max, n_grid, r.units);
        params["length"] = o.length;
    } else if (o.op == "hamiltonian") {
        alpha = parse_real(o.alpha);
        res = halfline_spectrum(*alpha, grid_or(o, 20001));
        params["alpha"] = std::isinf(*alpha) ? json("inf") : json(*alpha);
    } else {
        throw CLI::ValidationError("--op must be momentum, well or hamiltonian");
    }
    params["n_min"] = o.n_min;
    params["n_max"] = o.n_max;
    json discrete = json::array();
    for (const auto& e : res.discrete) {
        discrete.push_back({{"n", e.n}, {"value", e.value}, {"norm", norm(e.eigenfunction)}});
    }
    json continuous = nullptr;
    if (res.continuous) {
        continuous = {{"threshold", res.continuous->threshold},
                      {"phase_samples", phase_samples(*alpha)}};
    }
    return {{"params", params}, {"discrete", discrete}, {"continuous", continuous}};
}

json run_boundstate(const Options& o, const Resolved& r) {
    const double alpha = parse_real(o.alpha);
    const auto bs = bound_state(alpha, grid_or(o, 20001));
    if (!bs) {
        return {{"alpha", std::isinf(alpha) ? json("inf") : json(alpha)},
                {"bound_state", nullptr},
                {"reason", "alpha >= 0"}};
    }
    json j{{"alpha", alpha}, {"E", bs->energy}, {"norm", norm(bs->psi)},
           {"psi0", bs->psi.front().real()}};
    if (o.shooting) {
        const double e = bound_state_shooting(alpha);
        j["shooting_E"] = e;
        j["shooting_error"] = std::abs(e - bs->energy);
        j["shooting_ok"] = std::abs(e - bs->energy) <= r.tol;
    }
    return j;
}

json run_scatter(const Options& o, const Resolved& r) {
    const double alpha = parse_real(o.alpha);
    const auto refl = reflection_coefficient(o.k, alpha);
    const double x_max = 10.0 * two_pi / o.k;
    const auto psi = scattering_state(o.k, alpha, uniform_grid(0.0, x_max, grid_or(o, 20001)));
    // Robin residual from the closed form: psi'(0) = -ik + ik R, psi(0) = 1 + R.
    const cplx d0 = cplx(0.0, o.k) * (refl.R - 1.0);
    const double residual = std::isinf(alpha) ? std::abs(1.0 + refl.R)
                                              : std::abs(d0 - alpha * (1.0 + refl.R));
    const double unitarity = std::abs(std::abs(refl.R) - 1.0);
    return {{"k", o.k},
            {"alpha", std::isinf(alpha) ? json("inf") : json(alpha)},
            {"R", complex_json(refl.R)},
            {"abs_R", std::abs(refl.R)},
            {"phase", refl.phase},
            {"unitarity_defect", unitarity},
            {"unitarity_ok", unitarity <= r.tol},
            {"robin_residual", residual},
            {"psi0", complex_json(psi.front())}};
}

json run_anomaly(const Options& o, const Resolved& r) {
    const double alpha = parse_real(o.alpha);
    const auto rep = anomaly_quadrature(alpha, o.t, grid_or(o, 40001));
    return {{"alpha", rep.alpha},
            {"t", rep.t},
            {"term_HD", complex_json(rep.term_HD)},
            {"term_H_of_D", complex_json(rep.term_H_of_D)},
            {"t_piece_HD", complex_json(rep.t_piece_HD)},
            {"scale_piece_HD", complex_json(rep.scale_piece_HD)},
            {"t_piece_H_of_D", complex_json(rep.t_piece_H_of_D)},
            {"scale_piece_H_of_D", complex_json(rep.scale_piece_H_of_D)},
            {"anomaly", rep.anomaly},
            {"anomaly_imag", rep.anomaly_complex.imag()},
            {"bound_energy", rep.bound_energy},
            {"residual", rep.residual},
            {"ok", rep.residual <= r.tol}};
}

json paradox_json(const ParadoxReport& rep) {
    json q = json::array();
    for (const auto& x : rep.quantities) {
        q.push_back({{"name", x.name}, {"re", x.value.real()}, {"im", x.value.imag()},
                     {"tolerance", x.tolerance}});
    }
    return {{"id", rep.id}, {"quantities", q}, {"verdict", rep.verdict}};
}

json run_paradox(const Options& o, const Resolved& r) {
    ParadoxReport rep;
    switch (o.id) {
        case 1: rep = eigenvector_commutator_demo(o.theta, o.n ? o.n : 1024, 1, r.units.hbar); break;
        case 2: rep = trace_commutator_check(o.n ? o.n : 8, o.trials, o.seed, r.units.hbar); break;
        case 3: rep = commuting_observables_demo(o.l, o.n ? static_cast<int>(o.n) : 5, grid_or(o, 20001)); break;
        case 4: rep = cosine_basis_report(o.l, o.n ? static_cast<int>(o.n) : o.m); break;
        default: throw CLI::ValidationError("--id must be 1, 2, 3 or 4");
    }
    return paradox_json(rep);
}

json run_classical(const Options& o, const Resolved& r) {
    const PowerLawPotential V{o.g, Rational::parse(o.s)};
    const auto drift = dilatation_drift(V, {o.q0, o.p0}, o.t_end, r.tol, r.units.two_m);
    return {{"s", V.s.to_string()},
            {"g", V.g},
            {"q0", o.q0},
            {"p0", o.p0},
            {"t_end", o.t_end},
            {"two_m", r.units.two_m},
            {"drift", drift.max_drift},
            {"final_drift", drift.final_drift},
            {"predicted_drift", drift.predicted_drift},
            {"mismatch", drift.mismatch},
            {"energy_drift", drift.energy_drift},
            {"steps", drift.steps},
            {"scale_residual", scale_condition_residual(V).to_string()}};
}

json run_geometry(const Options& o, const Resolved& r) {
    const auto measure = MeasureSpec::from_name(o.metric);
    const std::string prefix = "bump:";
    if (o.probe.rfind(prefix, 0) != 0) throw CLI::ValidationError("--probe expects bump:<a>,<b>");
    const std::string body = o.probe.substr(prefix.size());
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--probe expects bump:<a>,<b>");
    const double lo = parse_real(body.substr(0, comma));
    const double hi = parse_real(body.substr(comma + 1));
    if (!(hi > lo)) throw CLI::ValidationError("--probe needs a < b");
    if (lo <= 0.0) throw Error(Errc::singular_support, "probe support touches r = 0", o.probe);
    const double pad = 0.1 * (hi - lo);
    const auto xs = uniform_grid(std::max(0.5 * lo, lo - pad), hi + pad, grid_or(o, 8001));
    const auto f = GridFunction::sample(xs, bump(lo, hi));
    const auto omega = connection_condition(measure);
    const cplx defect = radial_symmetry_defect(omega, f, f);
    const cplx prediction = radial_defect_prediction(omega, f, f);
    const cplx flat_defect = radial_symmetry_defect([](double) { return 0.0; }, f, f);
    const double comm = commutator_preservation_check(omega, f);
    return {{"metric", to_string(measure.kind)},
            {"weight", measure.weight.id()},
            {"probe", {{"lo", lo}, {"hi", hi}}},
            {"omega_at_probe_center", omega(0.5 * (lo + hi))},
            {"defect", complex_json(defect)},
            {"predicted_defect", complex_json(prediction)},
            {"defect_without_connection", complex_json(flat_defect)},
            {"commutator_residual", comm},
            {"symmetric", std::abs(defect) <= r.tol}};
}

// ---------------------------------------------------------------------------
// Parsing

// Raised when parsing stops early (help, version or a malformed command line).
struct UsageExit {
    int code;
    std::string out_text;
    std::string err_text;
};

struct Parsed {
    std::string command;
    json parameters = json::object();
    json result;
    Resolved resolved;
    bool csv = false;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t grid_n = 0;
};

json option_values(const CLI::App* sub) {
    json params = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
        std::string name = opt->get_name();
        if (name.rfind("--", 0) == 0) name = name.substr(2);
        if (opt->get_type_size() == 0) {
            params[name] = opt->count() > 0;
        } else if (opt->count() > 0) {
            const auto& res = opt->results();
            if (res.size() == 1) {
                params[name] = res.front();
            } else {
                params[name] = res;
            }
        } else if (!opt->get_default_str().empty()) {
            params[name] = opt->get_default_str();
        }
    }
    return params;
}

json run_sweep(const Options& o, const std::vector<std::string>& extras, const Resolved& r);

// For `sweep`, keep the global flags, --sweep specs and the target for CLI11
// and set everything else aside for the swept subcommand.
std::vector<std::string> split_sweep_arguments(const std::vector<std::string>& args,
                                               std::vector<std::string>& extras) {
    static const std::vector<std::string> valued = {"--units", "--tol", "--grid-n", "--seed",
                                                    "--out", "--sweep"};
    static const std::vector<std::string> flags = {"--json", "--csv", "-h", "--help", "--version"};
    auto is_in = [](const std::vector<std::string>& v, const std::string& a) {
        return std::find(v.begin(), v.end(), a) != v.end();
    };
    std::size_t i = 0;
    std::vector<std::string> kept;
    // Global flags may precede the subcommand name.
    while (i < args.size() && args[i] != "sweep") {
        if (is_in(valued, args[i]) && i + 1 < args.size()) kept.push_back(args[i++]);
        else if (!is_in(flags, args[i]) && args[i].rfind("--", 0) != 0) return args;
        kept.push_back(args[i++]);
    }
    if (i == args.size()) return args;
    kept.push_back(args[i++]);
    bool have_target = false;
    while (i < args.size()) {
        const std::string& a = args[i];
        const auto eq = a.find('=');
        const std::string key = a.substr(0, eq);
        if (is_in(valued, key)) {
            kept.push_back(a);
            if (eq == std::string::npos && i + 1 < args.size()) kept.push_back(args[++i]);
        } else if (is_in(flags, a)) {
            kept.push_back(a);
        } else if (!have_target && a.rfind("-", 0) != 0) {
            kept.push_back(a);
            have_target = true;
        } else {
            extras.push_back(a);
        }
        ++i;
    }
    return kept;
}

// Parse and run; throws CLI::ParseError for usage problems and saext::Error
// for computation failures.
Parsed parse_and_run(const std::vector<std::string>& args) {
    Options o;
    CLI::App app{"Self-adjoint extensions of one-dimensional quantum operators", "saext"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", o.json_out, "JSON output (default)");
    app.add_flag("--csv", o.csv_out, "CSV projection of the JSON payload");
    app.add_option("--units", o.units, "hbar=<v>,two_m=<v>");
    app.add_option("--tol", o.tol, "tolerance for pass/fail fields (env SAEXT_TOL)");
    app.add_option("--grid-n", o.grid_n, "grid points for sampled functions");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--out", o.out, "write the payload to a file");

    auto* def = app.add_subcommand("deficiency", "deficiency indices and classification");
    def->add_option("--op", o.op, "momentum | hamiltonian | time")
        ->required()
        ->check(CLI::IsMember({"momentum", "hamiltonian", "time"}));
    def->add_option("--interval", o.interval, "a,b with inf allowed");
    def->add_option("--lambda", o.lambda, "deficiency scale")->capture_default_str();
    def->add_option("--basis-samples", o.basis_samples, "samples per basis function")
        ->capture_default_str();

    auto* ext = app.add_subcommand("extend", "boundary condition of an extension parameter");
    ext->add_option("--operator,--op", o.op, "momentum | hamiltonian")
        ->required()
        ->check(CLI::IsMember({"momentum", "hamiltonian", "time"}));
    ext->add_option("--gamma", o.gamma, "phase of the unitary (rad)")->required();

    auto* spe = app.add_subcommand("spectrum", "discrete and continuous spectrum");
    spe->add_option("--op", o.op, "momentum | well | hamiltonian")
        ->required()
        ->check(CLI::IsMember({"momentum", "well", "hamiltonian"}));
    spe->add_option("--theta", o.theta, "momentum phase")->capture_default_str();
    spe->add_option("--n-min", o.n_min)->capture_default_str();
    spe->add_option("--n-max", o.n_max)->capture_default_str();
    spe->add_option("--length", o.length, "interval length or well width")->capture_default_str();
    spe->add_option("--alpha", o.alpha, "Robin parameter (inf for Dirichlet)")->capture_default_str();

    auto* bsc = app.add_subcommand("boundstate", "Robin bound state");
    bsc->add_option("--alpha", o.alpha, "Robin parameter")->required();
    bsc->add_flag("--shooting", o.shooting, "cross-check by shooting");

    auto* sca = app.add_subcommand("scatter", "reflection data");
    sca->add_option("--alpha", o.alpha, "Robin parameter (inf for Dirichlet)")->required();
    sca->add_option("--k", o.k, "wave number")->required();

    auto* ano = app.add_subcommand("anomaly", "scale anomaly on the bound state");
    ano->add_option("--alpha", o.alpha, "Robin parameter < 0")->required();
    ano->add_option("--t", o.t, "time in the dilatation")->capture_default_str();

    auto* par = app.add_subcommand("paradox", "finite-dimensional paradox demonstrations");
    par->add_option("--id", o.id, "1, 2, 3 or 4")->required()->check(CLI::Range(1, 4));
    par->add_option("--n", o.n, "dimension / grid size / mode count");
    par->add_option("--l", o.l, "length")->capture_default_str();
    par->add_option("--theta", o.theta)->capture_default_str();
    par->add_option("--trials", o.trials)->capture_default_str();
    par->add_option("--m", o.m, "basis size for id 4")->capture_default_str();

    auto* cla = app.add_subcommand("classical", "dilatation drift along a power-law flow");
    cla->add_option("--s", o.s, "exponent, integer or p/q")->capture_default_str();
    cla->add_option("--g", o.g, "coupling")->capture_default_str();
    cla->add_option("--q0", o.q0)->capture_default_str();
    cla->add_option("--p0", o.p0)->capture_default_str();
    cla->add_option("--t-end", o.t_end)->capture_default_str();

    auto* geo = app.add_subcommand("geometry", "radial symmetry defect");
    geo->add_option("--metric", o.metric)
        ->capture_default_str()
        ->check(CLI::IsMember({"polar", "spherical", "flat"}));
    geo->add_option("--probe", o.probe, "bump:<a>,<b>")->capture_default_str();

    auto* swp = app.add_subcommand("sweep", "run a subcommand over a parameter grid");
    swp->add_option("target", o.target, "subcommand to sweep")->required();
    swp->add_option("--sweep", o.sweeps, "name=start:stop:count")->required();

    std::vector<std::string> sweep_extras;
    const auto cli_args = split_sweep_arguments(args, sweep_extras);
    std::vector<const char*> argv{"saext"};
    for (const auto& a : cli_args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream o_text, e_text;
        const int code = app.exit(e, o_text, e_text);
        throw UsageExit{code == 0 ? kOk : kUsageError, o_text.str(), e_text.str()};
    }

    CLI::App* sub = app.get_subcommands().front();
    Parsed p;
    p.command = sub->get_name();
    p.parameters = option_values(sub);
    p.csv = o.csv_out;
    p.out = o.out;
    p.seed = o.seed;
    p.grid_n = o.grid_n;
    if (o.csv_out && o.json_out) throw CLI::ValidationError("--json and --csv are exclusive");
    p.resolved = resolve(o, p.command == "sweep" ? o.target : p.command);

    const auto& r = p.resolved;
    if (p.command == "deficiency") p.result = run_deficiency(o, r);
    else if (p.command == "extend") p.result = run_extend(o, r);
    else if (p.command == "spectrum") p.result = run_spectrum(o, r);
    else if (p.command == "boundstate") p.result = run_boundstate(o, r);
    else if (p.command == "scatter") p.result = run_scatter(o, r);
    else if (p.command == "anomaly") p.result = run_anomaly(o, r);
    else if (p.command == "paradox") p.result = run_paradox(o, r);
    else if (p.command == "classical") p.result = run_classical(o, r);
    else if (p.command == "geometry") p.result = run_geometry(o, r);
    else if (p.command == "sweep") p.result = run_sweep(o, sweep_extras, r);
    return p;
}

json error_json(const Error& e) {
    return {{"error", {{"code", to_string(e.code())}, {"message", e.what()}, {"context", e.context()}}}};
}

json run_sweep(const Options& o, const std::vector<std::string>& extras, const Resolved& r) {
    if (o.target == "sweep") throw CLI::ValidationError("cannot sweep a sweep");
    if (std::find(kSubcommands.begin(), kSubcommands.end(), o.target) == kSubcommands.end()) {
        throw CLI::ValidationError("unknown sweep target " + o.target);
    }
    std::vector<SweepAxis> axes;
    for (const auto& spec : o.sweeps) {
        try {
            axes.push_back(SweepAxis::parse(spec));
        } catch (const Error& e) {
            if (e.code() == Errc::invalid_argument) throw CLI::ValidationError(e.what());
            throw;
        }
    }
    const std::size_t total = sweep_size(axes);

    // Flags shared by every point.
    std::vector<std::string> common{o.target};
    common.insert(common.end(), extras.begin(), extras.end());
    if (!o.units.empty()) common.insert(common.end(), {"--units", o.units});
    common.insert(common.end(), {"--tol", io::format_double(r.tol)});
    if (o.grid_n) common.insert(common.end(), {"--grid-n", std::to_string(o.grid_n)});
    common.insert(common.end(), {"--seed", std::to_string(o.seed)});

    std::vector<json> rows(total);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> usage_failure{false};
    std::string usage_message;
    std::mutex usage_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            const auto point = sweep_point(axes, i);
            std::vector<std::string> args = common;
            json params = json::object();
            for (std::size_t a = 0; a < axes.size(); ++a) {
                args.push_back("--" + axes[a].name);
                args.push_back(io::format_double(point[a]));
                params[axes[a].name] = point[a];
            }
            json row{{"index", i}, {"params", params}};
            try {
                row["result"] = parse_and_run(args).result;
            } catch (const Error& e) {
                row["error"] = error_json(e)["error"];
            } catch (const CLI::ParseError& e) {
                std::lock_guard<std::mutex> lock(usage_mutex);
                usage_failure = true;
                usage_message = e.what();
            } catch (const UsageExit& e) {
                std::lock_guard<std::mutex> lock(usage_mutex);
                usage_failure = true;
                usage_message = e.err_text;
            }
            rows[i] = std::move(row);
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t threads = std::min<std::size_t>({hw, total, std::size_t{8}});
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (usage_failure) throw CLI::ValidationError("sweep point rejected: " + usage_message);

    json axes_json = json::array();
    for (const auto& a : axes) {
        axes_json.push_back({{"name", a.name}, {"start", a.start}, {"stop", a.stop}, {"count", a.count}});
    }
    std::size_t failures = 0;
    for (const auto& row : rows) failures += row.contains("error") ? 1 : 0;
    return {{"target", o.target}, {"axes", axes_json}, {"points", total}, {"failures", failures},
            {"rows", rows}};
}

// ---------------------------------------------------------------------------
// CSV projection

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
    } else if (!j.is_array()) {
        out.emplace_back(prefix, j);
    }
}

std::string csv_cell(const json& v) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (v.is_null()) return "";
    return v.dump();
}

std::string to_csv(const std::string& command, const json& result) {
    std::vector<json> records;
    if (command == "sweep") {
        for (const auto& row : result["rows"]) records.push_back(row);
    } else if (command == "spectrum") {
        for (const auto& row : result["discrete"]) records.push_back(row);
    } else if (command == "paradox") {
        for (const auto& row : result["quantities"]) records.push_back(row);
    } else if (command == "deficiency") {
        for (const auto& row : result["candidates"]) records.push_back(row);
    } else {
        records.push_back(result);
    }
    std::vector<std::string> header;
    std::vector<std::map<std::string, json>> table;
    for (const auto& rec : records) {
        std::vector<std::pair<std::string, json>> cells;
        flatten(rec, "", cells);
        std::map<std::string, json> row;
        for (auto& [k, v] : cells) {
            if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
            row[k] = v;
        }
        table.push_back(std::move(row));
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : table) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) os << ",";
            auto it = row.find(header[i]);
            if (it != row.end()) os << csv_cell(it->second);
        }
        os << "\n";
    }
    return os.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) throw Error(Errc::invalid_argument, "cannot open output file", path);
    file << text;
}

}  // namespace

SweepAxis SweepAxis::parse(std::string_view spec) {
    const auto eq = spec.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw Error(Errc::invalid_argument, "sweep spec must be name=start:stop:count", std::string(spec));
    }
    SweepAxis axis;
    axis.name = std::string(spec.substr(0, eq));
    const std::string rest(spec.substr(eq + 1));
    const auto c1 = rest.find(':');
    const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw Error(Errc::invalid_argument, "sweep spec must be name=start:stop:count", std::string(spec));
    }
    try {
        axis.start = parse_real(rest.substr(0, c1));
        axis.stop = parse_real(rest.substr(c1 + 1, c2 - c1 - 1));
    } catch (const CLI::ValidationError&) {
        throw Error(Errc::invalid_argument, "sweep bounds must be numbers", std::string(spec));
    }
    const std::string count = rest.substr(c2 + 1);
    if (count.empty() || count.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(Errc::invalid_argument, "sweep count must be a non-negative integer", std::string(spec));
    }
    try {
        axis.count = std::stoull(count);
    } catch (const std::exception&) {
        throw Error(Errc::size_limit, "sweep count is too large", std::string(spec));
    }
    if (!std::isfinite(axis.start) || !std::isfinite(axis.stop)) {
        throw Error(Errc::invalid_argument, "sweep bounds must be finite", std::string(spec));
    }
    return axis;
}

namespace {

double axis_value(const SweepAxis& ax, std::size_t i) {
    if (ax.count == 1) return ax.start;
    if (i + 1 == ax.count) return ax.stop;
    return ax.start + (ax.stop - ax.start) * static_cast<double>(i) / static_cast<double>(ax.count - 1);
}

}  // namespace

std::vector<double> SweepAxis::values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = axis_value(*this, i);
    return v;
}

std::size_t sweep_size(const std::vector<SweepAxis>& axes) {
    if (axes.empty()) return 0;
    std::size_t total = 1;
    for (const auto& a : axes) {
        if (a.count == 0) return 0;
        if (a.count > kMaxSweepPoints || total > kMaxSweepPoints / a.count) {
            throw Error(Errc::size_limit, "sweep grid exceeds 10^6 points", a.name);
        }
        total *= a.count;
    }
    if (total > kMaxSweepPoints) throw Error(Errc::size_limit, "sweep grid exceeds 10^6 points");
    return total;
}

std::vector<double> sweep_point(const std::vector<SweepAxis>& axes, std::size_t index) {
    std::vector<double> point(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
        point[a] = axis_value(axes[a], index % axes[a].count);
        index /= axes[a].count;
    }
    return point;
}

json without_wall_time(json payload) {
    if (payload.is_object() && payload.contains("manifest")) payload["manifest"].erase("wall_time_s");
    return payload;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    std::string out_path;
    bool csv = false;
    try {
        Parsed p = parse_and_run(args);
        out_path = p.out;
        csv = p.csv;
        if (csv) {
            emit(to_csv(p.command, p.result), p.out, out);
            return kOk;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json payload = p.result;
        payload["manifest"] = {
            {"command", args},
            {"subcommand", p.command},
            {"parameters", p.parameters},
            {"units", {{"hbar", p.resolved.units.hbar}, {"two_m", p.resolved.units.two_m}}},
            {"tolerance", {{"value", p.resolved.tol}, {"source", p.resolved.tol_source}}},
            {"grid_n", p.grid_n},
            {"seed", p.seed},
            {"version", kVersion},
            {"wall_time_s", wall},
        };
        emit(payload.dump(2) + "\n", p.out, out);
        return kOk;
    } catch (const UsageExit& e) {
        out << e.out_text;
        err << e.err_text;
        if (e.code != kOk) {
            err << "subcommands:";
            for (const auto& s : kSubcommands) err << " " << s;
            err << "\n";
        }
        return e.code;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        err << "subcommands:";
        for (const auto& s : kSubcommands) err << " " << s;
        err << "\n";
        return kUsageError;
    } catch (const Error& e) {
        const json j = error_json(e);
        try {
            emit(j.dump(2) + "\n", out_path, out);
        } catch (const Error&) {
            out << j.dump(2) << "\n";
        }
        return kComputationError;
    } catch (const std::exception& e) {
        const json j = error_json(Error(Errc::internal, e.what(), "dispatch"));
        out << j.dump(2) << "\n";
        return kComputationError;
    }
}

}  // namespace saext::cli
