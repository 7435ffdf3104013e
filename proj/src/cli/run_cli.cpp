#include "morselab/cli.hpp"
#include "morselab/errors.hpp"
#include "morselab/params.hpp"
#include "morselab/radial_ode.hpp"
#include "morselab/stability.hpp"
#include "morselab/transforms.hpp"
#include "report.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace morse::cli {

namespace {

struct Inputs {
    int N = 0;
    double theta = 0.0;
    double l = 0.0;
    double p = 0.0;
    double alpha = 0.0;
    double ell = 0.0;
    double kappa = 1.0;
    double rmax = 1e6;
    double tol = 1e-10;
    double a = 1e-3;
    double b = 1e3;
    std::size_t n = 1000;
    std::size_t neig = 20;
    std::string profile = "v_infinity";
    std::string mass = "hardy";
    std::string kind;
    std::string format = "json";
    std::string out;
    std::string config;
    bool stamp = false;
};

struct Output {
    Json inputs = Json::object();
    Json derived = Json::object();
    Json results = Json::object();
    SweepTable table;
};

ProblemParams problem(const Inputs& in) { return {in.N, in.theta, in.l, in.p}; }

Json params_json(const ProblemParams& p) { return Json{{"N", p.N}, {"theta", p.theta}, {"l", p.l}, {"p", p.p}}; }

Json derived_json(const ProblemParams& params, bool with_p) {
    Json d{{"n_prime", params.n_prime()}, {"tau", params.tau()}};
    if (!with_p)
        return d;
    const DerivedIndices di = derive(params);
    d["m"] = di.m_exp;
    d["serrin"] = di.serrin;
    d["sobolev"] = di.sobolev;
    d["c0"] = di.c0 ? Json(*di.c0) : Json(nullptr);
    return d;
}

// Scalar leaves of a JSON object as key,value rows; nested keys joined by '.'.
void flatten(const Json& j, const std::string& prefix, SweepTable& table) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        const Json& v = it.value();
        if (v.is_object()) {
            flatten(v, key, table);
        } else if (v.is_number_float()) {
            table.rows.push_back({key, format_number(v.get<double>())});
        } else if (v.is_string()) {
            const auto s = v.get<std::string>();
            table.rows.push_back({key, s == "infinity" ? std::string() : s});
        } else if (v.is_null()) {
            table.rows.push_back({key, ""});
        } else if (!v.is_array()) {
            table.rows.push_back({key, v.dump()});
        }
    }
}

SweepTable key_value_table(const Json& results) {
    SweepTable t;
    t.header = {"key", "value"};
    flatten(results, "", t);
    return t;
}

Output cmd_exponents(const Inputs& in, bool has_p) {
    Output o;
    o.inputs = Json{{"N", in.N}, {"theta", in.theta}, {"l", in.l}};
    if (has_p)
        o.inputs["p"] = in.p;
    const ProblemParams params = problem(in);
    const CriticalExponents ce = critical_exponents(params.n_prime(), params.tau());
    o.derived = derived_json(params, has_p);

    auto& r = o.results;
    r["serrin"] = ce.serrin;
    r["sobolev"] = ce.sobolev;
    r["p_minus"] = ce.p_minus;
    r["p_plus"] = ce.p_plus ? Json(*ce.p_plus) : Json(nullptr);
    r["p_tilde_c"] = ce.p_tilde_c;
    r["p_c"] = power_json(ce.p_c);
    r["quadratic"] = Json{{"a", ce.quadratic.a}, {"b", ce.quadratic.b}, {"c", ce.quadratic.c}};
    r["pc_unweighted"] = power_json(pc_unweighted(params.N));

    std::vector<std::string> row{format_number(ce.n_prime), format_number(ce.tau),    format_number(ce.serrin),
                                 format_number(ce.sobolev), format_number(ce.p_tilde_c), csv_cell(ce.p_c),
                                 "", "", ""};
    if (has_p) {
        const Classification cls = classify_p(params);
        const DerivedIndices di = derive(params);
        r["c0"] = di.c0 ? Json(*di.c0) : Json(nullptr);
        r["regime"] = std::string(to_string(cls.label));
        r["tau_condition"] = cls.tau_condition;
        row[6] = format_number(in.p);
        row[7] = csv_cell(di.c0);
        row[8] = std::string(to_string(cls.label));
    }
    o.table.header = {"n_prime", "tau", "serrin", "sobolev", "p_tilde_c", "p_c", "p", "c0", "regime"};
    o.table.rows.push_back(std::move(row));
    return o;
}

Output cmd_classify(const Inputs& in) {
    Output o;
    const ProblemParams params = problem(in);
    o.inputs = params_json(params);
    o.derived = derived_json(params, true);
    const Classification cls = classify_p(params);
    auto& r = o.results;
    r["regime"] = std::string(to_string(cls.label));
    r["tau_condition"] = cls.tau_condition;
    r["matching_tau"] = matching_tau(params.p, params.theta);
    r["serrin"] = cls.exponents.serrin;
    r["sobolev"] = cls.exponents.sobolev;
    r["p_tilde_c"] = cls.exponents.p_tilde_c;
    r["pc_weighted"] = power_json(cls.pc_weighted);
    r["pc_unweighted"] = power_json(cls.pc_unweighted);
    r["pc_min"] = power_json(cls.pc_min);
    o.table = key_value_table(r);
    return o;
}

Output cmd_shoot(const Inputs& in) {
    Output o;
    const ProblemParams params = problem(in);
    o.inputs = params_json(params);
    o.inputs["kappa"] = in.kappa;
    o.inputs["rmax"] = in.rmax;
    o.inputs["tol"] = in.tol;
    o.derived = derived_json(params, true);

    const ShootingResult res = shoot(params, in.kappa, in.rmax, in.tol);
    const double c0 = *derive(params).c0;
    const double m = derive(params).m_exp;
    auto& r = o.results;
    r["kappa"] = res.kappa;
    r["asymptotic_constant"] = res.asymptotic_constant;
    r["c0"] = c0;
    r["relative_deviation"] = std::abs(res.asymptotic_constant / c0 - 1.0);
    r["converged"] = res.fit.converged;
    r["drift"] = res.fit.drift;
    r["classification"] = std::string(to_string(res.classification));
    r["ordering_vs_singular"] = std::string(to_string(res.ordering_vs_singular));
    r["accepted_steps"] = res.accepted_steps;
    r["rejected_steps"] = res.rejected_steps;
    r["points"] = res.solution.grid.size();
    r["r_min"] = res.solution.grid.r_min();
    r["r_max"] = res.solution.grid.r_max();

    o.table.header = {"r", "v", "scaled"};
    const auto& g = res.solution.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double v = res.solution.values[i];
        o.table.rows.push_back({format_number(g[i]), format_number(v), format_number(std::pow(g[i], m) * v)});
    }
    return o;
}

Output cmd_spectrum(const Inputs& in) {
    Output o;
    const ProblemParams params = problem(in);
    o.inputs = params_json(params);
    o.inputs["profile"] = in.profile;
    if (in.profile == "shoot") {
        o.inputs["kappa"] = in.kappa;
        o.inputs["tol"] = in.tol;
    }
    o.inputs["a"] = in.a;
    o.inputs["b"] = in.b;
    o.inputs["n"] = in.n;
    o.inputs["neig"] = in.neig;
    o.inputs["mass"] = in.mass;
    o.derived = derived_json(params, true);

    const RadialGrid nodes = assembly_grid(in.a, in.b, in.n);
    RadialFunction v = [&] {
        if (in.profile == "v_infinity")
            return v_infinity(params, nodes);
        if (in.profile == "shoot") {
            ShootOptions opts;
            opts.tol = in.tol;
            opts.grid = nodes;
            return shoot(params, in.kappa, opts).solution;
        }
        throw InvalidInput("profile", "spectrum: --profile must be v_infinity or shoot");
    }();
    SpectrumOptions opts;
    opts.mass = in.mass == "volume" ? MassWeight::volume : MassWeight::hardy;
    opts.count = in.neig;
    const SpectrumReport rep = radial_morse_index(params, v, in.a, in.b, in.n, opts);

    const double hardy = hardy_constant(params.n_prime());
    const double f = f_eval(params.p, params.n_prime(), params.tau());
    auto& r = o.results;
    r["negative_count"] = rep.negative_count;
    r["min_eigenvalue"] = rep.min_eigenvalue;
    r["tolerance"] = rep.tolerance;
    r["mass"] = std::string(to_string(rep.mass));
    r["hardy_constant"] = hardy;
    r["f_p"] = f;
    r["hardy_minus_f"] = hardy - f;
    r["regime"] = std::string(to_string(classify_p(params).label));
    r["eigenvalues"] = rep.eigenvalues;

    o.table.header = {"index", "eigenvalue"};
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
        o.table.rows.push_back({format_number(i), format_number(rep.eigenvalues[i])});
    return o;
}

Output cmd_transform(const Inputs& in, bool has_p) {
    Output o;
    const TransformKind kind = transform_kind_from_string(in.kind);
    auto& r = o.results;
    r["kind"] = std::string(to_string(kind));
    auto need_p = [&] {
        if (!has_p)
            throw InvalidInput("missing_p", "transform " + in.kind + ": --p is required");
    };

    if (kind == TransformKind::sigma) {
        need_p();
        const SchrodingerParams s{in.N, in.alpha, in.ell, in.p};
        o.inputs = Json{{"N", s.N}, {"alpha", s.alpha}, {"ell", s.ell}, {"p", s.p}};
        const TransformedParams t = sigma_params(s);
        o.derived = Json{{"sigma", s.sigma()}};
        r["domain_map"] = std::string(to_string(t.domain_map));
        r["image"] = params_json(t.params);
        r["image_n_prime"] = t.params.n_prime();
        r["image_tau"] = t.params.tau();
        const SchrodingerParams back = sigma_inverse(t.params);
        r["identities"] = Json{{"n_prime_at_least_two", t.params.n_prime() >= 2.0},
                               {"roundtrip_alpha_error", std::abs(back.alpha - s.alpha)},
                               {"roundtrip_ell_error", std::abs(back.ell - s.ell)}};
        o.table = key_value_table(r);
        return o;
    }

    if (kind != TransformKind::dual)
        need_p();
    ProblemParams params = problem(in);
    if (!has_p)
        params.p = 2.0; // the dual map does not involve p
    o.inputs = Json{{"N", in.N}, {"theta", in.theta}, {"l", in.l}};
    if (has_p)
        o.inputs["p"] = in.p;
    o.derived = Json{{"n_prime", params.n_prime()}, {"tau", params.tau()}};

    if (kind == TransformKind::sigma_inverse) {
        const SchrodingerParams s = sigma_inverse(params);
        r["domain_map"] = "identity";
        r["sigma"] = -params.theta / 2.0;
        r["image"] = Json{{"N", s.N}, {"alpha", s.alpha}, {"ell", s.ell}, {"p", s.p}};
        const ProblemParams back = sigma_params(s).params;
        r["identities"] = Json{{"roundtrip_theta_error", std::abs(back.theta - params.theta)},
                               {"roundtrip_l_error", std::abs(back.l - params.l)}};
        o.table = key_value_table(r);
        return o;
    }

    const TransformedParams t = kind == TransformKind::kelvin ? kelvin_params(params) : dual_params(params);
    r["domain_map"] = std::string(to_string(t.domain_map));
    Json image = params_json(t.params);
    if (!has_p)
        image.erase("p");
    r["image"] = image;
    r["image_n_prime"] = t.params.n_prime();
    r["image_tau"] = t.params.tau();
    if (kind == TransformKind::kelvin) {
        const ProblemParams twice = kelvin_params(t.params).params;
        r["image_tau_above_minus_two"] = t.image_tau_above_minus_two;
        r["identities"] = Json{{"n_prime_preserved", t.params.n_prime() == params.n_prime()},
                               {"involution_l_error", std::abs(twice.l - params.l)}};
    } else {
        r["identities"] = Json{{"n_prime_sum", t.params.n_prime() + params.n_prime()},
                               {"tau_sum", t.params.tau() + params.tau()}};
    }
    o.table = key_value_table(r);
    return o;
}

Json cell_json(const std::string& cell) {
    if (cell.empty())
        return nullptr;
    double x = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
    if (res.ec == std::errc() && res.ptr == cell.data() + cell.size())
        return x;
    return cell;
}

Output cmd_sweep(const Inputs& in) {
    Output o;
    std::ifstream file(in.config);
    if (!file)
        throw InvalidInput("config", "sweep: cannot read config file '" + in.config + "'");
    std::stringstream buf;
    buf << file.rdbuf();
    const SweepConfig c = parse_sweep_config(buf.str());

    o.inputs["config"] = in.config;
    if (c.mode == SweepMode::exponents) {
        o.inputs["mode"] = "exponents";
        o.inputs["n_prime"] = c.n_prime;
        o.inputs["tau"] = c.tau;
    } else {
        o.inputs["mode"] = "spectrum";
        o.inputs["N"] = c.N;
        o.inputs["theta"] = c.theta;
        o.inputs["l"] = c.l;
        o.inputs["p"] = c.p;
        o.inputs["a"] = c.a;
        o.inputs["b"] = c.b;
        o.inputs["n"] = c.n;
    }
    o.table = run_sweep(c);

    Json rows = Json::array();
    const auto& h = o.table.header;
    for (const auto& row : o.table.rows) {
        Json obj = Json::object();
        for (std::size_t k = 0; k < h.size(); ++k) {
            Json cell = cell_json(row[k]);
            if (h[k] == "p_c" && cell.is_null() && row.back() == "ok")
                cell = "infinity";
            obj[h[k]] = cell;
        }
        rows.push_back(std::move(obj));
    }
    o.results["rows"] = std::move(rows);
    return o;
}

void emit_error(std::ostream& out, std::ostream& err, int code, const std::string& kind, const std::string& message) {
    Json j{{"error", Json{{"code", code}, {"kind", kind}, {"message", message}}}};
    out << j.dump() << '\n';
    err << tool_name << ": " << kind << ": " << message << '\n';
}

void add_params(CLI::App* sub, Inputs& in, bool require_p) {
    sub->add_option("--N", in.N, "Dimension N")->required();
    sub->add_option("--theta", in.theta, "Weight exponent theta")->capture_default_str();
    sub->add_option("--l", in.l, "Source exponent l")->capture_default_str();
    auto* p = sub->add_option("--p", in.p, "Power p");
    if (require_p)
        p->required();
}

void add_output(CLI::App* sub, Inputs& in) {
    sub->add_option("--format", in.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--out", in.out, "Also write the CSV table to this file");
    sub->add_flag("--stamp", in.stamp, "Record the UTC time in the envelope");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Inputs in;
    CLI::App app{"Weighted Lane-Emden numerical lab", tool_name};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    auto* exponents = app.add_subcommand("exponents", "Critical exponents for (N, theta, l), regime when p is given");
    add_params(exponents, in, false);
    add_output(exponents, in);

    auto* classify = app.add_subcommand("classify", "Regime label of p");
    add_params(classify, in, true);
    add_output(classify, in);

    auto* shoot_cmd = app.add_subcommand("shoot", "Radial solution from v(0) = kappa");
    add_params(shoot_cmd, in, true);
    shoot_cmd->add_option("--kappa", in.kappa, "Initial value v(0)")->capture_default_str();
    shoot_cmd->add_option("--rmax", in.rmax, "Outer radius")->capture_default_str();
    shoot_cmd->add_option("--tol", in.tol, "Local relative tolerance")->capture_default_str();
    add_output(shoot_cmd, in);

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Discrete stability spectrum on an annulus");
    add_params(spectrum_cmd, in, true);
    spectrum_cmd->add_option("--profile", in.profile, "v_infinity or shoot")
        ->check(CLI::IsMember({"v_infinity", "shoot"}))
        ->capture_default_str();
    spectrum_cmd->add_option("--kappa", in.kappa, "Initial value for --profile shoot")->capture_default_str();
    spectrum_cmd->add_option("--tol", in.tol, "Shooting tolerance")->capture_default_str();
    spectrum_cmd->add_option("--a", in.a, "Inner radius")->capture_default_str();
    spectrum_cmd->add_option("--b", in.b, "Outer radius")->capture_default_str();
    spectrum_cmd->add_option("--n", in.n, "Interior nodes")->capture_default_str();
    spectrum_cmd->add_option("--neig", in.neig, "Number of lowest eigenvalues reported")->capture_default_str();
    spectrum_cmd->add_option("--mass", in.mass, "hardy or volume")
        ->check(CLI::IsMember({"hardy", "volume"}))
        ->capture_default_str();
    add_output(spectrum_cmd, in);

    auto* transform = app.add_subcommand("transform", "Parameter map of a transform");
    transform->add_option("kind", in.kind, "kelvin, dual, sigma or sigma_inverse")->required();
    transform->add_option("--N", in.N, "Dimension N")->required();
    transform->add_option("--theta", in.theta, "Weight exponent theta")->capture_default_str();
    transform->add_option("--l", in.l, "Source exponent l")->capture_default_str();
    auto* transform_p = transform->add_option("--p", in.p, "Power p");
    transform->add_option("--alpha", in.alpha, "Hardy form: source exponent alpha")->capture_default_str();
    transform->add_option("--ell", in.ell, "Hardy form: potential coefficient ell")->capture_default_str();
    add_output(transform, in);

    auto* sweep = app.add_subcommand("sweep", "Parameter sweep from a key = value config file");
    sweep->add_option("--config", in.config, "Config file")->required();
    add_output(sweep, in);

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        emit_error(out, err, exit_invalid_input, "usage", e.what());
        return exit_invalid_input;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    try {
        Output o;
        if (sub == exponents)
            o = cmd_exponents(in, exponents->get_option("--p")->count() > 0);
        else if (sub == classify)
            o = cmd_classify(in);
        else if (sub == shoot_cmd)
            o = cmd_shoot(in);
        else if (sub == spectrum_cmd)
            o = cmd_spectrum(in);
        else if (sub == transform)
            o = cmd_transform(in, transform_p->count() > 0);
        else
            o = cmd_sweep(in);

        const std::string csv = to_csv(o.table);
        if (!in.out.empty()) {
            std::ofstream file(in.out, std::ios::binary);
            if (!file)
                throw InvalidInput("output", "cannot open '" + in.out + "' for writing");
            file << csv;
        }
        if (in.format == "csv") {
            out << csv;
        } else {
            Json env;
            env["tool"] = tool_name;
            env["version"] = tool_version;
            env["command"] = command;
            env["inputs"] = std::move(o.inputs);
            env["derived"] = std::move(o.derived);
            env["results"] = std::move(o.results);
            env["timestamp"] = in.stamp ? Json(utc_timestamp()) : Json(nullptr);
            out << env.dump(2) << '\n';
        }
        return exit_ok;
    } catch (const InvalidInput& e) {
        emit_error(out, err, exit_invalid_input, e.kind(), e.what());
        return exit_invalid_input;
    } catch (const NumericalFailure& e) {
        emit_error(out, err, exit_numerical_failure, e.kind(), e.what());
        return exit_numerical_failure;
    }
}

} // namespace morse::cli
