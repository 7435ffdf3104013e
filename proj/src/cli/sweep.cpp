#include "morselab/cli.hpp"
#include "morselab/errors.hpp"
#include "morselab/radial_ode.hpp"
#include "morselab/stability.hpp"
#include "report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

namespace morse::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& raw, const std::string& key) {
    const std::string s = trim(raw);
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(x))
        throw InvalidInput("config", "sweep config: '" + key + "' expects a number, got '" + s + "'");
    return x;
}

long parse_integer(const std::string& raw, const std::string& key) {
    const double x = parse_double(raw, key);
    if (x != std::floor(x))
        throw InvalidInput("config", "sweep config: '" + key + "' expects an integer");
    return static_cast<long>(x);
}

std::string status_of(const InvalidInput& e) { return "invalid_input:" + e.kind(); }
std::string status_of(const NumericalFailure& e) { return "numerical_failure:" + e.kind(); }

std::vector<std::string> exponents_row(double n_prime, double tau) {
    std::vector<std::string> row{format_number(n_prime), format_number(tau), "", "", "", "", ""};
    try {
        const CriticalExponents ce = critical_exponents(n_prime, tau);
        row[2] = format_number(ce.serrin);
        row[3] = format_number(ce.sobolev);
        row[4] = format_number(ce.p_tilde_c);
        row[5] = csv_cell(ce.p_c);
        row[6] = "ok";
    } catch (const InvalidInput& e) {
        row[6] = status_of(e);
    } catch (const NumericalFailure& e) {
        row[6] = status_of(e);
    }
    return row;
}

std::vector<std::string> spectrum_row(const SweepConfig& c, double p) {
    std::vector<std::string> row{format_number(p), "", "", "", "", ""};
    try {
        const ProblemParams params{c.N, c.theta, c.l, p};
        const Classification cls = classify_p(params);
        row[1] = std::string(to_string(cls.label));
        row[2] = format_number(f_eval(p, params.n_prime(), params.tau()) - hardy_constant(params.n_prime()));
        const RadialGrid grid = assembly_grid(c.a, c.b, c.n);
        SpectrumOptions opts;
        opts.count = 1;
        const SpectrumReport rep = radial_morse_index(params, v_infinity(params, grid), c.a, c.b, c.n, opts);
        row[3] = format_number(rep.negative_count);
        row[4] = format_number(rep.min_eigenvalue);
        row[5] = "ok";
    } catch (const InvalidInput& e) {
        row[5] = status_of(e);
    } catch (const NumericalFailure& e) {
        row[5] = status_of(e);
    }
    return row;
}

} // namespace

std::vector<double> parse_number_list(const std::string& text) {
    const std::string s = trim(text);
    std::vector<double> out;
    if (s.empty())
        return out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string part; std::getline(ss, part, ':');)
            parts.push_back(part);
        if (parts.size() != 3)
            throw InvalidInput("config", "range '" + s + "' must be start:step:stop");
        const double start = parse_double(parts[0], "range start");
        const double step = parse_double(parts[1], "range step");
        const double stop = parse_double(parts[2], "range stop");
        if (!(step > 0.0))
            throw InvalidInput("config", "range '" + s + "' needs a positive step");
        if (stop < start)
            return out;
        const double span = (stop - start) / step;
        if (span > 1e6)
            throw InvalidInput("config", "range '" + s + "' has more than a million entries");
        const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        out.push_back(parse_double(item, "list entry"));
    return out;
}

SweepConfig parse_sweep_config(const std::string& text) {
    SweepConfig c;
    std::stringstream in(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config", "sweep config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "mode") {
            if (value == "exponents")
                c.mode = SweepMode::exponents;
            else if (value == "spectrum")
                c.mode = SweepMode::spectrum;
            else
                throw InvalidInput("config", "sweep config: mode must be exponents or spectrum");
        } else if (key == "n_prime") {
            c.n_prime = parse_number_list(value);
        } else if (key == "tau") {
            c.tau = parse_number_list(value);
        } else if (key == "p") {
            c.p = parse_number_list(value);
        } else if (key == "N") {
            c.N = static_cast<int>(parse_integer(value, key));
        } else if (key == "theta") {
            c.theta = parse_double(value, key);
        } else if (key == "l") {
            c.l = parse_double(value, key);
        } else if (key == "a") {
            c.a = parse_double(value, key);
        } else if (key == "b") {
            c.b = parse_double(value, key);
        } else if (key == "n") {
            const long n = parse_integer(value, key);
            if (n < 8)
                throw InvalidInput("config", "sweep config: n must be at least 8");
            c.n = static_cast<std::size_t>(n);
        } else if (key == "threads") {
            const long th = parse_integer(value, key);
            if (th < 0)
                throw InvalidInput("config", "sweep config: threads must be >= 0");
            c.threads = static_cast<unsigned>(th);
        } else {
            throw InvalidInput("config", "sweep config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    if (c.mode == SweepMode::spectrum && (!(c.a > 0.0) || !(c.b > c.a)))
        throw InvalidInput("config", "sweep config: need 0 < a < b");
    return c;
}

SweepTable run_sweep(const SweepConfig& config) {
    SweepTable table;
    std::size_t rows = 0;
    if (config.mode == SweepMode::exponents) {
        table.header = {"n_prime", "tau", "serrin", "sobolev", "p_tilde_c", "p_c", "status"};
        rows = config.n_prime.size() * config.tau.size();
    } else {
        table.header = {"p", "regime", "f_minus_hardy", "negative_count", "min_eigenvalue", "status"};
        rows = config.p.size();
    }
    table.rows.resize(rows);

    auto eval = [&](std::size_t i) {
        if (config.mode == SweepMode::exponents) {
            const std::size_t nt = config.tau.size();
            table.rows[i] = exponents_row(config.n_prime[i / nt], config.tau[i % nt]);
        } else {
            table.rows[i] = spectrum_row(config, config.p[i]);
        }
    };

    unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, rows));
    if (workers <= 1) {
        for (std::size_t i = 0; i < rows; ++i)
            eval(i);
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < rows; i = next++)
                eval(i);
        });
    for (auto& th : pool)
        th.join();
    return table;
}

} // namespace morse::cli
