#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morselab/cli.hpp"
#include "morselab/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using morse::cli::run_cli;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json run_json(const std::vector<std::string>& args) {
    const Run r = run(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("morselab_test_" + name);
}

} // namespace

TEST_CASE("envelope fields") {
    const json j = run_json({"exponents", "--N", "11", "--p", "7"});
    CHECK(j["tool"] == "morselab");
    CHECK(j["version"] == "0.1.0");
    CHECK(j["command"] == "exponents");
    CHECK(j["inputs"]["N"] == 11);
    CHECK(j["derived"]["n_prime"] == 11.0);
    CHECK(j["timestamp"].is_null());
    CHECK(j["results"]["regime"] == "at_or_above_pc");
    CHECK(std::abs(j["results"]["p_c"].get<double>() - (37 + 8 * std::sqrt(10.0)) / 9) < 1e-12);
}

TEST_CASE("numbers survive a JSON round trip exactly") {
    const Run r = run({"exponents", "--N", "11", "--theta", "0.3", "--l", "1.7", "--p", "5"});
    REQUIRE(r.code == 0);
    const nlohmann::ordered_json j = nlohmann::ordered_json::parse(r.out);
    CHECK(j.dump(2) == r.out.substr(0, r.out.size() - 1));
}

TEST_CASE("infinite p_c is written as a string") {
    const json j = run_json({"exponents", "--N", "10"});
    CHECK(j["results"]["p_c"] == "infinity");
    CHECK(j["results"]["p_minus"] == 4.0 / 3.0);
}

TEST_CASE("stamp fills the timestamp") {
    const json j = run_json({"exponents", "--N", "5", "--stamp"});
    REQUIRE(j["timestamp"].is_string());
    CHECK(j["timestamp"].get<std::string>().back() == 'Z');
}

TEST_CASE("shoot CSV table") {
    const Run r = run({"shoot", "--N", "5", "--p", "3", "--rmax", "1e3", "--format", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "r,v,scaled");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 2);
        ++rows;
    }
    CHECK(rows > 100);
}

TEST_CASE("--out writes the table next to the JSON report") {
    const auto path = temp_path("spectrum.csv");
    std::filesystem::remove(path);
    const Run r = run({"spectrum", "--N", "11", "--p", "3", "--n", "200", "--neig", "5", "--out", path.string()});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["results"]["negative_count"].get<int>() > 0);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "index,eigenvalue");
    std::filesystem::remove(path);
}

TEST_CASE("transform identities are echoed") {
    const json d = run_json({"transform", "dual", "--N", "5", "--theta", "0.5", "--l", "1"});
    CHECK(d["results"]["identities"]["n_prime_sum"] == 4.0);
    CHECK(d["results"]["identities"]["tau_sum"] == -4.0);
    const json k = run_json({"transform", "kelvin", "--N", "5", "--p", "3"});
    CHECK(k["results"]["image"]["l"] == 2.0);
}

TEST_CASE("error envelopes and exit codes") {
    auto check_error = [](const std::vector<std::string>& args, int code, const std::string& kind) {
        const Run r = run(args);
        CHECK(r.code == code);
        const json j = json::parse(r.out);
        CHECK(j["error"]["code"] == code);
        CHECK(j["error"]["kind"] == kind);
        CHECK_FALSE(r.err.empty());
    };
    check_error({"exponents", "--N", "2"}, 2, "standard_regime");
    check_error({"shoot", "--N", "5", "--p", "2"}, 2, "p_range");
    check_error({"transform", "fourier", "--N", "5", "--p", "3"}, 2, "transform_kind");
    check_error({"exponents", "--bogus"}, 2, "usage");
    check_error({}, 2, "usage");
    check_error({"sweep", "--config", temp_path("missing.conf").string()}, 2, "config");
}

TEST_CASE("help and version exit cleanly") {
    CHECK(run({"--help"}).code == 0);
    const Run v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("number lists") {
    using morse::cli::parse_number_list;
    CHECK(parse_number_list("").empty());
    CHECK(parse_number_list("1,2.5,4") == std::vector<double>{1, 2.5, 4});
    const auto r = parse_number_list("11:0.5:13");
    REQUIRE(r.size() == 5);
    CHECK(r.back() == 13.0);
    CHECK_THROWS_AS(parse_number_list("1:0:3"), morse::InvalidInput);
    CHECK_THROWS_AS(parse_number_list("1,x"), morse::InvalidInput);
}

TEST_CASE("config parsing") {
    using namespace morse::cli;
    const SweepConfig c = parse_sweep_config("# comment\nmode = spectrum\np = 2,3\nn = 300\nthreads = 2\n");
    CHECK(c.mode == SweepMode::spectrum);
    CHECK(c.p.size() == 2);
    CHECK(c.n == 300);
    CHECK_THROWS_AS(parse_sweep_config("colour = red\n"), morse::InvalidInput);
    CHECK_THROWS_AS(parse_sweep_config("mode = spectra\n"), morse::InvalidInput);
}

TEST_CASE("exponent sweep columns are monotone") {
    using namespace morse::cli;
    SweepConfig c;
    c.n_prime = parse_number_list("11:1:20");
    c.tau = {0.0, 0.5};
    const SweepTable t = run_sweep(c);
    REQUIRE(t.header == std::vector<std::string>{"n_prime", "tau", "serrin", "sobolev", "p_tilde_c", "p_c", "status"});
    REQUIRE(t.rows.size() == 20);
    for (std::size_t i = 2; i < t.rows.size(); i += 2) {
        // Same tau, larger N': all four exponents decrease.
        for (std::size_t col = 2; col <= 5; ++col)
            CHECK(std::stod(t.rows[i][col]) < std::stod(t.rows[i - 2][col]));
        CHECK(t.rows[i][6] == "ok");
    }
}

TEST_CASE("an empty grid gives the header only") {
    using namespace morse::cli;
    const auto path = temp_path("empty.conf");
    std::ofstream(path) << "mode = exponents\nn_prime =\ntau = 0\n";
    const Run r = run({"sweep", "--config", path.string(), "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "n_prime,tau,serrin,sobolev,p_tilde_c,p_c,status\n");
    std::filesystem::remove(path);
}

TEST_CASE("spectrum sweep rows follow p and record failures per row") {
    using namespace morse::cli;
    SweepConfig c;
    c.mode = SweepMode::spectrum;
    c.p = {1.1, 3.0, 7.0};
    c.n = 400;
    const SweepTable t = run_sweep(c);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0][5].rfind("invalid_input:", 0) == 0);
    CHECK(t.rows[1][5] == "ok");
    CHECK(std::stoi(t.rows[1][3]) > 0);
    CHECK(std::stoi(t.rows[2][3]) == 0);
}

TEST_CASE("repeated runs are byte identical, single and multi threaded") {
    const std::vector<std::string> args{"spectrum", "--N", "11", "--p", "3", "--n", "300"};
    CHECK(run(args).out == run(args).out);
    using namespace morse::cli;
    SweepConfig c;
    c.n_prime = parse_number_list("11:0.5:30");
    c.tau = parse_number_list("-1:0.25:2");
    c.threads = 1;
    const SweepTable serial = run_sweep(c);
    c.threads = 4;
    CHECK(run_sweep(c).rows == serial.rows);
}
