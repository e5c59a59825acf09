#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "phl/config.hpp"
#include "phl/emit.hpp"
#include "phl/run.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace phl;
using cli::Format;
using cli::Mode;
using cli::RunConfig;

namespace {

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '#' && line.rfind("{\"meta\"", 0) != 0) {
            out.push_back(line);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("parse_config: preset resolution and mode") {
    const auto cfg = cli::parse_config("preset = model-section\nmode = steady\n");
    CHECK(cfg.mode == Mode::Steady);
    CHECK(cfg.params == model::preset("model-section").params);

    const auto rp = cli::parse_config("mode = dynamics\npreset = results-phonon\n");
    CHECK(rp.params.lambda_MT == 0.08);

    // no preset key: the model-section defaults apply
    const auto def = cli::parse_config("mode = steady\n");
    CHECK(def.params == model::preset("model-section").params);
}

TEST_CASE("parse_config: rejections carry line numbers") {
    CHECK_THROWS_WITH_AS(cli::parse_config("mode = steady\ndt = -1\n"),
                         doctest::Contains("line 2"), cli::ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config(""), doctest::Contains("mode"), cli::ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config("mode = steady\nnot_a_key = 3\n"),
                         doctest::Contains("unknown key"), cli::ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config("mode = steady\ngarbage line\n"),
                         doctest::Contains("malformed"), cli::ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config("mode = steady\nE2 = 40\nE3 = 20\n"),
                         doctest::Contains("nondecreasing"), cli::ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config("mode = sweep\n"), doctest::Contains("sweep"),
                         cli::ConfigError);
    CHECK_THROWS_WITH_AS(cli::parse_config("mode = steady\nsweep_from = 1\n"),
                         doctest::Contains("sweep"), cli::ConfigError);
}

TEST_CASE("parse_config: overrides, comments, derived frequencies") {
    const auto cfg = cli::parse_config(
        "# a comment\n"
        "mode = dynamics   # trailing comment\n"
        "preset = model-section\n"
        "lambda = 0.05\n"
        "gamma_sys = 0.1\n"
        "E2 = 2.5\nE3 = 27.5\nE4 = 30\n"
        "delta_T = 30\n"
        "t_end = 10\ndt = 0.002\nsample_every = 5\n"
        "workers = 4\nformat = json-lines\n");
    CHECK(cfg.params.lambda_MT == 0.05);
    CHECK(cfg.params.lambda_MB == 0.05);
    CHECK(cfg.params.gamma_sys12 == 0.1);
    CHECK(cfg.params.delta_T == 30.0);
    CHECK(cfg.t_end == 10.0);
    CHECK(cfg.sample_every == 5);
    CHECK(cfg.workers == 4);
    CHECK(cfg.format == Format::JsonLines);
    // omegas re-derived from the overridden gaps
    CHECK(cfg.params.omega1 == doctest::Approx(2.5 / model::kHbar).epsilon(1e-15));
    CHECK(cfg.params.omega2 == doctest::Approx(2.5 / model::kHbar).epsilon(1e-15));
}

TEST_CASE("emitted CSV round-trips at full precision") {
    cli::Table t;
    t.columns = {"a", "b"};
    t.rows.push_back({1.0 / 3.0, 2.2250738585072014e-308});
    t.rows.push_back({-0.12345678901234567, 6.02214076e23});
    std::ostringstream os;
    cli::write_csv(os, t);

    std::istringstream is(os.str());
    std::string header, row;
    std::getline(is, header);
    CHECK(header == "a,b");
    size_t r = 0;
    while (std::getline(is, row)) {
        const size_t comma = row.find(',');
        CHECK(std::strtod(row.substr(0, comma).c_str(), nullptr) == t.rows[r][0]);
        CHECK(std::strtod(row.substr(comma + 1).c_str(), nullptr) == t.rows[r][1]);
        ++r;
    }
    CHECK(r == 2);
}

TEST_CASE("csv and json-lines carry identical field sets") {
    RunConfig cfg = cli::parse_config("mode = steady\npreset = model-section\n");
    const auto table = cli::run_to_table(cfg);

    std::ostringstream csv, jsonl;
    cli::write_csv(csv, table);
    cli::write_jsonl(jsonl, table);

    std::istringstream is(csv.str());
    std::string line;
    std::string header;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '#') {
            header = line;
            break;
        }
    }
    size_t fields = 1;
    for (char c : header) fields += (c == ',');
    CHECK(fields == table.columns.size());

    // every column name appears in the json line
    std::istringstream js(jsonl.str());
    std::string meta, row;
    std::getline(js, meta);
    std::getline(js, row);
    for (const auto& col : table.columns) {
        CHECK(row.find("\"" + col + "\"") != std::string::npos);
    }
}

TEST_CASE("phonon-free dynamics: amplitude columns follow the decay envelope") {
    RunConfig cfg = cli::parse_config(
        "mode = dynamics\npreset = model-section\ng = 0\n"
        "t_end = 3\ndt = 0.001\nsample_every = 100\n");
    const auto table = cli::run_to_table(cfg);
    REQUIRE(table.failed.empty());
    REQUIRE(table.rows.size() == 31);

    size_t ib1re = 0, ib1im = 0;
    for (size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i] == "B1_re") ib1re = i;
        if (table.columns[i] == "B1_im") ib1im = i;
    }
    const double Gamma = cfg.params.Gamma_ph;
    for (const auto& row : table.rows) {
        const double t = row[0];
        const double mag = std::hypot(row[ib1re], row[ib1im]);
        CHECK(mag == doctest::Approx(1e-3 * std::exp(-Gamma * t)).epsilon(1e-7));
    }
}

TEST_CASE("sweep variables: lambda, g and gamma_sys apply to the right parameters") {
    auto sweep_cfg = [](const std::string& var, double from, double to) {
        return cli::parse_config(
            "mode = sweep\npreset = model-section\nsweep_variable = " + var
            + "\nsweep_from = " + std::to_string(from) + "\nsweep_to = " + std::to_string(to)
            + "\nsweep_points = 3\n");
    };

    // lambda = 0 decouples everything: zero currents at the first point
    {
        const auto t = cli::run_to_table(sweep_cfg("lambda", 0.0, 0.06));
        REQUIRE(t.rows.size() == 3);
        CHECK(t.rows[0][0] == 0.0);
        CHECK(std::abs(t.rows[0][1]) <= 1e-12);  // J_uniform
        CHECK(t.rows[2][0] == 0.06);
    }
    // gamma_sys sweep: dissipation opens the ring and carries current
    {
        const auto t = cli::run_to_table(sweep_cfg("gamma_sys", 0.0, 0.2));
        REQUIRE(t.rows.size() == 3);
        CHECK(std::abs(t.rows[0][1]) <= 1e-10);  // closed ring at gamma_sys = 0
        CHECK(t.rows[2][1] > 1e-6);              // open ring transports
    }
    // g sweep at frozen amplitudes only moves the drive structure; rows emit
    {
        const auto t = cli::run_to_table(sweep_cfg("g", 0.0, 2.25));
        REQUIRE(t.rows.size() == 3);
        CHECK(t.rows[1][0] == doctest::Approx(1.125));
    }
}

TEST_CASE("determinism: identical config gives byte-identical data sections") {
    const std::string text =
        "mode = sweep\npreset = model-section\ndelta_T = 30\n"
        "E2 = 2.5\nE3 = 27.5\nE4 = 30\ngamma = 1\n"
        "sweep_variable = deltaT\nsweep_from = 0\nsweep_to = 300\nsweep_points = 7\n"
        "workers = 3\n";
    const RunConfig cfg = cli::parse_config(text);

    std::ostringstream a, b;
    cli::write_csv(a, cli::run_to_table(cfg));
    cli::write_csv(b, cli::run_to_table(cfg));
    CHECK(data_lines(a.str()) == data_lines(b.str()));
    CHECK(data_lines(a.str()).size() == 8);  // header + 7 rows
}

TEST_CASE("unstable step size flushes partial output with a FAILED sentinel") {
    // dt far beyond the RK4 stability limit: the trajectory blows up within a
    // few steps and the run must keep the rows it produced.
    RunConfig cfg = cli::parse_config(
        "mode = dynamics\npreset = model-section\nt_end = 5\ndt = 0.05\nsample_every = 1\n");
    const auto table = cli::run_to_table(cfg);
    CHECK_FALSE(table.failed.empty());
    CHECK(table.rows.size() >= 1);

    std::ostringstream os;
    cli::write_csv(os, table);
    CHECK(os.str().find("\nFAILED,") != std::string::npos);
}

#ifdef PHL_CLI_PATH
TEST_CASE("cli exit codes") {
    const std::string tmp = "phl_test_cfg.tmp";
    const std::string out = "phl_test_out.tmp";

    {
        std::ofstream f(tmp);
        f << "mode = steady\npreset = model-section\n";
    }
    std::string cmd = std::string(PHL_CLI_PATH) + " --config " + tmp + " --out " + out;
    CHECK(std::system(cmd.c_str()) == 0);

    {
        std::ofstream f(tmp);
        f << "mode = steady\ndt = -2\n";
    }
    int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == cli::kExitConfig);

    {
        std::ofstream f(tmp);
        f << "mode = steady\npreset = model-section\n";
    }
    cmd = std::string(PHL_CLI_PATH) + " --config " + tmp
          + " --out /nonexistent-dir/phl-out.csv 2>/dev/null";
    rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == cli::kExitIo);

    // --mode overrides the config's mode
    {
        std::ofstream f(tmp);
        f << "mode = dynamics\npreset = model-section\nt_end = 1\nsample_every = 1000\n";
    }
    cmd = std::string(PHL_CLI_PATH) + " --config " + tmp + " --mode steady --out " + out;
    CHECK(std::system(cmd.c_str()) == 0);
    {
        std::ifstream f(out);
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        CHECK(text.find("steady run") != std::string::npos);
        CHECK(text.find("rel1_resid_per_ps") != std::string::npos);
    }

    std::remove(tmp.c_str());
    std::remove(out.c_str());
}
#endif
