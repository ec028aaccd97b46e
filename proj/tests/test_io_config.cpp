#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ldps/config.hpp"
#include "ldps/io.hpp"
#include "ldps/noise.hpp"

using namespace ldps;

namespace {

std::filesystem::path temp_dir() {
    const auto d = std::filesystem::temp_directory_path() / "ldps_io_test";
    std::filesystem::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("binary dump round-trips header and payload", "[io]") {
    const auto path = (temp_dir() / "dump.bin").string();
    const std::vector<double> data = {1.5, -2.25, 0.0, 1e-17, 3.14159};
    io::write_binary_dump(path, 50, 64, 8, 1234567890123456789ULL, data);

    const io::BinaryDump d = io::read_binary_dump(path);
    REQUIRE(d.version == io::kDumpVersion);
    REQUIRE(d.n_t == 50);
    REQUIRE(d.n_x == 64);
    REQUIRE(d.n_modes == 8);
    REQUIRE(d.seed == 1234567890123456789ULL);
    REQUIRE(d.data == data);

    // corrupt magic is rejected
    {
        std::ofstream bad(path, std::ios::binary);
        bad << "NOPE";
    }
    REQUIRE_THROWS_AS(io::read_binary_dump(path), Error);
}

TEST_CASE("field csv has the documented columns", "[io]") {
    const GridSpec grid{1.0, 2, 3, 0};
    const Field f = Field::from_function(grid, [](double t, double x) { return t + 10.0 * x; });
    const auto path = (temp_dir() / "field.csv").string();
    io::write_field_csv(path, f);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "t,x,value");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    REQUIRE(rows == (grid.n_t + 1) * grid.n_x);
}

TEST_CASE("config parses sections, types, and lists", "[io]") {
    const std::string text = R"(# experiment
[grid]
T = 0.5
n_t = 25
n_x = 32

[noise]
seed = 99

[task]
name = sample-noise
eps = 0.125, 0.25   # a list
)";
    const ExperimentConfig cfg = ExperimentConfig::parse(text);
    REQUIRE(cfg.get_double("grid", "T", 0.0) == 0.5);
    REQUIRE(cfg.get_int("grid", "n_t", 0) == 25);
    REQUIRE(cfg.task_name() == "sample-noise");
    const auto eps = cfg.get_double_list("task", "eps", {});
    REQUIRE(eps.size() == 2);
    REQUIRE(eps[1] == 0.25);
    REQUIRE(cfg.resolve_seed(std::nullopt, std::nullopt) == 99);
    REQUIRE(cfg.resolve_seed(7, std::nullopt) == 7);
    REQUIRE_NOTHROW(cfg.validate());
}

TEST_CASE("config rejects malformed input with line numbers", "[io]") {
    try {
        ExperimentConfig::parse("[grid]\nT 0.5\n");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        REQUIRE(e.line_no == 2);
    }
    REQUIRE_THROWS_AS(ExperimentConfig::parse("key = 1\n"), ConfigError);
    REQUIRE_THROWS_AS(ExperimentConfig::parse("[a\nk = 1\n"), ConfigError);
    REQUIRE_THROWS_AS(ExperimentConfig::parse("[a]\nk = 1\nk = 2\n"), ConfigError);

    const ExperimentConfig bad_type = ExperimentConfig::parse("[grid]\nT = fast\n[task]\nname = rate\n");
    REQUIRE_THROWS_AS(bad_type.get_double("grid", "T", 1.0), ConfigError);
}

TEST_CASE("config validation polices tasks and presets", "[io]") {
    const ExperimentConfig unknown_task =
        ExperimentConfig::parse("[task]\nname = frobnicate\n[noise]\nseed = 1\n");
    REQUIRE_THROWS_AS(unknown_task.validate(), ConfigError);

    const ExperimentConfig unknown_preset = ExperimentConfig::parse(
        "[model]\npreset = heat-cubic\n[task]\nname = rate\n[noise]\nseed = 1\n");
    REQUIRE_THROWS_AS(unknown_preset.validate(), ConfigError);

    const ExperimentConfig no_seed = ExperimentConfig::parse("[task]\nname = rate\n");
    REQUIRE_THROWS_AS(no_seed.resolve_seed(std::nullopt, std::nullopt), ConfigError);
    REQUIRE(no_seed.resolve_seed(std::nullopt, 42) == 42);
}

TEST_CASE("config hash changes with content", "[io]") {
    REQUIRE(config_hash("a") != config_hash("b"));
    REQUIRE(config_hash("same") == config_hash("same"));
}
