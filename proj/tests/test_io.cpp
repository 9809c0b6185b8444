#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "scramble/collective.hpp"
#include "scramble/haar.hpp"
#include "scramble/io.hpp"

using namespace scramble;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/scramble_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

TimeSeries<OperatorDistribution> tiny_series() {
    TimeSeries<OperatorDistribution> series;
    OperatorDistribution dist;
    dist.basis = ClassBasis::pauli_weight;
    dist.n_sites = 2;
    dist.p = RealVector::Zero(2);
    dist.p(0) = 1.0;
    series.push_back(0.0, dist);
    dist.p(0) = 0.25;
    dist.p(1) = 0.75;
    series.push_back(0.5, dist);
    return series;
}

}  // namespace

TEST_CASE("cell formatting uses 12 significant digits") {
    CHECK(format_cell(3.14159265358979312) == "3.14159265359");
    CHECK(format_cell(1.0 / 3.0) == "0.333333333333");
    CHECK(format_cell(1.0) == "1");
    CHECK(format_cell(-0.5) == "-0.5");
    CHECK(format_cell(1e-9) == "1e-09");
    CHECK(format_cell(4.50109890109890118) == "4.5010989011");
    CHECK(format_cell(0.0) == "0");
}

TEST_CASE("csv writing") {
    TempFile file("table.csv");

    SUBCASE("bytes, newlines, and reruns") {
        CsvTable table;
        table.header = {"a", "b"};
        table.rows = {{"1", "2.5"}, {"-3", "x"}};
        write_csv(table, file.path);
        const std::string first = slurp(file.path);
        CHECK(first == "a,b\n1,2.5\n-3,x\n");
        write_csv(table, file.path);
        CHECK(slurp(file.path) == first);
    }

    SUBCASE("header is mandatory, widths are enforced") {
        CsvTable table;
        CHECK_THROWS_AS(write_csv(table, file.path), std::invalid_argument);
        table.header = {"a", "b"};
        table.rows = {{"only one"}};
        CHECK_THROWS_AS(write_csv(table, file.path), std::invalid_argument);
        table.rows = {{"1", "2"}};
        CHECK_THROWS_AS(write_csv(table, "/nonexistent-dir/x.csv"), std::runtime_error);
    }
}

TEST_CASE("distribution and measure tables") {
    const auto series = tiny_series();

    const CsvTable dist = distribution_table(series);
    REQUIRE(dist.header == std::vector<std::string>{"time", "k", "p_k"});
    REQUIRE(dist.rows.size() == 4);
    CHECK(dist.rows[0] == std::vector<std::string>{"0", "1", "1"});
    CHECK(dist.rows[1] == std::vector<std::string>{"0", "2", "0"});
    CHECK(dist.rows[2] == std::vector<std::string>{"0.5", "1", "0.25"});
    CHECK(dist.rows[3] == std::vector<std::string>{"0.5", "2", "0.75"});

    const CsvTable meas = measure_table(series);
    REQUIRE(meas.header == std::vector<std::string>{"time", "mean", "variance", "ipr"});
    REQUIRE(meas.rows.size() == 2);
    CHECK(meas.rows[0] == std::vector<std::string>{"0", "1", "0", "1"});
    // mean 1.75, variance 0.1875, ipr 0.625
    CHECK(meas.rows[1] == std::vector<std::string>{"0.5", "1.75", "0.1875", "0.625"});
}

TEST_CASE("haar baseline table") {
    const CsvTable spin_half = haar_table(haar_spin_half(2), ClassBasis::pauli_weight);
    REQUIRE(spin_half.header == std::vector<std::string>{"k", "dim_Ck", "pk_haar"});
    REQUIRE(spin_half.rows.size() == 2);
    CHECK(spin_half.rows[0] == std::vector<std::string>{"1", "6", "0.4"});
    CHECK(spin_half.rows[1] == std::vector<std::string>{"2", "9", "0.6"});

    const CsvTable collective = haar_table(haar_collective(4), ClassBasis::tensor_rank);
    REQUIRE(collective.rows.size() == 4);
    CHECK(collective.rows[0][1] == "3");
    CHECK(collective.rows[3][1] == "9");
    // p_k = (2k+1)/(d^2-1), d = 5
    CHECK(collective.rows[0][2] == format_cell(3.0 / 24.0));
    CHECK(collective.rows[3][2] == format_cell(9.0 / 24.0));
}

TEST_CASE("fnv1a matches the published test vectors") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("manifest round trip") {
    TempFile file("run.manifest.json");
    Manifest manifest;
    manifest.subcommand = "ising";
    manifest.config = {{"n", "6"}, {"theta", "0.5235987755982988"}};
    manifest.seed = 42;
    manifest.artifacts = {"pk.csv", "measures.csv"};
    manifest.wall_time_s = 1.25;

    const std::uint64_t expected_hash = fnv1a("n=6\ntheta=0.5235987755982988\n");
    CHECK(config_hash(manifest) == expected_hash);

    write_manifest(manifest, file.path);
    const nlohmann::json doc = nlohmann::json::parse(slurp(file.path));
    CHECK(doc.at("tool_version").get<std::string>() == kVersion);
    CHECK(doc.at("subcommand").get<std::string>() == "ising");
    CHECK(doc.at("seed").get<std::uint64_t>() == 42);
    CHECK(doc.at("wall_time_s").get<double>() == 1.25);
    CHECK(doc.at("config").at("n").get<std::string>() == "6");
    CHECK(doc.at("config").at("theta").get<std::string>() == "0.5235987755982988");

    char expected_hex[20];
    std::snprintf(expected_hex, sizeof expected_hex, "%016llx",
                  static_cast<unsigned long long>(expected_hash));
    CHECK(doc.at("config_hash").get<std::string>() == expected_hex);
    REQUIRE(doc.at("artifacts").size() == 2);
    for (const auto& artifact : doc.at("artifacts")) {
        CHECK(artifact.at("config_hash").get<std::string>() == expected_hex);
        CHECK_FALSE(artifact.at("path").get<std::string>().empty());
    }

    // deterministic bytes for identical input
    const std::string first = slurp(file.path);
    write_manifest(manifest, file.path);
    CHECK(slurp(file.path) == first);
}

TEST_CASE("tensor basis cache") {
    TempFile file("basis.stb");
    const auto basis = build_tensor_basis(2.5);
    save_tensor_basis(basis, file.path);

    SUBCASE("round trip is bit exact") {
        const auto loaded = load_tensor_basis(file.path);
        CHECK(loaded.max_rank() == basis.max_rank());
        CHECK(loaded.spin() == basis.spin());
        for (int l = 0; l <= basis.max_rank(); ++l)
            for (int m = -l; m <= l; ++m)
                CHECK(max_abs(loaded.tensor(l, m) - basis.tensor(l, m)) == 0.0);
    }

    SUBCASE("corrupted magic is rejected") {
        std::string bytes = slurp(file.path);
        bytes[0] = 'X';
        std::ofstream out(file.path, std::ios::binary);
        out << bytes;
        out.close();
        CHECK_THROWS_AS(load_tensor_basis(file.path), std::runtime_error);
    }

    SUBCASE("truncated payload is rejected") {
        const std::string bytes = slurp(file.path);
        std::ofstream out(file.path, std::ios::binary);
        out << bytes.substr(0, bytes.size() / 2);
        out.close();
        CHECK_THROWS_AS(load_tensor_basis(file.path), std::runtime_error);
    }

    SUBCASE("missing file is rejected") {
        CHECK_THROWS_AS(load_tensor_basis("/tmp/scramble_test_does_not_exist.stb"),
                        std::runtime_error);
    }
}
