#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ntnlab/io.hpp"
#include "ntnlab/ofdm.hpp"

using namespace ntnlab;

TEST_CASE("IQ files round-trip with the magic header") {
    wave::OfdmConfig cfg;
    cfg.n_symbols = 2;
    const auto buf = wave::generate_ofdm(cfg, 44);

    std::stringstream stream;
    io::write_iq(stream, buf);
    const std::string bytes = stream.str();
    CHECK(bytes.size() == 8 + 16 * buf.size());
    CHECK(bytes.compare(0, 8, "NTNIQF64") == 0);

    const auto back = io::read_iq(stream);
    REQUIRE(back.size() == buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        CHECK(back.samples[i] == buf.samples[i]);  // bit-exact
    }

    std::stringstream bad("XXXXXXXXdata");
    CHECK_THROWS_AS(io::read_iq(bad), std::runtime_error);
}

TEST_CASE("fnv1a64 is stable and sensitive") {
    const char a[] = "hello";
    const char b[] = "hellp";
    const auto ha = io::fnv1a64(a, 5);
    CHECK(ha == io::fnv1a64(a, 5));
    CHECK(ha != io::fnv1a64(b, 5));
    // Known FNV-1a vector: empty input hashes to the offset basis.
    CHECK(io::fnv1a64(a, 0) == 0xcbf29ce484222325ULL);
}

TEST_CASE("manifest lists artifacts with sizes and hashes") {
    const std::string dir = ".";
    {
        std::ofstream f("./artifact_a.csv");
        f << "x,y\n1,2\n";
    }
    {
        std::ofstream f("./artifact_b.json");
        f << "{}\n";
    }
    io::write_manifest(dir, "embb_geo", 42, {"artifact_a.csv", "artifact_b.json"});

    std::ifstream in("./manifest.json");
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    CHECK(text.find("\"scenario\": \"embb_geo\"") != std::string::npos);
    CHECK(text.find("\"seed\": 42") != std::string::npos);
    CHECK(text.find("artifact_a.csv") != std::string::npos);
    CHECK(text.find("\"fnv1a64\"") != std::string::npos);

    CHECK_THROWS_AS(io::write_manifest(dir, "x", 1, {"missing_file.bin"}),
                    std::runtime_error);

    std::remove("./artifact_a.csv");
    std::remove("./artifact_b.json");
    std::remove("./manifest.json");
}
