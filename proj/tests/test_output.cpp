#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "memwalk/output.hpp"

using namespace memwalk;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("memwalk_test_output_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("sha256 test vectors") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("doubles round-trip") {
    for (double x : {0.1, 2.0 / 3.0, 1e-300, -123456.789, 0.85533373}) CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("CSV quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");

    Table t;
    t.header = {"name", "value"};
    t.add({"x,y", "1"});
    t.add({"z", "2"});
    CHECK(t.to_csv() == "name,value\n\"x,y\",1\nz,2\n");
    CHECK_THROWS(t.add({"only one"}));
}

TEST_CASE("atomic write leaves no temporary behind") {
    const auto d = fresh_dir("atomic");
    write_file_atomic(d / "f.txt", "first");
    write_file_atomic(d / "f.txt", "second");
    CHECK(slurp(d / "f.txt") == "second");
    int files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(d)) ++files;
    CHECK(files == 1);
}

TEST_CASE("run manifest lists every output with its digest") {
    const auto d = fresh_dir("manifest");
    RunRecorder rec(d, "simulate", {{"p", 0.5}, {"n", 100}});
    rec.write("a.csv", "x\n1\n");
    rec.write("b.csv", "y\n2\n");
    const auto path = rec.finish();
    const auto m = nlohmann::json::parse(slurp(path));
    CHECK(m["tool"] == "memwalk");
    CHECK(m["version"] == std::string(kToolVersion));
    CHECK(m["subcommand"] == "simulate");
    CHECK(m["parameters"]["p"] == 0.5);
    CHECK(m["rng"]["generator"] == "xoshiro256**");
    CHECK(m["rng"]["stream_version"] == 1);
    REQUIRE(m["outputs"].size() == 2);
    for (const auto& o : m["outputs"]) {
        const auto body = slurp(d / o["name"].get<std::string>());
        CHECK(o["sha256"] == sha256_hex(body));
        CHECK(o["bytes"] == body.size());
    }
}

TEST_CASE("timestamps are ISO 8601 UTC") {
    const auto t = utc_timestamp();
    CHECK(t.size() == 24);
    CHECK(t[4] == '-');
    CHECK(t[10] == 'T');
    CHECK(t.back() == 'Z');
}
