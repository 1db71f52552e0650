#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "gcm/io.hpp"

using namespace gcm;

namespace {
TimeSeriesCube sample_cube() {
    TimeSeriesCube c(3, 2, 5, 0.0015, 0.02, 0.03, 0.04, 0.25, -0.4, -0.3);
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] = std::sin(0.7 * i) * 1e3 + 1e-17 * i;
    return c;
}

ScalarField sample_field() {
    ScalarField f(Grid3D(4, 3, 2, 0.02, 0.02, 0.01, {-0.4, -0.4, -0.2}));
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 + 0.1 * i;
    return f;
}
}  // namespace

TEST_CASE("cube round trip is exact") {
    const TimeSeriesCube c = sample_cube();
    const std::string bytes = encode_cube(c);
    CHECK(bytes.substr(0, 4) == "GCMC");
    CHECK(bytes.size() == 4 + 2 + 12 + 7 * 8 + c.data().size() * 8);
    const TimeSeriesCube d = decode_cube(bytes);
    CHECK(d.same_shape(c));
    CHECK(d.t0() == c.t0());
    CHECK(d.data() == c.data());

    const auto path = (std::filesystem::temp_directory_path() / "gcm_io_test.gcmc").string();
    write_cube(path, c);
    CHECK(read_cube(path).data() == c.data());
    std::filesystem::remove(path);
}

TEST_CASE("field round trip is exact") {
    const ScalarField f = sample_field();
    const std::string bytes = encode_field(f);
    CHECK(bytes.substr(0, 4) == "GCMF");
    const ScalarField g = decode_field(bytes);
    CHECK(g.grid().same_lattice(f.grid()));
    CHECK(g.data() == f.data());
}

TEST_CASE("malformed input is rejected") {
    std::string bytes = encode_cube(sample_cube());
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(decode_cube(bad), FormatError);
    bad = bytes;
    bad[4] = static_cast<char>(kCubeFormatVersion + 1);
    CHECK_THROWS_WITH_AS(decode_cube(bad), doctest::Contains("version"), FormatError);
    CHECK_THROWS_AS(decode_cube(bytes.substr(0, bytes.size() - 3)), FormatError);
    CHECK_THROWS_AS(decode_cube(bytes + "x"), FormatError);
    CHECK_THROWS_AS(decode_field(bytes), FormatError);
    std::string fb = encode_field(sample_field());
    fb[4] = static_cast<char>(kFieldFormatVersion + 1);
    CHECK_THROWS_AS(decode_field(fb), FormatError);
    CHECK_THROWS(read_cube("/nonexistent/dir/x.gcmc"));
}
