#include "doctest.h"

#include "qbm/errors.hpp"
#include "qbm/grid_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <sstream>

using namespace qbm;

namespace {

grid::GridStateOperator packet_state() {
    const auto g = grid::SpatialGrid::symmetric(64, 10.0);
    return grid::pure_state_operator(grid::gaussian_wavepacket(0.5, -1.25, 1.0, g));
}

} // namespace

TEST_CASE("state CSV round trip is exact at 17 digits") {
    const auto rho = packet_state();
    std::stringstream ss;
    io::write_csv(ss, rho);
    const std::string text = ss.str();
    CHECK(text.rfind("x,y,re,im\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 64 * 64);
    const auto back = io::read_csv(ss);
    CHECK(back.grid == rho.grid);
    CHECK((back.rho - rho.rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("state binary layout and round trip") {
    const auto rho = packet_state();
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    io::write_binary(ss, rho);
    const std::string bytes = ss.str();
    REQUIRE(bytes.size() == 16 + 64 * 64 * 16);
    CHECK(bytes.substr(0, 4) == "DLAB");
    std::uint32_t version = 0, n = 0;
    float x_max = 0.0f;
    std::memcpy(&version, bytes.data() + 4, 4);
    std::memcpy(&n, bytes.data() + 8, 4);
    std::memcpy(&x_max, bytes.data() + 12, 4);
    CHECK(version == 1);
    CHECK(n == 64);
    CHECK(x_max == 10.0f);
    double first_re = 0.0;
    std::memcpy(&first_re, bytes.data() + 16, 8);
    CHECK(first_re == rho.rho(0, 0).real());
    const auto back = io::read_binary(ss);
    CHECK(back.grid == rho.grid);
    CHECK((back.rho - rho.rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("malformed containers are rejected") {
    std::stringstream bad_magic("XXXX0000000000000000");
    CHECK_THROWS_AS(io::read_binary(bad_magic), FormatError);
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    io::write_binary(ss, packet_state());
    std::string bytes = ss.str();
    std::stringstream truncated(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(io::read_binary(truncated), FormatError);
    std::stringstream wrong_kind(bytes);
    CHECK_THROWS_AS(io::read_wigner_binary(wrong_kind), FormatError);
    std::stringstream csv("x,y,re\n1,2,3\n");
    CHECK_THROWS_AS(io::read_csv(csv), FormatError);
    std::stringstream short_csv("x,y,re,im\n1,2,3\n");
    CHECK_THROWS_AS(io::read_csv(short_csv), FormatError);
    const auto asym = grid::GridStateOperator{grid::SpatialGrid(32, -1.0, 2.0), grid::CMatrix::Zero(32, 32)};
    std::stringstream out;
    CHECK_THROWS_AS(io::write_binary(out, asym), FormatError);
}

TEST_CASE("Wigner containers") {
    const auto w = wigner::wigner_transform(packet_state());
    std::stringstream csv;
    io::write_csv(csv, w);
    const std::string text = csv.str();
    CHECK(text.rfind("xbar,p,w\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 64 * 64);

    std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
    io::write_binary(bin, w);
    CHECK(bin.str().substr(0, 4) == "DLBW");
    CHECK(bin.str().size() == 16 + 2 * 64 * 64 * 8);
    const auto back = io::read_wigner_binary(bin);
    CHECK((back.w - w.w).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.w_half - w.w_half).cwiseAbs().maxCoeff() == 0.0);
    // the stored half rows keep the container invertible
    CHECK((wigner::inverse_wigner(back).rho - packet_state().rho).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("file helpers choose the format from the extension") {
    const auto dir = std::filesystem::temp_directory_path() / "qbm_io_test";
    std::filesystem::create_directories(dir);
    const auto rho = packet_state();
    for (const char* name : {"state.csv", "state.bin"}) {
        const auto path = (dir / name).string();
        io::save(path, rho);
        const auto back = io::load_state(path);
        CHECK((back.rho - rho.rho).cwiseAbs().maxCoeff() == 0.0);
    }
    std::filesystem::remove_all(dir);
    CHECK(io::format_double(0.1) == "0.10000000000000001");
}
