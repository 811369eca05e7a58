#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "viscograd/io.hpp"
#include "viscograd/verify.hpp"

#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

using namespace viscograd;
using testing::code_of;
namespace fs = std::filesystem;

namespace {

bool bit_equal(const GridFunction& a, const GridFunction& b) {
    if (!a.grid().same_layout(b.grid())) return false;
    for (Index n : a.grid().region_nodes())
        if (std::memcmp(&a.values()[n], &b.values()[n], sizeof(double)) != 0) return false;
    return true;
}

GridFunction noisy(const GridPtr& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1, 1);
    GridFunction u(g);
    for (Index n : g->region_nodes()) u[n] = U(rng) * std::pow(10.0, 8 * U(rng));
    return u;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "viscograd_test_io";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("CSV round trip") {
    SUBCASE("box in one to three dimensions") {
        for (const auto& box : {Box::interval(-1, 2), Box::rect(0, 1, -0.5, 0.5), Box::cube(0, 1, 3)}) {
            auto g = build_grid(box, 0.125);
            const auto u = noisy(g, 3);
            CHECK(bit_equal(io::parse_csv(io::to_csv(u)), u));
        }
    }
    SUBCASE("masked region keeps its shape") {
        auto g = build_grid(Box::rect(0, 1, 0, 1), 1.0 / 16)->with_mask([](const Point& x) {
            return x[0] <= 0.5 || x[1] <= 0.5;
        });
        const auto u = noisy(g, 4);
        const auto back = io::parse_csv(io::to_csv(u));
        CHECK(back.grid().region_nodes().size() == g->region_nodes().size());
        CHECK(bit_equal(back, u));
    }
    SUBCASE("through a file") {
        auto g = build_grid(Box::rect(0, 1, 0, 1), 0.25);
        const auto u = noisy(g, 5);
        const fs::path path = scratch_dir() / "u.csv";
        io::write_csv(u, path);
        CHECK(bit_equal(io::read_csv(path), u));
    }
}

TEST_CASE("malformed CSV") {
    auto g = build_grid(Box::rect(0, 1, 0, 1), 0.5);
    const std::string good = io::to_csv(GridFunction(g, 1.0));
    CHECK(code_of([] { io::parse_csv(""); }) == ErrorCode::ParseError);
    CHECK(code_of([] { io::parse_csv("x,y,value\n0,0,1\n"); }) == ErrorCode::ParseError);
    std::string bad_value = good;
    bad_value.replace(bad_value.rfind(",1"), 2, ",abc");
    CHECK(code_of([&] { io::parse_csv(bad_value); }) == ErrorCode::ParseError);
    CHECK(code_of([&] { io::parse_csv(good + "7,7,1\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { io::read_csv("/nonexistent/dir/u.csv"); }) == ErrorCode::IoError);
}

TEST_CASE("hex JSON is bit-exact") {
    auto g = build_grid(Box::rect(0, 1, 0, 2), 1.0 / 8);
    GridFunction u = noisy(g, 6);
    u[g->region_nodes()[0]] = -0.0;
    u[g->region_nodes()[1]] = 5e-324;
    const auto back = io::from_hex_json(io::to_hex_json(u));
    CHECK(bit_equal(back, u));
    CHECK(std::signbit(back[g->region_nodes()[0]]));
    auto doc = io::to_hex_json(u);
    doc.erase("values_hex");
    CHECK(code_of([&] { io::from_hex_json(doc); }) == ErrorCode::ParseError);
}

TEST_CASE("PGM heatmap") {
    SUBCASE("constant field is uniform") {
        auto g = build_grid(Box::rect(0, 1, 0, 1), 0.25);
        std::istringstream in(io::to_pgm(GridFunction(g, 3.0)));
        std::string magic, line;
        in >> magic;
        CHECK(magic == "P2");
        std::getline(in, line);
        std::getline(in, line);
        CHECK(line.rfind("#", 0) == 0);
        int w = 0, h = 0, maxval = 0;
        in >> w >> h >> maxval;
        CHECK(w == 5);
        CHECK(h == 5);
        CHECK(maxval == 255);
        int first = -1, v = 0, count = 0;
        bool uniform = true;
        while (in >> v) {
            if (first < 0) first = v;
            uniform = uniform && v == first;
            ++count;
        }
        CHECK(count == 25);
        CHECK(uniform);
    }
    SUBCASE("Aronsson sample: header extremes and saddle pattern") {
        auto g = build_grid(Box::rect(-1, 1, -1, 1), 0.25);
        const auto u = aronsson_sample(g).values;
        const std::string pgm = io::to_pgm(u);
        CHECK(pgm.find("min=") != std::string::npos);
        std::istringstream in(pgm);
        std::string magic, comment;
        in >> magic;
        std::getline(in, comment);
        std::getline(in, comment);
        const double lo = std::stod(comment.substr(comment.find("min=") + 4));
        const double hi = std::stod(comment.substr(comment.find("max=") + 4));
        CHECK(lo == u.min_value());
        CHECK(hi == u.max_value());
        int w = 0, h = 0, maxval = 0;
        in >> w >> h >> maxval;
        std::vector<int> px(static_cast<std::size_t>(w * h));
        for (auto& p : px) in >> p;
        // Top row is y = 1 with the minimum -1 at its centre; the middle row
        // ends hold the maximum.
        CHECK(px[static_cast<std::size_t>(w / 2)] == 0);
        const std::size_t mid_row = static_cast<std::size_t>(h / 2) * static_cast<std::size_t>(w);
        CHECK(px[mid_row] == 255);
        CHECK(px[mid_row + static_cast<std::size_t>(w - 1)] == 255);
    }
    SUBCASE("1D input") {
        auto g = build_grid(Box::interval(0, 1), 0.25);
        CHECK(code_of([&] { io::to_pgm(GridFunction(g)); }) == ErrorCode::Not2D);
    }
}

TEST_CASE("atomic write") {
    const fs::path path = scratch_dir() / "report.json";
    io::atomic_write(path, "first");
    io::atomic_write(path, "second");
    CHECK(io::read_file(path) == "second");
    for (const auto& entry : fs::directory_iterator(scratch_dir()))
        CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
    CHECK(code_of([] { io::atomic_write("/nonexistent/dir/out.json", "x"); }) == ErrorCode::IoError);
}
