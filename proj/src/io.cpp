#include "viscograd/io.hpp"

#include "viscograd/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace viscograd::io {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view s, std::string_view what) {
    std::string tmp(s);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(v))
        fail(ErrorCode::ParseError, "bad number '" + tmp + "' in " + std::string(what));
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

struct Header {
    int dim = 0;
    std::array<long, kMaxDim> nodes{1, 1, 1};
    double h = 0.0;
    Point origin{};
};

Header parse_header(std::string_view line) {
    if (line.rfind("# grid", 0) != 0) fail(ErrorCode::ParseError, "missing '# grid' header");
    Header hd;
    bool have_dims = false, have_h = false, have_origin = false;
    for (auto tok : split(line.substr(6), ' ')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) fail(ErrorCode::ParseError, "malformed header field");
        const auto key = tok.substr(0, eq), value = tok.substr(eq + 1);
        if (key == "dims") {
            const auto parts = split(value, 'x');
            if (parts.empty() || parts.size() > kMaxDim) fail(ErrorCode::ParseError, "bad dims");
            hd.dim = static_cast<int>(parts.size());
            for (std::size_t a = 0; a < parts.size(); ++a) {
                const double n = parse_double(parts[a], "dims");
                if (n < 1 || n != std::floor(n)) fail(ErrorCode::ParseError, "bad dims");
                hd.nodes[a] = static_cast<long>(n);
            }
            have_dims = true;
        } else if (key == "h") {
            hd.h = parse_double(value, "h");
            have_h = true;
        } else if (key == "origin") {
            const auto parts = split(value, ',');
            if (parts.size() > kMaxDim) fail(ErrorCode::ParseError, "bad origin");
            for (std::size_t a = 0; a < parts.size(); ++a) hd.origin[a] = parse_double(parts[a], "origin");
            have_origin = true;
        }
    }
    if (!have_dims || !have_h || !have_origin) fail(ErrorCode::ParseError, "header needs dims, h and origin");
    if (!(hd.h > 0.0)) fail(ErrorCode::ParseError, "header spacing must be positive");
    return hd;
}

std::string header_line(const Grid& g) {
    std::string s = "# grid dims=";
    for (int a = 0; a < g.dim(); ++a) s += (a ? "x" : "") + std::to_string(g.nodes(a));
    s += " h=" + fmt(g.h()) + " origin=";
    for (int a = 0; a < g.dim(); ++a) s += (a ? "," : "") + fmt(g.origin()[a]);
    return s;
}

} // namespace

void atomic_write(const fs::path& path, std::string_view content) {
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) fail(ErrorCode::IoError, "write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorCode::IoError, "cannot move output into " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string to_csv(const GridFunction& u) {
    const Grid& g = u.grid();
    std::string s = header_line(g) + "\n";
    static constexpr const char* names[] = {"x", "y", "z"};
    for (int a = 0; a < g.dim(); ++a) s += std::string(names[a]) + ",";
    s += "value\n";
    for (Index n : g.region_nodes()) {
        const Point x = g.coord(n);
        for (int a = 0; a < g.dim(); ++a) s += fmt(x[a]) + ",";
        s += fmt(u[n]) + "\n";
    }
    return s;
}

GridFunction parse_csv(std::string_view text) {
    auto lines = split(text, '\n');
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.size() < 2) fail(ErrorCode::ParseError, "CSV needs a header and a column line");
    const Header hd = parse_header(trim(lines[0]));

    std::vector<std::uint8_t> mask(static_cast<std::size_t>(hd.nodes[0] * hd.nodes[1] * hd.nodes[2]), 0);
    std::vector<std::pair<Index, double>> rows;
    const Grid probe(hd.dim, hd.nodes, hd.h, hd.origin, {});
    for (std::size_t l = 2; l < lines.size(); ++l) {
        const auto line = trim(lines[l]);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != static_cast<std::size_t>(hd.dim) + 1)
            fail(ErrorCode::ParseError, "row " + std::to_string(l + 1) + " has the wrong number of fields");
        Offset idx{0, 0, 0};
        for (int a = 0; a < hd.dim; ++a) {
            const double x = parse_double(trim(cells[static_cast<std::size_t>(a)]), "coordinates");
            const double k = (x - hd.origin[a]) / hd.h;
            idx[a] = std::lround(k);
            if (std::abs(k - static_cast<double>(idx[a])) > 1e-6)
                fail(ErrorCode::ParseError, "row " + std::to_string(l + 1) + " is not on the lattice");
        }
        if (!probe.in_lattice(idx)) fail(ErrorCode::ParseError, "row " + std::to_string(l + 1) + " lies outside the grid");
        const Index node = probe.linear_index(idx);
        if (mask[node]) fail(ErrorCode::ParseError, "duplicate node in row " + std::to_string(l + 1));
        mask[node] = 1;
        rows.emplace_back(node, parse_double(trim(cells.back()), "values"));
    }
    if (rows.empty()) fail(ErrorCode::ParseError, "CSV has no data rows");
    GridFunction u(std::make_shared<const Grid>(hd.dim, hd.nodes, hd.h, hd.origin, std::move(mask)));
    for (const auto& [node, value] : rows) u[node] = value;
    return u;
}

void write_csv(const GridFunction& u, const fs::path& path) { atomic_write(path, to_csv(u)); }

GridFunction read_csv(const fs::path& path) { return parse_csv(read_file(path)); }

nlohmann::json grid_metadata(const GridFunction& u) {
    const Grid& g = u.grid();
    nlohmann::json j;
    j["dim"] = g.dim();
    std::vector<long> dims, mask_nodes;
    std::vector<double> origin;
    for (int a = 0; a < g.dim(); ++a) {
        dims.push_back(g.nodes(a));
        origin.push_back(g.origin()[a]);
    }
    j["dims"] = dims;
    j["h"] = g.h();
    j["origin"] = origin;
    j["region_nodes"] = g.region_nodes().size();
    j["interior_nodes"] = g.interior_nodes().size();
    j["boundary_pinned"] = u.boundary_pinned();
    j["full_box"] = g.full_box();
    j["min"] = u.min_value();
    j["max"] = u.max_value();
    return j;
}

void write_sidecar(const GridFunction& u, const fs::path& path) {
    atomic_write(path, grid_metadata(u).dump(2) + "\n");
}

nlohmann::json to_hex_json(const GridFunction& u) {
    nlohmann::json j = grid_metadata(u);
    std::string mask;
    for (auto m : u.grid().mask()) mask += m ? '1' : '0';
    j["mask"] = mask;
    std::vector<std::string> hex;
    hex.reserve(u.grid().size());
    char buf[20];
    for (double v : u.values()) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
        hex.emplace_back(buf);
    }
    j["values_hex"] = hex;
    return j;
}

GridFunction from_hex_json(const nlohmann::json& doc) {
    try {
        const int dim = doc.at("dim").get<int>();
        const auto dims = doc.at("dims").get<std::vector<long>>();
        const auto origin = doc.at("origin").get<std::vector<double>>();
        if (dim < 1 || dim > kMaxDim || dims.size() != static_cast<std::size_t>(dim) || origin.size() != dims.size())
            fail(ErrorCode::ParseError, "inconsistent grid metadata");
        std::array<long, kMaxDim> nodes{1, 1, 1};
        Point o{};
        for (int a = 0; a < dim; ++a) {
            nodes[a] = dims[static_cast<std::size_t>(a)];
            o[a] = origin[static_cast<std::size_t>(a)];
        }
        const std::string mask_text = doc.at("mask").get<std::string>();
        std::vector<std::uint8_t> mask(mask_text.size());
        std::transform(mask_text.begin(), mask_text.end(), mask.begin(), [](char c) { return c == '1' ? 1 : 0; });
        GridFunction u(std::make_shared<const Grid>(dim, nodes, doc.at("h").get<double>(), o, std::move(mask)));
        const auto hex = doc.at("values_hex").get<std::vector<std::string>>();
        if (hex.size() != u.grid().size()) fail(ErrorCode::ParseError, "value count does not match the grid");
        for (std::size_t k = 0; k < hex.size(); ++k) {
            char* end = nullptr;
            const unsigned long long bits = std::strtoull(hex[k].c_str(), &end, 16);
            if (hex[k].size() != 16 || *end != '\0') fail(ErrorCode::ParseError, "bad hex value");
            u[k] = std::bit_cast<double>(static_cast<std::uint64_t>(bits));
        }
        u.set_boundary_pinned(doc.value("boundary_pinned", false));
        return u;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        fail(ErrorCode::ParseError, e.what());
    }
}

std::string to_pgm(const GridFunction& u) {
    const Grid& g = u.grid();
    if (g.dim() != 2) fail(ErrorCode::Not2D, "heatmaps need a two-dimensional grid");
    const double lo = u.min_value(), hi = u.max_value();
    const long W = g.nodes(0), H = g.nodes(1);
    std::string s = "P2\n# min=" + fmt(lo) + " max=" + fmt(hi) + "\n" + std::to_string(W) + " " + std::to_string(H) +
                    "\n255\n";
    for (long j = H - 1; j >= 0; --j) {
        for (long i = 0; i < W; ++i) {
            const Index n = g.linear_index({i, j, 0});
            long level = 0;
            if (g.in_region(n) && hi > lo) level = std::lround(255.0 * (u[n] - lo) / (hi - lo));
            s += std::to_string(level);
            s += i + 1 < W ? ' ' : '\n';
        }
    }
    return s;
}

void write_pgm(const GridFunction& u, const fs::path& path) { atomic_write(path, to_pgm(u)); }

} // namespace viscograd::io
