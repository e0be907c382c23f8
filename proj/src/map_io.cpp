#include "gazekit/map_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "gazekit/csv.hpp"
#include "gazekit/error.hpp"

namespace gazekit {

namespace {

constexpr double kMaxSample = 65535.0;

std::string lower_extension(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// Reads one whitespace-delimited PNM header token, skipping '#' comments.
std::size_t header_number(std::string_view bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
            ++pos;
        } else {
            break;
        }
    }
    std::size_t value = 0;
    const auto res = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
    if (res.ec != std::errc() || res.ptr == bytes.data() + pos) {
        throw Error(ErrorCode::ParseError, "malformed PGM header");
    }
    pos = static_cast<std::size_t>(res.ptr - bytes.data());
    return value;
}

double parse_double(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::ParseError, "not a number: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

MapFormat format_from_path(const std::filesystem::path& path) {
    const auto ext = lower_extension(path);
    if (ext == ".pgm") return MapFormat::PGM16;
    if (ext == ".csv") return MapFormat::CSVF;
    throw Error(ErrorCode::ParseError, "unknown map format for '" + path.string() + "'");
}

bool is_map_file(const std::filesystem::path& path) {
    const auto ext = lower_extension(path);
    return ext == ".pgm" || ext == ".csv";
}

Grid decode_pgm16(std::string_view bytes) {
    if (bytes.size() < 2 || bytes.substr(0, 2) != "P5") throw Error(ErrorCode::ParseError, "not a binary PGM");
    std::size_t pos = 2;
    const auto width = header_number(bytes, pos);
    const auto height = header_number(bytes, pos);
    const auto maxval = header_number(bytes, pos);
    if (maxval != 65535) throw Error(ErrorCode::ParseError, "PGM maxval must be 65535");
    if (width == 0 || height == 0) throw Error(ErrorCode::ParseError, "PGM has zero size");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw Error(ErrorCode::ParseError, "PGM header not terminated");
    }
    ++pos;
    const std::size_t n = width * height;
    if (bytes.size() - pos < 2 * n) throw Error(ErrorCode::ParseError, "PGM pixel data truncated");
    Grid g(width, height);
    for (std::size_t i = 0; i < n; ++i) {
        const auto hi = static_cast<unsigned char>(bytes[pos + 2 * i]);
        const auto lo = static_cast<unsigned char>(bytes[pos + 2 * i + 1]);
        g.values[i] = static_cast<double>((hi << 8) | lo) / kMaxSample;
    }
    return g;
}

Grid decode_csvf(std::string_view text) {
    std::vector<double> values;
    std::size_t width = 0;
    std::size_t height = 0;
    for (const auto& row : parse_csv(text)) {
        if (row.size() == 1 && row.front().find_first_not_of(" \t") == std::string::npos) continue;
        if (width == 0) width = row.size();
        if (row.size() != width) throw Error(ErrorCode::ParseError, "CSV map rows differ in length");
        for (const auto& cell : row) values.push_back(parse_double(cell));
        ++height;
    }
    if (width == 0 || height == 0) throw Error(ErrorCode::ParseError, "CSV map is empty");
    return Grid(width, height, std::move(values));
}

std::string encode_pgm16(const Grid& grid) {
    const double peak = grid.values.empty() ? 0.0 : *std::max_element(grid.values.begin(), grid.values.end());
    std::string out = "P5\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n65535\n";
    out.reserve(out.size() + 2 * grid.size());
    for (double v : grid.values) {
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::InvalidGrid, "PGM samples must be nonnegative");
        const auto s = peak > 0.0 ? static_cast<unsigned>(std::lround(v / peak * kMaxSample)) : 0u;
        out += static_cast<char>((s >> 8) & 0xFF);
        out += static_cast<char>(s & 0xFF);
    }
    return out;
}

std::string encode_csvf(const Grid& grid) {
    std::string out;
    for (std::size_t r = 0; r < grid.height; ++r) {
        for (std::size_t c = 0; c < grid.width; ++c) {
            if (c > 0) out += ',';
            out += format_number(grid.at(r, c), 17);
        }
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

Grid read_grid(const std::filesystem::path& path) {
    const auto format = format_from_path(path);
    const auto bytes = read_text_file(path);
    return format == MapFormat::PGM16 ? decode_pgm16(bytes) : decode_csvf(bytes);
}

GazeMap read_gaze_map(const std::filesystem::path& path) { return normalize_to_simplex(read_grid(path)); }

FixationMap read_fixation_map(const std::filesystem::path& path) { return FixationMap::from_grid(read_grid(path), 0.5); }

void write_grid(const std::filesystem::path& path, const Grid& grid) {
    const auto format = format_from_path(path);
    write_text_file(path, format == MapFormat::PGM16 ? encode_pgm16(grid) : encode_csvf(grid));
}

}  // namespace gazekit
