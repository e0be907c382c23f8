#include "gazekit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

constexpr double kZeroMass = 1e-12;

void require_shape(std::size_t w, std::size_t h, std::size_t n, const char* what) {
    if (w == 0 || h == 0) {
        throw Error(ErrorCode::InvalidGrid, std::string(what) + " must have positive width and height");
    }
    if (w * h != n) {
        throw Error(ErrorCode::ShapeMismatch,
                    std::string(what) + " has " + std::to_string(n) + " values for a " + std::to_string(w) + "x" +
                        std::to_string(h) + " grid");
    }
}

// Half-sample symmetric reflection: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
std::size_t mirror_index(long long i, long long n) {
    const long long period = 2 * n;
    long long m = i % period;
    if (m < 0) m += period;
    if (m >= n) m = period - 1 - m;
    return static_cast<std::size_t>(m);
}

// 1-D overlap table between n_in source cells and n_out output cells spanning
// the same extent. Entry (i, u) is the fraction of source cell i inside output
// cell u; fractions over u sum to one for every i. Integer arithmetic on the
// common refinement keeps the table exact.
struct Overlap {
    std::size_t out_index;
    double fraction;
};

std::vector<std::vector<Overlap>> overlap_table(std::size_t n_in, std::size_t n_out) {
    std::vector<std::vector<Overlap>> table(n_in);
    for (std::size_t i = 0; i < n_in; ++i) {
        const std::size_t lo = i * n_out;
        const std::size_t hi = (i + 1) * n_out;
        for (std::size_t u = lo / n_in; u < n_out && u * n_in < hi; ++u) {
            const std::size_t a = std::max(lo, u * n_in);
            const std::size_t b = std::min(hi, (u + 1) * n_in);
            if (b > a) {
                table[i].push_back({u, static_cast<double>(b - a) / static_cast<double>(n_out)});
            }
        }
    }
    return table;
}

}  // namespace

Grid::Grid(std::size_t w, std::size_t h, double fill) : width(w), height(h), values(w * h, fill) {}

Grid::Grid(std::size_t w, std::size_t h, std::vector<double> v) : width(w), height(h), values(std::move(v)) {
    require_shape(w, h, values.size(), "grid");
}

GazeMap GazeMap::from_values(Grid grid) {
    require_shape(grid.width, grid.height, grid.values.size(), "gaze map");
    double sum = 0.0;
    for (double v : grid.values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error(ErrorCode::InvalidGrid, "gaze map values must be finite and nonnegative");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw Error(ErrorCode::InvalidGrid, "gaze map values sum to " + std::to_string(sum));
    }
    return GazeMap(std::move(grid));
}

GazeMap GazeMap::uniform(std::size_t width, std::size_t height) {
    require_shape(width, height, width * height, "gaze map");
    return GazeMap(Grid(width, height, 1.0 / static_cast<double>(width * height)));
}

GazeMap GazeMap::delta(std::size_t width, std::size_t height, std::size_t row, std::size_t col) {
    require_shape(width, height, width * height, "gaze map");
    if (row >= height || col >= width) {
        throw Error(ErrorCode::InvalidArgument, "delta cell outside the grid");
    }
    Grid g(width, height, 0.0);
    g.at(row, col) = 1.0;
    return GazeMap(std::move(g));
}

LogitGrid::LogitGrid(Grid grid) : grid_(std::move(grid)) {
    require_shape(grid_.width, grid_.height, grid_.values.size(), "logit grid");
    for (double v : grid_.values) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidGrid, "logits must be finite");
    }
}

LogitGrid LogitGrid::zeros(std::size_t width, std::size_t height) { return LogitGrid(Grid(width, height, 0.0)); }

FixationMap::FixationMap(std::size_t width, std::size_t height, std::vector<std::uint8_t> fixated)
    : width_(width), height_(height), fixated_(std::move(fixated)) {
    require_shape(width_, height_, fixated_.size(), "fixation map");
}

FixationMap FixationMap::from_grid(const Grid& grid, double threshold) {
    std::vector<std::uint8_t> cells(grid.values.size());
    std::transform(grid.values.begin(), grid.values.end(), cells.begin(),
                   [threshold](double v) { return static_cast<std::uint8_t>(v > threshold ? 1 : 0); });
    return FixationMap(grid.width, grid.height, std::move(cells));
}

std::size_t FixationMap::count() const noexcept {
    return static_cast<std::size_t>(std::count_if(fixated_.begin(), fixated_.end(), [](auto v) { return v != 0; }));
}

FeatureGrid::FeatureGrid(std::size_t c, std::size_t w, std::size_t h, std::vector<double> v)
    : channels(c), width(w), height(h), values(std::move(v)) {
    if (c == 0) throw Error(ErrorCode::InvalidGrid, "feature grid needs at least one channel");
    require_shape(w, h * c, values.size(), "feature grid");
    for (double x : values) {
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidGrid, "features must be finite");
    }
}

GazeMap normalize_to_simplex(const Grid& grid) {
    require_shape(grid.width, grid.height, grid.values.size(), "grid");
    double sum = 0.0;
    for (double v : grid.values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error(ErrorCode::InvalidGrid, "grid values must be finite and nonnegative");
        }
        sum += v;
    }
    if (sum < kZeroMass) throw Error(ErrorCode::AllZeroGrid, "grid has no mass");
    Grid out(grid.width, grid.height);
    for (std::size_t i = 0; i < grid.values.size(); ++i) out.values[i] = grid.values[i] / sum;
    return GazeMap::from_values(std::move(out));
}

GazeMap spatial_softmax(const LogitGrid& logits) {
    const auto v = logits.values();
    const double m = *std::max_element(v.begin(), v.end());
    Grid out(logits.width(), logits.height());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.values[i] = std::exp(v[i] - m);
        sum += out.values[i];
    }
    for (double& x : out.values) x /= sum;
    return GazeMap::from_values(std::move(out));
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::InvalidArgument, "blur sigma must be positive");
    }
    const auto radius = static_cast<long long>(std::ceil(3.0 * sigma));
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (long long k = -radius; k <= radius; ++k) {
        const double w = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
        taps[static_cast<std::size_t>(k + radius)] = w;
        sum += w;
    }
    for (double& w : taps) w /= sum;
    return taps;
}

Grid blur_grid(const Grid& grid, double sigma) {
    require_shape(grid.width, grid.height, grid.values.size(), "grid");
    const auto taps = gaussian_kernel(sigma);
    const auto radius = static_cast<long long>(taps.size() / 2);
    const auto w = static_cast<long long>(grid.width);
    const auto h = static_cast<long long>(grid.height);

    Grid rows(grid.width, grid.height);
    for (long long r = 0; r < h; ++r) {
        for (long long c = 0; c < w; ++c) {
            double acc = 0.0;
            for (long long k = -radius; k <= radius; ++k) {
                acc += taps[static_cast<std::size_t>(k + radius)] *
                       grid.at(static_cast<std::size_t>(r), mirror_index(c + k, w));
            }
            rows.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
        }
    }
    Grid out(grid.width, grid.height);
    for (long long r = 0; r < h; ++r) {
        for (long long c = 0; c < w; ++c) {
            double acc = 0.0;
            for (long long k = -radius; k <= radius; ++k) {
                acc += taps[static_cast<std::size_t>(k + radius)] *
                       rows.at(mirror_index(r + k, h), static_cast<std::size_t>(c));
            }
            out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
        }
    }
    return out;
}

GazeMap gaussian_blur(const GazeMap& map, double sigma) {
    return GazeMap::from_values(blur_grid(map.grid(), sigma));
}

Grid resample_area_mass(const Grid& grid, std::size_t out_width, std::size_t out_height) {
    require_shape(grid.width, grid.height, grid.values.size(), "grid");
    if (out_width == 0 || out_height == 0) {
        throw Error(ErrorCode::InvalidArgument, "resample target must be at least 1x1");
    }
    const auto cols = overlap_table(grid.width, out_width);
    const auto rows = overlap_table(grid.height, out_height);
    Grid out(out_width, out_height, 0.0);
    for (std::size_t r = 0; r < grid.height; ++r) {
        for (std::size_t c = 0; c < grid.width; ++c) {
            const double mass = grid.at(r, c);
            if (mass == 0.0) continue;
            for (const auto& ro : rows[r]) {
                for (const auto& co : cols[c]) {
                    out.at(ro.out_index, co.out_index) += mass * ro.fraction * co.fraction;
                }
            }
        }
    }
    return out;
}

GazeMap resample_area(const GazeMap& map, std::size_t out_width, std::size_t out_height) {
    return normalize_to_simplex(resample_area_mass(map.grid(), out_width, out_height));
}

double entropy(const GazeMap& map) {
    double h = 0.0;
    for (double p : map.values()) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

}  // namespace gazekit
