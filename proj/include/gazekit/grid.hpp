#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gazekit {

/// Dense row-major real grid. (row, col) indexing from the top-left cell.
struct Grid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    Grid() = default;
    Grid(std::size_t w, std::size_t h, double fill = 0.0);
    Grid(std::size_t w, std::size_t h, std::vector<double> v);

    std::size_t size() const noexcept { return values.size(); }
    double& at(std::size_t row, std::size_t col) { return values[row * width + col]; }
    double at(std::size_t row, std::size_t col) const { return values[row * width + col]; }

    bool operator==(const Grid&) const = default;
};

/// Probability distribution over a width x height grid. Entries are
/// nonnegative and sum to one within 1e-9; construction enforces this.
class GazeMap {
public:
    static constexpr double kSumTolerance = 1e-9;

    /// Adopts values that already lie on the simplex; throws InvalidGrid otherwise.
    static GazeMap from_values(Grid grid);
    static GazeMap uniform(std::size_t width, std::size_t height);
    static GazeMap delta(std::size_t width, std::size_t height, std::size_t row, std::size_t col);

    std::size_t width() const noexcept { return grid_.width; }
    std::size_t height() const noexcept { return grid_.height; }
    std::size_t size() const noexcept { return grid_.values.size(); }
    std::span<const double> values() const noexcept { return grid_.values; }
    double operator()(std::size_t row, std::size_t col) const { return grid_.at(row, col); }
    const Grid& grid() const noexcept { return grid_; }

    bool operator==(const GazeMap&) const = default;

private:
    explicit GazeMap(Grid grid) : grid_(std::move(grid)) {}
    Grid grid_;
};

/// Unnormalized real scores whose spatial softmax is a GazeMap. All values finite.
class LogitGrid {
public:
    explicit LogitGrid(Grid grid);
    static LogitGrid zeros(std::size_t width, std::size_t height);

    std::size_t width() const noexcept { return grid_.width; }
    std::size_t height() const noexcept { return grid_.height; }
    std::size_t size() const noexcept { return grid_.values.size(); }
    std::span<const double> values() const noexcept { return grid_.values; }
    const Grid& grid() const noexcept { return grid_; }

private:
    Grid grid_;
};

/// Binary grid of recorded human fixations.
class FixationMap {
public:
    FixationMap(std::size_t width, std::size_t height, std::vector<std::uint8_t> fixated);
    /// Cells strictly above `threshold` are fixated.
    static FixationMap from_grid(const Grid& grid, double threshold = 0.5);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return fixated_.size(); }
    bool fixated(std::size_t index) const { return fixated_[index] != 0; }
    bool fixated(std::size_t row, std::size_t col) const { return fixated_[row * width_ + col] != 0; }
    std::size_t count() const noexcept;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> fixated_;
};

/// Channel-major feature tensor: value(c, row, col) = values[(c * height + row) * width + col].
struct FeatureGrid {
    std::size_t channels = 0;
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    FeatureGrid() = default;
    FeatureGrid(std::size_t c, std::size_t w, std::size_t h, std::vector<double> v);

    double at(std::size_t c, std::size_t row, std::size_t col) const {
        return values[(c * height + row) * width + col];
    }
};

GazeMap normalize_to_simplex(const Grid& grid);

/// exp(l - max l) / sum exp(l - max l).
GazeMap spatial_softmax(const LogitGrid& logits);

/// Normalized 1-D Gaussian taps at integer offsets -r..r, r = ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian filter on an arbitrary grid. Out-of-range taps are
/// folded back into the grid by half-sample mirroring, so the operator is
/// symmetric and doubly stochastic: it preserves total mass and constant
/// grids, and it is its own adjoint.
Grid blur_grid(const Grid& grid, double sigma);

GazeMap gaussian_blur(const GazeMap& map, double sigma);

/// Area resampling without renormalization. Each source cell distributes its
/// mass to output cells in proportion to exact geometric overlap.
Grid resample_area_mass(const Grid& grid, std::size_t out_width, std::size_t out_height);

GazeMap resample_area(const GazeMap& map, std::size_t out_width, std::size_t out_height);

/// Shannon entropy in nats, 0 ln 0 = 0.
double entropy(const GazeMap& map);

}  // namespace gazekit
