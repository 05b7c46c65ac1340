#include "uavnet/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace uavnet {

std::string to_string(Vec3 v) {
    std::ostringstream os;
    os << std::setprecision(10) << "(" << v.x << ", " << v.y << ", " << v.z << ")";
    return os.str();
}

Terrain::Terrain(Vec2 origin, double cell_size, std::size_t rows, std::size_t cols, std::vector<double> heights)
    : origin_(origin), cell_size_(cell_size), rows_(rows), cols_(cols), heights_(std::move(heights)) {
    if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_)) {
        throw std::invalid_argument("terrain: cell_size must be positive");
    }
    if (rows_ < 2 || cols_ < 2) {
        throw std::invalid_argument("terrain: need at least 2x2 nodes");
    }
    if (heights_.size() != rows_ * cols_) {
        throw std::invalid_argument("terrain: expected " + std::to_string(rows_ * cols_) + " heights, got " +
                                    std::to_string(heights_.size()));
    }
    if (!std::all_of(heights_.begin(), heights_.end(), [](double h) { return std::isfinite(h); })) {
        throw std::invalid_argument("terrain: heights must be finite");
    }
}

Terrain Terrain::flat(Vec2 origin, double cell_size, std::size_t rows, std::size_t cols, double height) {
    return Terrain(origin, cell_size, rows, cols, std::vector<double>(rows * cols, height));
}

Terrain Terrain::ramp(Vec2 origin, double cell_size, std::size_t rows, std::size_t cols, double base,
                      double slope_x, double slope_y) {
    std::vector<double> h(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            h[r * cols + c] = base + slope_x * static_cast<double>(c) * cell_size +
                              slope_y * static_cast<double>(r) * cell_size;
        }
    }
    return Terrain(origin, cell_size, rows, cols, std::move(h));
}

Terrain Terrain::rolling(Vec2 origin, double cell_size, std::size_t rows, std::size_t cols, double base,
                         double amplitude, double feature_size, std::uint64_t seed) {
    if (!(feature_size > 0.0)) {
        throw std::invalid_argument("terrain: feature_size must be positive");
    }
    const double width = static_cast<double>(cols - 1) * cell_size;
    const double height = static_cast<double>(rows - 1) * cell_size;
    const auto lat_cols = static_cast<std::size_t>(std::ceil(width / feature_size)) + 2;
    const auto lat_rows = static_cast<std::size_t>(std::ceil(height / feature_size)) + 2;

    std::mt19937_64 rng(seed);
    std::vector<double> lattice(lat_rows * lat_cols);
    for (auto& v : lattice) {
        v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }

    auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
    std::vector<double> h(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double u = static_cast<double>(c) * cell_size / feature_size;
            const double v = static_cast<double>(r) * cell_size / feature_size;
            const auto i0 = static_cast<std::size_t>(u);
            const auto j0 = static_cast<std::size_t>(v);
            const double tu = smooth(u - static_cast<double>(i0));
            const double tv = smooth(v - static_cast<double>(j0));
            auto at = [&](std::size_t j, std::size_t i) { return lattice[j * lat_cols + i]; };
            const double top = at(j0, i0) * (1 - tu) + at(j0, i0 + 1) * tu;
            const double bottom = at(j0 + 1, i0) * (1 - tu) + at(j0 + 1, i0 + 1) * tu;
            h[r * cols + c] = base + amplitude * (top * (1 - tv) + bottom * tv);
        }
    }
    return Terrain(origin, cell_size, rows, cols, std::move(h));
}

Terrain Terrain::read(std::istream& in) {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double ox = 0.0;
    double oy = 0.0;
    double cell = 0.0;
    if (!(in >> rows >> cols >> ox >> oy >> cell)) {
        throw std::runtime_error("terrain file: malformed header (rows cols origin_x origin_y cell_size)");
    }
    if (rows == 0 || cols == 0 || rows > 100000 || cols > 100000) {
        throw std::runtime_error("terrain file: implausible dimensions");
    }
    std::vector<double> h(rows * cols);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(in >> h[i])) {
            throw std::runtime_error("terrain file: expected " + std::to_string(h.size()) + " elevations, read " +
                                     std::to_string(i));
        }
    }
    return Terrain({ox, oy}, cell, rows, cols, std::move(h));
}

Terrain Terrain::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open terrain file: " + path);
    }
    return read(in);
}

void Terrain::write(std::ostream& out) const {
    out << std::setprecision(17);
    out << rows_ << ' ' << cols_ << ' ' << origin_.x << ' ' << origin_.y << ' ' << cell_size_ << '\n';
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out << (c ? " " : "") << heights_[r * cols_ + c];
        }
        out << '\n';
    }
}

Vec2 Terrain::extent_max() const {
    return {origin_.x + static_cast<double>(cols_ - 1) * cell_size_,
            origin_.y + static_cast<double>(rows_ - 1) * cell_size_};
}

double Terrain::max_height() const { return *std::max_element(heights_.begin(), heights_.end()); }

bool Terrain::covers(Vec2 p) const {
    const Vec2 hi = extent_max();
    return p.x >= origin_.x && p.x <= hi.x && p.y >= origin_.y && p.y <= hi.y;
}

double Terrain::height_at(Vec2 p) const {
    if (!covers(p)) {
        throw DomainError("ground height queried outside terrain extent at (" + std::to_string(p.x) + ", " +
                          std::to_string(p.y) + ")");
    }
    const double u = (p.x - origin_.x) / cell_size_;
    const double v = (p.y - origin_.y) / cell_size_;
    // The far edge belongs to the last cell so that c0 + 1 stays in range.
    const auto c0 = std::min(static_cast<std::size_t>(u), cols_ - 2);
    const auto r0 = std::min(static_cast<std::size_t>(v), rows_ - 2);
    const double tu = u - static_cast<double>(c0);
    const double tv = v - static_cast<double>(r0);
    const double h00 = node(r0, c0);
    const double h01 = node(r0, c0 + 1);
    const double h10 = node(r0 + 1, c0);
    const double h11 = node(r0 + 1, c0 + 1);
    return (h00 * (1 - tu) + h01 * tu) * (1 - tv) + (h10 * (1 - tu) + h11 * tu) * tv;
}

double Obstacle::boundary_distance(Vec2 p) const { return std::max(0.0, (p - center).norm() - radius); }

void Obstacle::validate() const {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("obstacle " + id + ": radius must be positive");
    }
    if (!(top_height > base_height)) {
        throw std::invalid_argument("obstacle " + id + ": top_height must exceed base_height");
    }
}

Environment::Environment(Terrain terrain, std::vector<Obstacle> obstacles, Box3 bounds)
    : terrain_(std::move(terrain)), obstacles_(std::move(obstacles)), bounds_(bounds) {
    if (!(bounds_.max.x > bounds_.min.x && bounds_.max.y > bounds_.min.y && bounds_.max.z > bounds_.min.z)) {
        throw std::invalid_argument("environment: bounds must have positive extent");
    }
    for (const auto& o : obstacles_) {
        o.validate();
        if (!bounds_.contains_xy(o.center)) {
            throw std::invalid_argument("environment: obstacle " + o.id + " center outside bounds");
        }
    }
    std::sort(obstacles_.begin(), obstacles_.end(), [](const Obstacle& a, const Obstacle& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < obstacles_.size(); ++i) {
        if (obstacles_[i].id == obstacles_[i - 1].id) {
            throw std::invalid_argument("environment: duplicate obstacle id " + obstacles_[i].id);
        }
    }
}

std::vector<Disk> Environment::cross_section_at(double z) const {
    std::vector<Disk> out;
    for (const auto& o : obstacles_) {
        if (o.spans(z)) {
            out.push_back({o.center, o.radius, o.id});
        }
    }
    return out;
}

std::vector<Obstacle> Environment::detect_obstacles(Vec3 p, double range) const {
    if (!(range > 0.0)) {
        throw DomainError("detect_obstacles: range must be positive");
    }
    std::vector<Obstacle> out;
    for (const auto& o : obstacles_) {
        if (o.spans(p.z) && o.boundary_distance(p.xy()) <= range) {
            out.push_back(o);
        }
    }
    return out;
}

std::vector<Obstacle> Environment::obstacles_near_ball(Vec3 center, double radius) const {
    std::vector<Obstacle> out;
    for (const auto& o : obstacles_) {
        const bool overlaps_band = o.top_height >= center.z - radius && o.base_height <= center.z + radius;
        if (overlaps_band && o.boundary_distance(center.xy()) <= radius) {
            out.push_back(o);
        }
    }
    return out;
}

} // namespace uavnet
