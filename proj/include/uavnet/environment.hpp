#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavnet/geometry.hpp"

namespace uavnet {

/// Regular elevation grid. Node (row, col) sits at
/// (origin.x + col * cell_size, origin.y + row * cell_size); heights are row-major.
class Terrain {
  public:
    Terrain(Vec2 origin, double cell_size, std::size_t rows, std::size_t cols, std::vector<double> heights);

    static Terrain flat(Vec2 origin, double cell_size, std::size_t rows, std::size_t cols, double height);
    /// Plane h = base + slope_x * (x - origin.x) + slope_y * (y - origin.y), sampled at the nodes.
    static Terrain ramp(Vec2 origin, double cell_size, std::size_t rows, std::size_t cols, double base,
                        double slope_x, double slope_y);
    /// Rolling hills: a coarse seeded random lattice (spacing `feature_size`) interpolated with a
    /// smoothstep kernel onto the fine grid. Values span [base, base + amplitude].
    static Terrain rolling(Vec2 origin, double cell_size, std::size_t rows, std::size_t cols, double base,
                           double amplitude, double feature_size, std::uint64_t seed);

    /// Plain-text format: "rows cols origin_x origin_y cell_size" then rows*cols elevations.
    static Terrain read(std::istream& in);
    static Terrain load(const std::string& path);
    void write(std::ostream& out) const;

    /// Bilinear interpolation; throws DomainError outside the grid extent.
    double height_at(Vec2 p) const;
    bool covers(Vec2 p) const;

    Vec2 origin() const { return origin_; }
    double cell_size() const { return cell_size_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double node(std::size_t row, std::size_t col) const { return heights_[row * cols_ + col]; }
    const std::vector<double>& heights() const { return heights_; }
    Vec2 extent_max() const;
    double max_height() const;

  private:
    Vec2 origin_;
    double cell_size_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> heights_;
};

/// Vertical cylinder; its cross-section at any altitude in [base_height, top_height] is a disk.
struct Obstacle {
    std::string id;
    Vec2 center;
    double radius = 0.0;
    double base_height = 0.0;
    double top_height = 0.0;

    bool spans(double z) const { return z >= base_height && z <= top_height; }
    /// Horizontal distance from p to the disk boundary, clamped at 0 inside the disk.
    double boundary_distance(Vec2 p) const;
    void validate() const;
};

struct Disk {
    Vec2 center;
    double radius = 0.0;
    std::string id;
};

/// Immutable after construction; every query is const and thread-safe.
class Environment {
  public:
    Environment(Terrain terrain, std::vector<Obstacle> obstacles, Box3 bounds);

    double ground_height(Vec2 p) const { return terrain_.height_at(p); }

    /// Disks of every obstacle whose closed vertical span contains z, in id order.
    std::vector<Disk> cross_section_at(double z) const;

    /// Obstacles spanning p.z whose boundary lies within `range` (closed) of p horizontally,
    /// sorted by id.
    std::vector<Obstacle> detect_obstacles(Vec3 p, double range) const;

    /// Obstacles whose boundary comes within `radius` of `center` horizontally and whose span
    /// overlaps [center.z - radius, center.z + radius]; sorted by id. Used to freeze the
    /// obstacle set for one optimizer call covering a whole ball.
    std::vector<Obstacle> obstacles_near_ball(Vec3 center, double radius) const;

    const Terrain& terrain() const { return terrain_; }
    const std::vector<Obstacle>& obstacles() const { return obstacles_; }
    const Box3& bounds() const { return bounds_; }

  private:
    Terrain terrain_;
    std::vector<Obstacle> obstacles_;
    Box3 bounds_;
};

} // namespace uavnet
