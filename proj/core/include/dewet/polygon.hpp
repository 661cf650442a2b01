#pragma once

#include <array>
#include <span>
#include <vector>

#include "dewet/vec2.hpp"

namespace dewet::polygon {

// Shoelace area of an implicitly closed vertex loop; positive for
// counterclockwise orientation.
double signed_area(std::span<const Vec2> poly);

// True when no two non-adjacent edges intersect or overlap.
bool is_simple(std::span<const Vec2> poly);

// Ear-clipping triangulation of a simple counterclockwise polygon.
// Collinear vertices are clipped as degenerate ears.
std::vector<std::array<Vec2, 3>> triangulate(std::vector<Vec2> poly);

// Area of the intersection of two simple polygons (any orientation),
// computed as the pairwise sum of triangle-triangle clips.
double intersection_area(std::span<const Vec2> p, std::span<const Vec2> q);

// |P| + |Q| - 2 |P int Q|.
double symmetric_difference_area(std::span<const Vec2> p, std::span<const Vec2> q);

// Rasterization fallback for near-degenerate inputs: midpoint sampling on
// cells x cells and 2*cells x 2*cells grids, Richardson-extrapolated.
double symmetric_difference_area_grid(std::span<const Vec2> p,
                                      std::span<const Vec2> q, int cells = 512);

bool point_in_polygon(Vec2 pt, std::span<const Vec2> poly);

}  // namespace dewet::polygon
