#pragma once

#include <vector>

#include <Eigen/Dense>

#include "looplie/surface.hpp"

namespace looplie::polygon {

using Point = Eigen::Vector2d;

/// Regular 4g-gon of circumradius 1 with ccw sides s = 0..4g−1, side s running
/// from vertex s to vertex s + 1. Sides 4i ↔ 4i+2 and 4i+1 ↔ 4i+3 are glued
/// reversing the ccw parameter (u ↔ 1 − u).
///
/// Crossing side s outward and re-entering through its partner reads one
/// letter; b_j exits through side 4(g − j) + 2 and a_j through 4(g − j) + 1.
/// For genus 1 this is the axis-aligned square: a exits left, b exits bottom.
class Model {
 public:
  explicit Model(int genus);

  int genus() const { return genus_; }
  int sides() const { return 4 * genus_; }
  Point vertex(int k) const;
  Point point_on_side(int side, double u) const;
  int partner(int side) const;

  int exit_side(surface::Letter x) const;
  surface::Letter letter_of_side(int side) const;

  /// Letters read while circling the single vertex class.
  surface::Word vertex_link() const;

 private:
  int genus_;
};

}  // namespace looplie::polygon
