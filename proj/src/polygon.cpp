#include "looplie/polygon.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace looplie::polygon {

Model::Model(int genus) : genus_(genus) {
  if (genus < 1) throw std::invalid_argument("genus must be at least 1");
}

Point Model::vertex(int k) const {
  const int n = sides();
  k = ((k % n) + n) % n;
  const double angle = 2.0 * std::numbers::pi * k / n + std::numbers::pi / n;
  return {std::cos(angle), std::sin(angle)};
}

Point Model::point_on_side(int side, double u) const {
  return vertex(side) + u * (vertex(side + 1) - vertex(side));
}

int Model::partner(int side) const { return 4 * (side / 4) + (side % 4 + 2) % 4; }

int Model::exit_side(surface::Letter x) const {
  const int k = std::abs(x);
  if (k < 1 || k > 2 * genus_) throw std::out_of_range("letter outside genus");
  const int j = (k + 1) / 2;
  const int base = 4 * (genus_ - j);
  const int side = base + ((k % 2 == 1) ? 1 : 2);
  return x > 0 ? side : partner(side);
}

surface::Letter Model::letter_of_side(int side) const {
  const int i = side / 4;
  const int j = genus_ - i;
  switch (side % 4) {
    case 1: return surface::letter_a(j);
    case 2: return surface::letter_b(j);
    case 3: return -surface::letter_a(j);
    default: return -surface::letter_b(j);
  }
}

surface::Word Model::vertex_link() const {
  surface::Word w{{}, true};
  int s = 0;
  do {
    w.letters.push_back(letter_of_side(s));
    s = (partner(s) + 1) % sides();
  } while (s != 0);
  return w;
}

}  // namespace looplie::polygon
