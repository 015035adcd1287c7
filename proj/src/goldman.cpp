#include "looplie/goldman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace looplie::goldman {

using surface::Letter;

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(num_ * o.num_, den_ * o.den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
      const std::int64_t n = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(n);
    }
    const std::string a = s.substr(0, slash);
    const std::string b = s.substr(slash + 1);
    const std::int64_t n = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const std::int64_t d = std::stoll(b, &used);
    if (used != b.size() || d == 0) throw std::invalid_argument(s);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw SchemaError("bad rational '" + s + "'");
  }
}

// ---------------------------------------------------------------------------

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

// Boundary points of a loop, keyed by side, as (parameter along side).
void collect_boundary(const PLLoop& c, const polygon::Model& model,
                      std::vector<std::vector<double>>& per_side) {
  for (std::size_t j = 0; j < c.word.size(); ++j) {
    const int s = c.chords[j].exit_side;
    per_side[static_cast<std::size_t>(s)].push_back(c.exit_params[j]);
    per_side[static_cast<std::size_t>(model.partner(s))].push_back(1.0 - c.exit_params[j]);
  }
}

bool boundary_separated(const std::vector<std::vector<double>>& per_side, double min_gap) {
  for (auto side : per_side) {
    std::sort(side.begin(), side.end());
    for (std::size_t i = 1; i < side.size(); ++i)
      if (side[i] - side[i - 1] < min_gap) return false;
  }
  return true;
}

PLLoop build_loop(const Word& w, int genus, std::uint64_t seed) {
  const polygon::Model model(genus);
  PLLoop c;
  c.word = w;
  c.genus = genus;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> param(0.05, 0.95);
  const std::size_t n = w.size();
  for (std::size_t j = 0; j < n; ++j) c.exit_params.push_back(param(rng));
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t prev = (j + n - 1) % n;
    const int prev_exit = model.exit_side(w.letters[prev]);
    Chord ch;
    ch.entry_side = model.partner(prev_exit);
    ch.exit_side = model.exit_side(w.letters[j]);
    ch.from = model.point_on_side(ch.entry_side, 1.0 - c.exit_params[prev]);
    ch.to = model.point_on_side(ch.exit_side, c.exit_params[j]);
    c.chords.push_back(ch);
  }
  return c;
}

// Side length of the regular 4g-gon with circumradius 1.
double side_length(int genus) {
  const polygon::Model model(genus);
  return (model.vertex(1) - model.vertex(0)).norm();
}

}  // namespace

PLLoop realize(const Word& w, int genus, std::uint64_t seed, const RealizeOptions& opts) {
  Word reduced = surface::reduce(Word{w.letters, true});
  const polygon::Model model(genus);
  for (Letter x : reduced.letters)
    if (std::abs(x) > 2 * genus || x == 0) throw RealizationError("letter outside genus");
  const double gap = opts.margin / side_length(genus);
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    PLLoop c = build_loop(reduced, genus, derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<std::vector<double>> per_side(static_cast<std::size_t>(model.sides()));
    collect_boundary(c, model, per_side);
    if (boundary_separated(per_side, gap)) return c;
  }
  throw RealizationError("could not realize '" + surface::format_word(reduced) +
                         "' in general position");
}

std::vector<IntersectionDatum> intersections(const PLLoop& c1, const PLLoop& c2, double margin) {
  if (c1.genus != c2.genus) throw std::invalid_argument("loops live on different surfaces");
  const polygon::Model model(c1.genus);
  std::vector<std::vector<double>> per_side(static_cast<std::size_t>(model.sides()));
  collect_boundary(c1, model, per_side);
  collect_boundary(c2, model, per_side);
  if (!boundary_separated(per_side, margin / side_length(c1.genus)))
    throw RealizationError("loops share boundary points");

  std::vector<IntersectionDatum> out;
  for (std::size_t j = 0; j < c1.chords.size(); ++j) {
    const Chord& g = c1.chords[j];
    const Point dg = g.to - g.from;
    for (std::size_t k = 0; k < c2.chords.size(); ++k) {
      const Chord& l = c2.chords[k];
      const Point dl = l.to - l.from;
      const double den = cross(dg, dl);
      const double scale = dg.norm() * dl.norm();
      if (std::abs(den) <= margin * scale) {
        // Nearly parallel: acceptable only if well separated.
        const Point off = l.from - g.from;
        const double dist = std::abs(cross(dg, off)) / dg.norm();
        if (dist < margin) throw RealizationError("nearly tangent chords");
        continue;
      }
      const Point off = l.from - g.from;
      const double t = cross(off, dl) / den;
      const double s = cross(off, dg) / den;
      const double mt = margin / dg.norm();
      const double ms = margin / dl.norm();
      const bool near_t = t > -mt && t < 1 + mt;
      const bool near_s = s > -ms && s < 1 + ms;
      if (!(near_t && near_s)) continue;
      if (t < mt || t > 1 - mt || s < ms || s > 1 - ms)
        throw RealizationError("crossing too close to a chord end");
      IntersectionDatum d;
      d.point = g.from + t * dg;
      d.sign = den > 0 ? 1 : -1;
      d.gamma_arc = j;
      d.lambda_arc = k;
      d.gamma_p = surface::rotate(c1.word, j);
      d.lambda_p = surface::rotate(c2.word, k);
      out.push_back(std::move(d));
    }
  }
  for (std::size_t a = 0; a < out.size(); ++a)
    for (std::size_t b = a + 1; b < out.size(); ++b)
      if ((out[a].point - out[b].point).norm() < margin)
        throw RealizationError("crossings too close together");
  return out;
}

std::vector<IntersectionDatum> intersect_words(const Word& gamma, const Word& lambda, int genus,
                                               std::uint64_t seed, const RealizeOptions& opts) {
  const PLLoop c1 = realize(gamma, genus, derive_seed(seed, 0), opts);
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    const PLLoop c2 =
        realize(lambda, genus, derive_seed(seed, 1 + static_cast<std::uint64_t>(attempt)), opts);
    try {
      return intersections(c1, c2, opts.margin);
    } catch (const RealizationError&) {
    }
  }
  throw RealizationError("could not place '" + surface::format_word(gamma) + "' and '" +
                         surface::format_word(lambda) + "' in general position");
}

// ---------------------------------------------------------------------------

namespace {

int letter_rank(Letter x) { return 2 * std::abs(x) - (x > 0 ? 1 : 0); }

bool letters_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](int x, int y) { return letter_rank(x) < letter_rank(y); });
}

}  // namespace

Word canonical_rotation(const Word& w) {
  const Word r = surface::reduce(Word{w.letters, true});
  Word best = r;
  for (std::size_t k = 1; k < r.size(); ++k) {
    Word cand = surface::rotate(r, k);
    if (letters_less(cand.letters, best.letters)) best = std::move(cand);
  }
  return best;
}

bool LoopSum::KeyLess::operator()(const std::vector<int>& a, const std::vector<int>& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return letters_less(a, b);
}

LoopSum LoopSum::single(const Word& w, Rational c) {
  LoopSum s;
  s.add(c, w);
  return s;
}

void LoopSum::add(const Rational& c, const Word& w) {
  if (c.is_zero()) return;
  const Word key = canonical_rotation(w);
  auto it = terms_.find(key.letters);
  if (it == terms_.end()) {
    terms_.emplace(key.letters, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

LoopSum LoopSum::operator+(const LoopSum& o) const {
  LoopSum out = *this;
  for (const auto& [k, c] : o.terms_) out.add(c, Word{k, true});
  return out;
}

LoopSum LoopSum::operator-(const LoopSum& o) const { return *this + o.scaled(Rational(-1)); }

LoopSum LoopSum::scaled(const Rational& c) const {
  LoopSum out;
  for (const auto& [k, v] : terms_) out.add(v * c, Word{k, true});
  return out;
}

std::vector<LoopSum::Term> LoopSum::terms() const {
  std::vector<Term> out;
  for (const auto& [k, c] : terms_) out.push_back({c, Word{k, true}});
  return out;
}

// ---------------------------------------------------------------------------

LoopSum bracket(const Word& gamma, const Word& lambda, BracketKind kind, int genus,
                std::uint64_t seed) {
  LoopSum out;
  const auto data = intersect_words(gamma, lambda, genus, seed);
  const Rational half(1, 2);
  for (const auto& d : data) {
    const Rational eps(d.sign);
    const Word prod = surface::concat(d.gamma_p, d.lambda_p);
    if (kind == BracketKind::Oriented) {
      out.add(eps, prod);
    } else {
      out.add(eps * half, prod);
      out.add(-(eps * half), surface::concat(d.gamma_p, surface::inverse(d.lambda_p)));
    }
  }
  return out;
}

LoopSum bracket_oriented(const Word& gamma, const Word& lambda, int genus, std::uint64_t seed) {
  return bracket(gamma, lambda, BracketKind::Oriented, genus, seed);
}

LoopSum bracket_unoriented(const Word& gamma, const Word& lambda, int genus,
                           std::uint64_t seed) {
  return bracket(gamma, lambda, BracketKind::Unoriented, genus, seed);
}

LoopSum bracket(const LoopSum& x, const LoopSum& y, BracketKind kind, int genus,
                std::uint64_t seed) {
  LoopSum out;
  std::uint64_t stream = 0;
  for (const auto& tx : x.terms())
    for (const auto& ty : y.terms()) {
      const LoopSum b = bracket(tx.word, ty.word, kind, genus, derive_seed(seed, stream++));
      out = out + b.scaled(tx.coef * ty.coef);
    }
  return out;
}

LoopSum reverse(const LoopSum& s) {
  LoopSum out;
  for (const auto& t : s.terms()) out.add(t.coef, surface::inverse(t.word));
  return out;
}

double evaluate(const LoopSum& s, const surface::Representation& rho) {
  double v = 0.0;
  for (const auto& t : s.terms()) v += t.coef.value() * surface::trace_function(rho, t.word);
  return v;
}

Matrix variation_matrix(const liealg::GroupSpec& spec, const Matrix& g) {
  if (spec.is_general_linear()) return g;
  return 0.5 * (g - g.inverse());
}

double poisson_direct(const Word& gamma, const Word& lambda, const surface::Representation& rho,
                      std::uint64_t seed) {
  double v = 0.0;
  for (const auto& d : intersect_words(gamma, lambda, rho.genus, seed)) {
    const Matrix fg = variation_matrix(rho.spec, surface::holonomy_matrix(rho, d.gamma_p));
    const Matrix fl = variation_matrix(rho.spec, surface::holonomy_matrix(rho, d.lambda_p));
    v += d.sign * liealg::pairing(fg, fl);
  }
  return v;
}

Word torus_word(int p, int q) {
  Word w{{}, true};
  for (int i = 0; i < std::abs(p); ++i) w.letters.push_back(p > 0 ? 1 : -1);
  for (int i = 0; i < std::abs(q); ++i) w.letters.push_back(q > 0 ? 2 : -2);
  return w;
}

}  // namespace looplie::goldman
