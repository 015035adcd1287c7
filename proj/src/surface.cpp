#include "looplie/surface.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace looplie::surface {

using liealg::AlgebraBasis;
using liealg::GroupElement;
using liealg::GroupSpec;

Presentation::Presentation(int g) : genus(g) {
  if (g < 1) throw std::invalid_argument("genus must be at least 1");
}

std::vector<Letter> Presentation::relator() const {
  std::vector<Letter> r;
  for (int i = 1; i <= genus; ++i) {
    r.push_back(-letter_a(i));
    r.push_back(-letter_b(i));
    r.push_back(letter_a(i));
    r.push_back(letter_b(i));
  }
  return r;
}

Word reduce(const Word& w) {
  std::vector<Letter> stack;
  for (Letter x : w.letters) {
    if (!stack.empty() && stack.back() == -x)
      stack.pop_back();
    else
      stack.push_back(x);
  }
  if (w.cyclic) {
    std::size_t lo = 0;
    std::size_t hi = stack.size();
    while (hi - lo >= 2 && stack[lo] == -stack[hi - 1]) {
      ++lo;
      --hi;
    }
    stack = std::vector<Letter>(stack.begin() + static_cast<std::ptrdiff_t>(lo),
                                stack.begin() + static_cast<std::ptrdiff_t>(hi));
  }
  return Word{std::move(stack), w.cyclic};
}

Word inverse(const Word& w) {
  Word out{{}, w.cyclic};
  out.letters.reserve(w.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out.letters.push_back(-*it);
  return out;
}

Word rotate(const Word& w, std::size_t start) {
  Word out{{}, w.cyclic};
  const std::size_t n = w.size();
  out.letters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.letters.push_back(w.letters[(start + i) % n]);
  return out;
}

Word concat(const Word& u, const Word& v) {
  Word out = u;
  out.letters.insert(out.letters.end(), v.letters.begin(), v.letters.end());
  return out;
}

std::string letter_name(Letter x) {
  const int k = std::abs(x);
  const int index = (k + 1) / 2;
  char c = (k % 2 == 1) ? 'a' : 'b';
  if (x < 0) c = static_cast<char>(std::toupper(c));
  return std::string(1, c) + std::to_string(index);
}

std::string format_word(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += letter_name(w.letters[i]);
  }
  return out;
}

Word parse_word(const std::string& text, const Presentation& pres, bool cyclic) {
  Word w{{}, cyclic};
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok.size() < 2) throw SchemaError("bad letter '" + tok + "'");
    const char c = tok[0];
    const bool inv = std::isupper(static_cast<unsigned char>(c));
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower != 'a' && lower != 'b') throw SchemaError("bad letter '" + tok + "'");
    for (std::size_t i = 1; i < tok.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(tok[i])))
        throw SchemaError("bad letter '" + tok + "'");
    const int index = std::stoi(tok.substr(1));
    const Letter x = (lower == 'a') ? letter_a(index) : letter_b(index);
    if (index < 1 || !pres.contains(x))
      throw SchemaError("letter '" + tok + "' is outside genus " + std::to_string(pres.genus));
    w.letters.push_back(inv ? -x : x);
  }
  return w;
}

// ---------------------------------------------------------------------------

Word apply_move(const Word& w, const Move& m, const Presentation& pres) {
  if (!pres.contains(m.letter) && m.kind != MoveKind::Relator)
    throw std::invalid_argument("move letter outside the presentation");
  Word out{{}, w.cyclic};
  const std::size_t pos = std::min(m.position, w.size());
  switch (m.kind) {
    case MoveKind::Conjugate:
      out.letters.push_back(m.letter);
      out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.end());
      out.letters.push_back(-m.letter);
      break;
    case MoveKind::CancellingPair:
      out.letters = w.letters;
      out.letters.insert(out.letters.begin() + static_cast<std::ptrdiff_t>(pos),
                         {m.letter, -m.letter});
      break;
    case MoveKind::Relator: {
      Word r{pres.relator(), false};
      if (m.inverse) r = inverse(r);
      out.letters = w.letters;
      out.letters.insert(out.letters.begin() + static_cast<std::ptrdiff_t>(pos),
                         r.letters.begin(), r.letters.end());
      break;
    }
  }
  return out;
}

Move random_move(const Word& w, const Presentation& pres, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> gen(1, pres.alphabet_size());
  std::bernoulli_distribution sign(0.5);
  std::uniform_int_distribution<std::size_t> pos(0, w.size());
  Move m;
  m.kind = static_cast<MoveKind>(kind(rng));
  m.letter = gen(rng) * (sign(rng) ? -1 : 1);
  m.position = pos(rng);
  m.inverse = sign(rng);
  return m;
}

Word homotopy_moves(const Word& w, const Presentation& pres, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  Word cur = w;
  for (int i = 0; i < count; ++i) cur = apply_move(cur, random_move(cur, pres, rng), pres);
  return count > 0 ? reduce(cur) : cur;
}

// ---------------------------------------------------------------------------

const Matrix& Representation::image(Letter generator) const {
  if (generator < 1 || generator > static_cast<int>(images.size()))
    throw std::out_of_range("generator index out of range");
  return images[static_cast<std::size_t>(generator - 1)].matrix();
}

namespace {

Matrix commutator(const Matrix& a, const Matrix& b) {
  return a * b * a.inverse() * b.inverse();
}

Matrix relator_of(const std::vector<Matrix>& images, int genus) {
  const auto d = images.front().rows();
  Matrix p = Matrix::Identity(d, d);
  for (int i = 0; i < genus; ++i) p = p * commutator(images[2 * i], images[2 * i + 1]);
  return p;
}

RealVector flatten(const Matrix& m) {
  RealVector v(2 * m.size());
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      v(at++) = m(i, j).real();
      v(at++) = m(i, j).imag();
    }
  return v;
}

// Matrix polynomial c₁x + c₃x³; commutes with x and stays in 𝔤 for every kind.
Matrix odd_polynomial(const Matrix& x, double c1, double c3) { return c1 * x + c3 * x * x * x; }

// Min-norm Gauss–Newton on the last handle (A, B) of P = C · [A, B].
bool solve_last_handle(std::vector<Matrix>& images, int genus, const AlgebraBasis& basis,
                       int max_iter) {
  const std::size_t ia = static_cast<std::size_t>(2 * genus - 2);
  const std::size_t ib = ia + 1;
  const int m = basis.size();
  const auto d = images.front().rows();

  Matrix prefix = Matrix::Identity(d, d);
  for (int i = 0; i + 1 < genus; ++i) prefix = prefix * commutator(images[2 * i], images[2 * i + 1]);

  auto residual_of = [&](const Matrix& a, const Matrix& b) {
    return (prefix * commutator(a, b) - Matrix::Identity(d, d)).norm();
  };

  Matrix a = images[ia];
  Matrix b = images[ib];
  double res = residual_of(a, b);
  for (int iter = 0; iter < max_iter && res > 1e-13; ++iter) {
    const Matrix ai = a.inverse();
    const Matrix bi = b.inverse();
    const Matrix ab = a * b;
    RealMatrix jac(2 * d * d, 2 * m);
    for (int k = 0; k < m; ++k) {
      const Matrix& e = basis[k];
      // A ← A(I + e):  A e B A⁻¹ B⁻¹ − A B e A⁻¹ B⁻¹
      const Matrix da = a * e * b * ai * bi - ab * e * ai * bi;
      // B ← B(I + e):  A B e A⁻¹ B⁻¹ − A B A⁻¹ e B⁻¹
      const Matrix db = ab * e * ai * bi - ab * ai * e * bi;
      jac.col(k) = flatten(prefix * da);
      jac.col(m + k) = flatten(prefix * db);
    }
    const RealVector r = flatten(prefix * commutator(a, b) - Matrix::Identity(d, d));
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(jac);
    cod.setThreshold(1e-10);
    const RealVector step = -cod.solve(r);

    double lambda = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      const Matrix na = a * liealg::expm(basis.combine(lambda * step.head(m)));
      const Matrix nb = b * liealg::expm(basis.combine(lambda * step.tail(m)));
      const double nres = residual_of(na, nb);
      if (nres < res) {
        a = na;
        b = nb;
        res = nres;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  images[ia] = a;
  images[ib] = b;
  return res <= tol::kRelator;
}

}  // namespace

Matrix relator_product(const Representation& rho) {
  std::vector<Matrix> m;
  for (const auto& g : rho.images) m.push_back(g.matrix());
  return relator_of(m, rho.genus);
}

double relator_residual(const Representation& rho) {
  const auto d = rho.spec.dim();
  return (relator_product(rho) - Matrix::Identity(d, d)).norm();
}

Representation sample_representation(const GroupSpec& spec, const Presentation& pres,
                                     std::uint64_t seed, const SampleOptions& options) {
  spec.validate();
  const int g = pres.genus;
  const int d = spec.dim();
  std::vector<Matrix> images(static_cast<std::size_t>(2 * g), Matrix::Identity(d, d));

  if (options.mode == SampleMode::Random) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    auto commuting_pair = [&](std::size_t at) {
      const Matrix x = liealg::random_algebra_element(spec, rng, options.scale).matrix();
      const double c1 = coef(rng);
      const double c3 = coef(rng);
      images[at] = liealg::expm(x);
      images[at + 1] = liealg::expm(odd_polynomial(x, c1, c3));
    };

    if (g == 1) {
      commuting_pair(0);
    } else {
      int handle = 0;
      if (g % 2 == 1) {
        commuting_pair(0);
        handle = 1;
      }
      // Swapped handles (X, Y), (Y, X) multiply to the identity exactly.
      for (; handle < g; handle += 2) {
        const Matrix x = liealg::random_element(spec, rng, options.scale).matrix();
        const Matrix y = liealg::random_element(spec, rng, options.scale).matrix();
        images[static_cast<std::size_t>(2 * handle)] = x;
        images[static_cast<std::size_t>(2 * handle + 1)] = y;
        images[static_cast<std::size_t>(2 * handle + 2)] = y;
        images[static_cast<std::size_t>(2 * handle + 3)] = x;
      }
      // Move off the special locus, then restore the relation on the last handle.
      for (std::size_t k = 0; k + 2 < images.size(); ++k) {
        const Matrix e =
            liealg::random_algebra_element(spec, rng, options.perturbation).matrix();
        images[k] = images[k] * liealg::expm(e);
      }
      const AlgebraBasis basis(spec);
      if (!solve_last_handle(images, g, basis, options.max_iter)) {
        throw SamplingFailure("relator Newton iteration did not converge (seed " +
                              std::to_string(seed) + ")");
      }
    }
  }

  Representation rho{spec, g, {}};
  for (const auto& m : images) rho.images.emplace_back(spec, m);
  return rho;
}

Representation conjugate(const Representation& rho, const Matrix& h) {
  const Matrix hi = h.inverse();
  Representation out{rho.spec, rho.genus, {}};
  for (const auto& g : rho.images) out.images.emplace_back(rho.spec, hi * g.matrix() * h);
  return out;
}

Matrix holonomy_matrix(const Representation& rho, const Word& w) {
  const auto d = rho.spec.dim();
  Matrix h = Matrix::Identity(d, d);
  for (Letter x : w.letters) {
    const Matrix& m = rho.image(std::abs(x));
    h = (x > 0 ? m : Matrix(m.inverse())) * h;
  }
  return h;
}

GroupElement holonomy(const Representation& rho, const Word& w) {
  return GroupElement(rho.spec, holonomy_matrix(rho, w));
}

double trace_function(const Representation& rho, const Word& w) {
  return holonomy_matrix(rho, w).trace().real();
}

}  // namespace looplie::surface
