#include "looplie/chen.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace looplie::chen {

namespace {

void check_finite(const Matrix& m) {
  if (!m.allFinite()) throw std::domain_error("non-finite sample in matrix path");
}

double sign_of(Convention c) { return c == Convention::Forward ? 1.0 : -1.0; }

}  // namespace

MatrixPath::MatrixPath(Sampler a, int intervals)
    : MatrixPath(std::vector<Segment>{Segment{0.0, 1.0, std::move(a), intervals}}) {}

MatrixPath::MatrixPath(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw std::invalid_argument("matrix path needs at least one segment");
  for (const auto& seg : segments_) {
    if (seg.intervals < 1) throw std::invalid_argument("segment needs at least one interval");
    if (!(seg.t1 > seg.t0)) throw std::invalid_argument("segment has non-positive length");
    std::vector<Matrix> vals;
    vals.reserve(static_cast<std::size_t>(seg.intervals) + 1);
    for (int m = 0; m <= seg.intervals; ++m) {
      const double t = seg.t0 + (seg.t1 - seg.t0) * m / seg.intervals;
      vals.push_back(seg.sampler(t));
      check_finite(vals.back());
    }
    if (dim_ == 0) dim_ = static_cast<int>(vals.front().rows());
    if (vals.front().rows() != dim_ || vals.front().cols() != dim_)
      throw std::invalid_argument("inconsistent sample sizes");
    samples_.push_back(std::move(vals));
  }
}

MatrixPath MatrixPath::piecewise_constant(const std::vector<Matrix>& values,
                                          int intervals_per_piece) {
  std::vector<Segment> segs;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Matrix v = values[i];
    segs.push_back({i / n, (i + 1) / n, [v](double) { return v; }, intervals_per_piece});
  }
  return MatrixPath(std::move(segs));
}

int MatrixPath::intervals() const {
  int total = 0;
  for (const auto& s : segments_) total += s.intervals;
  return total;
}

MatrixPath MatrixPath::concat(const MatrixPath& later) const {
  std::vector<Segment> segs;
  auto squeeze = [&segs](const std::vector<Segment>& src, double offset) {
    for (const auto& s : src) {
      Sampler f = s.sampler;
      segs.push_back({offset + s.t0 / 2, offset + s.t1 / 2,
                      [f, offset](double t) { return Matrix(2.0 * f(2.0 * (t - offset))); },
                      s.intervals});
    }
  };
  squeeze(segments_, 0.0);
  squeeze(later.segments_, 0.5);
  return MatrixPath(std::move(segs));
}

MatrixPath MatrixPath::coarsened(int factor) const {
  std::vector<Segment> segs = segments_;
  for (auto& s : segs) s.intervals = std::max(1, s.intervals / factor);
  return MatrixPath(std::move(segs));
}

MatrixPath MatrixPath::scaled(double c) const {
  std::vector<Segment> segs = segments_;
  for (auto& s : segs) {
    Sampler f = s.sampler;
    s.sampler = [f, c](double t) { return Matrix(c * f(t)); };
  }
  return MatrixPath(std::move(segs));
}

MatrixPath MatrixPath::conjugated(const Matrix& h) const {
  const Matrix hi = h.inverse();
  std::vector<Segment> segs = segments_;
  for (auto& s : segs) {
    Sampler f = s.sampler;
    s.sampler = [f, h, hi](double t) { return Matrix(hi * f(t) * h); };
  }
  return MatrixPath(std::move(segs));
}

Matrix TransportSeries::sum() const {
  Matrix s = Matrix::Zero(terms.front().rows(), terms.front().cols());
  for (const auto& t : terms) s += t;
  return s;
}

double remainder_bound(double R, int n_max) {
  if (R <= 0.0) return 0.0;
  // term = R^k / k!, starting at k = n_max + 1.
  double term = 1.0;
  for (int k = 1; k <= n_max + 1; ++k) term *= R / k;
  double total = 0.0;
  for (int k = n_max + 1; k < n_max + 1000; ++k) {
    total += term;
    term *= R / (k + 1);
    if (term < 1e-18 * total) break;
  }
  return total;
}

double remainder_bound(const TransportSeries& series) {
  return remainder_bound(series.R, series.n_max);
}

namespace {

// Terms of the series by trapezoid dynamic programming.
std::vector<Matrix> iterated_terms(const MatrixPath& path, int n_max, double sign,
                                   double* R_out) {
  const int d = path.dim();
  const Matrix id = Matrix::Identity(d, d);
  std::vector<Matrix> terms(static_cast<std::size_t>(n_max) + 1, Matrix::Zero(d, d));
  terms[0] = id;

  // prev[s][m] = S_{k−1} at grid point m of segment s.
  std::vector<std::vector<Matrix>> prev;
  for (const auto& vals : path.samples()) prev.emplace_back(vals.size(), id);

  if (R_out) {
    double R = 0.0;
    for (std::size_t s = 0; s < path.segments().size(); ++s) {
      const auto& seg = path.segments()[s];
      const double h = (seg.t1 - seg.t0) / seg.intervals;
      const auto& vals = path.samples()[s];
      for (std::size_t m = 0; m + 1 < vals.size(); ++m)
        R += 0.5 * h * (operator_norm(vals[m]) + operator_norm(vals[m + 1]));
    }
    *R_out = R;
  }

  for (int k = 1; k <= n_max; ++k) {
    Matrix acc = Matrix::Zero(d, d);
    std::vector<std::vector<Matrix>> cur;
    for (std::size_t s = 0; s < path.segments().size(); ++s) {
      const auto& seg = path.segments()[s];
      const double h = sign * (seg.t1 - seg.t0) / seg.intervals;
      const auto& vals = path.samples()[s];
      const auto& p = prev[s];
      std::vector<Matrix> row;
      row.reserve(vals.size());
      row.push_back(acc);
      for (std::size_t m = 0; m + 1 < vals.size(); ++m) {
        acc += 0.5 * h * (vals[m] * p[m] + vals[m + 1] * p[m + 1]);
        row.push_back(acc);
      }
      cur.push_back(std::move(row));
    }
    terms[static_cast<std::size_t>(k)] = acc;
    prev = std::move(cur);
  }
  return terms;
}

}  // namespace

TransportSeries picard_transport(const MatrixPath& path, int n_max, Convention convention) {
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  TransportSeries out;
  out.n_max = n_max;
  out.terms = iterated_terms(path, n_max, sign_of(convention), &out.R);
  out.remainder = remainder_bound(out.R, n_max);

  bool even = true;
  for (const auto& seg : path.segments()) even = even && seg.intervals % 2 == 0;
  if (!even) {
    out.quadrature_error = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const auto coarse = iterated_terms(path.coarsened(2), n_max, sign_of(convention), nullptr);
  Matrix diff = -out.sum();
  for (const auto& t : coarse) diff += t;
  out.quadrature_error = operator_norm(diff) / 3.0;
  return out;
}

TransportSeries picard_transport(const Sampler& a, int n_max, int intervals,
                                 Convention convention) {
  return picard_transport(MatrixPath(a, intervals), n_max, convention);
}

Matrix rk4_transport(const MatrixPath& path, Convention convention) {
  const double sign = sign_of(convention);
  const int d = path.dim();
  Matrix r = Matrix::Identity(d, d);
  for (const auto& seg : path.segments()) {
    const double h = (seg.t1 - seg.t0) / seg.intervals;
    for (int m = 0; m < seg.intervals; ++m) {
      const double t = seg.t0 + h * m;
      // Interior evaluations keep breakpoints one-sided.
      const Matrix a0 = sign * seg.sampler(t);
      const Matrix am = sign * seg.sampler(t + 0.5 * h);
      const Matrix a1 = sign * seg.sampler(m + 1 == seg.intervals ? seg.t1 : t + h);
      const Matrix k1 = a0 * r;
      const Matrix k2 = am * (r + 0.5 * h * k1);
      const Matrix k3 = am * (r + 0.5 * h * k2);
      const Matrix k4 = a1 * (r + h * k3);
      r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return r;
}

double fixed_point_defect(const MatrixPath& path, int n_max, Convention convention) {
  // T(Φ)(1) − Φ(1) with Φ = Σ_{k ≤ n_max} S_k equals S_{n_max+1}(1).
  const auto terms = iterated_terms(path, n_max + 1, sign_of(convention), nullptr);
  const int d = path.dim();
  Matrix phi = Matrix::Zero(d, d);
  for (int k = 0; k <= n_max; ++k) phi += terms[static_cast<std::size_t>(k)];
  Matrix t_phi = Matrix::Identity(d, d);
  for (int k = 1; k <= n_max + 1; ++k) t_phi += terms[static_cast<std::size_t>(k)];
  return operator_norm(t_phi - phi);
}

// ---------------------------------------------------------------------------

namespace {

Matrix theta_for(const Perturbation& theta, surface::Letter x, int d) {
  auto it = theta.find(std::abs(x));
  if (it == theta.end()) return Matrix::Zero(d, d);
  return x > 0 ? it->second : Matrix(-it->second);
}

}  // namespace

MatrixPath transported_perturbation(const surface::Representation& rho, const surface::Word& w,
                                    const Perturbation& theta, int intervals) {
  const int d = rho.spec.dim();
  const double n = static_cast<double>(w.size());
  std::vector<Segment> segs;
  Matrix u = Matrix::Identity(d, d);
  for (std::size_t j = 0; j < w.size(); ++j) {
    const surface::Letter x = w.letters[j];
    const Matrix& g = rho.image(std::abs(x));
    // An inverse letter crosses its edge at the start of the arc.
    if (x < 0) u = g.inverse() * u;
    const Matrix b = u.inverse() * (n * theta_for(theta, x, d)) * u;
    segs.push_back({j / n, (j + 1) / n, [b](double) { return b; }, intervals});
    if (x > 0) u = g * u;
  }
  return MatrixPath(std::move(segs));
}

PerturbedHolonomy perturbed_holonomy(const surface::Representation& rho, const surface::Word& w,
                                     const Perturbation& theta, int n_max, int intervals) {
  const int d = rho.spec.dim();
  PerturbedHolonomy out;
  out.flat = surface::holonomy_matrix(rho, w);
  if (w.empty()) {
    out.series.n_max = n_max;
    out.series.terms.assign(static_cast<std::size_t>(n_max) + 1, Matrix::Zero(d, d));
    out.series.terms[0] = Matrix::Identity(d, d);
    out.value = out.flat;
    return out;
  }
  out.series = picard_transport(transported_perturbation(rho, w, theta, intervals), n_max);
  out.value = out.flat * out.series.sum();
  return out;
}

Matrix perturbed_holonomy_rk4(const surface::Representation& rho, const surface::Word& w,
                              const Perturbation& theta, int intervals) {
  const int d = rho.spec.dim();
  Matrix r = Matrix::Identity(d, d);
  for (const surface::Letter x : w.letters) {
    const Matrix& g = rho.image(std::abs(x));
    if (x < 0) r = g.inverse() * r;
    // Arc time rescaled to [0, 1]; the integral over the arc is unchanged.
    const Matrix a = theta_for(theta, x, d);
    r = rk4_transport(MatrixPath([a](double) { return a; }, intervals)) * r;
    if (x > 0) r = g * r;
  }
  return r;
}

}  // namespace looplie::chen
