#include "thurston/rep.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace thurston {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Eigen::MatrixXd det_normalized(const Eigen::MatrixXd& m) {
  double det = m.determinant();
  if (!std::isfinite(det) || det == 0.0)
    fail(errc::singular_generator, "generator has zero determinant");
  int d = static_cast<int>(m.rows());
  return m / std::pow(std::abs(det), 1.0 / d);
}

// Orthonormal column frame with positive diagonal in the R factor.
Eigen::MatrixXd orthonormalized(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd r = q.transpose() * m;
  for (int i = 0; i < m.cols(); ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  return q;
}

// Partial sums lambda_1+...+lambda_k read off the top eigenvalue modulus
// (or singular value) of the k-th exterior power: the top value of each
// level stays inside double range where the small eigenvalues of the full
// matrix would drown in roundoff. The full sum is the tracked log|det|.
JordanVector from_partial_sums(const Eigen::VectorXd& partial) {
  const int d = static_cast<int>(partial.size()) - 1;
  Eigen::VectorXd lam(d);
  for (int i = 0; i < d; ++i) lam(i) = partial(i + 1) - partial(i);
  std::sort(lam.data(), lam.data() + d, [](double a, double b) { return a > b; });
  lam.array() -= lam.mean();
  JordanVector out;
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < d; ++i) gap = std::min(gap, lam(i) - lam(i + 1));
  out.min_gap = d > 1 ? gap : std::numeric_limits<double>::infinity();
  out.entries = std::move(lam);
  return out;
}

}  // namespace

MatrixRep make_rep(std::vector<Eigen::MatrixXd> generators, std::string label) {
  if (generators.empty())
    fail(errc::invalid_argument, "representation needs at least one generator");
  MatrixRep rep;
  rep.rank = static_cast<int>(generators.size());
  rep.dim = static_cast<int>(generators[0].rows());
  rep.label = std::move(label);
  for (auto& g : generators) {
    if (g.rows() != rep.dim || g.cols() != rep.dim)
      fail(errc::invalid_argument, "generators of mixed dimensions");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (!(smin > 1e-12 * smax))
      fail(errc::singular_generator, "generator is singular or near-singular");
    Eigen::MatrixXd norm = det_normalized(g);
    rep.gens.push_back(norm);
    rep.gen_invs.push_back(norm.inverse());
  }
  return rep;
}

ScaledMatrix scaled(Eigen::MatrixXd m) {
  double s = m.cwiseAbs().maxCoeff();
  if (!(s > 0.0) || !std::isfinite(s))
    fail(errc::invalid_argument, "matrix is zero or non-finite");
  const int d = static_cast<int>(m.rows());
  ScaledMatrix out{m / s, std::log(s), 0.0};
  // log|det| of the represented matrix, from the well-scaled copy.
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(out.mat);
  double logdet = 0.0;
  for (int i = 0; i < d; ++i) {
    double piv = std::abs(lu.matrixLU()(i, i));
    if (!(piv > 0.0)) fail(errc::singular_generator, "matrix is singular");
    logdet += std::log(piv);
  }
  out.log_abs_det = logdet + d * out.log_scale;
  return out;
}

ScaledMatrix product(const ScaledMatrix& a, const ScaledMatrix& b) {
  Eigen::MatrixXd m = a.mat * b.mat;
  double s = m.cwiseAbs().maxCoeff();
  if (!(s > 0.0) || !std::isfinite(s))
    fail(errc::invalid_argument, "matrix product is zero or non-finite");
  return ScaledMatrix{m / s, a.log_scale + b.log_scale + std::log(s),
                      a.log_abs_det + b.log_abs_det};
}

ScaledMatrix inverse(const ScaledMatrix& a) {
  Eigen::MatrixXd m = a.mat.inverse();
  double s = m.cwiseAbs().maxCoeff();
  return ScaledMatrix{m / s, -a.log_scale + std::log(s), -a.log_abs_det};
}

ScaledMatrix matrix_power(const ScaledMatrix& a, int n) {
  if (n < 0) return matrix_power(inverse(a), -n);
  ScaledMatrix acc = scaled(Eigen::MatrixXd::Identity(a.mat.rows(), a.mat.cols()));
  ScaledMatrix base = a;
  while (n > 0) {
    if (n & 1) acc = product(acc, base);
    base = product(base, base);
    n >>= 1;
  }
  return acc;
}

ScaledMatrix evaluate_word(const MatrixRep& rep, const Word& w) {
  if (w.rank != rep.rank)
    fail(errc::rank_mismatch, "word rank differs from representation rank");
  ScaledMatrix acc = scaled(Eigen::MatrixXd::Identity(rep.dim, rep.dim));
  for (Letter x : reduce(w).letters) {
    const Eigen::MatrixXd& m = x > 0 ? rep.gens[x - 1] : rep.gen_invs[-x - 1];
    acc = product(acc, scaled(m));
  }
  return acc;
}

ScaledMatrix evaluate_class(const MatrixRep& rep, const CyclicWord& c) {
  return evaluate_word(rep, as_word(c));
}

JordanVector jordan_projection(const ScaledMatrix& m) {
  const int d = static_cast<int>(m.mat.rows());
  Eigen::VectorXd partial(d + 1);
  partial(0) = 0.0;
  for (int k = 1; k < d; ++k) {
    Eigen::MatrixXd ext = k == 1 ? m.mat : exterior_power(m.mat, k);
    Eigen::EigenSolver<Eigen::MatrixXd> es(ext, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
      fail(errc::eigen_failure, "eigenvalue solver failed");
    double top = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(top > 0.0)) fail(errc::eigen_failure, "zero eigenvalue modulus");
    partial(k) = std::log(top) + k * m.log_scale;
  }
  partial(d) = m.log_abs_det;
  return from_partial_sums(partial);
}

JordanVector cartan_projection(const ScaledMatrix& m) {
  const int d = static_cast<int>(m.mat.rows());
  Eigen::VectorXd partial(d + 1);
  partial(0) = 0.0;
  for (int k = 1; k < d; ++k) {
    Eigen::MatrixXd ext = k == 1 ? m.mat : exterior_power(m.mat, k);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ext);
    double top = svd.singularValues().maxCoeff();
    if (!(top > 0.0)) fail(errc::eigen_failure, "zero singular value");
    partial(k) = std::log(top) + k * m.log_scale;
  }
  partial(d) = m.log_abs_det;
  return from_partial_sums(partial);
}

SpectralEvaluator::SpectralEvaluator(const MatrixRep& rep) : rep_(rep) {
  levels_.resize(rep_.dim - 1);
  for (int k = 1; k < rep_.dim; ++k) {
    auto& level = levels_[k - 1];
    level.resize(2 * rep_.rank);
    for (int i = 0; i < rep_.rank; ++i) {
      level[2 * i] = scaled(exterior_power(rep_.gens[i], k));
      level[2 * i + 1] = scaled(exterior_power(rep_.gen_invs[i], k));
    }
  }
}

Eigen::VectorXd SpectralEvaluator::partial_sums(const Word& w,
                                                bool singular_values) const {
  if (w.rank != rep_.rank)
    fail(errc::rank_mismatch, "word rank differs from representation rank");
  Word r = reduce(w);
  // The Jordan projection is a class function: work with the cyclic
  // reduction, where the spectral radius is comparable to the norm at every
  // exterior level. Conjugation slack would otherwise push the top
  // eigenvalue below the roundoff floor of the product matrix.
  if (!singular_values && !r.letters.empty()) r = as_word(canonical_class(r));
  const int d = rep_.dim;
  Eigen::VectorXd partial(d + 1);
  partial(0) = 0.0;
  double logdet = 0.0;
  for (Letter x : r.letters)
    logdet += levels_[0][letter_rank(x)].log_abs_det;
  for (int k = 1; k < d; ++k) {
    const auto& level = levels_[k - 1];
    const int n = static_cast<int>(level[0].mat.rows());
    ScaledMatrix acc = scaled(Eigen::MatrixXd::Identity(n, n));
    for (Letter x : r.letters) acc = product(acc, level[letter_rank(x)]);
    double top;
    if (singular_values) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(acc.mat);
      top = svd.singularValues().maxCoeff();
    } else {
      Eigen::EigenSolver<Eigen::MatrixXd> es(acc.mat, false);
      if (es.info() != Eigen::Success)
        fail(errc::eigen_failure, "eigenvalue solver failed");
      top = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    if (!(top > 0.0)) fail(errc::eigen_failure, "degenerate exterior power");
    partial(k) = std::log(top) + acc.log_scale;
  }
  partial(d) = logdet;
  return partial;
}

JordanVector SpectralEvaluator::jordan(const Word& w) const {
  return from_partial_sums(partial_sums(w, false));
}

JordanVector SpectralEvaluator::cartan(const Word& w) const {
  return from_partial_sums(partial_sums(w, true));
}

JordanVector jordan_projection(const MatrixRep& rep, const Word& w) {
  return SpectralEvaluator(rep).jordan(w);
}

JordanVector cartan_projection(const MatrixRep& rep, const Word& w) {
  return SpectralEvaluator(rep).cartan(w);
}

LengthFunctional functional_preset(const std::string& name, int dim) {
  if (dim < 2) fail(errc::invalid_argument, "dimension must be >= 2");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  if (name.rfind("alpha", 0) == 0 && name.size() > 5) {
    int i = 0;
    try {
      i = std::stoi(name.substr(5));
    } catch (...) {
      fail(errc::unknown_preset, "bad simple root index in '" + name + "'");
    }
    if (i < 1 || i >= dim)
      fail(errc::index_out_of_range,
           "alpha" + std::to_string(i) + " undefined in dimension " +
               std::to_string(dim));
    c(i - 1) = 1.0;
    c(i) = -1.0;
  } else if (name == "lambda1") {
    c(0) = 1.0;
  } else if (name == "hilbert") {
    c(0) = 1.0;
    c(dim - 1) = -1.0;
  } else if (name == "two_lambda1") {
    c(0) = 2.0;
  } else if (name == "unstable_jacobian") {
    c(0) = dim - 1;
    c(dim - 1) = 1.0;
  } else {
    fail(errc::unknown_preset, "no functional preset named '" + name + "'");
  }
  return LengthFunctional{c, name};
}

LengthFunctional custom_functional(Eigen::VectorXd coeffs) {
  return LengthFunctional{std::move(coeffs), "custom"};
}

LengthFunctional opposition_involution(const LengthFunctional& f) {
  Eigen::VectorXd c = -f.coeffs.reverse();
  return LengthFunctional{c, f.name + "*"};
}

MatrixRep contragredient(const MatrixRep& rep) {
  std::vector<Eigen::MatrixXd> gens;
  for (const auto& g : rep.gens) gens.push_back(g.inverse().transpose());
  return make_rep(std::move(gens), rep.label.empty() ? "" : rep.label + "*");
}

Eigen::MatrixXd sym_power_matrix(const Eigen::MatrixXd& m, int dim) {
  if (m.rows() != 2 || m.cols() != 2)
    fail(errc::invalid_argument, "symmetric powers start from dimension 2");
  if (dim < 2) fail(errc::invalid_argument, "target dimension must be >= 2");
  const int n = dim - 1;
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i <= n; ++i) {
    // (a x + c y)^(n-i) (b x + d y)^i expanded over x^(n-j) y^j.
    std::vector<double> coef(n + 1, 0.0);
    for (int p = 0; p <= n - i; ++p)
      for (int q = 0; q <= i; ++q)
        coef[p + q] += binomial(n - i, p) * std::pow(a, n - i - p) *
                       std::pow(c, p) * binomial(i, q) *
                       std::pow(b, i - q) * std::pow(d, q);
    for (int j = 0; j <= n; ++j)
      out(j, i) = coef[j] * binomial(n, i) / binomial(n, j);
  }
  return out;
}

MatrixRep sym_power(const MatrixRep& rep, int dim) {
  if (rep.dim != 2)
    fail(errc::invalid_argument, "symmetric powers start from dimension 2");
  std::vector<Eigen::MatrixXd> gens;
  for (const auto& g : rep.gens) gens.push_back(sym_power_matrix(g, dim));
  std::string label = rep.label.empty()
                          ? ""
                          : rep.label + "_sym" + std::to_string(dim - 1);
  return make_rep(std::move(gens), std::move(label));
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// RP^1 as angles in [0, pi).
double angle_mod_pi(double a) {
  a = std::fmod(a, kPi);
  return a < 0 ? a + kPi : a;
}

double angle_of(const Eigen::Vector2d& v) {
  return angle_mod_pi(std::atan2(v(1), v(0)));
}

double apply_to_angle(const Eigen::Matrix2d& m, double ang) {
  Eigen::Vector2d v(std::cos(ang), std::sin(ang));
  return angle_of(m * v);
}

double circ_dist(double a, double b) {
  double d = std::abs(angle_mod_pi(a) - angle_mod_pi(b));
  return std::min(d, kPi - d);
}

struct AxisAngles {
  double attracting = 0.0;
  double repelling = 0.0;
};

AxisAngles axis_of(const Eigen::Matrix2d& m) {
  Eigen::EigenSolver<Eigen::Matrix2d> es(m);
  if (es.info() != Eigen::Success)
    fail(errc::eigen_failure, "eigenvalue solver failed");
  double m0 = std::abs(es.eigenvalues()(0)), m1 = std::abs(es.eigenvalues()(1));
  int att = m0 >= m1 ? 0 : 1;
  AxisAngles out;
  out.attracting = angle_of(es.eigenvectors().col(att).real());
  out.repelling = angle_of(es.eigenvectors().col(1 - att).real());
  return out;
}

}  // namespace

SchottkyResult schottky_sl2(double t1, double t2, double separation) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    fail(errc::invalid_argument,
         "translation parameters must be positive (trace > 2)");
  if (!(separation > 0.0))
    fail(errc::invalid_argument, "separation must be positive");
  Eigen::Matrix2d a, rot, b;
  a << std::exp(t1 / 2), 0.0, 0.0, std::exp(-t1 / 2);
  double th = kPi / 4;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Eigen::Matrix2d diag2;
  diag2 << std::exp(t2 / 2), 0.0, 0.0, std::exp(-t2 / 2);
  b = rot * diag2 * rot.transpose();

  SchottkyResult res;
  res.rep = make_rep({a, b}, "schottky");

  // Certificate: intervals of half-width w around the four fixed points must
  // be pairwise disjoint, and each group element must absorb the complement
  // of its repelling interval into its attracting interval.
  const double w = (kPi / 8) * separation / (1.0 + separation);
  AxisAngles axis_a = axis_of(a), axis_b = axis_of(b);
  std::vector<double> centers{axis_a.attracting, axis_a.repelling,
                              axis_b.attracting, axis_b.repelling};
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      margin = std::min(margin, circ_dist(centers[i], centers[j]) - 2 * w);

  auto absorption = [&](const Eigen::Matrix2d& g, double att, double rep) {
    // Complement of the repelling interval is the arc between rep+w and
    // rep-w through att; its image must land inside the attracting interval.
    for (double endpoint : {rep + w, rep - w}) {
      double image = apply_to_angle(g, endpoint);
      margin = std::min(margin, w - circ_dist(image, att));
    }
  };
  absorption(a, axis_a.attracting, axis_a.repelling);
  absorption(a.inverse(), axis_a.repelling, axis_a.attracting);
  absorption(b, axis_b.attracting, axis_b.repelling);
  absorption(b.inverse(), axis_b.repelling, axis_b.attracting);

  res.margin = margin;
  res.certified = margin > 0.0;
  return res;
}

GapReport anosov_gap_report(const MatrixRep& rep,
                            const std::vector<CyclicWord>& classes) {
  if (classes.empty())
    fail(errc::invalid_argument, "gap report needs a nonempty class sample");
  const int nroots = rep.dim - 1;
  GapReport report;
  report.roots.resize(nroots);
  std::vector<double> sx(nroots, 0), sy(nroots, 0), sxx(nroots, 0), sxy(nroots, 0);
  std::vector<double> minratio(nroots, std::numeric_limits<double>::infinity());
  for (const CyclicWord& c : classes) {
    JordanVector mu = cartan_projection(evaluate_class(rep, c));
    double len = c.length();
    for (int i = 0; i < nroots; ++i) {
      double y = mu.entries(i) - mu.entries(i + 1);
      sx[i] += len;
      sy[i] += y;
      sxx[i] += len * len;
      sxy[i] += len * y;
      minratio[i] = std::min(minratio[i], y / len);
    }
  }
  const double n = static_cast<double>(classes.size());
  bool ok = true;
  for (int i = 0; i < nroots; ++i) {
    double denom = n * sxx[i] - sx[i] * sx[i];
    double slope = denom != 0.0 ? (n * sxy[i] - sx[i] * sy[i]) / denom : 0.0;
    report.roots[i].slope = slope;
    report.roots[i].intercept = (sy[i] - slope * sx[i]) / n;
    report.roots[i].min_ratio = minratio[i];
    ok = ok && slope > 1e-3;
  }
  report.anosov_like = ok;
  return report;
}

Flag attracting_flag(const ScaledMatrix& m) {
  JordanVector jv = jordan_projection(m);
  if (!jv.loxodromic())
    fail(errc::non_loxodromic,
         "matrix has an eigenvalue modulus gap below 1e-8");
  Eigen::EigenSolver<Eigen::MatrixXd> es(m.mat);
  if (es.info() != Eigen::Success)
    fail(errc::eigen_failure, "eigenvalue solver failed");
  const int d = static_cast<int>(m.mat.rows());
  // Loxodromic: all moduli distinct, so the spectrum is real and the
  // eigenvectors can be taken real.
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(j));
  });
  Eigen::MatrixXd basis(d, d);
  for (int k = 0; k < d; ++k)
    basis.col(k) = es.eigenvectors().col(order[k]).real();
  Eigen::MatrixXd q = orthonormalized(basis);

  // Orthogonal-iteration polish: the invariant flag is the fixed point of
  // Q -> qr(m Q), and each step contracts by the eigenvalue-modulus ratios.
  auto residual = [&](const Eigen::MatrixXd& basisq) {
    double worst = 0.0;
    for (int i = 1; i < d; ++i) {
      Eigen::MatrixXd v = m.mat * basisq.leftCols(i);
      Eigen::MatrixXd rem =
          v - basisq.leftCols(i) * (basisq.leftCols(i).transpose() * v);
      worst = std::max(worst, rem.norm() / std::max(v.norm(), 1e-300));
    }
    return worst;
  };
  double best = residual(q);
  for (int it = 0; it < 200 && best > 1e-14; ++it) {
    Eigen::MatrixXd next = orthonormalized(m.mat * q);
    double r = residual(next);
    if (!(r < best)) break;
    q = next;
    best = r;
  }
  if (!(best <= 1e-8))
    fail(errc::eigen_failure, "invariant flag did not converge");
  return Flag{q};
}

Flag repelling_flag(const ScaledMatrix& m) { return attracting_flag(inverse(m)); }

Flag apply_to_flag(const ScaledMatrix& g, const Flag& f) {
  return Flag{orthonormalized(g.mat * f.basis)};
}

double flag_distance(const Flag& a, const Flag& b) {
  if (a.basis.rows() != b.basis.rows())
    fail(errc::invalid_argument, "flags in different dimensions");
  const int d = static_cast<int>(a.basis.rows());
  // sin of the largest principal angle per level: the norm of the part of
  // one frame outside the other subspace. Well conditioned near zero.
  double worst = 0.0;
  for (int i = 1; i < d; ++i) {
    Eigen::MatrixXd bi = b.basis.leftCols(i);
    Eigen::MatrixXd rem = bi - a.basis.leftCols(i) *
                                   (a.basis.leftCols(i).transpose() * bi);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rem);
    worst = std::max(worst, svd.singularValues().maxCoeff());
  }
  return worst;
}

Flag limit_map_periodic(const MatrixRep& rep, const CyclicWord& c,
                        const Word& prefix) {
  Flag f = attracting_flag(evaluate_class(rep, c));
  if (reduce(prefix).letters.empty()) return f;
  return apply_to_flag(evaluate_word(rep, prefix), f);
}

Eigen::VectorXd busemann_cocycle(const ScaledMatrix& g, const Flag& f) {
  const int d = static_cast<int>(g.mat.rows());
  if (f.basis.rows() != d)
    fail(errc::invalid_argument, "flag dimension mismatch");
  Eigen::VectorXd partial(d + 1);
  partial(0) = 0.0;
  for (int i = 1; i < d; ++i) {
    Eigen::MatrixXd w = g.mat * f.basis.leftCols(i);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(w);
    double logdet = 0.0;
    for (int k = 0; k < i; ++k) {
      double sv = svd.singularValues()(k);
      if (!(sv > 0.0))
        fail(errc::eigen_failure, "degenerate frame in exterior-power norm");
      logdet += std::log(sv);
    }
    partial(i) = logdet + i * g.log_scale;
  }
  // Full level: |det(g F)| = |det g|, tracked exactly through products.
  partial(d) = g.log_abs_det;
  Eigen::VectorXd sigma(d);
  for (int i = 0; i < d; ++i) sigma(i) = partial(i + 1) - partial(i);
  sigma.array() -= sigma.mean();
  return sigma;
}

namespace {

std::vector<std::vector<int>> subsets_lex(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == d - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(i, j) = m(rows[i], cols[j]);
  return out;
}

}  // namespace

Eigen::MatrixXd exterior_power(const Eigen::MatrixXd& m, int k) {
  const int d = static_cast<int>(m.rows());
  if (k < 1 || k > d) fail(errc::invalid_argument, "exterior power out of range");
  auto subs = subsets_lex(d, k);
  const int n = static_cast<int>(subs.size());
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = submatrix(m, subs[i], subs[j]).determinant();
  return out;
}

Eigen::MatrixXd exterior_power_derivative(const Eigen::MatrixXd& m,
                                          const Eigen::MatrixXd& mdot, int k) {
  const int d = static_cast<int>(m.rows());
  if (k < 1 || k > d) fail(errc::invalid_argument, "exterior power out of range");
  auto subs = subsets_lex(d, k);
  const int n = static_cast<int>(subs.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd sub = submatrix(m, subs[i], subs[j]);
      for (int r = 0; r < k; ++r) {
        Eigen::MatrixXd patched = sub;
        for (int cidx = 0; cidx < k; ++cidx)
          patched(r, cidx) = mdot(subs[i][r], subs[j][cidx]);
        out(i, j) += patched.determinant();
      }
    }
  return out;
}

RepFamily make_linear_family(const MatrixRep& base,
                             std::vector<Eigen::MatrixXd> raw_velocity) {
  if (raw_velocity.size() != base.gens.size())
    fail(errc::invalid_argument, "one velocity matrix per generator required");
  RepFamily fam;
  fam.base = base;
  std::vector<Eigen::MatrixXd> gens = base.gens;
  std::vector<Eigen::MatrixXd> vel = raw_velocity;
  fam.at = [gens, vel, label = base.label](double s) {
    std::vector<Eigen::MatrixXd> g;
    for (std::size_t i = 0; i < gens.size(); ++i) g.push_back(gens[i] + s * vel[i]);
    return make_rep(std::move(g), label);
  };
  // Velocity of the determinant-normalized path at s = 0; base generators
  // already have |det| = 1.
  for (std::size_t i = 0; i < base.gens.size(); ++i) {
    const Eigen::MatrixXd& g = base.gens[i];
    double trace_term = (base.gen_invs[i] * raw_velocity[i]).trace() / base.dim;
    fam.velocity.push_back(raw_velocity[i] - g * trace_term);
  }
  return fam;
}

RepFamily make_family(std::function<std::vector<Eigen::MatrixXd>(double)> gens,
                      std::string label) {
  RepFamily fam;
  fam.base = make_rep(gens(0.0), label);
  fam.at = [gens, label](double s) { return make_rep(gens(s), label); };
  const double h = 1e-6;
  MatrixRep plus = fam.at(h), minus = fam.at(-h);
  for (int i = 0; i < fam.base.rank; ++i)
    fam.velocity.push_back((plus.gens[i] - minus.gens[i]) / (2 * h));
  return fam;
}

}  // namespace thurston
