#ifndef THURSTON_REP_HPP
#define THURSTON_REP_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "thurston/words.hpp"

namespace thurston {

// Representation of a rank-k free group into PGL(d,R): one invertible d x d
// matrix per generator, stored rescaled to unit absolute determinant.
struct MatrixRep {
  int rank = 0;
  int dim = 0;
  std::vector<Eigen::MatrixXd> gens;
  std::vector<Eigen::MatrixXd> gen_invs;
  std::string label;
};

MatrixRep make_rep(std::vector<Eigen::MatrixXd> generators,
                   std::string label = "");

// Matrix with max |entry| = 1 plus the removed log factor; keeps long word
// products inside double range. log_abs_det tracks log|det| of the
// represented matrix exactly through products, where recomputing it from
// entries would underflow or cancel.
struct ScaledMatrix {
  Eigen::MatrixXd mat;
  double log_scale = 0.0;
  double log_abs_det = 0.0;
};

ScaledMatrix scaled(Eigen::MatrixXd m);
ScaledMatrix product(const ScaledMatrix& a, const ScaledMatrix& b);
ScaledMatrix inverse(const ScaledMatrix& a);
ScaledMatrix matrix_power(const ScaledMatrix& a, int n);

ScaledMatrix evaluate_word(const MatrixRep& rep, const Word& w);
ScaledMatrix evaluate_class(const MatrixRep& rep, const CyclicWord& c);

// Sorted log moduli of eigenvalues (Jordan) or singular values (Cartan),
// zero-sum normalized. min_gap < 1e-8 marks a non-loxodromic element.
struct JordanVector {
  Eigen::VectorXd entries;  // nonincreasing, sums to zero
  double min_gap = 0.0;

  int dim() const { return static_cast<int>(entries.size()); }
  bool loxodromic(double tol = 1e-8) const { return min_gap > tol; }
};

JordanVector jordan_projection(const ScaledMatrix& m);
JordanVector cartan_projection(const ScaledMatrix& m);

// Word-level spectral data, multiplied letter by letter on every exterior
// power so each factor stays well conditioned. This is the route to use for
// long words or high sym powers, where the product matrix alone cannot
// resolve its small eigenvalues in double precision.
class SpectralEvaluator {
 public:
  explicit SpectralEvaluator(const MatrixRep& rep);

  const MatrixRep& rep() const { return rep_; }
  JordanVector jordan(const Word& w) const;
  JordanVector cartan(const Word& w) const;

 private:
  Eigen::VectorXd partial_sums(const Word& w, bool singular_values) const;

  MatrixRep rep_;
  // [level k-1][letter rank]: scaled exterior power of the letter matrix.
  std::vector<std::vector<ScaledMatrix>> levels_;
};

JordanVector jordan_projection(const MatrixRep& rep, const Word& w);
JordanVector cartan_projection(const MatrixRep& rep, const Word& w);

// Linear functional on Jordan coordinates.
struct LengthFunctional {
  Eigen::VectorXd coeffs;
  std::string name;

  double operator()(const JordanVector& v) const {
    return coeffs.dot(v.entries);
  }
};

// Presets: alpha_i (i-th simple root), lambda1, hilbert, two_lambda1,
// unstable_jacobian.
LengthFunctional functional_preset(const std::string& name, int dim);
LengthFunctional custom_functional(Eigen::VectorXd coeffs);

// (c_1,...,c_d) -> (-c_d,...,-c_1); evaluates on lambda(g^-1) as the
// original does on lambda(g).
LengthFunctional opposition_involution(const LengthFunctional& f);

// Generators replaced by their transposed inverses.
MatrixRep contragredient(const MatrixRep& rep);

// (d-1)-st symmetric power of a 2-dimensional representation, in the
// binomial-weighted monomial basis (multiplicative by construction).
MatrixRep sym_power(const MatrixRep& rep, int dim);
Eigen::MatrixXd sym_power_matrix(const Eigen::MatrixXd& m, int dim);

struct SchottkyResult {
  MatrixRep rep;
  bool certified = false;
  double margin = 0.0;  // smallest slack in the interval checks, radians
};

// Ping-pong pair in SL(2,R): diag(e^{t/2}, e^{-t/2}) and its conjugate by a
// quarter turn. The certificate checks interval disjointness and absorption
// on RP^1; failure flags the result instead of throwing.
SchottkyResult schottky_sl2(double t1, double t2, double separation);

struct RootFit {
  double slope = 0.0;
  double intercept = 0.0;
  double min_ratio = 0.0;  // min over classes of alpha_i(mu)/|word|
};

struct GapReport {
  std::vector<RootFit> roots;  // one per simple root
  bool anosov_like = false;    // all slopes clearly positive
};

// Empirical linear growth of root values of Cartan projections against word
// length; diagnostic only.
GapReport anosov_gap_report(const MatrixRep& rep,
                            const std::vector<CyclicWord>& classes);

// Full flag: subspace i is the span of the first i columns (orthonormal).
struct Flag {
  Eigen::MatrixXd basis;
};

// Flag of generalized eigenspaces ordered by decreasing eigenvalue modulus;
// requires all Jordan gaps > 1e-8.
Flag attracting_flag(const ScaledMatrix& m);
Flag repelling_flag(const ScaledMatrix& m);

// g applied to a flag, re-orthonormalized.
Flag apply_to_flag(const ScaledMatrix& g, const Flag& f);

// Largest principal angle between corresponding subspaces, maximized over
// the flag levels.
double flag_distance(const Flag& a, const Flag& b);

// Boundary value of the equivariant limit map at u * c^infinity.
Flag limit_map_periodic(const MatrixRep& rep, const CyclicWord& c,
                        const Word& prefix);

// Busemann-Iwasawa cocycle in Jordan coordinates, via norms of exterior
// powers applied to the flag's partial frames.
Eigen::VectorXd busemann_cocycle(const ScaledMatrix& g, const Flag& f);

// Matrix of k-minors acting on the k-th exterior power (subsets in
// lexicographic order).
Eigen::MatrixXd exterior_power(const Eigen::MatrixXd& m, int k);
// Directional derivative of exterior_power at m along mdot.
Eigen::MatrixXd exterior_power_derivative(const Eigen::MatrixXd& m,
                                          const Eigen::MatrixXd& mdot, int k);

// Analytic one-parameter family of representations with velocity matrices
// for the determinant-normalized generator paths at s = 0.
struct RepFamily {
  MatrixRep base;
  std::function<MatrixRep(double)> at;
  std::vector<Eigen::MatrixXd> velocity;
};

// Family s -> generators + s * velocity (then normalized).
RepFamily make_linear_family(const MatrixRep& base,
                             std::vector<Eigen::MatrixXd> raw_velocity);
// Family from an arbitrary closure; velocities by central differences.
RepFamily make_family(std::function<std::vector<Eigen::MatrixXd>(double)> gens,
                      std::string label = "");

}  // namespace thurston

#endif
