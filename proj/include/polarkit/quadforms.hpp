#pragma once

// Quadratic and bilinear forms, quadric classification, the canonical
// equations used throughout, pencils of quadrics and shears.
//
// The construction frame orders coordinates as (x0, y_1 .. y_2k, z) and
// carries F = x0^2 + x0 z + delta z^2 + f(y), f(y) = y1 y2 + ... + y_{2k-1} y_2k.
// Its hyperplane z = 0 (Sigma) meets the quadric in the parabolic
// x0^2 + f(y), whose nucleus is N = (1, 0, ..., 0).

#include <optional>
#include <string>
#include <vector>

#include "polarkit/gf.hpp"
#include "polarkit/projspace.hpp"

namespace polarkit {

class BilinearForm {
 public:
  BilinearForm(FieldTable f, Matrix gram);

  const FieldTable& field() const noexcept { return f_; }
  const Matrix& gram() const noexcept { return gram_; }
  int ncoords() const noexcept { return gram_.rows; }

  Elem eval(const ProjectiveSpace& ps, Code u, Code v) const;
  /// G u, so that B(u, v) = dot(G u, v).
  Code polar_vector(const ProjectiveSpace& ps, Code u) const;
  bool is_alternating() const;
  bool is_nondegenerate() const;

 private:
  FieldTable f_;
  Matrix gram_;
};

/// Q(x) = sum_{i <= j} upper(i, j) x_i x_j.
class QuadraticForm {
 public:
  QuadraticForm(FieldTable f, Matrix upper);
  static QuadraticForm zero(FieldTable f, int ncoords);

  const FieldTable& field() const noexcept { return f_; }
  const Matrix& upper() const noexcept { return upper_; }
  int ncoords() const noexcept { return upper_.rows; }

  Elem eval(std::span<const Elem> x) const;
  Elem eval(const ProjectiveSpace& ps, Code v) const;
  BilinearForm polar() const;

  QuadraticForm plus(const QuadraticForm& o) const;
  /// Adds c * x_i * x_j.
  QuadraticForm with_term(int i, int j, Elem c) const;
  /// x -> Q(M x), as an upper-triangular form.
  QuadraticForm compose(const Matrix& m) const;
  /// Form on the coordinates of the rows of `basis` (x -> Q(x^T basis)).
  QuadraticForm restrict_to(const ProjectiveSpace& ps, const Subspace& basis) const;

  bool operator==(const QuadraticForm& o) const { return upper_ == o.upper_; }

 private:
  FieldTable f_;
  Matrix upper_;
};

enum class Family { elliptic, hyperbolic, parabolic, cone };

std::string to_string(Family f);

struct QuadricClass {
  Family family = Family::parabolic;
  /// Only meaningful for cones: type of the nondegenerate base.
  Family base_family = Family::parabolic;
  /// Singular radical (vertex), empty for nondegenerate quadrics.
  Subspace radical;
  /// Vector dimension of a maximal totally singular subspace.
  int witt_index = 0;
  int ncoords = 0;
};

/// Radical of the polar form restricted to the zeros of Q, type of the
/// nondegenerate quotient, and a greedy maximal totally singular subspace.
QuadricClass classify_quadric(const QuadraticForm& q);

/// Nucleus of a parabolic quadric in characteristic 2, as a normalized vector.
Code nucleus_of(const ProjectiveSpace& ps, const QuadraticForm& q);

/// Perp of a subspace under a nondegenerate bilinear form.
Subspace perp_of(const ProjectiveSpace& ps, const Subspace& s, const BilinearForm& b);

enum class FormKind { elliptic, parabolic, hyperbolic, construction_frame };

/// Canonical equations for rank parameter n (ambient PG(2n+1, q), parabolic on
/// PG(2n, q)). The elliptic and hyperbolic kinds follow
///   X1 X_{2n+2} + ... + Xn X_{n+3} + X_{n+1}^2 + X_{n+1} X_{n+2} [+ delta X_{n+2}^2];
/// construction_frame is the (x0, y, z) frame described above with 2n y's.
QuadraticForm canonical_form(FormKind kind, int n, const FieldTable& f, Elem delta);

/// Construction-style frame with `pairs` y-pairs. When `elliptic_block` is
/// set the last y-pair carries y^2 + y y' + delta y'^2 instead of y y'.
QuadraticForm frame_form(const FieldTable& f, int pairs, Elem delta, bool elliptic_block = false);

struct PencilMember {
  std::optional<Elem> s;  // nullopt for the degenerate member z^2
  QuadraticForm form;
  QuadricClass cls;
};

/// Members Qe + s z^2 (s in GF(q)) followed by the degenerate member z^2.
std::vector<PencilMember> pencil_members(const QuadraticForm& qe);

struct PencilCensus {
  int elliptic = 0;
  int hyperbolic = 0;
  int degenerate = 0;
};
PencilCensus census(const std::vector<PencilMember>& members);

/// x0 -> x0 + c z on a frame with `ncoords` coordinates.
Matrix shear(int ncoords, Elem c);

}  // namespace polarkit
