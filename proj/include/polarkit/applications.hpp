#pragma once

// Derived objects: mixed (q^n - 1)/(q - 1)-ovoids of W(2n+1, q) built from a
// relative hemisystem and the pencil through its base, their hyperplane
// spectra, the strongly regular graph on a relative hemisystem over GF(2),
// and the hyperbolic pencil sets of Q+(5, q).

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polarkit/hemisystems.hpp"

namespace polarkit {

struct MixedChoice {
  int i = 0;       // index among the elliptic pencil members
  bool side_i = false;  // false: image of R, true: image of R^tau
  int j = 1;
  bool side_j = false;
};

struct MixedOvoid {
  std::shared_ptr<const PolarSpace> base;  // the member s = 0 with Sigma
  MixedChoice choice;
  std::vector<Elem> elliptic_members;  // pencil values s with Qe + s z^2 elliptic
  Elem shear_i = 0, shear_j = 0;       // c with c^2 + c = s
  PointSet a, b, qsection, x;
  int m_expected = 0;
};

/// Pencil values s whose member Qe + s z^2 is elliptic, ascending.
std::vector<Elem> elliptic_members(const QuadraticForm& qe);

/// Uses O1 of `base` as R. Throws usage for i == j, q == 2 or bad indices.
MixedOvoid build_mixed_ovoid(const HemisystemResult& base, const MixedChoice& choice);
/// Symplectic rank n = 2 n' built from the relative hemisystem of Q-(4n'+1, q).
MixedOvoid build_mixed_ovoid(int n, const FieldTable& f, const MixedChoice& choice);

/// W(2n+1, q) of the common polar form of the pencil.
PolarSpace symplectic_of(const MixedOvoid& x);

/// |g cap X| over every generator; pass when constant and equal to m_expected.
MovoidReport check_m_ovoid(const PolarSpace& w, const GeneratorList& gens, const PointSet& x,
                           std::optional<int> m_expected = {});
MovoidReport verify_symplectic_ovoid(const MixedOvoid& x, const GeneratorList& w_gens);

/// Intersection size -> number of hyperplanes, over every hyperplane.
std::map<std::size_t, std::size_t> hyperplane_spectrum(const ProjectiveSpace& ps, const PointSet& x);

struct TwoCharacter {
  std::map<std::size_t, std::size_t> spectrum;
  std::size_t h1 = 0, h2 = 0;
  bool pass = false;
};
/// Spectrum check against h1 = (q^n - 1)(q^n + 1)/(q - 1), h2 = h1 - q^n.
TwoCharacter two_character_check(const ProjectiveSpace& ps, const PointSet& x);

struct SrgResult {
  std::vector<PointIndex> vertices;
  std::vector<std::vector<std::uint64_t>> adj;  // bit rows
  std::optional<std::uint64_t> v, k, lambda, mu;
  std::uint64_t ev = 0, ek = 0, elambda = 0, emu = 0;
  bool feasible = false;
  std::size_t equivalence_checked = 0;
  bool pass = false;
  std::vector<std::string> witnesses;

  bool adjacent(std::size_t a, std::size_t b) const { return adj[a][b / 64] >> (b % 64) & 1; }
  std::uint64_t edges() const;
};

/// Graph on R with x ~ y iff B(x, y) = 0; parameters measured exhaustively.
SrgResult srg_build_verify(const PolarSpace& p, const PointSet& r, std::uint64_t seed = 1);

/// {"vertices": [...], "adjacency": [[...], ...]} with 0-based positions.
std::string srg_json(const SrgResult& g);
/// "p edge v m" then "e a b" lines, 1-based.
std::string srg_dimacs(const SrgResult& g);

struct HyperbolicSet {
  Elem a = 0;  // the hyperplane x0 = a z
  PointSet points;
  MovoidReport report;
};

struct HyperbolicReport {
  std::shared_ptr<const PolarSpace> space;
  std::size_t planes = 0;
  std::vector<HyperbolicSet> sets;
  /// m of the union of the first i + 1 sets.
  std::vector<std::optional<int>> union_m;
  bool pass = false;
};

/// Q-(3, q) in Q(4, q) = Sigma cap Q+(5, q): the q hyperplanes x0 = a z
/// through {x0 = z = 0} cut relative q-ovoids.
HyperbolicReport hyperbolic_demo(const FieldTable& f);

}  // namespace polarkit
