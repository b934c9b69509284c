#pragma once

// A polar space sitting in a projective space: the singular points of a
// quadratic form (or every point, for a symplectic form), optionally with a
// distinguished nontangent hyperplane Sigma and its nucleus N = Sigma^perp.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "polarkit/projspace.hpp"
#include "polarkit/quadforms.hpp"

namespace polarkit {

/// Strictly increasing point indices of one ambient space.
class PointSet {
 public:
  PointSet() = default;
  /// Sorts and removes duplicates.
  static PointSet from(std::vector<PointIndex> idx);

  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  bool contains(PointIndex p) const;
  const std::vector<PointIndex>& indices() const noexcept { return idx_; }
  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }

  std::vector<std::uint8_t> bitmap(std::size_t ambient) const;

  bool operator==(const PointSet&) const = default;

 private:
  std::vector<PointIndex> idx_;
};

PointSet set_union(const PointSet& a, const PointSet& b);
PointSet set_intersection(const PointSet& a, const PointSet& b);
PointSet set_difference(const PointSet& a, const PointSet& b);

class PolarSpace {
 public:
  /// Quadric polar space of q. When `sigma` is given it must be a hyperplane
  /// whose perp N lies in it and is the nucleus of the section (q even).
  static PolarSpace quadric(ProjectiveSpace ps, QuadraticForm q, std::optional<Subspace> sigma = {});
  static PolarSpace symplectic(ProjectiveSpace ps, BilinearForm b);

  const ProjectiveSpace& ps() const noexcept { return ps_; }
  bool is_symplectic() const noexcept { return !form_.has_value(); }
  const QuadraticForm& form() const;
  const BilinearForm& bilinear() const noexcept { return b_; }
  const QuadricClass& cls() const noexcept { return cls_; }
  /// Vector dimension of the generators.
  int rank() const noexcept { return cls_.witt_index; }

  const PointSet& points() const noexcept { return points_; }
  bool on_space(PointIndex p) const noexcept { return on_[p] != 0; }
  bool singular(Code v) const;

  bool has_sigma() const noexcept { return sigma_.has_value(); }
  const Subspace& sigma() const;
  bool on_sigma(PointIndex p) const noexcept { return in_sigma_[p] != 0; }
  Code nucleus() const;
  PointIndex nucleus_index() const;
  /// Points of the space outside Sigma, and those inside (the section Q).
  const PointSet& off_points() const noexcept { return off_; }
  const PointSet& section_points() const noexcept { return section_; }

  /// G u for the point with index p, so that B(p, v) = dot(polar(p), v).
  Code polar(PointIndex p) const noexcept { return pv_[p]; }
  Elem pair(PointIndex a, PointIndex b) const noexcept { return ps_.dot(pv_[a], ps_.point(b)); }
  bool orth(PointIndex a, PointIndex b) const noexcept { return pair(a, b) == 0; }

  /// x -> x + B(x, N)/Q(N) N: fixes Sigma pointwise and every line on N.
  const Matrix& tau() const;
  PointIndex tau_point(PointIndex p) const;

 private:
  PolarSpace(ProjectiveSpace ps, std::optional<QuadraticForm> q, BilinearForm b);
  void build(std::optional<Subspace> sigma);

  ProjectiveSpace ps_;
  std::optional<QuadraticForm> form_;
  BilinearForm b_;
  QuadricClass cls_;
  PointSet points_;
  std::vector<std::uint8_t> on_;
  std::vector<Code> pv_;
  std::optional<Subspace> sigma_;
  std::vector<std::uint8_t> in_sigma_;
  Code nucleus_ = 0;
  PointSet off_, section_;
  Matrix tau_;
};

PointSet quadric_points(const PolarSpace& p);

/// {x_coord = 0}.
Subspace coordinate_hyperplane(const ProjectiveSpace& ps, int coord);
/// Frame quadric with `pairs` y-pairs on PG(2 pairs + 1, q) and Sigma = {z = 0}.
PolarSpace frame_space(const FieldTable& f, int pairs, Elem delta, bool elliptic_block = false);

struct GeneratorList {
  std::vector<Subspace> gens;
  std::vector<std::uint8_t> in_sigma;  // 1 when the generator lies in Sigma
  /// Set when gens is a random sample of generators not in Sigma.
  bool sampled = false;
  std::uint64_t sample_seed = 0;

  std::size_t size() const noexcept { return gens.size(); }
  /// Number of generators not contained in Sigma (the set B).
  std::size_t count_off_sigma() const;
};

/// Closed-form number of generators, when the space is nondegenerate.
std::optional<std::uint64_t> expected_generator_count(const PolarSpace& p);
/// q (q^n - 1) prod_{i=2}^n (q^i + 1) for Q-(2n+1, q), i.e. generators not in Sigma.
std::uint64_t expected_off_sigma_count(const PolarSpace& p);

inline constexpr std::uint64_t kMaxGenerators = 10'000'000;

/// All generators, sorted canonically. Throws resource when the closed-form
/// count exceeds kMaxGenerators, internal when the enumeration disagrees
/// with it.
GeneratorList enumerate_generators(const PolarSpace& p);

/// Uniform random generators not in Sigma (with replacement), built by random
/// singular extension from a random off-Sigma point.
GeneratorList sample_generators(const PolarSpace& p, std::size_t count, std::uint64_t seed);

struct SecantData {
  std::vector<Subspace> lines;                            // canonical order
  std::vector<std::array<PointIndex, 2>> pairs;           // off-points on each line
  std::vector<PointIndex> line_of;                        // ambient point -> line, or npos
  static constexpr PointIndex npos = static_cast<PointIndex>(-1);
};

/// Lines through N meeting the space in two points off Sigma.
SecantData nucleus_secants(const PolarSpace& p);

struct SectionInfo {
  bool tangent = false;
  /// Tangent point when tangent (H = P^perp).
  std::optional<PointIndex> tangent_point;
  QuadricClass hyperplane_section;
  /// Class of H cap Sigma cap quadric.
  std::optional<QuadricClass> sigma_section;
  /// Vertex of a degenerate Sigma-section in ambient coordinates.
  Subspace vertex;
};

SectionInfo section_classify(const PolarSpace& p, const Subspace& h);

struct MovoidReport {
  bool pass = false;
  std::optional<int> m;
  std::size_t size = 0;
  std::size_t generators_checked = 0;
  bool size_ok = false;
  std::size_t expected_size = 0;
  /// Up to 10 (generator position, count) pairs disagreeing with m.
  std::vector<std::pair<std::size_t, int>> violations;
  bool sampled = false;
};

inline constexpr std::size_t kMaxWitnesses = 10;

/// Counts |g cap R| over the generators not in Sigma. R must lie off Sigma on
/// the space. Also checks |R| = m q (q^n - 1) for elliptic ambient spaces.
MovoidReport relative_movoid_check(const PolarSpace& p, const GeneratorList& gens, const PointSet& r);

/// Per-generator counts |g cap X| over all generators (no Sigma filter).
std::vector<int> generator_counts(const PolarSpace& p, const GeneratorList& gens, const PointSet& x);

struct LemmaAudit {
  /// Observed constants for parts a..f; nullopt when no case occurred or the
  /// counts were not constant.
  std::array<std::optional<long>, 6> observed{};
  std::array<long, 6> expected{};
  std::array<std::size_t, 6> cases{};
  std::array<bool, 6> ok{};
  bool m_confirmed = false;
  bool pass = false;
  std::vector<std::string> witnesses;
};

LemmaAudit lemma_pre_audit(const PolarSpace& p, const GeneratorList& gens, const PointSet& r, int m);

}  // namespace polarkit
