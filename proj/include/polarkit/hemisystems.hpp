#pragma once

// Relative hemisystems: the orbit construction on Q-(4n+1, q), the line
// census, and exhaustive searches on small elliptic quadrics.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "polarkit/fieldreduction.hpp"
#include "polarkit/polarspace.hpp"

namespace polarkit {

/// Breadth-first closure of `seed` under the matrices and their inverses.
/// Throws internal when a point leaves the space (p may be null to skip).
PointSet orbit_closure(const ProjectiveSpace& ps, const std::vector<Matrix>& gens, PointIndex seed,
                       const PolarSpace* p = nullptr);
PointSet orbit_closure(const PolarSpace& p, const std::vector<LiftedIsometry>& gens, PointIndex seed);

struct LineCensus {
  std::uint64_t l1 = 0, l2 = 0, l3 = 0;
  std::uint64_t total = 0;
  /// Profiles (|l cap O1|, |l cap O2|) outside {(q,0), (0,q), (q/2,q/2)}.
  std::map<std::pair<int, int>, std::uint64_t> unexpected;
  bool ok = false;
};

/// Every totally singular line of the space not contained in Sigma, by its
/// profile against O1 and O2.
LineCensus line_census(const PolarSpace& p, const PointSet& o1, const PointSet& o2);

struct ConstructOptions {
  std::size_t sample_count = 100000;
  std::uint64_t sample_seed = 1;
};

struct HemisystemResult {
  int n = 0;
  std::shared_ptr<const BlowupContext> ctx;
  std::shared_ptr<const PolarSpace> space;
  std::vector<LiftedIsometry> gens;
  PointIndex seed = 0;
  PointSet o1, o2;
  bool partition_ok = false;
  bool partner_orbit_ok = false;
  int m_expected = 0;
  GeneratorList generators;
  MovoidReport report_o1, report_o2;
  bool pass = false;
};

/// Orbit construction on the frame Q-(4n+1, q); generators not in Sigma are
/// enumerated when at most 10^7, otherwise sampled (flagged in the report).
HemisystemResult construct_relative_hemisystem(int n, const FieldTable& f, const ConstructOptions& opt = {});

struct SearchOptions {
  std::uint64_t budget = 0;  // node cap, 0 = unlimited
  /// Points forced into the set; their secant lines become fixed.
  std::optional<PointSet> seed;
  std::size_t max_stored = 1000;
};

struct SearchOutcome {
  std::vector<PointSet> found;
  std::uint64_t solutions = 0;
  bool exhausted = false;
  std::uint64_t nodes_visited = 0;
  int m = 0;
  std::size_t variables = 0;
  std::size_t generators = 0;
  /// Every stored solution passed relative_movoid_check.
  bool verified = true;
};

/// Relative hemisystems, one point per nucleus secant, by depth-first search
/// with per-generator counters and forced-move propagation.
SearchOutcome search_hemisystems(const PolarSpace& p, const GeneratorList& gens, const SearchOptions& opt = {});

struct ScanResult {
  std::map<int, std::uint64_t> census;  // m -> number of relative m-ovoids
  std::uint64_t subsets = 0;
  bool proper_m_ok = true;        // every proper example has m = q^(n-1)/2
  bool proper_disjoint_ok = true;  // and meets its tau image trivially
  std::vector<PointSet> proper;    // the proper examples, at most 1000
};

/// All subsets of the off-Sigma points (at most 16 of them).
ScanResult exhaustive_movoid_scan(const PolarSpace& p, const GeneratorList& gens);

struct SpreadOvoidCheck {
  PointIndex point = 0;
  std::size_t set_size = 0;
  std::size_t generators = 0;
  std::optional<int> m;
  int m_expected = 0;
  bool pass = false;
};

/// For an off-Sigma point P: the spread lines inside P^perp cap Sigma cover a
/// set meeting every generator of that elliptic section in
/// (q^(2n-2) - 1)/(q - 1) points.
SpreadOvoidCheck spread_ovoid_check(const BlowupContext& ctx, const PolarSpace& p,
                                    const std::vector<Subspace>& frame_spread, PointIndex point);

}  // namespace polarkit
