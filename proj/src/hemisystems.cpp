#include "polarkit/hemisystems.hpp"

#include <algorithm>
#include <bit>
#include <deque>

#include "polarkit/error.hpp"
#include "polarkit/parallel.hpp"

namespace polarkit {

PointSet orbit_closure(const ProjectiveSpace& ps, const std::vector<Matrix>& gens, PointIndex seed,
                       const PolarSpace* p) {
  require(seed < ps.num_points(), ErrorKind::usage, "seed is not a point of the space");
  std::vector<Matrix> all;
  for (const auto& g : gens) {
    auto inv = inverse(ps.field(), g);
    require(inv.has_value(), ErrorKind::domain, "orbit generator is singular");
    all.push_back(g);
    all.push_back(std::move(*inv));
  }
  std::vector<std::uint8_t> seen(ps.num_points(), 0);
  std::vector<PointIndex> out{seed};
  seen[seed] = 1;
  for (std::size_t head = 0; head < out.size(); ++head) {
    const PointIndex x = out[head];
    for (const auto& g : all) {
      const PointIndex y = apply_point(ps, g, x);
      if (seen[y]) continue;
      if (p && !p->on_space(y)) fail(ErrorKind::internal, "orbit left the quadric");
      seen[y] = 1;
      out.push_back(y);
    }
  }
  return PointSet::from(std::move(out));
}

PointSet orbit_closure(const PolarSpace& p, const std::vector<LiftedIsometry>& gens, PointIndex seed) {
  require(p.on_space(seed), ErrorKind::usage, "seed is not on the quadric");
  std::vector<Matrix> m;
  for (const auto& g : gens) m.push_back(g.m);
  return orbit_closure(p.ps(), m, seed, &p);
}

LineCensus line_census(const PolarSpace& p, const PointSet& o1, const PointSet& o2) {
  require(p.has_sigma(), ErrorKind::usage, "line census needs a distinguished hyperplane");
  const auto& ps = p.ps();
  const int q = static_cast<int>(ps.q());
  const auto in1 = o1.bitmap(ps.num_points());
  const auto in2 = o2.bitmap(ps.num_points());
  const auto& off = p.off_points().indices();
  LineCensus c;
  // A totally singular line off Sigma has q off-points; it is counted from
  // its two smallest ones.
  for (std::size_t i = 0; i < off.size(); ++i) {
    const PointIndex a = off[i];
    for (std::size_t j = i + 1; j < off.size(); ++j) {
      const PointIndex b = off[j];
      if (!p.orth(a, b)) continue;
      const std::vector<Code> v{ps.point(a), ps.point(b)};
      const auto pts = subspace_points(ps, Subspace::from_vectors(ps, v));
      bool canonical = true;
      int c1 = 0, c2 = 0;
      for (PointIndex x : pts) {
        if (p.on_sigma(x)) continue;
        if (x < a || (x != a && x < b)) {
          canonical = false;
          break;
        }
        c1 += in1[x];
        c2 += in2[x];
      }
      if (!canonical) continue;
      ++c.total;
      if (c1 == q && c2 == 0) ++c.l1;
      else if (c1 == 0 && c2 == q) ++c.l2;
      else if (2 * c1 == q && 2 * c2 == q) ++c.l3;
      else ++c.unexpected[{c1, c2}];
    }
  }
  c.ok = c.unexpected.empty();
  return c;
}

HemisystemResult construct_relative_hemisystem(int n, const FieldTable& f, const ConstructOptions& opt) {
  require(n >= 1, ErrorKind::usage, "n must be at least 1");
  require(f.characteristic() == 2, ErrorKind::usage, "the construction needs even q");
  HemisystemResult r;
  r.n = n;
  r.ctx = std::make_shared<const BlowupContext>(n, f);
  const auto& fr = r.ctx->frame_space();
  r.space = std::make_shared<const PolarSpace>(
      PolarSpace::quadric(fr, r.ctx->frame_form(), coordinate_hyperplane(fr, 4 * n + 1)));
  const PolarSpace& p = *r.space;

  r.gens = lifted_generators(*r.ctx);
  r.seed = p.off_points().indices().front();
  r.o1 = orbit_closure(p, r.gens, r.seed);
  std::vector<PointIndex> img;
  img.reserve(r.o1.size());
  for (PointIndex x : r.o1) img.push_back(p.tau_point(x));
  r.o2 = PointSet::from(std::move(img));

  r.partition_ok = set_intersection(r.o1, r.o2).empty() && set_union(r.o1, r.o2) == p.off_points();
  r.partner_orbit_ok = orbit_closure(p, r.gens, p.tau_point(r.seed)) == r.o2;
  r.m_expected = static_cast<int>(ipow(f.order(), 2 * n - 1) / 2);

  const auto total = expected_generator_count(p);
  if (total && *total <= kMaxGenerators) r.generators = enumerate_generators(p);
  else r.generators = sample_generators(p, opt.sample_count, opt.sample_seed);

  r.report_o1 = relative_movoid_check(p, r.generators, r.o1);
  r.report_o2 = relative_movoid_check(p, r.generators, r.o2);
  auto good = [&](const MovoidReport& m) { return m.pass && m.m && *m.m == r.m_expected; };
  r.pass = r.partition_ok && r.partner_orbit_ok && good(r.report_o1) && good(r.report_o2);
  return r;
}

namespace {

struct Slot {
  std::uint32_t var;
  std::uint8_t side;
};

// Shared read-only incidence structure of a search instance.
struct Instance {
  int m = 0;
  std::size_t nvars = 0;
  std::vector<std::vector<Slot>> gpts;                      // generator -> its off-points
  std::vector<std::array<std::vector<std::uint32_t>, 2>> occ;  // var, side -> generators
  std::vector<std::array<PointIndex, 2>> pairs;
  std::vector<std::uint32_t> order;  // most incident generators first
};

class Solver {
 public:
  explicit Solver(const Instance& in) : in_(&in) {
    val_.assign(in.nvars, -1);
    chosen_.assign(in.gpts.size(), 0);
    undec_.resize(in.gpts.size());
    for (std::size_t g = 0; g < in.gpts.size(); ++g) undec_[g] = static_cast<int>(in.gpts[g].size());
  }

  // Sets var to side and propagates forced moves; false on a conflict. The
  // caller undoes to a mark either way.
  bool decide(std::uint32_t v, int s) {
    pending_.clear();
    if (val_[v] >= 0) return val_[v] == s;
    return set(v, s) && propagate();
  }

  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t to) {
    while (trail_.size() > to) {
      const std::uint32_t v = trail_.back();
      trail_.pop_back();
      const int s = val_[v];
      for (auto g : in_->occ[v][s]) --chosen_[g], ++undec_[g];
      for (auto g : in_->occ[v][1 - s]) ++undec_[g];
      val_[v] = -1;
    }
  }

  // First free variable in the static order.
  std::optional<std::uint32_t> next() const {
    for (auto v : in_->order)
      if (val_[v] < 0) return v;
    return std::nullopt;
  }

  PointSet solution() const {
    std::vector<PointIndex> r;
    for (std::size_t v = 0; v < in_->nvars; ++v) r.push_back(in_->pairs[v][val_[v]]);
    return PointSet::from(std::move(r));
  }

 private:
  bool set(std::uint32_t v, int s) {
    val_[v] = static_cast<std::int8_t>(s);
    trail_.push_back(v);
    bool ok = true;
    for (auto g : in_->occ[v][s]) {
      ++chosen_[g], --undec_[g];
      if (chosen_[g] > in_->m) ok = false;
      pending_.push_back(g);
    }
    for (auto g : in_->occ[v][1 - s]) {
      --undec_[g];
      if (chosen_[g] + undec_[g] < in_->m) ok = false;
      pending_.push_back(g);
    }
    return ok;
  }

  bool propagate() {
    while (!pending_.empty()) {
      const auto g = pending_.front();
      pending_.pop_front();
      if (undec_[g] == 0) continue;
      int force = -1;  // 0: free points of g are out, 1: they are in
      if (chosen_[g] == in_->m) force = 0;
      else if (chosen_[g] + undec_[g] == in_->m) force = 1;
      if (force < 0) continue;
      for (const auto& s : in_->gpts[g]) {
        if (val_[s.var] >= 0) continue;
        if (!set(s.var, force ? s.side : 1 - s.side)) return false;
      }
    }
    return true;
  }

  const Instance* in_;
  std::vector<std::int8_t> val_;
  std::vector<int> chosen_, undec_;
  std::vector<std::uint32_t> trail_;
  std::deque<std::uint32_t> pending_;
};

struct BranchResult {
  std::vector<PointSet> found;
  std::uint64_t solutions = 0;
  std::uint64_t nodes = 0;
  bool aborted = false;
};

void dfs(Solver& s, std::uint64_t budget, std::size_t max_stored, BranchResult& out) {
  if (budget && out.nodes >= budget) {
    out.aborted = true;
    return;
  }
  ++out.nodes;
  const auto v = s.next();
  if (!v) {
    ++out.solutions;
    if (out.found.size() < max_stored) out.found.push_back(s.solution());
    return;
  }
  for (int side = 0; side < 2 && !out.aborted; ++side) {
    const auto mk = s.mark();
    if (s.decide(*v, side)) dfs(s, budget, max_stored, out);
    s.undo(mk);
  }
}

constexpr int kSplitDepth = 3;

}  // namespace

SearchOutcome search_hemisystems(const PolarSpace& p, const GeneratorList& gens, const SearchOptions& opt) {
  require(p.has_sigma() && !p.is_symplectic() && p.cls().family == Family::elliptic, ErrorKind::usage,
          "the search runs on an elliptic quadric with a distinguished hyperplane");
  const auto& ps = p.ps();
  const int n = ps.ncoords() / 2 - 1;
  const std::uint64_t qn1 = ipow(ps.q(), n - 1);
  require(qn1 % 2 == 0, ErrorKind::domain, "q^(n-1)/2 is not an integer for this space");

  const auto sec = nucleus_secants(p);
  Instance in;
  in.m = static_cast<int>(qn1 / 2);
  in.nvars = sec.pairs.size();
  in.pairs = sec.pairs;
  in.occ.resize(in.nvars);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens.in_sigma[g]) continue;
    const auto gi = static_cast<std::uint32_t>(in.gpts.size());
    std::vector<Slot> slots;
    for (PointIndex x : subspace_points(ps, gens.gens[g])) {
      if (p.on_sigma(x)) continue;
      const auto v = sec.line_of[x];
      require(v != SecantData::npos, ErrorKind::internal, "off-Sigma point on no nucleus secant");
      const std::uint8_t side = sec.pairs[v][0] == x ? 0 : 1;
      slots.push_back({static_cast<std::uint32_t>(v), side});
      in.occ[v][side].push_back(gi);
    }
    in.gpts.push_back(std::move(slots));
  }

  in.order.resize(in.nvars);
  for (std::uint32_t v = 0; v < in.nvars; ++v) in.order[v] = v;
  auto degree = [&](std::uint32_t v) { return in.occ[v][0].size() + in.occ[v][1].size(); };
  std::stable_sort(in.order.begin(), in.order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return degree(a) > degree(b); });

  SearchOutcome out;
  out.m = in.m;
  out.variables = in.nvars;
  out.generators = in.gpts.size();

  Solver root(in);
  bool consistent = true;
  std::size_t fixed = 0;
  if (opt.seed) {
    for (PointIndex x : *opt.seed) {
      require(x < ps.num_points() && sec.line_of[x] != SecantData::npos, ErrorKind::usage,
              "seed point " + std::to_string(x) + " is not an off-Sigma point");
      const auto v = sec.line_of[x];
      consistent = consistent && root.decide(static_cast<std::uint32_t>(v), sec.pairs[v][0] == x ? 0 : 1);
      ++fixed;
    }
  }
  require(opt.budget != 0 || in.nvars - std::min(fixed, in.nvars) <= 40, ErrorKind::resource,
          "search over " + std::to_string(in.nvars) + " secants needs a node budget");

  // Deterministic frontier: the first kSplitDepth decisions, expanded in
  // order. Each frontier node is searched independently with an equal share
  // of the budget, so the result does not depend on the thread count.
  std::vector<Solver> frontier;
  std::uint64_t prefix_nodes = 0;
  if (consistent) {
    std::vector<Solver> level{root};
    for (int d = 0; d < kSplitDepth; ++d) {
      std::vector<Solver> nxt;
      for (auto& s : level) {
        const auto v = s.next();
        if (!v) {
          nxt.push_back(s);
          continue;
        }
        ++prefix_nodes;
        for (int side = 0; side < 2; ++side) {
          Solver c = s;
          if (c.decide(*v, side)) nxt.push_back(std::move(c));
        }
      }
      level = std::move(nxt);
    }
    frontier = std::move(level);
  }

  // The prefix counts against the budget; the remainder is split evenly.
  std::vector<BranchResult> parts(frontier.size());
  std::uint64_t share = 0;
  bool starved = false;
  if (opt.budget != 0 && !frontier.empty()) {
    starved = prefix_nodes >= opt.budget;
    const std::uint64_t rest = starved ? 0 : opt.budget - prefix_nodes;
    share = (rest + frontier.size() - 1) / frontier.size();
  }
  if (starved) {
    for (auto& part : parts) part.aborted = true;
    frontier.clear();
  }
  parallel_chunks(frontier.size(), frontier.size(), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) dfs(frontier[i], share, opt.max_stored, parts[i]);
  });

  out.nodes_visited = prefix_nodes;
  out.exhausted = true;
  for (auto& part : parts) {
    out.nodes_visited += part.nodes;
    out.solutions += part.solutions;
    out.exhausted = out.exhausted && !part.aborted;
    for (auto& s : part.found)
      if (out.found.size() < opt.max_stored) out.found.push_back(std::move(s));
  }
  for (const auto& r : out.found) {
    const auto rep = relative_movoid_check(p, gens, r);
    out.verified = out.verified && rep.pass && rep.m && *rep.m == in.m;
  }
  return out;
}

ScanResult exhaustive_movoid_scan(const PolarSpace& p, const GeneratorList& gens) {
  require(p.has_sigma() && !p.is_symplectic(), ErrorKind::usage,
          "the scan runs on a quadric with a distinguished hyperplane");
  const auto& ps = p.ps();
  const auto& off = p.off_points().indices();
  require(off.size() <= 16, ErrorKind::resource, "exhaustive scan is limited to 16 off-Sigma points");
  const int k = static_cast<int>(off.size());
  auto bit_of = [&](PointIndex x) {
    return static_cast<std::uint32_t>(std::lower_bound(off.begin(), off.end(), x) - off.begin());
  };
  std::vector<std::uint32_t> masks;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens.in_sigma[g]) continue;
    std::uint32_t mk = 0;
    for (PointIndex x : subspace_points(ps, gens.gens[g]))
      if (!p.on_sigma(x) && p.on_space(x)) mk |= 1u << bit_of(x);
    masks.push_back(mk);
  }
  std::vector<std::uint32_t> tau_bit(k);
  for (int i = 0; i < k; ++i) tau_bit[i] = bit_of(p.tau_point(off[i]));

  const int n = ps.ncoords() / 2 - 1;
  const auto top = static_cast<int>(ipow(ps.q(), n - 1));
  ScanResult r;
  r.subsets = std::uint64_t{1} << k;
  for (std::uint32_t s = 0; s < r.subsets; ++s) {
    const int m = masks.empty() ? 0 : std::popcount(masks[0] & s);
    bool uniform = true;
    for (auto mk : masks)
      if (std::popcount(mk & s) != m) {
        uniform = false;
        break;
      }
    if (!uniform) continue;
    ++r.census[m];
    if (m == 0 || m >= top) continue;
    r.proper_m_ok = r.proper_m_ok && 2 * m == top;
    std::uint32_t img = 0;
    for (int i = 0; i < k; ++i)
      if (s >> i & 1) img |= 1u << tau_bit[i];
    r.proper_disjoint_ok = r.proper_disjoint_ok && (img & s) == 0;
    if (r.proper.size() < 1000) {
      std::vector<PointIndex> pts;
      for (int i = 0; i < k; ++i)
        if (s >> i & 1) pts.push_back(off[i]);
      r.proper.push_back(PointSet::from(std::move(pts)));
    }
  }
  return r;
}

SpreadOvoidCheck spread_ovoid_check(const BlowupContext& ctx, const PolarSpace& p,
                                    const std::vector<Subspace>& frame_spread, PointIndex point) {
  const auto& ps = p.ps();
  require(p.on_space(point) && !p.on_sigma(point), ErrorKind::usage, "point is not an off-Sigma point");
  const std::vector<Code> pv{ps.point(point)};
  const Subspace section = meet(ps, perp_of(ps, Subspace::from_vectors(ps, pv), p.bilinear()), p.sigma());

  // Local coordinates on the section: the entries at the pivot columns.
  std::vector<int> pivots;
  for (Code row : section.basis()) {
    int c = 0;
    while (ps.coord(row, c) == 0) ++c;
    pivots.push_back(c);
  }
  const ProjectiveSpace local(section.rank() - 1, ps.field());
  auto to_local = [&](Code v) {
    std::vector<Elem> x(pivots.size());
    Code back = 0;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      x[i] = ps.coord(v, pivots[i]);
      back = ps.add(back, ps.scale(x[i], section.basis()[i]));
    }
    require(back == v, ErrorKind::internal, "section basis is not in echelon form");
    return local.index_of(local.encode(x));
  };

  const auto lp = PolarSpace::quadric(local, p.form().restrict_to(ps, section));
  std::vector<PointIndex> xs;
  for (const auto& line : frame_spread) {
    if (!contains(ps, section, line)) continue;
    for (PointIndex x : subspace_points(ps, line)) xs.push_back(to_local(ps.point(x)));
  }
  const auto x = PointSet::from(std::move(xs));

  SpreadOvoidCheck c;
  c.point = point;
  c.set_size = x.size();
  const std::uint64_t q = ps.q();
  c.m_expected = static_cast<int>((ipow(q, 2 * ctx.n() - 2) - 1) / (q - 1));
  const bool elliptic = lp.cls().family == Family::elliptic;
  const auto gens = enumerate_generators(lp);
  c.generators = gens.size();
  const auto counts = generator_counts(lp, gens, x);
  if (!counts.empty() && std::all_of(counts.begin(), counts.end(), [&](int v) { return v == counts[0]; }))
    c.m = counts[0];
  c.pass = elliptic && c.m && *c.m == c.m_expected;
  return c;
}

}  // namespace polarkit
