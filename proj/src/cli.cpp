#include "polarkit/cli.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "polarkit/certificate.hpp"
#include "polarkit/error.hpp"
#include "polarkit/parallel.hpp"

namespace polarkit {

namespace {

using Clock = std::chrono::steady_clock;

FieldTable field_for_q(int q) {
  require(q >= 2 && q <= 256 && (q & (q - 1)) == 0, ErrorKind::usage, "q must be a power of two");
  return FieldTable::make(2, static_cast<unsigned>(std::countr_zero(static_cast<unsigned>(q))));
}

std::string space_name(const PolarSpace& p) {
  const auto& ps = p.ps();
  std::string fam = "W";
  if (!p.is_symplectic()) {
    switch (p.cls().family) {
      case Family::elliptic: fam = "Qminus"; break;
      case Family::hyperbolic: fam = "Qplus"; break;
      default: fam = "Q"; break;
    }
  }
  return fam + "-" + std::to_string(ps.dim()) + "-" + std::to_string(ps.q());
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::usage, "cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::usage, path + " is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::usage, "cannot write " + path);
  out << text;
}

void finish(Json& cert, const std::string& command, const Json& params, Clock::time_point t0,
            const std::string& path) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
  cert["provenance"] = {{"tool", "polarkit"},
                        {"version", kVersion},
                        {"command", command},
                        {"parameters", params},
                        {"wall_time_ms", ms}};
  if (!path.empty()) write_text(path, cert.dump() + "\n");
}

int verdict(const Json& cert) { return cert["verification"]["pass"].get<bool>() ? kExitOk : kExitFailed; }

void print_witnesses(std::ostream& out, const Json& w) {
  for (const auto& s : w) out << "  witness: " << s.get<std::string>() << '\n';
}

std::string pass_word(bool b) { return b ? "PASS" : "FAIL"; }

// Point set recorded in a certificate: O1, a set, X or the SRG vertices.
Json recorded_set(const Json& cert) {
  const auto& d = cert.at("data");
  for (const char* key : {"o1", "set", "x", "vertices"})
    if (d.contains(key)) return d.at(key);
  fail(ErrorKind::usage, "certificate carries no point set");
}

struct Options {
  int threads = 0;
  // construct
  int q = 0, n = 0;
  std::size_t samples = 100000;
  std::uint64_t sample_seed = 1;
  std::string out;
  // verify / audit / srg
  std::string cert;
  int rank = 0;
  std::string from, dimacs, graph;
  // search / scan / census
  std::string space;
  bool prove = false;
  std::uint64_t budget = 0;
  // ovoid
  std::vector<int> variant;
};

int cmd_construct(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto f = field_for_q(o.q);
  ConstructOptions co;
  co.sample_count = o.samples;
  co.sample_seed = o.sample_seed;
  const auto r = construct_relative_hemisystem(o.n, f, co);
  std::optional<LineCensus> census;
  if (r.space->off_points().size() <= 4096) census = line_census(*r.space, r.o1, r.o2);
  Json cert = hemisystem_certificate(r, census, o.samples);
  Json params = {{"q", o.q}, {"n", o.n}};
  if (r.generators.sampled) params["samples"] = o.samples, params["sample_seed"] = o.sample_seed;
  finish(cert, "construct", params, t0, o.out);

  out << "space " << space_name(*r.space) << "\n";
  out << "|O1| = " << r.o1.size() << "  |O2| = " << r.o2.size() << "  partition " << pass_word(r.partition_ok)
      << "  partner orbit " << pass_word(r.partner_orbit_ok) << "\n";
  out << "m = " << (r.report_o1.m ? std::to_string(*r.report_o1.m) : "none") << " (expected " << r.m_expected
      << ") over " << r.report_o1.generators_checked << " generators"
      << (r.generators.sampled ? " (random sample, seed " + std::to_string(r.generators.sample_seed) + ")"
                               : " (all)")
      << "\n";
  if (r.generators.sampled)
    out << "note: " << expected_off_sigma_count(*r.space)
        << " generators lie off Sigma; this run checks a uniform random sample only\n";
  if (census)
    out << "line census L1 = " << census->l1 << "  L2 = " << census->l2 << "  L3 = " << census->l3
        << "  total = " << census->total << (census->ok ? "" : "  (unexpected profiles)") << "\n";
  print_witnesses(out, cert["verification"]["witnesses"]);
  out << "result: " << pass_word(cert["verification"]["pass"].get<bool>()) << "\n";
  return verdict(cert);
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto cert = load_json(o.cert);
  const auto v = verify_certificate(cert);
  out << "claim " << v.claim << "\n";
  out << "counters " << v.counters.dump() << "\n";
  for (const auto& w : v.witnesses) out << "  witness: " << w << "\n";
  out << "result: " << pass_word(v.pass) << "\n";
  return v.pass ? kExitOk : kExitFailed;
}

int cmd_audit(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto cert = load_json(o.cert);
  const auto p = space_from_frame(cert.at("frame"), field_from_json(cert.at("field")));
  require(static_cast<int>(p.ps().q()) == o.q, ErrorKind::usage, "--q does not match the certificate");
  require(p.ps().ncoords() / 2 - 1 == o.rank, ErrorKind::usage, "--rank does not match the certificate");
  const auto r = points_from_json(p.ps(), recorded_set(cert));
  const auto& d = cert.at("data");
  int m = static_cast<int>(ipow(p.ps().q(), o.rank - 1) / 2);
  if (d.contains("m") && d.at("m").is_number_integer()) m = d.at("m").get<int>();
  const auto a = lemma_pre_audit(p, enumerate_generators(p), r, m);
  Json c = audit_certificate(p, r, m, a);
  finish(c, "audit", {{"q", o.q}, {"rank", o.rank}}, t0, o.out);

  out << "space " << space_name(p) << "  |R| = " << r.size() << "  m = " << m
      << (a.m_confirmed ? " (confirmed)" : " (not confirmed)") << "\n";
  for (int i = 0; i < 6; ++i) {
    out << "part " << static_cast<char>('a' + i) << ": expected " << a.expected[i] << ", ";
    if (a.cases[i] == 0) out << "vacuous (no case occurs)";
    else if (a.observed[i]) out << "observed " << *a.observed[i] << " over " << a.cases[i] << " cases";
    else out << "not constant over " << a.cases[i] << " cases";
    out << "  " << pass_word(a.ok[i]) << "\n";
  }
  print_witnesses(out, c["verification"]["witnesses"]);
  out << "result: " << pass_word(a.pass) << "\n";
  return verdict(c);
}

int cmd_search(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto p = space_by_name(o.space);
  SearchOptions so;
  so.budget = o.budget;
  const auto s = search_hemisystems(p, enumerate_generators(p), so);
  Json c = search_certificate(p, s, so, o.prove);
  finish(c, "search", {{"space", o.space}, {"prove_nonexistence", o.prove}, {"budget", o.budget}}, t0, o.out);
  out << "space " << o.space << "  secant lines " << s.variables << "  generators " << s.generators << "  m = " << s.m
      << "\n";
  out << "nodes visited " << s.nodes_visited << "  exhausted " << (s.exhausted ? "yes" : "no") << "  solutions "
      << s.solutions << "\n";
  print_witnesses(out, c["verification"]["witnesses"]);
  out << "result: " << pass_word(c["verification"]["pass"].get<bool>()) << "\n";
  if (!s.exhausted) return kExitResource;
  return verdict(c);
}

int cmd_scan(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto p = space_by_name(o.space);
  const auto s = exhaustive_movoid_scan(p, enumerate_generators(p));
  Json c = scan_certificate(p, s);
  finish(c, "scan", {{"space", o.space}}, t0, o.out);
  out << "space " << o.space << "  subsets " << s.subsets << "\n";
  for (auto [m, n] : s.census) out << "m = " << m << ": " << n << "\n";
  out << "proper examples have m = q^(n-1)/2: " << pass_word(s.proper_m_ok)
      << "  meet their tau image trivially: " << pass_word(s.proper_disjoint_ok) << "\n";
  out << "result: " << pass_word(c["verification"]["pass"].get<bool>()) << "\n";
  return verdict(c);
}

int cmd_ovoid(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  require(o.variant.size() == 4, ErrorKind::usage, "--variant takes i,si,j,sj");
  for (int k : {1, 3}) require(o.variant[k] == 0 || o.variant[k] == 1, ErrorKind::usage, "side flags are 0 or 1");
  const MixedChoice ch{o.variant[0], o.variant[1] == 1, o.variant[2], o.variant[3] == 1};
  const auto x = build_mixed_ovoid(o.n, field_for_q(o.q), ch);
  const auto w = symplectic_of(x);
  const auto rep = verify_symplectic_ovoid(x, enumerate_generators(w));
  const auto t = two_character_check(w.ps(), x.x);
  Json c = ovoid_certificate(x, rep, t);
  finish(c, "ovoid", {{"q", o.q}, {"n", o.n}, {"variant", o.variant}}, t0, o.out);
  out << "|X| = " << x.x.size() << " (A " << x.a.size() << ", B " << x.b.size() << ", Q " << x.qsection.size()
      << ")\n";
  out << "m = " << (rep.m ? std::to_string(*rep.m) : "none") << " (expected " << x.m_expected << ") over "
      << rep.generators_checked << " generators of " << space_name(w) << "\n";
  out << "hyperplane spectrum";
  for (auto [k, v] : t.spectrum) out << "  " << k << ": " << v;
  out << "  (h1 = " << t.h1 << ", h2 = " << t.h2 << ")\n";
  print_witnesses(out, c["verification"]["witnesses"]);
  out << "result: " << pass_word(c["verification"]["pass"].get<bool>()) << "\n";
  return verdict(c);
}

int cmd_srg(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto src = load_json(o.from);
  const auto p = space_from_frame(src.at("frame"), field_from_json(src.at("field")));
  const auto r = points_from_json(p.ps(), recorded_set(src));
  const auto g = srg_build_verify(p, r);
  Json c = srg_certificate(p, g);
  finish(c, "srg", {{"from", src.at("claim")}}, t0, o.out);
  if (!o.dimacs.empty()) write_text(o.dimacs, srg_dimacs(g));
  if (!o.graph.empty()) write_text(o.graph, srg_json(g) + "\n");
  auto s = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
  out << "(v, k, lambda, mu) = (" << s(g.v) << ", " << s(g.k) << ", " << s(g.lambda) << ", " << s(g.mu)
      << ")  expected (" << g.ev << ", " << g.ek << ", " << g.elambda << ", " << g.emu << ")\n";
  out << "k(k - lambda - 1) = (v - k - 1) mu: " << pass_word(g.feasible) << "\n";
  print_witnesses(out, c["verification"]["witnesses"]);
  out << "result: " << pass_word(g.pass) << "\n";
  return verdict(c);
}

int cmd_demo(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto h = hyperbolic_demo(field_for_q(o.q));
  Json c = demo_certificate(h);
  finish(c, "demo hyperbolic", {{"q", o.q}}, t0, o.out);
  out << "space " << space_name(*h.space) << "  planes " << h.planes << "\n";
  for (std::size_t i = 0; i < h.sets.size(); ++i) {
    const auto& s = h.sets[i];
    out << "x0 = " << s.a << " z: " << s.points.size() << " points, m = "
        << (s.report.m ? std::to_string(*s.report.m) : "none") << "; union of " << i + 1 << " sets: m = "
        << (h.union_m[i] ? std::to_string(*h.union_m[i]) : "none") << "\n";
  }
  out << "result: " << pass_word(h.pass) << "\n";
  return verdict(c);
}

std::uint64_t elliptic_points(std::uint64_t q, int n) { return (ipow(q, n + 1) + 1) * (ipow(q, n) - 1) / (q - 1); }
std::uint64_t parabolic_points(std::uint64_t q, int n) { return (ipow(q, 2 * n) - 1) / (q - 1); }

int cmd_census(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto p = space_by_name(o.space);
  const auto& ps = p.ps();
  const std::uint64_t q = ps.q();
  const int n = ps.ncoords() / 2 - 1;
  Json rows = Json::array();
  bool ok = true;
  auto row = [&](const std::string& what, std::uint64_t observed, std::optional<std::uint64_t> expected) {
    const bool good = !expected || *expected == observed;
    ok = ok && good;
    rows.push_back({{"count", what}, {"observed", observed}, {"expected", expected ? Json(*expected) : Json(nullptr)}});
    out << what << ": " << observed;
    if (expected) out << " (formula " << *expected << ") " << pass_word(good);
    out << "\n";
  };

  std::uint64_t expected_points = (ipow(q, 2 * n + 2) - 1) / (q - 1);
  if (!p.is_symplectic())
    expected_points = p.cls().family == Family::elliptic
                          ? elliptic_points(q, n)
                          : (ipow(q, n) + 1) * (ipow(q, n + 1) - 1) / (q - 1);
  row("points", p.points().size(), expected_points);
  const auto total = expected_generator_count(p);
  if (total && *total <= kMaxGenerators) {
    const auto g = enumerate_generators(p);
    row("generators", g.size(), total);
    if (p.has_sigma() && p.cls().family == Family::elliptic)
      row("generators off Sigma", g.count_off_sigma(), expected_off_sigma_count(p));
  } else if (total) {
    out << "generators: " << *total << " by formula, above the enumeration cap\n";
  }
  if (p.has_sigma()) {
    row("points off Sigma", p.off_points().size(), std::nullopt);
    row("nucleus secants", nucleus_secants(p).lines.size(), p.off_points().size() / 2);
    if (p.cls().family == Family::elliptic && p.off_points().size() <= 4096 && n >= 2) {
      const auto c = line_census(p, PointSet{}, PointSet{});
      const std::uint64_t all = elliptic_points(q, n) * elliptic_points(q, n - 1) / (q + 1);
      const std::uint64_t in_sigma = parabolic_points(q, n) * parabolic_points(q, n - 1) / (q + 1);
      row("lines off Sigma", c.total, all - in_sigma);
    }
  }
  Json c = {{"space", o.space}, {"counts", rows}, {"pass", ok}};
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
  c["provenance"] = {{"tool", "polarkit"}, {"version", kVersion}, {"command", "census"}, {"wall_time_ms", ms}};
  if (!o.out.empty()) write_text(o.out, c.dump() + "\n");
  out << "result: " << pass_word(ok) << "\n";
  return ok ? kExitOk : kExitFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relative hemisystems and m-ovoids of finite polar spaces", "polarkit"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "worker threads (default: POLARKIT_THREADS, else 1)")
      ->check(CLI::NonNegativeNumber);

  auto* construct = app.add_subcommand("construct", "orbit construction on Q-(4n+1, q)");
  construct->add_option("--q", o.q, "field order")->required();
  construct->add_option("--n", o.n, "rank of the symplectic source space")->required()->check(CLI::PositiveNumber);
  construct->add_option("--out", o.out, "certificate file");
  construct->add_option("--samples", o.samples, "sampled generators when the full list is too large");
  construct->add_option("--sample-seed", o.sample_seed, "seed of the generator sample");

  auto* verify = app.add_subcommand("verify", "re-check a certificate");
  verify->add_option("--cert", o.cert, "certificate file")->required();

  auto* audit = app.add_subcommand("audit", "intersection counts of a certified set");
  audit->add_option("--q", o.q, "field order")->required();
  audit->add_option("--rank", o.rank, "rank n of Q-(2n+1, q)")->required();
  audit->add_option("--cert", o.cert, "certificate with a point set")->required();
  audit->add_option("--out", o.out, "audit certificate file");

  auto* search = app.add_subcommand("search", "relative hemisystems, one point per nucleus secant");
  search->add_option("--space", o.space, "space name, e.g. Qminus-7-2")->required();
  search->add_flag("--prove-nonexistence", o.prove, "claim that no relative hemisystem exists");
  search->add_option("--budget", o.budget, "node cap (0 = none)");
  search->add_option("--out", o.out, "certificate file");

  auto* scan = app.add_subcommand("scan", "every subset of the off-Sigma points");
  scan->add_option("--space", o.space, "space name, e.g. Qminus-5-2")->required();
  scan->add_option("--out", o.out, "certificate file");

  auto* ovoid = app.add_subcommand("ovoid", "mixed (q^n-1)/(q-1)-ovoid of W(2n+1, q)");
  ovoid->add_option("--q", o.q, "field order")->required();
  ovoid->add_option("--n", o.n, "rank n")->required();
  ovoid->add_option("--variant", o.variant, "i,si,j,sj")->required()->delimiter(',')->expected(4);
  ovoid->add_option("--out", o.out, "certificate file");

  auto* srg = app.add_subcommand("srg", "strongly regular graph on a certified hemisystem");
  srg->add_option("--from", o.from, "hemisystem certificate")->required();
  srg->add_option("--out", o.out, "certificate file");
  srg->add_option("--dimacs", o.dimacs, "edge list file");
  srg->add_option("--graph", o.graph, "adjacency list JSON file");

  auto* demo = app.add_subcommand("demo", "demonstrations");
  demo->require_subcommand(1);
  auto* hyper = demo->add_subcommand("hyperbolic", "pencil sets of Q+(5, q)");
  hyper->add_option("--q", o.q, "field order (2 or 4)")->required();
  hyper->add_option("--out", o.out, "certificate file");

  auto* census = app.add_subcommand("census", "point, generator and line counts against formulas");
  census->add_option("--space", o.space, "space name")->required();
  census->add_option("--out", o.out, "report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  set_threads(o.threads);
  try {
    if (*construct) return cmd_construct(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*audit) return cmd_audit(o, out);
    if (*search) return cmd_search(o, out);
    if (*scan) return cmd_scan(o, out);
    if (*ovoid) return cmd_ovoid(o, out);
    if (*srg) return cmd_srg(o, out);
    if (*hyper) return cmd_demo(o, out);
    if (*census) return cmd_census(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::usage:
      case ErrorKind::domain: return kExitUsage;
      case ErrorKind::resource: return kExitResource;
      default: return kExitFailed;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace polarkit
