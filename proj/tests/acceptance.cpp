// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "support.hpp"
#include "sumprod/energy.hpp"
#include "sumprod/geometry.hpp"
#include "sumprod/kernels/parallel.hpp"
#include "sumprod/refine.hpp"
#include "sumprod/setcore.hpp"
#include "sumprod/verify.hpp"

using namespace sumprod;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

Outcome crossovers() {
  Outcome o;
  const Rational base = testutil::q("3/2");
  const struct {
    const char* p;
    const char* q;
    const char* excess;
  } cases[] = {{"20/13", "40/13", "1/186"}, {"58/37", "42/37", "5/242"}, {"8/5", "6/5", "1/34"}};
  double worst = 0;
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const Rational e = crossover({base, testutil::q("1/2")}, {testutil::q(c.p), testutil::q(c.q)});
    worst = std::max(worst, ms_since(t0));
    o.expect(e == base + testutil::q(c.excess), "got " + e.to_string() + ", want 3/2 + " + c.excess);
  }
  o.expect(worst < 1.0, "slowest call " + std::to_string(worst) + " ms");
  if (o.pass) o.detail = "3/2+1/186, 3/2+5/242, 3/2+1/34 exact; slowest " + std::to_string(worst) + " ms";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::size_t checked = 0;
  for (int i = 0; i < 200 && o.pass; ++i) {
    std::uniform_int_distribution<std::size_t> size(1, 32);
    if (i % 4 == 3) {
      // rational elements, smaller sizes for the Rational oracle
      const std::size_t na = 1 + size(rng) % 16, nb = 1 + size(rng) % 16;
      const GroundSet a = testutil::random_rationals(rng, na, 40, 6, false);
      const GroundSet b = testutil::random_rationals(rng, nb, 40, 6, false);
      const auto av = oracle::elems(a), bv = oracle::elems(b);
      o.expect(additive_energy(a, b) == oracle::additive_energy(av, bv), "E+ on " + a.to_string());
      o.expect(multiplicative_energy(a, b) == oracle::multiplicative_energy(av, bv), "Ex on " + a.to_string());
      o.expect(energy_moment(a, 3).value == oracle::energy_moment(av, 3), "E3 on " + a.to_string());
      for (Sign s : {Sign::plus, Sign::minus}) {
        o.expect(shifted_energy_sum(a, b, a, s) == oracle::shifted_energy_sum(av, bv, av, s == Sign::plus),
                 "shifted sum on " + a.to_string());
      }
    } else {
      const long m = i % 2 ? 60 : 1000;
      const GroundSet a = testutil::random_ints(rng, size(rng), -m, m, true);
      const GroundSet b = testutil::random_ints(rng, size(rng), -m, m, true);
      const auto av = oracle::ints(a), bv = oracle::ints(b);
      o.expect(additive_energy(a, b) == oracle::additive_energy(av, bv), "E+ on " + a.to_string());
      o.expect(multiplicative_energy(a, b) == oracle::multiplicative_energy(av, bv), "Ex on " + a.to_string());
      o.expect(energy_moment(a, 3).value == oracle::energy_moment(av, 3), "E3 on " + a.to_string());
      for (Sign s : {Sign::plus, Sign::minus}) {
        o.expect(shifted_energy_sum(a, b, a, s) == oracle::shifted_energy_sum(av, bv, av, s == Sign::plus),
                 "shifted sum on " + a.to_string());
      }
    }
    ++checked;
  }
  for (int i = 0; i < 40 && o.pass; ++i) {
    const GroundSet a = testutil::random_rationals(rng, 1 + i % 5, 7, 3, false);
    o.expect(gk_distance_quadruples(a) == oracle::gk_eight_tuples(oracle::elems(a)), "gk on " + a.to_string());
  }
  for (int i = 0; i < 60 && o.pass; ++i) {
    std::vector<Point> pts;
    std::vector<oracle::Pt<Rational>> plain;
    std::uniform_int_distribution<long> c(-3, 3);
    if (i % 3 == 0) {
      const GroundSet a = testutil::random_rationals(rng, 1 + i % 5, 4, 2, false);
      const GroundSet b = testutil::random_rationals(rng, 1 + (i / 3) % 5, 4, 2, false);
      const PlanarPointSet g = PlanarPointSet::grid(a, b);
      pts.assign(g.points().begin(), g.points().end());
    } else {
      for (int k = 0; k < 1 + i % 25; ++k) pts.push_back({Rational(c(rng)), Rational(c(rng))});
    }
    const PlanarPointSet p(pts);
    for (const auto& pt : p.points()) plain.push_back({pt.x, pt.y});
    o.expect(collinear_triples(p) == oracle::collinear_triples(plain), "collinear on " + std::to_string(p.size()));
  }
  const double ms = ms_since(t0);
  o.expect(ms < 60000, "took " + std::to_string(ms) + " ms");
  if (o.pass) o.detail = std::to_string(checked) + " set pairs, 40 gk sets, 60 point sets; " + std::to_string(ms / 1000) + " s";
  return o;
}

Outcome constant_free_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  SuiteConfig cfg;
  cfg.specs = "exact.*";
  cfg.families = {parse_family("random:1000"), parse_family("random:100000")};
  cfg.sizes = {4, 8, 16, 32, 64};
  for (std::uint64_t s = 1; s <= 50; ++s) cfg.seeds.push_back(s);
  const SuiteReport rep = run_suite(cfg);
  std::size_t evaluated = 0, skipped = 0;
  for (const auto& r : rep.records) {
    if (!r.skipped.empty()) {
      ++skipped;
      continue;
    }
    ++evaluated;
    if (!r.pass || !*r.pass) o.fail(r.spec + " failed on " + r.instance.family + " n=" + std::to_string(r.instance.n));
  }
  o.expect(!rep.failure, "suite reported a failure");
  o.expect(rep.records.size() == 500 * 5, "expected 2500 records, got " + std::to_string(rep.records.size()));
  o.expect(skipped == 0, std::to_string(skipped) + " records skipped");
  if (o.pass) {
    o.detail = "500 instances x 5 specs, " + std::to_string(evaluated) + " records, 0 failures; " +
               std::to_string(ms_since(t0) / 1000) + " s";
  }
  return o;
}

Outcome desk_values() {
  Outcome o;
  const auto t0 = Clock::now();
  using testutil::set;
  o.expect(pinned_product(set({1, 2, 3}), 1, Sign::plus).cardinality == 7, "|A(A+1)|");
  for (const auto& [a, want] : {std::pair{set({1, 2}), 10u}, std::pair{set({1, 2, 3}), 27u}}) {
    const auto exact = five_var_expander_size(a);
    const FloatEnumeration f = five_var_float_enumeration(a, 1e-9);
    o.expect(exact == want, "five-var " + a.to_string() + " = " + std::to_string(exact));
    o.expect(f.distinct == want && !f.ambiguous(), "float enumeration of " + a.to_string());
  }
  o.expect(gk_distance_quadruples(set({0, 1})) == 96, "gk {0,1}");
  o.expect(gk_distance_quadruples(set({0, 1, 2})) == 1329, "gk {0,1,2}");
  o.expect(grid_collinear_triples(set({0, 1, 2})) == 48, "3x3 grid");
  const double ms = ms_since(t0);
  o.expect(ms < 1000, "took " + std::to_string(ms) + " ms");
  if (o.pass) o.detail = "7, 10, 27, 96, 1329, 48; " + std::to_string(ms) + " ms";
  return o;
}

Outcome certificates() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> size(8, 128);
  std::size_t assertions = 0;
  for (int i = 0; i < 200 && o.pass; ++i) {
    const std::size_t n = size(rng);
    GroundSet a = i % 3 == 2 ? testutil::random_rationals(rng, n, 200, 8, i % 2 == 0)
                             : testutil::random_ints(rng, n, i % 2 ? 1 : -3 * static_cast<long>(n),
                                                     4 * static_cast<long>(n), true);
    if (i % 5 == 4) a = generate(parse_family("geometric:" + std::to_string(2 + i % 3) + ":" + std::to_string(n)));
    for (auto* f : {&popular_ratio_class, &refine_energy_subset, &double_pigeonhole}) {
      const RefinementCertificate c = f(a, kernels::default_exec());
      assertions += c.assertions.size();
      for (const auto& as : c.assertions) {
        if (!as.satisfied) o.fail(as.name + " unsatisfied on a set of size " + std::to_string(n));
      }
      const auto problems = recheck(c);
      if (!problems.empty()) o.fail("recheck: " + problems.front());
      if (c.witness) {
        const DStarWitness& w = *c.witness;
        if (!oracle::witness_pointwise(oracle::elems(w.target), oracle::elems(w.q), oracle::elems(w.r), w.t)) {
          o.fail("witness pointwise-t fails under direct enumeration");
        }
      }
    }
    const auto dw = recheck(dstar_upper_bound(a));
    if (!dw.empty()) o.fail("d_* witness: " + dw.front());
  }
  const double ms = ms_since(t0);
  o.expect(ms < 120000, "took " + std::to_string(ms) + " ms");
  if (o.pass) {
    o.detail = "200 sets, 3 certificates each, " + std::to_string(assertions) + " assertions re-verified; " +
               std::to_string(ms / 1000) + " s";
  }
  return o;
}

Outcome growth() {
  Outcome o;
  const auto t0 = Clock::now();
  const FamilySpec interval = parse_family("interval");
  const std::vector<std::size_t> sizes{16, 32, 64, 128};
  const ExponentFit sum = exponent_fit(interval, sizes, "sumset-size", 0);
  const ExponentFit five = exponent_fit(interval, sizes, "five-var", 0);
  const ExponentFit pinned = exponent_fit(interval, sizes, "best-pinned", 0);
  std::ostringstream d;
  d.precision(5);
  d << "|A+A| slope " << sum.slope << ", five-var " << five.slope << ", best-pinned " << pinned.slope;
  o.expect(std::abs(sum.slope - 1.0) <= 0.01,
           "|A+A| slope " + std::to_string(sum.slope) + " outside 1.000 +- 0.01 (least squares of 2N-1 on these sizes)");
  o.expect(std::abs(five.slope - 2.0) <= 0.05, "five-var slope " + std::to_string(five.slope));
  o.expect(pinned.slope >= 1.5, "best-pinned slope " + std::to_string(pinned.slope));

  SuiteConfig cfg;
  cfg.specs = "growth.energy-sumset";
  cfg.families = {interval};
  cfg.sizes = {8, 16, 32, 64, 128};
  const SuiteReport rep = run_suite(cfg);
  double first = 0;
  for (const auto& r : rep.records) {
    if (!r.ratio) {
      o.fail("no ratio at n=" + std::to_string(r.instance.n));
      continue;
    }
    if (r.instance.n == 8) first = *r.ratio;
    else if (*r.ratio > first) o.fail("energy/sumset ratio rises above its n=8 value at n=" + std::to_string(r.instance.n));
  }
  d << ", energy/sumset ratio n=8 " << first << " -> n=128 " << (rep.records.empty() ? 0 : *rep.records.back().ratio);
  const double ms = ms_since(t0);
  o.expect(ms < 600000, "took " + std::to_string(ms) + " ms");
  if (o.pass) o.detail = d.str();
  else o.detail += "; " + d.str();
  return o;
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sumprodlab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string base = std::string("'") + SUMPRODLAB_PATH +
                           "' verify --specs '*' --family random:1000:24 --family geometric:3:10 --seeds 1..6 "
                           "--sizes 6,12,24";
  const std::string a = (dir / "a").string(), b = (dir / "b").string();
  const int ra = run_command(base + " --workers 1 --out-jsonl " + a + ".jsonl --out-csv " + a + ".csv > /dev/null");
  const int rb = run_command(base + " --workers 4 --out-jsonl " + b + ".jsonl --out-csv " + b + ".csv > /dev/null");
  o.expect(ra == 0 && rb == 0, "verify exit codes " + std::to_string(ra) + ", " + std::to_string(rb));
  const std::string ja = slurp(a + ".jsonl"), jb = slurp(b + ".jsonl");
  o.expect(!ja.empty(), "empty JSON-lines output");
  o.expect(ja == jb, "JSON-lines output differs");
  o.expect(slurp(a + ".csv") == slurp(b + ".csv"), "CSV output differs");
  if (o.pass) {
    o.detail = std::to_string(std::count(ja.begin(), ja.end(), '\n')) + " records byte-identical across 1 and 4 workers";
  }
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  kernels::set_worker_count(4);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact crossover exponents", crossovers},
      {"histogram kernels equal brute-force tuple counts", oracle_equivalence},
      {"constant-free inequalities on 500 random instances", constant_free_suite},
      {"pinned desk values", desk_values},
      {"refinement certificates re-verify independently", certificates},
      {"growth exponents on the interval family", growth},
      {"verify output is byte-identical across runs", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << "  ("
              << o.detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
