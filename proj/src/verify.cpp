#include "sumprod/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fnmatch.h>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "sumprod/energy.hpp"
#include "sumprod/errors.hpp"
#include "sumprod/geometry.hpp"
#include "sumprod/setcore.hpp"

namespace sumprod {

// ---------------------------------------------------------------------------
// Quantity

Quantity Quantity::of(const Rational& v) { return Quantity{v, Enclosure::exact(v)}; }
Quantity Quantity::of(const mpz_class& v) { return of(Rational(v)); }
Quantity Quantity::of(std::uint64_t v) { return of(Rational(v)); }
Quantity Quantity::of(Enclosure e) { return Quantity{std::nullopt, std::move(e)}; }

std::string Quantity::to_string() const { return exact ? exact->to_string() : approx.to_string(); }

std::string_view to_string(SpecKind k) {
  switch (k) {
    case SpecKind::exact: return "exact";
    case SpecKind::identity: return "identity";
    case SpecKind::ratio: return "ratio";
    case SpecKind::growth: return "growth";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Per-instance cache of the quantities several specs share.

class EvalContext {
 public:
  EvalContext(const GroundSet& a, const CheckParams& params) : a(a), params(params), n(a.size()) {}

  const GroundSet& a;
  const CheckParams& params;
  const std::size_t n;

  const GroundSet& b() const { return params.b ? *params.b : a; }
  Rational alpha() const { return params.alpha.value_or(Rational(1)); }

  const mpz_class& mult_energy() {
    if (!mult_energy_) mult_energy_ = multiplicative_energy(a, a);
    return *mult_energy_;
  }
  const RepHistogram& diff_hist() {
    if (!diff_hist_) diff_hist_ = rep_histogram(a, a, RepKind::difference);
    return *diff_hist_;
  }
  mpz_class add_energy() { return diff_hist().moment(2u); }
  std::uint64_t sumset_size() {
    if (!sumset_size_) sumset_size_ = sumset(a, a).size();
    return *sumset_size_;
  }
  std::uint64_t difference_size() { return diff_hist().support_size(); }
  std::uint64_t pinned(Sign sign) {
    auto& slot = sign == Sign::plus ? pinned_plus_ : pinned_minus_;
    if (!slot) {
      slot = params.pin ? pinned_product(a, *params.pin, sign).cardinality
                        : best_pinned_product(a, sign).cardinality;
    }
    return *slot;
  }
  std::uint64_t shifted_by_alpha() {
    if (!alpha_product_) alpha_product_ = pinned_product(a, alpha(), Sign::plus).cardinality;
    return *alpha_product_;
  }
  /// W >= d_*(A).
  const Rational& dstar() {
    if (!dstar_) dstar_ = dstar_upper_bound(a).value;
    return *dstar_;
  }
  /// K = |A|^3 / E×(A).
  Rational k() { return pow(Rational(n), 3) / Rational(mult_energy()); }
  std::uint64_t five_var() {
    if (!five_var_) five_var_ = five_var_expander_size(a);
    return *five_var_;
  }

 private:
  std::optional<mpz_class> mult_energy_;
  std::optional<RepHistogram> diff_hist_;
  std::optional<std::uint64_t> sumset_size_, pinned_plus_, pinned_minus_, alpha_product_, five_var_;
  std::optional<Rational> dstar_;
};

namespace {

using Pair = std::pair<Quantity, Quantity>;

Enclosure ex(const Rational& r) { return Enclosure::exact(r); }
Enclosure ex(const mpz_class& z) { return Enclosure::exact(z); }
Enclosure ex(std::uint64_t v) { return Enclosure::exact(Rational(v)); }
Enclosure npow(std::size_t n, const Rational& e) { return pow(ex(Rational(n)), e); }
Enclosure lg(std::size_t n) { return log2(ex(Rational(n))); }
Enclosure lgpow(std::size_t n, const Rational& e) { return pow(lg(n), e); }

Rational sq(const Rational& x) { return x * x; }
Rational q(long p, long d = 1) { return Rational(mpz_class(p), mpz_class(d)); }

// S = #{b1(b1' + αz) = b2(b2' + αz) : b_i in B, b_i' in B_{b_i}} with B = zA,
// once by comparing every pair of (b, b') solutions and once as Σ_t n(t)².
Pair double_count_s(EvalContext& c) {
  const Rational z = best_dilation(c.a).z;
  const Rational shift = c.alpha() * z;
  const GroundSet b = dilate(c.a, z);
  std::vector<Rational> values;
  for (const auto& x : b) {
    for (const auto& y : b) {
      if (b.contains(x * y)) values.push_back(x * (y + shift));
    }
  }
  std::uint64_t brute = 0;
  for (const auto& u : values)
    for (const auto& v : values) brute += u == v ? 1 : 0;
  std::map<Rational, std::uint64_t> n_of_t;
  for (const auto& v : values) ++n_of_t[v];
  mpz_class moment = 0;
  for (const auto& [t, m] : n_of_t) moment += mpz_class(static_cast<unsigned long>(m)) * m;
  return {Quantity::of(brute), Quantity::of(moment)};
}

// |A|^2 E_{3/2}(A)^2 against E_3(A)^{2/3} E_3(B)^{1/3} E+(A, A-B); exact right side when B = A.
Pair three_way(EvalContext& c, const GroundSet& b) {
  const Enclosure e15 = c.diff_hist().moment(q(3, 2));
  const Quantity lhs = Quantity::of(ex(sq(Rational(c.n))) * e15 * e15);
  const mpz_class e3a = c.diff_hist().moment(3u);
  const mpz_class mixed = additive_energy(c.a, difference_set(c.a, b));
  if (b == c.a) return {lhs, Quantity::of(mpz_class(e3a * mixed))};
  const mpz_class e3b = rep_histogram(b, b, RepKind::difference).moment(3u);
  return {lhs, Quantity::of(pow(ex(e3a), q(2, 3)) * pow(ex(e3b), q(1, 3)) * ex(mixed))};
}

std::vector<InequalitySpec> build_registry() {
  std::vector<InequalitySpec> r;
  const auto add = [&](InequalitySpec s) { r.push_back(std::move(s)); };
  const Rational half = q(1, 2);

  // Constant-free statements and double-counting identities.
  add({"exact.cauchy-schwarz-product", SpecKind::exact, Relation::ge, "E×(A,B) >= |A|^2 |B|^2 / |AB|",
       "none", 1, true, false, false, [](EvalContext& c) {
         const GroundSet& b = c.b();
         const Rational rhs = sq(Rational(c.n)) * sq(Rational(b.size())) / Rational(product_set(c.a, b).size());
         return Pair{Quantity::of(multiplicative_energy(c.a, b)), Quantity::of(rhs)};
       }});
  add({"exact.holder-e1.5", SpecKind::exact, Relation::le, "|A|^6 <= |A-A| E_{3/2}(A)^2", "none", 1, false,
       false, false, [](EvalContext& c) {
         const Enclosure e15 = c.diff_hist().moment(q(3, 2));
         return Pair{Quantity::of(pow(Rational(c.n), 6)), Quantity::of(ex(c.difference_size()) * e15 * e15)};
       }});
  // Constant-free at B = A, the case the difference-set bound uses. The
  // two-set form is false in general (A = {0,1}, B = {0}) and is reported as a ratio.
  add({"exact.energy-three-way", SpecKind::exact, Relation::le,
       "|A|^2 E_{3/2}(A)^2 <= E_3(A) E+(A, A-A)", "none", 1, false, false, false,
       [](EvalContext& c) { return three_way(c, c.a); }});
  add({"ratio.energy-three-way-b", SpecKind::ratio, Relation::le,
       "|A|^2 E_{3/2}(A)^2 <= E_3(A)^{2/3} E_3(B)^{1/3} E+(A, A-B)", "none", 1, false, false, false,
       [](EvalContext& c) { return three_way(c, c.b()); }});
  add({"exact.double-count-S", SpecKind::identity, Relation::eq,
       "#{b1(b1'+αz) = b2(b2'+αz)} = Σ_t n(t)^2, B = zA", "none", 1, true, false, false, double_count_s});
  add({"exact.shifted-quintuple", SpecKind::identity, Relation::eq,
       "Σ_a E×(B, A - a) by histogram = by solving for c'", "none", 1, false, false, false,
       [](EvalContext& c) {
         return Pair{Quantity::of(shifted_energy_sum(c.a, c.b(), c.a, Sign::plus)),
                     Quantity::of(shifted_energy_sum_reference(c.a, c.b(), c.a, Sign::plus))};
       }});

  // Headline bounds.
  add({"T1", SpecKind::ratio, Relation::ge, "max_a |A(A+a)| >= |A|^{3/2 + 1/186}", "none", 1, false, false,
       false, [](EvalContext& c) {
         return Pair{Quantity::of(c.pinned(Sign::plus)), Quantity::of(npow(c.n, q(3, 2) + q(1, 186)))};
       }});
  add({"T2", SpecKind::ratio, Relation::ge, "|A(A+A)| >= |A|^{3/2 + 5/242}", "none", 1, false, false, false,
       [](EvalContext& c) {
         return Pair{Quantity::of(composite_expander(c.a, Inner::sum).cardinality),
                     Quantity::of(npow(c.n, q(3, 2) + q(5, 242)))};
       }});
  add({"T3", SpecKind::ratio, Relation::ge, "|A(A-A)| >= |A|^{3/2 + 1/34}", "none", 1, false, false, false,
       [](EvalContext& c) {
         return Pair{Quantity::of(composite_expander(c.a, Inner::difference).cardinality),
                     Quantity::of(npow(c.n, q(3, 2) + q(1, 34)))};
       }});
  add({"T4", SpecKind::ratio, Relation::ge, "|{(a1+a2+a3+a4)^2 + log a5}| >= |A|^2 / log|A|", "log^-1", 3,
       false, true, false, [](EvalContext& c) {
         return Pair{Quantity::of(c.five_var()), Quantity::of(npow(c.n, 2) / lg(c.n))};
       }});

  // Bounds with implicit constants.
  for (const Sign sign : {Sign::plus, Sign::minus}) {
    add({sign == Sign::plus ? "ratio.pinned-energy-plus" : "ratio.pinned-energy-minus", SpecKind::ratio,
         Relation::ge,
         sign == Sign::plus ? "E×(A) max_a |A(A+a)|^2 >= |A|^6 / log|A|"
                            : "E×(A) max_a |A(A-a)|^2 >= |A|^6 / log|A|",
         "log^-1", 3, true, false, false, [sign](EvalContext& c) {
           const Rational lhs = Rational(c.mult_energy()) * sq(Rational(c.pinned(sign)));
           return Pair{Quantity::of(lhs), Quantity::of(npow(c.n, 6) / lg(c.n))};
         }});
  }
  add({"ratio.shifted-energy", SpecKind::ratio, Relation::le,
       "Σ_a E×(A, A-a) <= E×(A)^{1/2} |A|^2 log^{1/2}|A| + 2|A|^3", "log^{1/2}", 3, true, false, false,
       [half](EvalContext& c) {
         const Enclosure rhs = pow(ex(c.mult_energy()), half) * npow(c.n, 2) * lgpow(c.n, half) +
                               ex(Rational(2) * pow(Rational(c.n), 3));
         return Pair{Quantity::of(shifted_energy_sum(c.a, c.a, c.a, Sign::plus)), Quantity::of(rhs)};
       }});
  add({"ratio.energy-sumset-product", SpecKind::ratio, Relation::ge,
       "E×(A) |A(A+A)|^2 >= |A|^6 / log|A|", "log^-1", 3, true, false, false, [](EvalContext& c) {
         const Rational lhs =
             Rational(c.mult_energy()) * sq(Rational(composite_expander(c.a, Inner::sum).cardinality));
         return Pair{Quantity::of(lhs), Quantity::of(npow(c.n, 6) / lg(c.n))};
       }});
  add({"ratio.dilation-overlap", SpecKind::ratio, Relation::ge,
       "max_z Σ_{x in zA} |A ∩ xA| >= E×(A) / (|A| log|A|)", "log^-1", 3, true, false, false,
       [](EvalContext& c) {
         const Enclosure rhs = ex(c.mult_energy()) / (ex(Rational(c.n)) * lg(c.n));
         return Pair{Quantity::of(best_dilation(c.a).overlap), Quantity::of(rhs)};
       }});
  add({"ratio.dilation-product", SpecKind::ratio, Relation::ge,
       "|A(A+α)| >= E×(A)^2 / (|A|^{58/13} W^{7/13})", "none", 1, true, false, true, [](EvalContext& c) {
         const Enclosure rhs = ex(sq(Rational(c.mult_energy()))) / (npow(c.n, q(58, 13)) * pow(ex(c.dstar()), q(7, 13)));
         return Pair{Quantity::of(c.shifted_by_alpha()), Quantity::of(rhs)};
       }});
  add({"ratio.energy-dstar", SpecKind::ratio, Relation::le,
       "E+(A) <= W^{7/13} |A|^{32/13} log^{71/65}|A|", "log^{71/65}", 3, true, false, true,
       [](EvalContext& c) {
         const Enclosure rhs = pow(ex(c.dstar()), q(7, 13)) * npow(c.n, q(32, 13)) * lgpow(c.n, q(71, 65));
         return Pair{Quantity::of(c.add_energy()), Quantity::of(rhs)};
       }});
  add({"ratio.closing-remark", SpecKind::ratio, Relation::ge, "|A|^2 |A(A+α)| E+(A) >= E×(A)^2", "none", 1,
       true, false, false, [](EvalContext& c) {
         const Rational lhs = sq(Rational(c.n)) * Rational(c.shifted_by_alpha()) * Rational(c.add_energy());
         return Pair{Quantity::of(lhs), Quantity::of(sq(Rational(c.mult_energy())))};
       }});
  add({"ratio.big-energy", SpecKind::ratio, Relation::ge, "|A(A+α)| >= |A|^{20/13} / K^{40/13}", "none", 1,
       true, false, false, [](EvalContext& c) {
         const Enclosure rhs = npow(c.n, q(20, 13)) / pow(ex(c.k()), q(40, 13));
         return Pair{Quantity::of(c.shifted_by_alpha()), Quantity::of(rhs)};
       }});
  add({"ratio.diff-energy", SpecKind::ratio, Relation::ge, "|A-A| >= |A|^{8/5} / K^{6/5}", "none", 1, true,
       false, false, [](EvalContext& c) {
         return Pair{Quantity::of(c.difference_size()),
                     Quantity::of(npow(c.n, q(8, 5)) / pow(ex(c.k()), q(6, 5)))};
       }});
  add({"ratio.sum-energy", SpecKind::ratio, Relation::ge, "|A+A| >= |A|^{58/37} / K^{42/37}", "none", 1, true,
       false, false, [](EvalContext& c) {
         return Pair{Quantity::of(c.sumset_size()),
                     Quantity::of(npow(c.n, q(58, 37)) / pow(ex(c.k()), q(42, 37)))};
       }});
  add({"ratio.diff-dstar", SpecKind::ratio, Relation::ge, "|A-A| >= |A|^{8/5} / (W^{3/5} log^{2/5}|A|)",
       "log^{-2/5}", 3, true, false, true, [](EvalContext& c) {
         const Enclosure rhs = npow(c.n, q(8, 5)) / (pow(ex(c.dstar()), q(3, 5)) * lgpow(c.n, q(2, 5)));
         return Pair{Quantity::of(c.difference_size()), Quantity::of(rhs)};
       }});
  add({"ratio.sum-dstar", SpecKind::ratio, Relation::ge, "|A+A| >= |A|^{58/37} / W^{21/37}", "none", 1, true,
       false, true, [](EvalContext& c) {
         return Pair{Quantity::of(c.sumset_size()),
                     Quantity::of(npow(c.n, q(58, 37)) / pow(ex(c.dstar()), q(21, 37)))};
       }});
  add({"ratio.sum-dstar-weak", SpecKind::ratio, Relation::ge,
       "|A+A| >= |A|^{14/9} / (W^{5/9} log^{2/9}|A|)", "log^{-2/9}", 3, true, false, true, [](EvalContext& c) {
         const Enclosure rhs = npow(c.n, q(14, 9)) / (pow(ex(c.dstar()), q(5, 9)) * lgpow(c.n, q(2, 9)));
         return Pair{Quantity::of(c.sumset_size()), Quantity::of(rhs)};
       }});
  add({"ratio.e3-dstar", SpecKind::ratio, Relation::le, "E_3(A) <= |A|^3 W log|A|", "log", 3, true, false,
       true, [](EvalContext& c) {
         return Pair{Quantity::of(c.diff_hist().moment(3u)), Quantity::of(npow(c.n, 3) * ex(c.dstar()) * lg(c.n))};
       }});
  add({"ratio.emix-dstar", SpecKind::ratio, Relation::le, "E+(A, F) <= |A| |F|^{3/2} W^{1/2}, F = A-A", "none",
       1, true, false, true, [half](EvalContext& c) {
         const GroundSet f = difference_set(c.a, c.a);
         const Enclosure rhs = ex(Rational(c.n)) * npow(f.size(), q(3, 2)) * pow(ex(c.dstar()), half);
         return Pair{Quantity::of(additive_energy(c.a, f)), Quantity::of(rhs)};
       }});
  add({"ratio.level-set", SpecKind::ratio, Relation::le, "|{x : r_{A-B}(x) >= τ}| <= |A| |B|^2 W / τ^3",
       "none", 1, true, false, true, [](EvalContext& c) {
         const Rational& tau = c.params.tau;
         if (tau < Rational(1)) throw Error(ErrorCode::PreconditionViolated, "level set needs tau >= 1");
         const RepHistogram h = rep_histogram(c.a, c.b(), RepKind::difference);
         std::uint64_t level = 0;
         for (const auto& e : h.entries()) level += Rational(e.count) >= tau ? 1 : 0;
         const Rational rhs = Rational(c.n) * sq(Rational(c.b().size())) * c.dstar() / pow(tau, 3);
         return Pair{Quantity::of(level), Quantity::of(rhs)};
       }});
  add({"ratio.gk-expander", SpecKind::ratio, Relation::ge,
       "E×(A) |{(a1+a2+a3+a4)^2 + log a5}|^2 >= |A|^4 |A+A|^2 / log|A|", "log^-1", 3, false, true, false,
       [](EvalContext& c) {
         const Rational lhs = Rational(c.mult_energy()) * sq(Rational(c.five_var()));
         const Enclosure rhs = npow(c.n, 4) * ex(sq(Rational(c.sumset_size()))) / lg(c.n);
         return Pair{Quantity::of(lhs), Quantity::of(rhs)};
       }});

  // Asymptotic upper bounds, tracked across sizes.
  add({"growth.collinear", SpecKind::growth, Relation::le, "T(A x A) <= |A|^4 log|A|", "log", 3, false, false,
       false, [](EvalContext& c) {
         return Pair{Quantity::of(grid_collinear_triples(c.a)), Quantity::of(npow(c.n, 4) * lg(c.n))};
       }});
  add({"growth.gk", SpecKind::growth, Relation::le, "#{(a1-a2)^2+(a3-a4)^2 = (a5-a6)^2+(a7-a8)^2} <= |A|^6 log|A|",
       "log", 3, false, false, false, [](EvalContext& c) {
         return Pair{Quantity::of(gk_distance_quadruples(c.a)), Quantity::of(npow(c.n, 6) * lg(c.n))};
       }});
  add({"growth.energy-sumset", SpecKind::growth, Relation::le, "E×(A) <= |A+A|^2 log|A|", "log", 3, true,
       false, false, [](EvalContext& c) {
         return Pair{Quantity::of(c.mult_energy()),
                     Quantity::of(ex(sq(Rational(c.sumset_size()))) * lg(c.n))};
       }});

  std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  return r;
}

bool exact_pass(const Relation rel, const Quantity& lhs, const Quantity& rhs) {
  if (lhs.exact && rhs.exact) return holds(*lhs.exact, rel, *rhs.exact);
  switch (rel) {
    case Relation::le: return certainly_le(lhs.approx, rhs.approx);
    case Relation::lt: return certainly_lt(lhs.approx, rhs.approx);
    case Relation::ge: return certainly_le(rhs.approx, lhs.approx);
    case Relation::gt: return certainly_lt(rhs.approx, lhs.approx);
    case Relation::eq: return false;  // equality is only decided on exact values
  }
  return false;
}

void require(const InequalitySpec& spec, const GroundSet& a, const CheckParams& params) {
  const auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::PreconditionViolated, spec.id + " needs " + why);
  };
  if (a.size() < spec.min_size) fail("|A| >= " + std::to_string(spec.min_size));
  if (spec.needs_nonzero && (a.contains_zero() || (params.b && params.b->contains_zero()))) fail("0 outside A and B");
  if (spec.needs_positive && !a.all_positive()) fail("positive elements");
}

InequalityRecord evaluate_in(const InequalitySpec& spec, EvalContext& ctx, const InstanceInfo& info) {
  require(spec, ctx.a, ctx.params);
  InequalityRecord rec;
  rec.spec = spec.id;
  rec.kind = spec.kind;
  rec.relation = spec.relation;
  rec.instance = info;
  rec.weakened = spec.weakened;
  const auto t0 = std::chrono::steady_clock::now();
  std::tie(rec.lhs, rec.rhs) = spec.evaluate(ctx);
  rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (mpfr_sgn(rec.rhs.approx.lo().get()) > 0 || mpfr_sgn(rec.rhs.approx.hi().get()) < 0) {
    rec.ratio = (rec.lhs.approx / rec.rhs.approx).mid();
  }
  if (spec.kind == SpecKind::exact || spec.kind == SpecKind::identity) {
    rec.pass = exact_pass(spec.relation, rec.lhs, rec.rhs);
  }
  return rec;
}

std::string instance_text(const InequalityRecord& r) {
  return r.instance.family + " n=" + std::to_string(r.instance.n) + " seed=" + std::to_string(r.instance.seed);
}

}  // namespace

const std::vector<InequalitySpec>& registry() {
  static const std::vector<InequalitySpec> specs = build_registry();
  return specs;
}

const InequalitySpec* find_spec(std::string_view id) {
  for (const auto& s : registry()) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::vector<const InequalitySpec*> select_specs(std::string_view globs) {
  std::vector<std::string> patterns;
  std::size_t start = 0;
  while (start <= globs.size()) {
    const auto pos = globs.find(',', start);
    const auto piece = globs.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    if (!piece.empty()) patterns.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  std::vector<const InequalitySpec*> out;
  for (const auto& s : registry()) {
    for (const auto& p : patterns) {
      if (fnmatch(p.c_str(), s.id.c_str(), 0) == 0) {
        out.push_back(&s);
        break;
      }
    }
  }
  return out;
}

InequalityRecord evaluate(const InequalitySpec& spec, const GroundSet& a, const CheckParams& params,
                          const InstanceInfo& info) {
  EvalContext ctx(a, params);
  InstanceInfo filled = info;
  if (filled.n == 0) filled.n = a.size();
  return evaluate_in(spec, ctx, filled);
}

InequalityRecord check(const InequalitySpec& spec, const GroundSet& a, const CheckParams& params,
                       const InstanceInfo& info) {
  InequalityRecord rec = evaluate(spec, a, params, info);
  if (rec.pass && !*rec.pass) {
    throw Error(ErrorCode::ExactInequalityViolated,
                spec.id + " on " + instance_text(rec) + ": " + rec.lhs.to_string() + " " +
                    std::string(to_string(spec.relation)) + " " + rec.rhs.to_string() + " is false");
  }
  return rec;
}

std::vector<InequalityRecord> exact_suite(const GroundSet& a, const GroundSet& b) {
  CheckParams params;
  params.b = b;
  std::vector<InequalityRecord> out;
  for (const auto* spec : select_specs("exact.*")) {
    if (spec->needs_nonzero && (a.contains_zero() || b.contains_zero())) continue;
    out.push_back(check(*spec, a, params));
  }
  return out;
}

Rational crossover(std::pair<Rational, Rational> pinned, std::pair<Rational, Rational> alt) {
  const auto& [p, q] = pinned;
  const auto& [r, s] = alt;
  const Rational denom = q + s;
  if (denom.sign() <= 0) throw Error(ErrorCode::NonpositiveDenominator, "q + s must be positive");
  return p + q * (r - p) / denom;
}

// ---------------------------------------------------------------------------
// Exponent fits

namespace {

double log2_of(const mpz_class& v) {
  if (v <= 0) throw Error(ErrorCode::InvalidParameter, "log of a non-positive quantity");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

double log2_of(std::uint64_t v) { return log2_of(mpz_class(static_cast<unsigned long>(v))); }

}  // namespace

const std::vector<std::string>& fit_quantities() {
  static const std::vector<std::string> names = {
      "add-energy",   "aminus",         "aplus",      "best-pinned", "best-pinned-minus",
      "collinear",    "difference-size", "energy-sumset-ratio", "five-var", "gk",
      "mult-energy",  "product-size",   "size-squared", "sumset-size"};
  return names;
}

double log2_quantity(std::string_view quantity, const GroundSet& a) {
  if (quantity == "sumset-size") return log2_of(sumset(a, a).size());
  if (quantity == "difference-size") return log2_of(difference_set(a, a).size());
  if (quantity == "product-size") return log2_of(product_set(a, a).size());
  if (quantity == "five-var") return log2_of(five_var_expander_size(a));
  if (quantity == "best-pinned") return log2_of(best_pinned_product(a, Sign::plus).cardinality);
  if (quantity == "best-pinned-minus") return log2_of(best_pinned_product(a, Sign::minus).cardinality);
  if (quantity == "aplus") return log2_of(composite_expander(a, Inner::sum).cardinality);
  if (quantity == "aminus") return log2_of(composite_expander(a, Inner::difference).cardinality);
  if (quantity == "mult-energy") return log2_of(multiplicative_energy(a, a));
  if (quantity == "add-energy") return log2_of(additive_energy(a, a));
  if (quantity == "gk") return log2_of(gk_distance_quadruples(a));
  if (quantity == "collinear") return log2_of(grid_collinear_triples(a));
  if (quantity == "size-squared") return 2 * log2_of(a.size());
  if (quantity == "energy-sumset-ratio") {
    if (a.size() < 2) throw Error(ErrorCode::InvalidParameter, "energy-sumset-ratio needs |A| >= 2");
    const double s = log2_of(sumset(a, a).size());
    return log2_of(multiplicative_energy(a, a)) - 2 * s - std::log2(std::log2(static_cast<double>(a.size())));
  }
  throw Error(ErrorCode::InvalidParameter, "unknown quantity '" + std::string(quantity) + "'");
}

ExponentFit exponent_fit(const FamilySpec& family, const std::vector<std::size_t>& sizes,
                         std::string_view quantity, std::uint64_t seed, std::optional<double> budget_ms) {
  if (sizes.size() < 4) throw Error(ErrorCode::InvalidParameter, "an exponent fit needs at least 4 sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw Error(ErrorCode::InvalidParameter, "sizes must strictly increase");
  }
  ExponentFit fit;
  fit.family = family.family_id();
  fit.quantity = std::string(quantity);
  fit.seed = seed;
  fit.sizes = sizes;
  std::vector<double> xs, ys;
  for (const auto n : sizes) {
    const GroundSet a = generate(with_seed(with_size(family, n), seed));
    const auto t0 = std::chrono::steady_clock::now();
    const double y = log2_quantity(quantity, a);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (budget_ms && ms > *budget_ms) {
      std::ostringstream os;
      os << fit.quantity << " at n=" << n << " took " << ms << " ms, budget " << *budget_ms << " ms";
      throw Error(ErrorCode::BudgetExceeded, os.str());
    }
    xs.push_back(std::log2(static_cast<double>(a.size())));
    ys.push_back(y);
    fit.values.push_back(std::exp2(y));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / k;
    my += ys[i] / k;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / k);
  return fit;
}

// ---------------------------------------------------------------------------
// Suite runner

namespace {

bool uses_seed(FamilyKind k) { return k == FamilyKind::random_subset || k == FamilyKind::perturbed_ap; }

struct Instance {
  FamilySpec family;
  InstanceInfo info;
  std::optional<GroundSet> set;
  std::string error;
};

std::string reproduce_command(const InequalityRecord& r) {
  return "sumprodlab verify --specs '" + r.spec + "' --family '" + r.instance.family + "' --sizes " +
         std::to_string(r.instance.n) + " --seeds " + std::to_string(r.instance.seed);
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  SuiteReport report;
  const auto specs = select_specs(config.specs);

  std::vector<Instance> instances;
  for (const auto& fam : config.families) {
    std::vector<std::size_t> sizes = config.sizes;
    if (sizes.empty()) {
      if (fam.n == 0 && fam.kind != FamilyKind::custom_file) {
        throw Error(ErrorCode::InvalidParameter, "no size given for family " + fam.family_id());
      }
      sizes.push_back(fam.n);
    }
    std::vector<std::uint64_t> seeds = config.seeds;
    if (seeds.empty()) seeds.push_back(fam.seed);
    if (!uses_seed(fam.kind)) seeds.resize(1);
    for (const auto n : sizes) {
      for (const auto seed : seeds) {
        Instance inst;
        inst.family = with_seed(with_size(fam, n), seed);
        inst.info = InstanceInfo{fam.family_id(), n, seed};
        instances.push_back(std::move(inst));
      }
    }
  }

  if (!specs.empty()) {
    std::vector<std::vector<InequalityRecord>> per_instance(instances.size());
    kernels::for_each_index(
        instances.size(),
        [&](std::size_t i) {
          Instance& inst = instances[i];
          const GroundSet a = generate(inst.family);
          if (inst.info.n == 0) inst.info.n = a.size();
          EvalContext ctx(a, config.params);
          for (const auto* spec : specs) {
            InequalityRecord rec;
            try {
              rec = evaluate_in(*spec, ctx, inst.info);
              if (config.budget_ms && rec.elapsed_ms && *rec.elapsed_ms > *config.budget_ms) {
                rec.skipped = "budget exceeded";
              }
            } catch (const Error& e) {
              if (e.code() != ErrorCode::PreconditionViolated) throw;
              rec = InequalityRecord{};
              rec.spec = spec->id;
              rec.kind = spec->kind;
              rec.relation = spec->relation;
              rec.instance = inst.info;
              rec.weakened = spec->weakened;
              rec.skipped = e.detail();
            }
            if (!config.timings) rec.elapsed_ms.reset();
            per_instance[i].push_back(std::move(rec));
          }
        },
        kernels::default_exec());
    for (auto& v : per_instance) {
      for (auto& r : v) report.records.push_back(std::move(r));
    }
    std::sort(report.records.begin(), report.records.end(), [](const auto& x, const auto& y) {
      return std::tie(x.spec, x.instance.family, x.instance.n, x.instance.seed) <
             std::tie(y.spec, y.instance.family, y.instance.n, y.instance.seed);
    });
    for (const auto& r : report.records) {
      if (r.skipped.empty() && r.pass && !*r.pass) {
        report.failure = SuiteFailure{r, reproduce_command(r)};
        break;
      }
    }
  }

  for (const auto& fam : config.families) {
    for (const auto& quantity : config.fits) {
      const std::uint64_t seed = config.seeds.empty() ? fam.seed : config.seeds.front();
      report.fits.push_back(exponent_fit(fam, config.sizes, quantity, seed, config.budget_ms));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialisation

namespace {

using Json = nlohmann::ordered_json;

Relation parse_relation(std::string_view s) {
  for (const auto r : {Relation::ge, Relation::gt, Relation::le, Relation::lt, Relation::eq}) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorCode::ParseError, "unknown relation '" + std::string(s) + "'");
}

SpecKind parse_kind(std::string_view s) {
  for (const auto k : {SpecKind::exact, SpecKind::identity, SpecKind::ratio, SpecKind::growth}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown spec kind '" + std::string(s) + "'");
}

Quantity parse_quantity(const std::string& s) {
  if (s.find_first_of(".eE") == std::string::npos) return Quantity::of(Rational::parse(s));
  mpf_class f(0, 512);
  if (f.set_str(s, 10) != 0) throw Error(ErrorCode::ParseError, "bad decimal '" + s + "'");
  return Quantity::of(Enclosure::exact(Rational(mpq_class(f))));
}

}  // namespace

std::string to_json_line(const InequalityRecord& r) {
  Json j;
  j["spec"] = r.spec;
  j["family"] = r.instance.family;
  j["n"] = r.instance.n;
  j["seed"] = r.instance.seed;
  const bool evaluated = r.skipped.empty() || r.skipped == "budget exceeded";
  j["lhs"] = evaluated ? Json(r.lhs.to_string()) : Json(nullptr);
  j["rhs"] = evaluated ? Json(r.rhs.to_string()) : Json(nullptr);
  j["ratio"] = evaluated && r.ratio ? Json(*r.ratio) : Json(nullptr);
  j["pass"] = evaluated && r.pass ? Json(*r.pass) : Json(nullptr);
  j["weakened"] = r.weakened;
  j["elapsed_ms"] = r.elapsed_ms ? Json(*r.elapsed_ms) : Json(nullptr);
  j["kind"] = std::string(to_string(r.kind));
  j["relation"] = std::string(to_string(r.relation));
  j["rng"] = std::string(Rng::kAlgorithm);
  if (!r.skipped.empty()) j["skipped"] = r.skipped;
  return j.dump();
}

void write_jsonl(std::ostream& out, const std::vector<InequalityRecord>& records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

std::vector<InequalityRecord> read_jsonl(std::istream& in) {
  std::vector<InequalityRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      InequalityRecord r;
      r.spec = j.at("spec").get<std::string>();
      r.instance.family = j.at("family").get<std::string>();
      r.instance.n = j.at("n").get<std::size_t>();
      r.instance.seed = j.at("seed").get<std::uint64_t>();
      r.kind = parse_kind(j.at("kind").get<std::string>());
      r.relation = parse_relation(j.at("relation").get<std::string>());
      r.weakened = j.at("weakened").get<bool>();
      if (j.contains("skipped")) r.skipped = j["skipped"].get<std::string>();
      if (!j.at("lhs").is_null()) r.lhs = parse_quantity(j["lhs"].get<std::string>());
      if (!j.at("rhs").is_null()) r.rhs = parse_quantity(j["rhs"].get<std::string>());
      if (!j.at("ratio").is_null()) r.ratio = j["ratio"].get<double>();
      if (!j.at("pass").is_null()) r.pass = j["pass"].get<bool>();
      if (!j.at("elapsed_ms").is_null()) r.elapsed_ms = j["elapsed_ms"].get<double>();
      out.push_back(std::move(r));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_csv_summary(std::ostream& out, const std::vector<InequalityRecord>& records) {
  struct Group {
    SpecKind kind = SpecKind::ratio;
    std::size_t count = 0, skipped = 0, failed = 0;
    std::vector<double> ratios;
  };
  std::map<std::pair<std::string, std::string>, Group> groups;
  for (const auto& r : records) {
    auto& g = groups[{r.spec, r.instance.family}];
    g.kind = r.kind;
    if (!r.skipped.empty()) {
      ++g.skipped;
      continue;
    }
    ++g.count;
    if (r.pass && !*r.pass) ++g.failed;
    if (r.ratio) g.ratios.push_back(*r.ratio);
  }
  out << "spec,family,kind,count,skipped,failed,min_ratio,median_ratio,max_ratio\n";
  std::ostringstream num;
  num << std::setprecision(10);
  for (auto& [key, g] : groups) {
    out << key.first << ',' << key.second << ',' << to_string(g.kind) << ',' << g.count << ',' << g.skipped << ','
        << g.failed;
    if (g.ratios.empty()) {
      out << ",,,\n";
      continue;
    }
    std::sort(g.ratios.begin(), g.ratios.end());
    const std::size_t m = g.ratios.size();
    const double median = m % 2 ? g.ratios[m / 2] : (g.ratios[m / 2 - 1] + g.ratios[m / 2]) / 2;
    num.str("");
    num << ',' << g.ratios.front() << ',' << median << ',' << g.ratios.back();
    out << num.str() << '\n';
  }
}

}  // namespace sumprod
