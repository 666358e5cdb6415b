#include "sumprod/refine.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "sumprod/enclosure.hpp"
#include "sumprod/energy.hpp"
#include "sumprod/errors.hpp"
#include "sumprod/setcore.hpp"

namespace sumprod {
namespace {

using Json = nlohmann::ordered_json;

Rational from_count(std::uint64_t v) { return Rational(mpz_class(static_cast<unsigned long>(v))); }
Rational from_mpz(const mpz_class& v) { return Rational(v); }

Rational pow2(long j) {
  const mpz_class p = mpz_class(1) << static_cast<mp_bitcnt_t>(j >= 0 ? j : -j);
  return j >= 0 ? Rational(p) : Rational(mpz_class(1), p);
}

// floor(log2 x) for x > 0.
long floor_log2(const Rational& x) {
  const long j = static_cast<long>(mpz_sizeinbase(x.num().get_mpz_t(), 2)) -
                 static_cast<long>(mpz_sizeinbase(x.den().get_mpz_t(), 2));
  // 2^(j-1) < x < 2^(j+1); settle which side of 2^j it falls on.
  return x >= pow2(j) ? j : j - 1;
}

Rational upper_rational(const Enclosure& e) { return e.hi().to_rational(); }

// E / (2 (log2(2K) + 1)), rounded up.
Rational class_mass_bound(const mpz_class& energy, const Rational& k) {
  const Enclosure log_term = log2(Enclosure::exact(Rational(2) * k)) + Enclosure::exact(Rational(1));
  return upper_rational(Enclosure::exact(energy) / (Enclosure::exact(Rational(2)) * log_term));
}

// Δ|P| / (2 (log2|A| + 1)), rounded up.
Rational level_mass_bound(const Rational& delta, std::size_t p_size, std::size_t n) {
  const Enclosure log_term =
      log2(Enclosure::exact(from_count(n))) + Enclosure::exact(Rational(1));
  return upper_rational(Enclosure::exact(delta * from_count(p_size)) /
                        (Enclosure::exact(Rational(2)) * log_term));
}

Assertion make_assertion(std::string name, Rational lhs, Relation rel, Rational rhs) {
  const bool ok = holds(lhs, rel, rhs);
  return Assertion{std::move(name), std::move(lhs), rel, std::move(rhs), ok};
}

void require_refinable(const GroundSet& a) {
  if (a.contains_zero()) throw Error(ErrorCode::ZeroElement, "refinement needs 0 outside A");
  if (a.size() < 2) throw Error(ErrorCode::TooSmall, "refinement needs |A| >= 2");
}

struct RatioClass {
  std::vector<Rational> members;
  std::vector<std::uint64_t> counts;
  Rational delta;
  std::uint64_t mass = 0;  // Σ r²
};

// Groups histogram entries with count >= tau0 by key(count); the class Δ is
// delta_of(key).
template <class KeyFn, class DeltaFn>
RatioClass best_class(const RepHistogram& h, const Rational& tau0, KeyFn key_of, DeltaFn delta_of) {
  std::map<long, RatioClass> classes;
  for (const auto& e : h.entries()) {
    const Rational r = from_count(e.count);
    if (r < tau0) continue;
    auto& c = classes[key_of(r)];
    c.members.push_back(e.value);
    c.counts.push_back(e.count);
    c.mass += e.count * e.count;
  }
  RatioClass best;
  bool have = false;
  for (auto& [key, c] : classes) {
    c.delta = delta_of(key);
    // Keys ascend with Δ, so >= hands ties to the larger Δ.
    if (!have || c.mass >= best.mass) {
      best = c;
      have = true;
    }
  }
  return best;
}

struct StageOne {
  RepHistogram hist;
  RefinementCertificate cert;
};

StageOne stage_one(const GroundSet& a, Exec exec) {
  require_refinable(a);
  RepHistogram h = rep_histogram(a, a, RepKind::ratio, exec);
  const mpz_class energy = h.moment(2u);
  const std::size_t n = a.size();
  const Rational n_r = from_count(n);
  const Rational k = pow(n_r, 3) / from_mpz(energy);
  const Rational tau0 = from_mpz(energy) / (Rational(2) * n_r * n_r);
  const Rational mass_rhs = class_mass_bound(energy, k);

  RatioClass chosen = best_class(
      h, tau0, [](const Rational& r) { return floor_log2(r); },
      [&](long j) { return std::max(pow2(j), tau0); });
  if (from_count(chosen.mass) < mass_rhs) {
    chosen = best_class(
        h, tau0, [&](const Rational& r) { return floor_log2(r / tau0); },
        [&](long j) { return tau0 * pow2(j); });
  }

  RefinementCertificate cert{a, energy, k, GroundSet(chosen.members), chosen.delta, {}, {}, {}, {}};
  const auto [lo, hi] = std::minmax_element(chosen.counts.begin(), chosen.counts.end());
  cert.assertions.push_back(make_assertion("delta-floor", cert.delta, Relation::ge, tau0));
  cert.assertions.push_back(make_assertion("class-lower", from_count(*lo), Relation::ge, cert.delta));
  cert.assertions.push_back(
      make_assertion("class-upper", from_count(*hi), Relation::lt, Rational(2) * cert.delta));
  cert.assertions.push_back(make_assertion("class-mass", from_count(chosen.mass), Relation::ge, mass_rhs));
  return {std::move(h), std::move(cert)};
}

// #{y in ys : x / y in target}.
std::uint64_t count_quotients_in(std::span<const Rational> ys, const Rational& x, const GroundSet& target) {
  std::uint64_t c = 0;
  for (const auto& y : ys) {
    if (target.contains(x / y)) ++c;
  }
  return c;
}

Json rational_json(const Rational& r) {
  return Json{{"numerator", r.num().get_str()}, {"denominator", r.den().get_str()}};
}

Json set_json(const GroundSet& s) {
  Json arr = Json::array();
  for (const auto& x : s) arr.push_back(x.to_string());
  return arr;
}

Json witness_json(const DStarWitness& w) {
  return Json{{"t", rational_json(w.t)},
              {"Q", set_json(w.q)},
              {"R", set_json(w.r)},
              {"target", set_json(w.target)},
              {"value", rational_json(w.value)}};
}

}  // namespace

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
    case Relation::le: return "<=";
    case Relation::lt: return "<";
    case Relation::eq: return "==";
  }
  return "?";
}

bool holds(const Rational& lhs, Relation r, const Rational& rhs) {
  switch (r) {
    case Relation::ge: return lhs >= rhs;
    case Relation::gt: return lhs > rhs;
    case Relation::le: return lhs <= rhs;
    case Relation::lt: return lhs < rhs;
    case Relation::eq: return lhs == rhs;
  }
  return false;
}

bool RefinementCertificate::all_satisfied() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& x) { return x.satisfied; });
}

DStarWitness witness_value(const GroundSet& target, const GroundSet& q, const GroundSet& r,
                           const Rational& t) {
  if (t.sign() <= 0) throw Error(ErrorCode::InvalidWitness, "positive-t");
  if (q.contains_zero() || r.contains_zero()) throw Error(ErrorCode::InvalidWitness, "zero-free");
  if (std::max(q.size(), r.size()) < target.size()) throw Error(ErrorCode::InvalidWitness, "size");
  std::vector<std::uint64_t> counts(target.size());
  kernels::for_each_index(
      target.size(),
      [&](std::size_t i) { counts[i] = count_quotients_in(r.elements(), target[i], q); },
      kernels::default_exec());
  for (const auto c : counts) {
    if (from_count(c) < t) throw Error(ErrorCode::InvalidWitness, "pointwise-t");
  }
  const Rational qs = from_count(q.size());
  const Rational rs = from_count(r.size());
  const Rational value = qs * qs * rs * rs / (from_count(target.size()) * pow(t, 3));
  return DStarWitness{t, q, r, target, value};
}

std::vector<LabeledWitness> dstar_portfolio(const GroundSet& a) {
  if (a.contains_zero()) throw Error(ErrorCode::ZeroElement, "d_* witnesses need 0 outside A");
  std::vector<LabeledWitness> out;
  const GroundSet a_inv = inverse_set(a);
  out.push_back({"C=A", witness_value(a, product_set(a, a), a_inv, from_count(a.size()))});
  out.push_back({"C={1}", witness_value(a, a, GroundSet({Rational(1)}), Rational(1))});
  if (a.size() >= 2) {
    const RefinementCertificate stage = stage_one(a, kernels::default_exec()).cert;
    const GroundSet p_inv = inverse_set(stage.p);
    out.push_back({"C=P", witness_value(a, product_set(a, stage.p), p_inv, from_count(stage.p.size()))});
    std::uint64_t t = a.size();
    for (const auto& x : a) t = std::min(t, count_quotients_in(p_inv.elements(), x, a));
    if (t > 0) out.push_back({"pigeonhole", witness_value(a, a, p_inv, from_count(t))});
  }
  return out;
}

DStarWitness dstar_upper_bound(const GroundSet& a) {
  auto all = dstar_portfolio(a);
  std::size_t best = 0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].witness.value < all[best].witness.value) best = i;
  }
  return std::move(all[best].witness);
}

RefinementCertificate popular_ratio_class(const GroundSet& a, Exec exec) {
  return stage_one(a, exec).cert;
}

RefinementCertificate refine_energy_subset(const GroundSet& a, Exec exec) {
  RefinementCertificate cert = stage_one(a, exec).cert;
  const std::size_t n = a.size();
  const Rational p_size = from_count(cert.p.size());
  const Rational threshold = cert.delta * p_size / (Rational(4) * from_count(n));

  // |P ∩ xA^-1| = #{y in A : x / y in P}.
  std::vector<std::uint64_t> hits(n);
  kernels::for_each_index(
      n, [&](std::size_t i) { hits[i] = count_quotients_in(a.elements(), a[i], cert.p); }, exec);
  std::vector<Rational> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (from_count(hits[i]) >= threshold) kept.push_back(a[i]);
  }
  if (kept.empty()) {
    // Unreachable when the stage-one assertions hold; reported, not hidden.
    cert.assertions.push_back(make_assertion("subset-nonempty", Rational(0), Relation::gt, Rational(0)));
    return cert;
  }
  const GroundSet a_prime(kept);
  // Σ_{x in P} |A' ∩ xA'| = Σ_x #{y in A' : y / x in A'}.
  std::uint64_t overlap = 0;
  for (const auto& x : cert.p) {
    for (const auto& y : a_prime) overlap += a_prime.contains(y / x) ? 1 : 0;
  }
  const mpz_class sub_energy = multiplicative_energy(a_prime, a_prime, exec);

  cert.assertions.push_back(
      make_assertion("subset-overlap", from_count(overlap), Relation::ge, cert.delta * p_size / Rational(2)));
  cert.assertions.push_back(make_assertion("subset-energy", from_mpz(sub_energy), Relation::ge,
                                           cert.delta * cert.delta * p_size / Rational(4)));
  cert.a_prime = a_prime;
  cert.t = threshold;
  cert.witness = witness_value(a_prime, cert.p, a, threshold);
  return cert;
}

RefinementCertificate double_pigeonhole(const GroundSet& a, Exec exec) {
  RefinementCertificate cert = stage_one(a, exec).cert;
  const std::size_t n = a.size();
  const GroundSet p_inv = inverse_set(cert.p);

  // c(a) = |A ∩ aP| = #{r in P^-1 : a / r in A}.
  std::vector<std::uint64_t> c(n);
  kernels::for_each_index(
      n, [&](std::size_t i) { c[i] = count_quotients_in(p_inv.elements(), a[i], a); }, exec);

  std::map<long, std::pair<std::uint64_t, std::vector<std::size_t>>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (c[i] == 0) continue;
    auto& cls = classes[floor_log2(from_count(c[i]))];
    cls.first += c[i];
    cls.second.push_back(i);
  }
  long best_j = 0;
  const std::vector<std::size_t>* members = nullptr;
  std::uint64_t best_mass = 0;
  for (const auto& [j, cls] : classes) {
    if (members == nullptr || cls.first >= best_mass) {
      best_j = j;
      best_mass = cls.first;
      members = &cls.second;
    }
  }
  if (members == nullptr) {
    cert.assertions.push_back(make_assertion("subset-nonempty", Rational(0), Relation::gt, Rational(0)));
    return cert;
  }
  const Rational t = pow2(best_j);
  std::vector<Rational> kept;
  std::uint64_t lo = c[members->front()], hi = lo;
  for (const auto i : *members) {
    kept.push_back(a[i]);
    lo = std::min(lo, c[i]);
    hi = std::max(hi, c[i]);
  }
  const GroundSet a_prime(kept);
  cert.assertions.push_back(make_assertion("level-lower", from_count(lo), Relation::ge, t));
  cert.assertions.push_back(make_assertion("level-upper", from_count(hi), Relation::lt, Rational(2) * t));
  cert.assertions.push_back(make_assertion("subset-mass", from_count(a_prime.size()) * t, Relation::ge,
                                           level_mass_bound(cert.delta, cert.p.size(), n)));
  cert.a_prime = a_prime;
  cert.t = t;
  cert.witness = witness_value(a_prime, a, p_inv, t);
  return cert;
}

// ---------------------------------------------------------------------------
// Independent re-verification. Everything below recounts with std::map over
// plain rationals and shares nothing with the lattice kernels above.

namespace {

std::map<Rational, std::uint64_t> naive_ratio_counts(std::span<const Rational> a) {
  std::map<Rational, std::uint64_t> m;
  for (const auto& x : a)
    for (const auto& y : a) ++m[x / y];
  return m;
}

mpz_class naive_energy(const std::map<Rational, std::uint64_t>& m) {
  mpz_class e = 0;
  for (const auto& [v, c] : m) e += mpz_class(static_cast<unsigned long>(c)) * c;
  return e;
}

std::uint64_t naive_intersection(std::span<const Rational> a, const Rational& x,
                                 std::span<const Rational> target) {
  // #{y in a : x / y in target}
  std::uint64_t c = 0;
  for (const auto& y : a) {
    const Rational q = x / y;
    c += static_cast<std::uint64_t>(std::count(target.begin(), target.end(), q));
  }
  return c;
}

class Checker {
 public:
  explicit Checker(const RefinementCertificate& cert) : cert_(cert) {}

  void expect(const std::string& name, const Rational& lhs, Relation rel, const Rational& rhs) {
    const auto it = std::find_if(cert_.assertions.begin(), cert_.assertions.end(),
                                 [&](const Assertion& x) { return x.name == name; });
    if (it == cert_.assertions.end()) {
      problems_.push_back(name + ": missing");
      return;
    }
    if (it->lhs != lhs) problems_.push_back(name + ": lhs " + it->lhs.to_string() + " != " + lhs.to_string());
    if (it->rhs != rhs) problems_.push_back(name + ": rhs " + it->rhs.to_string() + " != " + rhs.to_string());
    if (it->relation != rel) problems_.push_back(name + ": relation differs");
    if (!holds(lhs, rel, rhs)) problems_.push_back(name + ": does not hold");
    if (!it->satisfied) problems_.push_back(name + ": flagged unsatisfied");
  }

  void fail(std::string what) { problems_.push_back(std::move(what)); }
  std::vector<std::string>& problems() { return problems_; }

 private:
  const RefinementCertificate& cert_;
  std::vector<std::string> problems_;
};

bool has_assertion(const RefinementCertificate& cert, std::string_view name) {
  return std::any_of(cert.assertions.begin(), cert.assertions.end(),
                     [&](const Assertion& x) { return x.name == name; });
}

}  // namespace

std::vector<std::string> recheck(const DStarWitness& w) {
  std::vector<std::string> problems;
  if (w.t.sign() <= 0) problems.push_back("positive-t");
  for (const auto& x : w.q)
    if (x.is_zero()) problems.push_back("zero-free: 0 in Q");
  for (const auto& x : w.r)
    if (x.is_zero()) problems.push_back("zero-free: 0 in R");
  if (std::max(w.q.size(), w.r.size()) < w.target.size()) problems.push_back("size");
  for (const auto& a : w.target) {
    if (Rational(mpz_class(static_cast<unsigned long>(naive_intersection(w.r.elements(), a, w.q.elements())))) < w.t) {
      problems.push_back("pointwise-t at " + a.to_string());
    }
  }
  if (!problems.empty()) return problems;
  const Rational qs = Rational(mpz_class(static_cast<unsigned long>(w.q.size())));
  const Rational rs = Rational(mpz_class(static_cast<unsigned long>(w.r.size())));
  const Rational expected =
      qs * qs * rs * rs / (Rational(mpz_class(static_cast<unsigned long>(w.target.size()))) * pow(w.t, 3));
  if (expected != w.value) problems.push_back("value " + w.value.to_string() + " != " + expected.to_string());
  return problems;
}

std::vector<std::string> recheck(const RefinementCertificate& cert) {
  Checker check(cert);
  const auto& a = cert.a.elements();
  const auto ratios = naive_ratio_counts(a);
  const mpz_class energy = naive_energy(ratios);
  const Rational n_r = from_count(a.size());
  if (energy != cert.energy) check.fail("energy " + cert.energy.get_str() + " != " + energy.get_str());
  const Rational k = pow(n_r, 3) / from_mpz(energy);
  if (k != cert.k) check.fail("K differs");

  std::uint64_t lo = UINT64_MAX, hi = 0, mass = 0;
  for (const auto& x : cert.p) {
    const auto it = ratios.find(x);
    if (it == ratios.end()) {
      check.fail("P not inside the ratio support: " + x.to_string());
      continue;
    }
    lo = std::min(lo, it->second);
    hi = std::max(hi, it->second);
    mass += it->second * it->second;
  }
  for (const auto& x : cert.p) {
    if (!cert.p.contains(Rational(1) / x)) check.fail("P is not closed under inversion");
  }
  check.expect("delta-floor", cert.delta, Relation::ge, from_mpz(energy) / (Rational(2) * n_r * n_r));
  check.expect("class-lower", from_count(lo), Relation::ge, cert.delta);
  check.expect("class-upper", from_count(hi), Relation::lt, Rational(2) * cert.delta);
  check.expect("class-mass", from_count(mass), Relation::ge, class_mass_bound(energy, k));

  const bool refined = has_assertion(cert, "subset-overlap");
  const bool pigeonholed = has_assertion(cert, "level-lower");
  if (refined || pigeonholed) {
    if (!cert.a_prime || !cert.t || !cert.witness) {
      check.fail("second stage incomplete");
      return std::move(check.problems());
    }
    const auto& ap = cert.a_prime->elements();
    for (const auto& x : ap) {
      if (std::find(a.begin(), a.end(), x) == a.end()) check.fail("A' not inside A: " + x.to_string());
    }
    const Rational p_size = from_count(cert.p.size());
    if (refined) {
      const Rational threshold = cert.delta * p_size / (Rational(4) * n_r);
      if (*cert.t != threshold) check.fail("threshold differs");
      for (const auto& x : a) {
        const bool qualifies = from_count(naive_intersection(a, x, cert.p.elements())) >= threshold;
        const bool inside = std::find(ap.begin(), ap.end(), x) != ap.end();
        if (qualifies != inside) check.fail("A' membership wrong at " + x.to_string());
      }
      std::uint64_t overlap = 0;
      for (const auto& x : cert.p) {
        for (const auto& y : ap) overlap += static_cast<std::uint64_t>(std::count(ap.begin(), ap.end(), x * y));
      }
      check.expect("subset-overlap", from_count(overlap), Relation::ge, cert.delta * p_size / Rational(2));
      check.expect("subset-energy", from_mpz(naive_energy(naive_ratio_counts(ap))), Relation::ge,
                   cert.delta * cert.delta * p_size / Rational(4));
    } else {
      std::uint64_t clo = UINT64_MAX, chi = 0;
      for (const auto& x : ap) {
        std::uint64_t c = 0;
        for (const auto& p : cert.p) c += static_cast<std::uint64_t>(std::count(a.begin(), a.end(), x * p));
        clo = std::min(clo, c);
        chi = std::max(chi, c);
      }
      check.expect("level-lower", from_count(clo), Relation::ge, *cert.t);
      check.expect("level-upper", from_count(chi), Relation::lt, Rational(2) * *cert.t);
      check.expect("subset-mass", from_count(ap.size()) * *cert.t, Relation::ge,
                   level_mass_bound(cert.delta, cert.p.size(), a.size()));
    }
    if (!(cert.witness->target == *cert.a_prime)) check.fail("witness target is not A'");
    for (auto& p : recheck(*cert.witness)) check.fail("witness " + p);
  }
  return std::move(check.problems());
}

std::string to_json(const DStarWitness& w) { return witness_json(w).dump(2); }

std::string to_json(const RefinementCertificate& cert) {
  Json j;
  j["set"] = set_json(cert.a);
  j["energy"] = cert.energy.get_str();
  j["K"] = rational_json(cert.k);
  j["P"] = set_json(cert.p);
  j["delta"] = rational_json(cert.delta);
  if (cert.a_prime) j["A_prime"] = set_json(*cert.a_prime);
  if (cert.t) j["t"] = rational_json(*cert.t);
  if (cert.witness) j["witness"] = witness_json(*cert.witness);
  Json list = Json::array();
  for (const auto& x : cert.assertions) {
    list.push_back(Json{{"name", x.name},
                        {"lhs", rational_json(x.lhs)},
                        {"relation", std::string(to_string(x.relation))},
                        {"rhs", rational_json(x.rhs)},
                        {"satisfied", x.satisfied}});
  }
  j["assertions"] = std::move(list);
  j["all_satisfied"] = cert.all_satisfied();
  return j.dump(2);
}

std::uint64_t dilation_overlap(const GroundSet& a, const Rational& z) {
  if (z.is_zero()) throw Error(ErrorCode::ZeroDilation, "z must be nonzero");
  const RepHistogram h = rep_histogram(a, a, RepKind::ratio, Exec::serial);
  std::uint64_t f = 0;
  for (const auto& x : a) f += h.count(z * x);
  return f;
}

DilationChoice best_dilation(const GroundSet& a, DilationCandidates mode,
                             const std::vector<Rational>& custom, Exec exec) {
  if (a.contains_zero()) throw Error(ErrorCode::ZeroElement, "dilation search needs 0 outside A");
  std::vector<Rational> cands;
  switch (mode) {
    case DilationCandidates::inverse_elements: {
      const GroundSet inv = inverse_set(a);
      cands.assign(inv.begin(), inv.end());
      cands.push_back(Rational(1));
      break;
    }
    case DilationCandidates::ratio_times_inverse: {
      const GroundSet c = product_set(ratio_set(a, a, exec), inverse_set(a), exec);
      cands.assign(c.begin(), c.end());
      break;
    }
    case DilationCandidates::custom:
      if (custom.empty()) throw Error(ErrorCode::InvalidParameter, "empty custom candidate list");
      for (const auto& z : custom) {
        if (z.is_zero()) throw Error(ErrorCode::ZeroDilation, "candidate z = 0");
      }
      cands = custom;
      break;
  }
  const GroundSet zs(std::move(cands));
  const RepHistogram h = rep_histogram(a, a, RepKind::ratio, exec);
  std::vector<std::uint64_t> f(zs.size());
  kernels::for_each_index(
      zs.size(),
      [&](std::size_t i) {
        std::uint64_t s = 0;
        for (const auto& x : a) s += h.count(zs[i] * x);
        f[i] = s;
      },
      exec);
  // zs ascends, so the first maximum is the smallest maximiser.
  const std::size_t best = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());

  DilationChoice out;
  out.z = zs[best];
  out.overlap = f[best];
  out.energy = h.moment(2u);
  if (a.size() >= 2) {
    const Enclosure n = Enclosure::exact(from_count(a.size()));
    const Enclosure bound = Enclosure::exact(out.energy) / (n * log2(n));
    const Enclosure fz = Enclosure::exact(from_count(out.overlap));
    out.bound_satisfied = certainly_le(bound, fz);
    out.bound_ratio = (fz / bound).mid();
  }
  return out;
}

}  // namespace sumprod
