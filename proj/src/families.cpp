#include "sumprod/families.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "sumprod/energy.hpp"
#include "sumprod/errors.hpp"
#include "sumprod/setcore.hpp"

namespace sumprod {

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorCode::InvalidParameter, "empty draw range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(engine_());
  const std::uint64_t width = span + 1;
  // Reject the lowest 2^64 mod width outputs so every residue is equally likely.
  const std::uint64_t reject_below = (0 - width) % width;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v < reject_below);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + v % width);
}

Rng Rng::split(std::uint64_t stream) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return Rng((static_cast<std::uint64_t>(words[1]) << 32) | words[0]);
}

std::string Rng::state() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

namespace {

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": expected an unsigned integer, got '" +
                                           std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split_colon(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

constexpr std::string_view kSeedPrefix = "seed=";
constexpr std::string_view kSizePrefix = "n=";

}  // namespace

std::string FamilySpec::family_id() const {
  switch (kind) {
    case FamilyKind::interval: return "interval";
    case FamilyKind::geometric: return "geometric:" + ratio.to_string();
    case FamilyKind::random_subset: return "random:" + std::to_string(modulus);
    case FamilyKind::convex_squares: return "convex-squares";
    case FamilyKind::ap_plus_ap: return "ap-plus-ap";
    case FamilyKind::perturbed_ap: return "perturbed-ap:" + std::to_string(noise);
    case FamilyKind::custom_file: return "custom-file:" + path;
  }
  return "?";
}

std::string FamilySpec::to_string() const {
  std::string s = family_id();
  if (n != 0) s += (kind == FamilyKind::custom_file ? ":n=" : ":") + std::to_string(n);
  if (seed_given) s += ":seed=" + std::to_string(seed);
  return s;
}

FamilySpec parse_family(std::string_view text) {
  FamilySpec spec;
  std::vector<std::string_view> parts;
  if (text.starts_with("custom-file:")) {
    // Paths may contain ':'; only recognised key=value suffixes are split off.
    std::string_view rest = text.substr(12);
    spec.kind = FamilyKind::custom_file;
    while (true) {
      const auto pos = rest.rfind(':');
      if (pos == std::string_view::npos) break;
      const auto tail = rest.substr(pos + 1);
      if (tail.starts_with(kSeedPrefix)) {
        spec.seed = parse_uint(tail.substr(kSeedPrefix.size()), "seed");
        spec.seed_given = true;
      } else if (tail.starts_with(kSizePrefix)) {
        spec.n = parse_uint(tail.substr(kSizePrefix.size()), "size");
      } else {
        break;
      }
      rest = rest.substr(0, pos);
    }
    if (rest.empty()) throw Error(ErrorCode::ParseError, "custom-file needs a path");
    spec.path = std::string(rest);
    return spec;
  }

  parts = split_colon(text);
  if (!parts.empty() && parts.back().starts_with(kSeedPrefix)) {
    spec.seed = parse_uint(parts.back().substr(kSeedPrefix.size()), "seed");
    spec.seed_given = true;
    parts.pop_back();
  }
  if (parts.empty() || parts.front().empty()) throw Error(ErrorCode::ParseError, "empty family string");
  const std::string_view name = parts.front();
  std::size_t params = 0;
  if (name == "interval") {
    spec.kind = FamilyKind::interval;
  } else if (name == "convex-squares") {
    spec.kind = FamilyKind::convex_squares;
  } else if (name == "ap-plus-ap") {
    spec.kind = FamilyKind::ap_plus_ap;
  } else if (name == "geometric") {
    spec.kind = FamilyKind::geometric;
    params = 1;
  } else if (name == "random") {
    spec.kind = FamilyKind::random_subset;
    params = 1;
  } else if (name == "perturbed-ap") {
    spec.kind = FamilyKind::perturbed_ap;
    params = 1;
  } else {
    throw Error(ErrorCode::ParseError, "unknown family '" + std::string(name) + "'");
  }
  if (parts.size() < 1 + params || parts.size() > 2 + params) {
    throw Error(ErrorCode::ParseError, "wrong number of fields in '" + std::string(text) + "'");
  }
  if (params == 1) {
    switch (spec.kind) {
      case FamilyKind::geometric: spec.ratio = Rational::parse(parts[1]); break;
      case FamilyKind::random_subset: spec.modulus = parse_uint(parts[1], "random modulus"); break;
      default: spec.noise = parse_uint(parts[1], "noise"); break;
    }
  }
  if (parts.size() == 2 + params) spec.n = parse_uint(parts[1 + params], "size");
  return spec;
}

FamilySpec with_size(FamilySpec spec, std::size_t n) {
  spec.n = n;
  return spec;
}

FamilySpec with_seed(FamilySpec spec, std::uint64_t seed) {
  spec.seed = seed;
  spec.seed_given = true;
  return spec;
}

GroundSet generate(const FamilySpec& spec) {
  const std::size_t n = spec.n;
  if (n == 0 && spec.kind != FamilyKind::custom_file) {
    throw Error(ErrorCode::InvalidParameter, "family size must be at least 1");
  }
  std::vector<Rational> out;
  out.reserve(n);
  switch (spec.kind) {
    case FamilyKind::interval:
      for (std::size_t i = 1; i <= n; ++i) out.emplace_back(i);
      break;
    case FamilyKind::geometric: {
      if (spec.ratio <= Rational(1)) throw Error(ErrorCode::InvalidParameter, "geometric ratio must exceed 1");
      Rational x(1);
      for (std::size_t i = 0; i < n; ++i, x *= spec.ratio) out.push_back(x);
      break;
    }
    case FamilyKind::random_subset: {
      if (spec.modulus < n) throw Error(ErrorCode::InvalidParameter, "random family needs M >= n");
      if (spec.modulus > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        throw Error(ErrorCode::InvalidParameter, "random modulus too large");
      }
      Rng rng(spec.seed);
      std::set<std::int64_t> seen;
      while (seen.size() < n) seen.insert(rng.uniform(1, static_cast<std::int64_t>(spec.modulus)));
      for (const auto v : seen) out.emplace_back(v);
      break;
    }
    case FamilyKind::convex_squares:
      for (std::size_t i = 1; i <= n; ++i) out.emplace_back(i * i);
      break;
    case FamilyKind::ap_plus_ap: {
      auto side = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
      while (side * side < n) ++side;
      std::vector<std::uint64_t> all;
      for (std::uint64_t y = 0; y < side; ++y)
        for (std::uint64_t x = 0; x < side; ++x) all.push_back(1 + x + y * (2 * side + 1));
      std::sort(all.begin(), all.end());
      for (std::size_t i = 0; i < n; ++i) out.emplace_back(all[i]);
      break;
    }
    case FamilyKind::perturbed_ap: {
      if (spec.noise > (1u << 30)) throw Error(ErrorCode::InvalidParameter, "noise too large");
      Rng rng(spec.seed);
      const auto noise = static_cast<std::int64_t>(spec.noise);
      for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(1 + static_cast<std::int64_t>(i) * (noise + 1) + rng.uniform(0, noise));
      }
      break;
    }
    case FamilyKind::custom_file: {
      const GroundSet file = read_set_file(spec.path).set;
      if (n == 0) return file;
      if (n > file.size()) throw Error(ErrorCode::InvalidParameter, "custom file has fewer than n elements");
      out.assign(file.begin(), file.begin() + static_cast<std::ptrdiff_t>(n));
      break;
    }
  }
  return GroundSet(std::move(out));
}

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::min_pinned: return "min-pinned";
    case Objective::min_aaplus: return "min-aaplus";
    case Objective::min_aaminus: return "min-aaminus";
    case Objective::max_energy_ratio: return "max-energy-ratio";
  }
  return "?";
}

Objective parse_objective(std::string_view text) {
  for (const auto o : {Objective::min_pinned, Objective::min_aaplus, Objective::min_aaminus,
                       Objective::max_energy_ratio}) {
    if (text == to_string(o)) return o;
  }
  throw Error(ErrorCode::ParseError, "unknown objective '" + std::string(text) + "'");
}

ObjectiveValue evaluate(Objective o, const GroundSet& a) {
  const double n15 = std::pow(static_cast<double>(a.size()), 1.5);
  std::uint64_t card = 0;
  switch (o) {
    case Objective::min_pinned: card = best_pinned_product(a, Sign::plus).cardinality; break;
    case Objective::min_aaplus: card = composite_expander(a, Inner::sum).cardinality; break;
    case Objective::min_aaminus: card = composite_expander(a, Inner::difference).cardinality; break;
    case Objective::max_energy_ratio: {
      const Rational e(multiplicative_energy(a, a));
      const Rational s(mpz_class(static_cast<unsigned long>(sumset(a, a).size())));
      const Rational ratio = e / (s * s);
      return {-ratio, ratio.to_double()};
    }
  }
  const Rational score(mpz_class(static_cast<unsigned long>(card)));
  return {score, static_cast<double>(card) / n15};
}

SearchState local_search(Objective objective, const FamilySpec& start, std::uint64_t steps,
                         std::uint64_t seed) {
  GroundSet current = generate(start);
  ObjectiveValue value = evaluate(objective, current);
  Rational biggest(0);
  for (const auto& x : current) biggest = std::max(biggest, x.abs());
  mpz_class ceil_max;
  mpz_cdiv_q(ceil_max.get_mpz_t(), biggest.num().get_mpz_t(), biggest.den().get_mpz_t());
  const mpz_class bound_z = std::max(mpz_class(1), mpz_class(ceil_max)) * 4;
  if (!bound_z.fits_slong_p()) throw Error(ErrorCode::InvalidParameter, "start set too large for the move pool");
  const auto bound = static_cast<std::int64_t>(bound_z.get_si());

  Rng rng = Rng(seed).split(0);
  SearchState state{current, objective, value, 0, seed, "", start.to_string(), {}};
  constexpr int kMaxDraws = 64;
  for (std::uint64_t step = 1; step <= steps; ++step) {
    SearchStep rec;
    rec.step = step;
    const auto idx = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(current.size()) - 1));
    rec.removed = current[idx];
    bool found = false;
    for (int draw = 0; draw < kMaxDraws && !found; ++draw) {
      const auto p = rng.uniform(-bound, bound);
      const auto q = rng.uniform(1, bound);
      if (p == 0) continue;
      rec.added = Rational(p, q);
      found = !current.contains(rec.added);
    }
    if (found) {
      std::vector<Rational> next(current.begin(), current.end());
      next[idx] = rec.added;
      GroundSet candidate(std::move(next));
      const ObjectiveValue v = evaluate(objective, candidate);
      if (v.score <= value.score) {
        current = std::move(candidate);
        value = v;
        rec.accepted = true;
      }
    }
    rec.value = value.display;
    state.trace.push_back(std::move(rec));
  }
  state.current = current;
  state.value = value;
  state.steps = steps;
  state.rng_state = rng.state();
  return state;
}

}  // namespace sumprod
