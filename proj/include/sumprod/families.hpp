#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sumprod/ground_set.hpp"
#include "sumprod/rational.hpp"

namespace sumprod {

/// Seedable generator: std::mt19937_64 with unbiased bounded draws by
/// rejection. Streams split off by mixing (seed, stream id) through seed_seq,
/// so a result replicates anywhere the same two algorithms are available.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/rejection";

  explicit Rng(std::uint64_t seed);

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// Independent generator for sub-stream `stream`.
  Rng split(std::uint64_t stream) const;

  std::uint64_t seed() const noexcept { return seed_; }
  /// Engine state in the standard textual form.
  std::string state() const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

enum class FamilyKind { interval, geometric, random_subset, convex_squares, ap_plus_ap, perturbed_ap, custom_file };

struct FamilySpec {
  FamilyKind kind = FamilyKind::interval;
  std::size_t n = 0;          // 0: not given; a sweep supplies it
  std::uint64_t seed = 0;
  bool seed_given = false;
  Rational ratio{2};          // geometric
  std::uint64_t modulus = 0;  // random: draws from {1..M}
  std::uint64_t noise = 0;    // perturbed-ap
  std::string path;           // custom-file

  /// Family name without size or seed, e.g. "geometric:2" or "random:1000".
  std::string family_id() const;
  /// Full string that parse_family maps back to this spec.
  std::string to_string() const;
};

/// Accepts interval[:n], geometric:q[:n], random:M[:n], convex-squares[:n],
/// ap-plus-ap[:n], perturbed-ap:noise[:n] and custom-file:path, each optionally
/// followed by ":seed=S". Throws ParseError.
FamilySpec parse_family(std::string_view text);

FamilySpec with_size(FamilySpec spec, std::size_t n);
FamilySpec with_seed(FamilySpec spec, std::uint64_t seed);

/// Exactly n elements, a pure function of the spec:
///   interval       {1..n}
///   geometric      {q^0..q^(n-1)}, q > 1
///   random         n distinct uniform draws from {1..M}, M >= n
///   convex-squares {1^2..n^2}
///   ap-plus-ap     the n smallest of {1 + x + (2s+1)y : 0 <= x, y < s}, s = ceil(sqrt n)
///   perturbed-ap   {1 + i(noise+1) + u_i}, u_i uniform in [0, noise]
///   custom-file    the file's set; with n given, its n smallest elements
/// Throws InvalidParameter.
GroundSet generate(const FamilySpec& spec);

enum class Objective { min_pinned, min_aaplus, min_aaminus, max_energy_ratio };
std::string_view to_string(Objective o);
/// "min-pinned", "min-aaplus", "min-aaminus", "max-energy-ratio". Throws ParseError.
Objective parse_objective(std::string_view text);

/// Score: smaller is better, exact. Display: the normalised value
/// (max_a |A(A+a)|, |A(A+A)| or |A(A-A)| over |A|^{3/2}; E×/|A+A|^2).
struct ObjectiveValue {
  Rational score;
  double display = 0;
};

ObjectiveValue evaluate(Objective o, const GroundSet& a);

struct SearchStep {
  std::uint64_t step = 0;
  Rational removed;
  Rational added;
  bool accepted = false;
  double value = 0;  // display value after the step
};

struct SearchState {
  GroundSet current;
  Objective objective;
  ObjectiveValue value;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::string rng_state;
  std::string start;  // family string of the start set
  std::vector<SearchStep> trace;
};

/// Hill climb by single-element replacement. Candidates are p/q with
/// |p|, q <= 4 * ceil(max |a|) over the start set, never 0 and never a current
/// member; a move is kept when the score does not increase.
SearchState local_search(Objective objective, const FamilySpec& start, std::uint64_t steps,
                         std::uint64_t seed);

}  // namespace sumprod
