#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "sumprod/enclosure.hpp"
#include "sumprod/families.hpp"
#include "sumprod/ground_set.hpp"
#include "sumprod/refine.hpp"

namespace sumprod {

/// exact: constant-free inequality, must hold. identity: two independent
/// counts of the same number, must agree. ratio: implicit-constant bound,
/// reported as lhs/rhs. growth: asymptotic bound monitored across sizes.
enum class SpecKind { exact, identity, ratio, growth };
std::string_view to_string(SpecKind k);

/// A value that is either an exact rational or only known to lie in an enclosure.
struct Quantity {
  std::optional<Rational> exact;
  Enclosure approx;

  static Quantity of(const Rational& v);
  static Quantity of(const mpz_class& v);
  static Quantity of(std::uint64_t v);
  static Quantity of(Enclosure e);

  /// "p/q" when exact, otherwise the midpoint to 20 significant digits.
  std::string to_string() const;
  double to_double() const { return approx.mid(); }
};

struct CheckParams {
  std::optional<GroundSet> b;      // second set; defaults to A
  std::optional<Rational> alpha;   // shift in A(A + α); defaults to 1
  std::optional<Rational> pin;     // pinned element; defaults to the best one
  Rational tau{2};                 // level-set threshold
};

class EvalContext;

struct InequalitySpec {
  std::string id;
  SpecKind kind;
  Relation relation;       // the claimed direction: lhs relation rhs
  std::string statement;   // the inequality as evaluated
  std::string log_factor;  // log powers on the right-hand side, base 2
  std::size_t min_size = 1;
  bool needs_nonzero = false;
  bool needs_positive = false;
  bool weakened = false;   // d_* replaced by a witness upper bound W
  std::function<std::pair<Quantity, Quantity>(EvalContext&)> evaluate;
};

/// Every registered spec, sorted by id.
const std::vector<InequalitySpec>& registry();
const InequalitySpec* find_spec(std::string_view id);
/// Specs whose id matches any of the comma-separated shell globs.
std::vector<const InequalitySpec*> select_specs(std::string_view globs);

struct InstanceInfo {
  std::string family = "custom";
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

struct InequalityRecord {
  std::string spec;
  SpecKind kind = SpecKind::ratio;
  Relation relation = Relation::ge;
  InstanceInfo instance;
  Quantity lhs;
  Quantity rhs;
  std::optional<double> ratio;   // lhs / rhs; empty when rhs = 0
  std::optional<bool> pass;      // exact and identity kinds only
  bool weakened = false;
  std::optional<double> elapsed_ms;
  std::string skipped;           // non-empty: why the instance was not evaluated
};

/// Evaluates one spec; throws PreconditionViolated when the instance does not
/// meet the spec's requirements. Never throws on a failed comparison.
InequalityRecord evaluate(const InequalitySpec& spec, const GroundSet& a, const CheckParams& params = {},
                          const InstanceInfo& info = {});

/// evaluate, then ExactInequalityViolated if an exact or identity record fails.
InequalityRecord check(const InequalitySpec& spec, const GroundSet& a, const CheckParams& params = {},
                       const InstanceInfo& info = {});

/// Every exact and identity spec on (A, B). Throws ExactInequalityViolated.
std::vector<InequalityRecord> exact_suite(const GroundSet& a, const GroundSet& b);

/// The exponent e with max_K min(K^q n^p, n^r / K^s) = n^e, that is
/// e = p + q (r - p) / (q + s). Throws NonpositiveDenominator when q + s <= 0.
Rational crossover(std::pair<Rational, Rational> pinned, std::pair<Rational, Rational> alt);

struct ExponentFit {
  std::string family;
  std::string quantity;
  std::uint64_t seed = 0;
  std::vector<std::size_t> sizes;
  std::vector<double> values;
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root mean square of the log2 residuals
};

/// Names accepted by exponent_fit and measure_quantity.
const std::vector<std::string>& fit_quantities();
/// log2 of a named quantity on A. Throws InvalidParameter for unknown names.
double log2_quantity(std::string_view quantity, const GroundSet& a);

/// Least squares of log2 quantity against log2 |A|. Needs >= 4 strictly
/// increasing sizes (InvalidParameter); throws BudgetExceeded when a size takes
/// longer than budget_ms.
ExponentFit exponent_fit(const FamilySpec& family, const std::vector<std::size_t>& sizes,
                         std::string_view quantity, std::uint64_t seed,
                         std::optional<double> budget_ms = std::nullopt);

struct SuiteConfig {
  std::string specs = "*";
  std::vector<FamilySpec> families;
  std::vector<std::size_t> sizes;    // empty: each family's own size
  std::vector<std::uint64_t> seeds;  // empty: each family's own seed
  std::vector<std::string> fits;     // quantities to fit per family
  std::optional<double> budget_ms;
  bool timings = false;              // emit elapsed_ms (breaks byte-identical output)
  CheckParams params;
};

struct SuiteFailure {
  InequalityRecord record;
  std::string reproduce;  // command line that re-runs the failing instance
};

struct SuiteReport {
  std::vector<InequalityRecord> records;  // sorted by (spec, family, n, seed)
  std::vector<ExponentFit> fits;
  std::optional<SuiteFailure> failure;
};

/// Runs every (spec, family, size, seed) instance, concurrently across
/// instances. Families that ignore the seed are run once, with the first seed.
/// Instances below a spec's minimum size or outside its preconditions become
/// skipped records.
SuiteReport run_suite(const SuiteConfig& config);

std::string to_json_line(const InequalityRecord& r);
void write_jsonl(std::ostream& out, const std::vector<InequalityRecord>& records);
/// spec,family,kind,count,skipped,failed,min_ratio,median_ratio,max_ratio
void write_csv_summary(std::ostream& out, const std::vector<InequalityRecord>& records);
/// Parses lines written by write_jsonl (for report re-aggregation).
std::vector<InequalityRecord> read_jsonl(std::istream& in);

}  // namespace sumprod
