// sumprodlab: command-line front end.
//
// Exit codes: 0 success, 1 exact inequality violated (verify), 2 parse error,
// 3 precondition violated or any other library error.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sumprod/energy.hpp"
#include "sumprod/errors.hpp"
#include "sumprod/families.hpp"
#include "sumprod/geometry.hpp"
#include "sumprod/refine.hpp"
#include "sumprod/setcore.hpp"
#include "sumprod/verify.hpp"

namespace {

using namespace sumprod;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;

// "8,16,32", "1..20" or a mix such as "1..4,10".
template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string piece;
  const auto number = [&](const std::string& s) -> T {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-') {
      throw Error(ErrorCode::ParseError, what + ": '" + s + "' is not a non-negative integer");
    }
    return static_cast<T>(v);
  };
  while (std::getline(ss, piece, ',')) {
    if (piece.empty()) continue;
    const auto dots = piece.find("..");
    if (dots == std::string::npos) {
      out.push_back(number(piece));
      continue;
    }
    const T lo = number(piece.substr(0, dots));
    const T hi = number(piece.substr(dots + 2));
    if (hi < lo) throw Error(ErrorCode::ParseError, what + ": empty range '" + piece + "'");
    for (T v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

std::optional<double> budget_from(double flag) {
  if (const char* env = std::getenv("SUMPRODLAB_BUDGET_MS")) {
    try {
      const double v = std::stod(env);
      if (v <= 0) throw Error(ErrorCode::ParseError, "SUMPRODLAB_BUDGET_MS must be positive");
      return v;
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::ParseError, "SUMPRODLAB_BUDGET_MS is not a number");
    }
  }
  if (flag < 0) throw Error(ErrorCode::ParseError, "--budget-ms must be positive");
  if (flag == 0) return std::nullopt;
  return flag;
}

Sign parse_sign(const std::string& s) {
  if (s == "plus" || s == "+") return Sign::plus;
  if (s == "minus" || s == "-") return Sign::minus;
  throw Error(ErrorCode::ParseError, "--sign must be plus or minus");
}

std::string set_text(const GroundSet& s) { return s.to_string(); }

Json set_json(const GroundSet& s) {
  Json arr = Json::array();
  for (const auto& x : s) arr.push_back(x.to_string());
  return arr;
}

struct ComputeOptions {
  std::string set_path;
  std::string family;
  std::string b_path;
  std::vector<std::string> quantities;
  std::string pin;
  std::string sign = "plus";
  std::string moment = "2";
  std::string tau = "2";
  std::string kind = "difference";
  std::string candidates = "inverse-elements";
  bool json = false;
};

struct Output {
  std::string text;
  Json json;
};

Output scalar(const std::string& v) { return {v, v}; }
Output scalar(std::uint64_t v) { return scalar(std::to_string(v)); }
Output scalar(const mpz_class& v) { return scalar(v.get_str()); }
Output set_output(const GroundSet& s) { return {set_text(s), set_json(s)}; }
Output json_output(const std::string& doc) { return {doc, Json::parse(doc)}; }

GroundSet load_input(const std::string& path, const std::string& family) {
  if (!path.empty() && !family.empty()) {
    throw Error(ErrorCode::ParseError, "give exactly one of --set and --family");
  }
  if (!path.empty()) return read_set_file(path).set;
  if (!family.empty()) return generate(parse_family(family));
  throw Error(ErrorCode::ParseError, "give exactly one of --set and --family");
}

Output compute_one(const std::string& name, const GroundSet& a, const GroundSet& b, const ComputeOptions& o) {
  const auto pin = [&] {
    if (o.pin.empty()) throw Error(ErrorCode::ParseError, name + " needs --pin");
    return Rational::parse(o.pin);
  };
  if (name == "size") return scalar(std::uint64_t{a.size()});
  if (name == "set") return set_output(a);
  if (name == "sumset") return set_output(sumset(a, b));
  if (name == "difference-set") return set_output(difference_set(a, b));
  if (name == "product-set") return set_output(product_set(a, b));
  if (name == "ratio-set") return set_output(ratio_set(a, b));
  if (name == "sumset-size") return scalar(std::uint64_t{sumset(a, b).size()});
  if (name == "difference-size") return scalar(std::uint64_t{difference_set(a, b).size()});
  if (name == "product-size") return scalar(std::uint64_t{product_set(a, b).size()});
  if (name == "ratio-size") return scalar(std::uint64_t{ratio_set(a, b).size()});
  if (name == "add-energy") return scalar(additive_energy(a, b));
  if (name == "mult-energy") return scalar(multiplicative_energy(a, b));
  if (name == "energy-moment") {
    const EnergyValue v = energy_moment(a, Rational::parse(o.moment));
    return v.exact ? scalar(v.value) : scalar(v.approx.to_string());
  }
  if (name == "pinned-product") return scalar(pinned_product(a, pin(), parse_sign(o.sign)).cardinality);
  if (name == "best-pinned") {
    const PinnedBest best = best_pinned_product(a, parse_sign(o.sign));
    return {"a = " + best.pin.to_string() + ", size " + std::to_string(best.cardinality),
            Json{{"pin", best.pin.to_string()}, {"cardinality", best.cardinality}}};
  }
  if (name == "aplus") return scalar(composite_expander(a, Inner::sum).cardinality);
  if (name == "aminus") return scalar(composite_expander(a, Inner::difference).cardinality);
  if (name == "five-var") return scalar(five_var_expander_size(a));
  if (name == "five-var-float") {
    const FloatEnumeration f = five_var_float_enumeration(a);
    std::ostringstream os;
    os << f.distinct << " (min separation " << f.min_separation << ", flagged " << f.flagged_pairs << ")";
    return {os.str(), Json{{"distinct", f.distinct},
                           {"min_separation", f.min_separation},
                           {"flagged_pairs", f.flagged_pairs},
                           {"ambiguous", f.ambiguous()}}};
  }
  if (name == "collinear") return scalar(grid_collinear_triples(a));
  if (name == "gk") return scalar(gk_distance_quadruples(a));
  if (name == "gk-literal") return scalar(gk_literal_count(a));
  if (name == "shifted-energy") return scalar(shifted_energy_sum(a, b, a, parse_sign(o.sign)));
  if (name == "level-set") {
    const Rational tau = Rational::parse(o.tau);
    if (tau < Rational(1)) throw Error(ErrorCode::InvalidParameter, "level-set needs --tau >= 1");
    const RepHistogram h = rep_histogram(a, b, RepKind::difference);
    std::uint64_t c = 0;
    for (const auto& e : h.entries()) c += Rational(e.count) >= tau ? 1 : 0;
    return scalar(c);
  }
  if (name == "rep-histogram") {
    const RepKind kind = o.kind == "ratio" ? RepKind::ratio : RepKind::difference;
    if (o.kind != "ratio" && o.kind != "difference") throw Error(ErrorCode::ParseError, "--kind must be difference or ratio");
    const RepHistogram h = rep_histogram(a, b, kind);
    std::ostringstream os;
    write_histogram_csv(os, h);
    Json arr = Json::array();
    for (const auto& e : h.entries()) arr.push_back(Json{{"value", e.value.to_string()}, {"count", e.count}});
    std::string text = os.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return {"\n" + text, arr};
  }
  if (name == "dstar") return json_output(to_json(dstar_upper_bound(a)));
  if (name == "popular-class") return json_output(to_json(popular_ratio_class(a)));
  if (name == "refine-subset") return json_output(to_json(refine_energy_subset(a)));
  if (name == "double-pigeonhole") return json_output(to_json(double_pigeonhole(a)));
  if (name == "best-dilation") {
    DilationCandidates mode = DilationCandidates::inverse_elements;
    if (o.candidates == "ratio-times-inverse") {
      mode = DilationCandidates::ratio_times_inverse;
    } else if (o.candidates != "inverse-elements") {
      throw Error(ErrorCode::ParseError, "--candidates must be inverse-elements or ratio-times-inverse");
    }
    const DilationChoice d = best_dilation(a, mode);
    Json j{{"z", d.z.to_string()}, {"overlap", d.overlap}, {"energy", d.energy.get_str()}};
    j["bound_satisfied"] = d.bound_satisfied ? Json(*d.bound_satisfied) : Json(nullptr);
    j["bound_ratio"] = d.bound_ratio ? Json(*d.bound_ratio) : Json(nullptr);
    return {"z = " + d.z.to_string() + ", overlap " + std::to_string(d.overlap), j};
  }
  throw Error(ErrorCode::ParseError, "unknown quantity '" + name + "'");
}

int cmd_compute(const ComputeOptions& o) {
  const GroundSet a = load_input(o.set_path, o.family);
  const GroundSet b = o.b_path.empty() ? a : read_set_file(o.b_path).set;
  if (o.quantities.empty()) throw Error(ErrorCode::ParseError, "compute needs --quantity");
  Json all = Json::object();
  for (const auto& name : o.quantities) {
    Output out = compute_one(name, a, b, o);
    if (o.json) {
      all[name] = std::move(out.json);
    } else {
      std::cout << name << ": " << out.text << '\n';
    }
  }
  if (o.json) std::cout << all.dump(2) << '\n';
  return kExitOk;
}

struct VerifyOptions {
  std::string specs = "*";
  std::vector<std::string> families;
  std::string set_path;
  std::string sizes;
  std::string seeds;
  std::string out_jsonl = "verify.jsonl";
  std::string out_csv = "verify.csv";
  std::string alpha;
  std::string pin;
  std::string tau = "2";
  double budget_ms = 0;
  bool timings = false;
};

int cmd_verify(const VerifyOptions& o) {
  SuiteConfig cfg;
  cfg.specs = o.specs;
  for (const auto& f : o.families) cfg.families.push_back(parse_family(f));
  if (!o.set_path.empty()) cfg.families.push_back(parse_family("custom-file:" + o.set_path));
  if (!o.sizes.empty()) cfg.sizes = parse_list<std::size_t>(o.sizes, "--sizes");
  if (!o.seeds.empty()) cfg.seeds = parse_list<std::uint64_t>(o.seeds, "--seeds");
  if (!o.alpha.empty()) cfg.params.alpha = Rational::parse(o.alpha);
  if (cfg.params.alpha && cfg.params.alpha->is_zero()) throw Error(ErrorCode::InvalidParameter, "--alpha must be nonzero");
  if (!o.pin.empty()) cfg.params.pin = Rational::parse(o.pin);
  cfg.params.tau = Rational::parse(o.tau);
  cfg.budget_ms = budget_from(o.budget_ms);
  cfg.timings = o.timings;
  if (cfg.families.empty() && !select_specs(cfg.specs).empty()) {
    throw Error(ErrorCode::ParseError, "verify needs --family or --set");
  }

  const SuiteReport report = run_suite(cfg);
  std::ofstream jsonl(o.out_jsonl, std::ios::binary);
  std::ofstream csv(o.out_csv, std::ios::binary);
  if (!jsonl || !csv) throw Error(ErrorCode::InvalidParameter, "cannot open report files for writing");
  write_jsonl(jsonl, report.records);
  write_csv_summary(csv, report.records);

  std::size_t skipped = 0;
  for (const auto& r : report.records) skipped += r.skipped.empty() ? 0 : 1;
  std::cout << report.records.size() << " records (" << skipped << " skipped) -> " << o.out_jsonl << ", "
            << o.out_csv << '\n';
  if (report.failure) {
    const auto& r = report.failure->record;
    std::cerr << "exact inequality violated: " << r.spec << " on " << r.instance.family << " n=" << r.instance.n
              << " seed=" << r.instance.seed << ": " << r.lhs.to_string() << ' ' << to_string(r.relation) << ' '
              << r.rhs.to_string() << '\n'
              << "reproduce: " << report.failure->reproduce << '\n';
    return kExitViolation;
  }
  return kExitOk;
}

struct ScanOptions {
  std::string family;
  std::vector<std::string> quantities;
  std::string sizes;
  std::uint64_t seed = 0;
  std::string out_csv = "scan.csv";
  std::string out_jsonl = "scan.jsonl";
  double budget_ms = 0;
};

int cmd_scan(const ScanOptions& o) {
  const FamilySpec fam = parse_family(o.family);
  const auto sizes = parse_list<std::size_t>(o.sizes, "--sizes");
  const auto budget = budget_from(o.budget_ms);
  std::ofstream csv(o.out_csv, std::ios::binary);
  std::ofstream jsonl(o.out_jsonl, std::ios::binary);
  if (!csv || !jsonl) throw Error(ErrorCode::InvalidParameter, "cannot open report files for writing");
  csv << "family,quantity,seed,n,value\n";
  std::cout << "quantity,slope,intercept,residual\n";
  csv << std::setprecision(17);
  for (const auto& q : o.quantities) {
    const ExponentFit fit = exponent_fit(fam, sizes, q, o.seed, budget);
    for (std::size_t i = 0; i < fit.sizes.size(); ++i) {
      csv << fit.family << ',' << fit.quantity << ',' << fit.seed << ',' << fit.sizes[i] << ',' << fit.values[i]
          << '\n';
    }
    Json j{{"family", fit.family}, {"quantity", fit.quantity}, {"seed", fit.seed},   {"sizes", fit.sizes},
           {"values", fit.values}, {"slope", fit.slope},       {"intercept", fit.intercept},
           {"residual", fit.residual}};
    jsonl << j.dump() << '\n';
    std::cout << fit.quantity << ',' << fit.slope << ',' << fit.intercept << ',' << fit.residual << '\n';
  }
  return kExitOk;
}

struct SearchOptions {
  std::string objective;
  std::string start;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::string trace = "search_trace.csv";
  std::string out_set;
  bool json = false;
};

int cmd_search(const SearchOptions& o) {
  const Objective obj = parse_objective(o.objective);
  const FamilySpec start = parse_family(o.start);
  const SearchState st = local_search(obj, start, o.steps, o.seed);
  std::ofstream trace(o.trace, std::ios::binary);
  if (!trace) throw Error(ErrorCode::InvalidParameter, "cannot open trace file for writing");
  trace << std::setprecision(17);
  trace << "step,removed,added,accepted,value\n";
  for (const auto& s : st.trace) {
    trace << s.step << ',' << s.removed << ',' << s.added << ',' << (s.accepted ? 1 : 0) << ',' << s.value << '\n';
  }
  if (!o.out_set.empty()) {
    std::ofstream out(o.out_set, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidParameter, "cannot open set file for writing");
    out << "# sumprodlab search --objective " << to_string(obj) << " --start " << st.start << " --steps "
        << st.steps << " --seed " << st.seed << '\n';
    write_set(out, st.current);
  }
  std::size_t accepted = 0;
  for (const auto& s : st.trace) accepted += s.accepted ? 1 : 0;
  if (o.json) {
    Json j{{"objective", std::string(to_string(obj))},
           {"start", st.start},
           {"steps", st.steps},
           {"seed", st.seed},
           {"rng", std::string(Rng::kAlgorithm)},
           {"accepted", accepted},
           {"score", st.value.score.to_string()},
           {"value", st.value.display},
           {"set", set_json(st.current)}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "objective " << to_string(obj) << " value " << st.value.display << " after " << st.steps
              << " steps (" << accepted << " accepted)\n"
              << "set " << set_text(st.current) << '\n';
  }
  return kExitOk;
}

int cmd_report(const std::string& input, const std::string& out_csv) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + input);
  const auto records = read_jsonl(in);
  if (out_csv.empty()) {
    write_csv_summary(std::cout, records);
  } else {
    std::ofstream out(out_csv, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidParameter, "cannot open " + out_csv);
    write_csv_summary(out, records);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sum-product computations, inequality checks and searches"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (0: all available)")->check(CLI::NonNegativeNumber);

  ComputeOptions co;
  auto* compute = app.add_subcommand("compute", "Print quantities of one set");
  compute->add_option("--set", co.set_path, "Set file");
  compute->add_option("--family", co.family, "Family string, e.g. interval:8");
  compute->add_option("--b-set", co.b_path, "Second set file for two-set quantities (default: A)");
  compute->add_option("--quantity", co.quantities, "Quantity name (repeatable, comma separated)")
      ->delimiter(',')
      ->required();
  compute->add_option("--pin", co.pin, "Pinned element for pinned-product");
  compute->add_option("--sign", co.sign, "plus or minus");
  compute->add_option("--moment", co.moment, "k for energy-moment");
  compute->add_option("--tau", co.tau, "Threshold for level-set");
  compute->add_option("--kind", co.kind, "difference or ratio for rep-histogram");
  compute->add_option("--candidates", co.candidates, "inverse-elements or ratio-times-inverse");
  compute->add_flag("--json", co.json, "Machine-readable output");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run inequality checks over generated sets");
  verify->add_option("--specs", vo.specs, "Comma-separated id globs");
  verify->add_option("--family", vo.families, "Family string (repeatable)");
  verify->add_option("--set", vo.set_path, "Set file as a single instance");
  verify->add_option("--sizes", vo.sizes, "Sizes, e.g. 8,16,32 or 4..8");
  verify->add_option("--seeds", vo.seeds, "Seeds, e.g. 1..20");
  verify->add_option("--out-jsonl", vo.out_jsonl, "JSON-lines record file");
  verify->add_option("--out-csv", vo.out_csv, "CSV summary file");
  verify->add_option("--alpha", vo.alpha, "Shift α in A(A+α) (default 1)");
  verify->add_option("--pin", vo.pin, "Pinned element (default: best)");
  verify->add_option("--tau", vo.tau, "Level-set threshold");
  verify->add_option("--budget-ms", vo.budget_ms, "Per-record time budget");
  verify->add_option("--workers", workers, "Worker threads (0: all available)");
  verify->add_flag("--timings", vo.timings, "Record elapsed_ms (output is then not reproducible)");

  ScanOptions so;
  auto* scan = app.add_subcommand("scan", "Sweep sizes and fit growth exponents");
  scan->add_option("--family", so.family, "Family string without size")->required();
  scan->add_option("--quantity", so.quantities, "Quantity (repeatable)")->delimiter(',')->required();
  scan->add_option("--sizes", so.sizes, "At least four increasing sizes")->required();
  scan->add_option("--seed", so.seed, "Seed");
  scan->add_option("--out-csv", so.out_csv, "Per-size values");
  scan->add_option("--out-jsonl", so.out_jsonl, "One fit per line");
  scan->add_option("--budget-ms", so.budget_ms, "Per-size time budget");
  scan->add_option("--workers", workers, "Worker threads (0: all available)");

  SearchOptions sr;
  auto* search = app.add_subcommand("search", "Hill-climb towards small expanders");
  search->add_option("--objective", sr.objective, "min-pinned, min-aaplus, min-aaminus, max-energy-ratio")
      ->required();
  search->add_option("--start", sr.start, "Family string of the start set")->required();
  search->add_option("--steps", sr.steps, "Move attempts");
  search->add_option("--seed", sr.seed, "Seed");
  search->add_option("--trace", sr.trace, "Trace CSV path");
  search->add_option("--out-set", sr.out_set, "Write the final set here");
  search->add_flag("--json", sr.json, "Machine-readable summary");

  std::string report_in, report_csv;
  auto* report = app.add_subcommand("report", "Summarise a JSON-lines record file");
  report->add_option("--input", report_in, "JSON-lines file from verify")->required();
  report->add_option("--out-csv", report_csv, "Summary path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    kernels::set_worker_count(workers);
    if (*compute) return cmd_compute(co);
    if (*verify) return cmd_verify(vo);
    if (*scan) return cmd_scan(so);
    if (*search) return cmd_search(sr);
    if (*report) return cmd_report(report_in, report_csv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::ParseError) return kExitParse;
    if (e.code() == ErrorCode::ExactInequalityViolated) return kExitViolation;
    return kExitPrecondition;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitOk;
}
