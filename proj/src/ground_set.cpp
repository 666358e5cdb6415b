#include "sumprod/ground_set.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sumprod/errors.hpp"

namespace sumprod {
namespace {

std::size_t sort_unique(std::vector<Rational>& values) {
  std::sort(values.begin(), values.end());
  const auto last = std::unique(values.begin(), values.end());
  const auto removed = static_cast<std::size_t>(values.end() - last);
  values.erase(last, values.end());
  return removed;
}

}  // namespace

GroundSet::GroundSet(std::vector<Rational> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySet, "a ground set needs at least one element");
  sort_unique(values);
  elems_ = std::make_shared<const std::vector<Rational>>(std::move(values));
}

bool GroundSet::contains(const Rational& x) const {
  return std::binary_search(elems_->begin(), elems_->end(), x);
}

bool GroundSet::contains_zero() const { return contains(Rational{}); }

std::string GroundSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) out += ", ";
    out += (*elems_)[i].to_string();
  }
  return out + "}";
}

MakeSetResult make_set(std::vector<Rational> values) {
  const std::size_t before = values.size();
  GroundSet set(std::move(values));
  return {set, before - set.size()};
}

MakeSetResult parse_set(std::istream& in) {
  std::vector<Rational> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      values.push_back(Rational::parse(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + e.detail());
    }
  }
  if (values.empty()) throw Error(ErrorCode::EmptySet, "set file contains no elements");
  return make_set(std::move(values));
}

MakeSetResult read_set_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return parse_set(in);
}

void write_set(std::ostream& out, const GroundSet& set) {
  for (const auto& x : set) out << x.to_string() << '\n';
}

}  // namespace sumprod
