#include "dynmatch/instance_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dynmatch/matching_algorithms.hpp"

namespace dynmatch {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& reason) {
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + reason);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> tokens;
  std::string t;
  while (is >> t) tokens.push_back(t);
  return tokens;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

MarketInstance parse_instance(const std::string& text) {
  RawMarket raw;
  enum class Section { None, Firms, Workers, FirmUtils, WorkerUtils, Discounts };
  Section section = Section::None;

  std::set<std::pair<std::string, std::string>> seen_utils[2];
  std::set<std::string> seen_discounts;

  std::istringstream is(text);
  std::string rawline;
  int lineno = 0;
  while (std::getline(is, rawline)) {
    ++lineno;
    std::string line = strip_comment(rawline);
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (tokens[0].front() == '[') {
      if (tokens.size() != 1) parse_fail(lineno, "unexpected text after section header");
      const std::string& h = tokens[0];
      if (h == "[firms]") section = Section::Firms;
      else if (h == "[workers]") section = Section::Workers;
      else if (h == "[firm_utils]") section = Section::FirmUtils;
      else if (h == "[worker_utils]") section = Section::WorkerUtils;
      else if (h == "[discounts]") section = Section::Discounts;
      else parse_fail(lineno, "unknown section " + h);
      continue;
    }

    switch (section) {
      case Section::None:
        parse_fail(lineno, "content before any section header");
      case Section::Firms:
      case Section::Workers: {
        if (tokens.size() != 1)
          parse_fail(lineno, "expected one identifier, got " + std::to_string(tokens.size()) +
                                 " tokens");
        auto& side = section == Section::Firms ? raw.firms : raw.workers;
        side.push_back(tokens[0]);
        break;
      }
      case Section::FirmUtils:
      case Section::WorkerUtils: {
        if (tokens.size() != 3)
          parse_fail(lineno, "expected 'agent partner value' (column 1-3)");
        auto value = parse_rational(tokens[2]);
        if (!value) parse_fail(lineno, "cannot parse value '" + tokens[2] + "' (column 3)");
        int side = section == Section::FirmUtils ? 0 : 1;
        if (!seen_utils[side].emplace(tokens[0], tokens[1]).second) {
          parse_fail(lineno, "duplicate-entry: utility for (" + tokens[0] + ", " + tokens[1] +
                                 ") already listed");
        }
        if (*value == 0)
          parse_fail(lineno, "utility for (" + tokens[0] + ", " + tokens[1] +
                                 ") is 0; partner utilities must be nonzero");
        auto& utils = side == 0 ? raw.firm_utils : raw.worker_utils;
        utils.emplace_back(tokens[0], tokens[1], *value);
        break;
      }
      case Section::Discounts: {
        if (tokens.size() != 2) parse_fail(lineno, "expected 'agent value' (column 1-2)");
        auto value = parse_rational(tokens[1]);
        if (!value) parse_fail(lineno, "cannot parse value '" + tokens[1] + "' (column 2)");
        if (!seen_discounts.insert(tokens[0]).second)
          parse_fail(lineno, "duplicate-entry: discount for " + tokens[0] + " already listed");
        if (!(*value > 0 && *value < 1)) {
          throw Error(Errc::DiscountOutOfRange,
                      "line " + std::to_string(lineno) + ": discount " +
                          rational_to_string(*value) + " for '" + tokens[0] +
                          "' must lie strictly inside (0,1)");
        }
        raw.discounts.emplace_back(tokens[0], *value);
        break;
      }
    }
  }
  return validate_market(raw);
}

std::string serialize_instance(const MarketInstance& m) {
  std::ostringstream os;
  os << "[firms]\n";
  for (const auto& f : m.firm_ids()) os << f << '\n';
  os << "[workers]\n";
  for (const auto& w : m.worker_ids()) os << w << '\n';
  os << "[firm_utils]\n";
  for (int f = 0; f < m.num_firms(); ++f)
    for (int w = 0; w < m.num_workers(); ++w)
      os << m.firm_id(f) << ' ' << m.worker_id(w) << ' '
         << rational_to_string(m.firm_utility(f, w)) << '\n';
  os << "[worker_utils]\n";
  for (int w = 0; w < m.num_workers(); ++w)
    for (int f = 0; f < m.num_firms(); ++f)
      os << m.worker_id(w) << ' ' << m.firm_id(f) << ' '
         << rational_to_string(m.worker_utility(w, f)) << '\n';
  os << "[discounts]\n";
  for (int f = 0; f < m.num_firms(); ++f)
    os << m.firm_id(f) << ' ' << rational_to_string(m.firm_discount(f)) << '\n';
  for (int w = 0; w < m.num_workers(); ++w)
    os << m.worker_id(w) << ' ' << rational_to_string(m.worker_discount(w)) << '\n';
  return os.str();
}

namespace {

// Minimal deterministic generator (splitmix64); the standard distributions
// are implementation-defined, which would break byte-identical reports.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

 private:
  std::uint64_t state_;
};

std::vector<Rational> draw_distinct_utilities(Rng& rng, int count) {
  // Pool of distinct nonzero integers in [-3, 12]; 12 of 15 are acceptable.
  std::vector<int> pool;
  for (int v = -3; v <= 12; ++v)
    if (v != 0) pool.push_back(v);
  for (int i = static_cast<int>(pool.size()) - 1; i > 0; --i) {
    std::swap(pool[i], pool[rng.below(i + 1)]);
  }
  std::vector<Rational> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.emplace_back(pool[i]);
  return out;
}

Rational draw_discount(Rng& rng) { return Rational(6 + rng.below(89), 100); }

}  // namespace

MarketInstance generate_market(std::uint64_t seed, int num_firms, int num_workers) {
  if (num_firms < 1 || num_workers < 1 || num_firms > kEnumerationGuard ||
      num_workers > kEnumerationGuard) {
    throw Error(Errc::InstanceTooLarge,
                "generated markets support 1.." + std::to_string(kEnumerationGuard) +
                    " agents per side");
  }
  Rng rng(seed * 0x2545f4914f6cdd1dULL + 0x9e3779b97f4a7c15ULL * (num_firms * 8 + num_workers));

  RawMarket raw;
  for (int f = 0; f < num_firms; ++f) raw.firms.push_back("f" + std::to_string(f + 1));
  for (int w = 0; w < num_workers; ++w) raw.workers.push_back("w" + std::to_string(w + 1));

  for (int f = 0; f < num_firms; ++f) {
    auto utils = draw_distinct_utilities(rng, num_workers);
    for (int w = 0; w < num_workers; ++w)
      raw.firm_utils.emplace_back(raw.firms[f], raw.workers[w], utils[w]);
  }
  for (int w = 0; w < num_workers; ++w) {
    auto utils = draw_distinct_utilities(rng, num_firms);
    for (int f = 0; f < num_firms; ++f)
      raw.worker_utils.emplace_back(raw.workers[w], raw.firms[f], utils[f]);
  }
  for (int f = 0; f < num_firms; ++f) raw.discounts.emplace_back(raw.firms[f], draw_discount(rng));
  for (int w = 0; w < num_workers; ++w)
    raw.discounts.emplace_back(raw.workers[w], draw_discount(rng));
  return validate_market(raw);
}

Matching parse_matching_literal(const MarketInstance& m, const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '(')
      throw Error(Errc::UsageError, "matching literal: expected '(' at position " +
                                        std::to_string(i) + " in '" + text + "'");
    auto comma = text.find(',', i);
    auto close = text.find(')', i);
    if (comma == std::string::npos || close == std::string::npos || comma > close)
      throw Error(Errc::UsageError, "matching literal: malformed pair in '" + text + "'");
    pairs.emplace_back(text.substr(i + 1, comma - i - 1),
                       text.substr(comma + 1, close - comma - 1));
    i = close + 1;
  }
  return Matching::from_ids(m, pairs);
}

Matching parse_matching_selector(const MarketInstance& m, const std::string& text) {
  if (text == "firmOpt") return deferred_acceptance(m, Side::Firm);
  if (text == "workerOpt") return deferred_acceptance(m, Side::Worker);
  if (text == "empty") return Matching::empty(m);
  return parse_matching_literal(m, text);
}

}  // namespace dynmatch
