#include "bfa/family.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

#include "bfa/error.hpp"
#include "bfa/format.hpp"
#include "bfa/rng.hpp"

namespace bfa {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("family: bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::size_t words_for(int n) { return (static_cast<std::size_t>(n) + 63) / 64; }

bool input_bit(std::span<const std::uint64_t> input, int i) { return (input[i >> 6] >> (i & 63)) & 1u; }

std::vector<std::uint64_t> parse_parity_set(std::string_view text, int n) {
  std::vector<std::uint64_t> set(words_for(n), 0);
  auto put = [&](int var) {
    if (var < 1 || var > n) throw DomainError("family: parity variable " + std::to_string(var) + " outside [1,n]");
    set[static_cast<std::size_t>(var - 1) >> 6] |= std::uint64_t{1} << ((var - 1) & 63);
  };
  if (text == "full") {
    for (int v = 1; v <= n; ++v) put(v);
  } else if (text.size() >= 2 && text.front() == '{' && text.back() == '}') {
    const std::string_view body = text.substr(1, text.size() - 2);
    if (!body.empty()) {
      for (std::string_view item : split(body, ',')) put(parse_number<int>(item, "parity member"));
    }
  } else {
    std::uint64_t mask = 0;
    if (text.starts_with("0b")) {
      const auto [p, ec] = std::from_chars(text.data() + 2, text.data() + text.size(), mask, 2);
      if (ec != std::errc{} || p != text.data() + text.size()) throw ParseError("family: bad binary mask");
    } else if (text.starts_with("0x")) {
      const auto [p, ec] = std::from_chars(text.data() + 2, text.data() + text.size(), mask, 16);
      if (ec != std::errc{} || p != text.data() + text.size()) throw ParseError("family: bad hex mask");
    } else {
      mask = parse_number<std::uint64_t>(text, "parity mask");
    }
    for (int b = 0; b < 64; ++b) {
      if ((mask >> b) & 1u) put(b + 1);
    }
  }
  return set;
}

void expect_arity(const std::vector<std::string_view>& parts, std::size_t count, std::string_view form) {
  if (parts.size() != count) throw ParseError("family: expected " + std::string(form));
}

int parse_vars(std::string_view text) {
  const int n = parse_number<int>(text, "variable count");
  if (n < 1) throw DomainError("family: variable count must be >= 1");
  return n;
}

double threshold_sum(const FamilySpec& spec, std::span<const std::uint64_t> input) {
  double sum = spec.weights[0];
  for (int i = 0; i < spec.n; ++i) sum += input_bit(input, i) ? -spec.weights[i + 1] : spec.weights[i + 1];
  return sum;
}

}  // namespace

FamilySpec parse_family(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view head = parts[0];
  FamilySpec spec;
  if (head == "maj") {
    expect_arity(parts, 2, "maj:n");
    spec.kind = FamilyKind::Majority;
    spec.n = parse_vars(parts[1]);
    if (spec.n % 2 == 0) throw DomainError("family: majority needs odd n, got " + std::to_string(spec.n));
  } else if (head == "dict") {
    expect_arity(parts, 3, "dict:i:n");
    spec.kind = FamilyKind::Dictator;
    spec.index = parse_number<int>(parts[1], "dictator index");
    spec.n = parse_vars(parts[2]);
    if (spec.index < 1 || spec.index > spec.n) {
      throw DomainError("family: dictator index " + std::to_string(spec.index) + " outside [1,n]");
    }
  } else if (head == "parity") {
    expect_arity(parts, 3, "parity:S:n");
    spec.kind = FamilyKind::Parity;
    spec.n = parse_vars(parts[2]);
    spec.parity = parse_parity_set(parts[1], spec.n);
  } else if (head == "tribes") {
    expect_arity(parts, 3, "tribes:w:s");
    spec.kind = FamilyKind::Tribes;
    spec.width = parse_number<int>(parts[1], "tribe width");
    spec.tribes = parse_number<int>(parts[2], "tribe count");
    if (spec.width < 1 || spec.tribes < 1) throw DomainError("family: tribes needs w, s >= 1");
    spec.n = spec.width * spec.tribes;
  } else if (head == "and" || head == "or") {
    expect_arity(parts, 2, "and:n / or:n");
    spec.kind = head == "and" ? FamilyKind::And : FamilyKind::Or;
    spec.n = parse_vars(parts[1]);
  } else if (head == "const") {
    expect_arity(parts, 3, "const:+1:n");
    spec.kind = FamilyKind::Constant;
    spec.constant = parse_number<int>(parts[1], "constant");
    if (spec.constant != 1 && spec.constant != -1) throw DomainError("family: constant must be +1 or -1");
    spec.n = parse_vars(parts[2]);
  } else if (head == "random") {
    expect_arity(parts, 3, "random:seed:n");
    spec.kind = FamilyKind::Random;
    spec.seed = parse_number<std::uint64_t>(parts[1], "seed");
    spec.n = parse_vars(parts[2]);
  } else if (head == "ltf") {
    expect_arity(parts, 2, "ltf:a0,a1,..,an");
    spec.kind = FamilyKind::Threshold;
    for (std::string_view w : split(parts[1], ',')) spec.weights.push_back(parse_number<double>(w, "ltf weight"));
    if (spec.weights.size() < 2) throw ParseError("family: ltf needs a0 and at least one weight");
    for (double w : spec.weights) {
      if (!std::isfinite(w)) throw DomainError("family: ltf weights must be finite");
    }
    spec.n = static_cast<int>(spec.weights.size()) - 1;
  } else {
    throw ParseError("family: unknown family '" + std::string(head) + "'");
  }
  return spec;
}

std::string FamilySpec::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case FamilyKind::Majority: out << "maj:" << n; break;
    case FamilyKind::Dictator: out << "dict:" << index << ':' << n; break;
    case FamilyKind::Parity: {
      out << "parity:{";
      bool first = true;
      for (int i = 0; i < n; ++i) {
        if (input_bit(parity, i)) {
          out << (first ? "" : ",") << i + 1;
          first = false;
        }
      }
      out << "}:" << n;
      break;
    }
    case FamilyKind::Tribes: out << "tribes:" << width << ':' << tribes; break;
    case FamilyKind::And: out << "and:" << n; break;
    case FamilyKind::Or: out << "or:" << n; break;
    case FamilyKind::Constant: out << "const:" << (constant > 0 ? "+1" : "-1") << ':' << n; break;
    case FamilyKind::Random: out << "random:" << seed << ':' << n; break;
    case FamilyKind::Threshold: {
      out << "ltf:";
      for (std::size_t i = 0; i < weights.size(); ++i) out << (i ? "," : "") << format_double(weights[i]);
      break;
    }
  }
  return out.str();
}

int evaluate(const FamilySpec& spec, std::span<const std::uint64_t> input) {
  switch (spec.kind) {
    case FamilyKind::Majority: {
      int minus = 0;
      for (std::size_t w = 0; w < words_for(spec.n); ++w) minus += std::popcount(input[w]);
      return 2 * minus > spec.n ? -1 : 1;
    }
    case FamilyKind::Dictator: return input_bit(input, spec.index - 1) ? -1 : 1;
    case FamilyKind::Parity: {
      int ones = 0;
      for (std::size_t w = 0; w < spec.parity.size(); ++w) ones += std::popcount(input[w] & spec.parity[w]);
      return (ones & 1) ? -1 : 1;
    }
    case FamilyKind::Tribes: {
      for (int t = 0; t < spec.tribes; ++t) {
        bool all = true;
        for (int j = 0; j < spec.width && all; ++j) all = input_bit(input, t * spec.width + j);
        if (all) return -1;
      }
      return 1;
    }
    case FamilyKind::And: {
      for (int i = 0; i < spec.n; ++i) {
        if (!input_bit(input, i)) return 1;
      }
      return -1;
    }
    case FamilyKind::Or: {
      for (int i = 0; i < spec.n; ++i) {
        if (input_bit(input, i)) return -1;
      }
      return 1;
    }
    case FamilyKind::Constant: return spec.constant;
    case FamilyKind::Random: throw DomainError("family: random functions exist only as dense tables");
    case FamilyKind::Threshold: {
      const double sum = threshold_sum(spec, input);
      if (sum == 0.0) throw DomainError("family: ltf has a tie (a.x = 0) on some input");
      return sum > 0.0 ? 1 : -1;
    }
  }
  return 1;
}

TruthTable make_family(const FamilySpec& spec) {
  check_table_vars(spec.n);
  if (spec.kind == FamilyKind::Random) return random_table(spec.seed, spec.n);
  return TruthTable::from_predicate(spec.n, [&](Mask x) {
    const std::uint64_t word = x;
    return evaluate(spec, std::span<const std::uint64_t>(&word, 1));
  });
}

TruthTable make_family(std::string_view text) { return make_family(parse_family(text)); }

TruthTable majority(int n) { return make_family("maj:" + std::to_string(n)); }

TruthTable dictator(int i, int n) { return make_family("dict:" + std::to_string(i) + ":" + std::to_string(n)); }

TruthTable parity(Mask set, int n) {
  check_table_vars(n);
  if (n < 32 && (set >> n) != 0) throw DomainError("family: parity set has variables beyond n");
  return TruthTable::from_predicate(n, [&](Mask x) { return chi(set, x); });
}

TruthTable tribes(int width, int count) {
  return make_family("tribes:" + std::to_string(width) + ":" + std::to_string(count));
}

TruthTable random_table(std::uint64_t seed, int n) {
  check_table_vars(n);
  Rng rng(seed);
  const std::size_t len = std::size_t{1} << n;
  std::vector<std::uint64_t> words((len + 63) / 64);
  for (auto& w : words) w = rng.bits();
  if (len < 64) words[0] &= (std::uint64_t{1} << len) - 1;
  return TruthTable::from_words(n, std::move(words));
}

}  // namespace bfa
