#include "bfa/bfn.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bfa/error.hpp"
#include "bfa/family.hpp"
#include "bfa/format.hpp"

namespace bfa {
namespace {

// Splits on '\n', tolerating a trailing '\r' and one final empty line.
std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string_view header_value(std::string_view line, std::string_view key) {
  if (!line.starts_with(key) || line.size() <= key.size() || line[key.size()] != ' ') {
    throw ParseError("bfn: expected '" + std::string(key) + " <value>', got '" + std::string(line) + "'");
  }
  return line.substr(key.size() + 1);
}

AnyTable parse_bfn(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.size() < 3) throw ParseError("bfn: truncated header");
  if (lines[0] != "bfn 1") throw ParseError("bfn: first line must be 'bfn 1'");

  const std::string_view n_text = header_value(lines[1], "n");
  int n = 0;
  const auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
  if (ec != std::errc{} || ptr != n_text.data() + n_text.size() || n < 1) {
    throw ParseError("bfn: bad variable count '" + std::string(n_text) + "'");
  }
  check_table_vars(n);
  const std::size_t len = std::size_t{1} << n;

  const std::string_view kind = header_value(lines[2], "kind");
  if (kind == "bool") {
    if (lines.size() != 4) throw ParseError("bfn: bool payload must be exactly one line");
    const std::string_view payload = lines[3];
    if (payload.size() != len) {
      throw ParseError("bfn: payload length " + std::to_string(payload.size()) + " != 2^n = " + std::to_string(len));
    }
    std::vector<std::uint64_t> words((len + 63) / 64, 0);
    for (std::size_t x = 0; x < len; ++x) {
      if (payload[x] == '1') {
        words[x >> 6] |= std::uint64_t{1} << (x & 63);
      } else if (payload[x] != '0') {
        throw ParseError("bfn: bool payload may contain only 0 and 1");
      }
    }
    return TruthTable::from_words(n, std::move(words));
  }
  if (kind == "real") {
    if (lines.size() != 3 + len) {
      throw ParseError("bfn: real payload has " + std::to_string(lines.size() - 3) + " lines, expected " +
                       std::to_string(len));
    }
    std::vector<double> values(len);
    for (std::size_t x = 0; x < len; ++x) {
      const std::string_view line = lines[3 + x];
      const auto [p, e] = std::from_chars(line.data(), line.data() + line.size(), values[x]);
      if (e != std::errc{} || p != line.data() + line.size()) {
        throw ParseError("bfn: bad real value '" + std::string(line) + "'");
      }
      if (!std::isfinite(values[x])) throw ParseError("bfn: non-finite real value");
    }
    return RealTable(n, std::move(values));
  }
  throw ParseError("bfn: kind must be bool or real, got '" + std::string(kind) + "'");
}

}  // namespace

AnyTable parse_function(std::string_view text) {
  if (text.starts_with("bfn")) return parse_bfn(text);
  return make_family(text);
}

std::string serialize_function(const TruthTable& f) {
  std::string out = "bfn 1\nn " + std::to_string(f.n()) + "\nkind bool\n";
  out.reserve(out.size() + f.size() + 1);
  for (std::size_t x = 0; x < f.size(); ++x) out.push_back(f.bit(static_cast<Mask>(x)) ? '1' : '0');
  out.push_back('\n');
  return out;
}

std::string serialize_function(const RealTable& f) {
  std::string out = "bfn 1\nn " + std::to_string(f.n()) + "\nkind real\n";
  for (double v : f.values()) {
    out += format_double(v);
    out.push_back('\n');
  }
  return out;
}

std::string serialize_function(const AnyTable& f) {
  return std::visit([](const auto& t) { return serialize_function(t); }, f);
}

AnyTable load_function(const std::string& source) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw ParseError("bfn: cannot open '" + source + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_bfn(buf.str());
  }
  return parse_function(source);
}

TruthTable require_boolean(const AnyTable& f) {
  if (const auto* t = std::get_if<TruthTable>(&f)) return *t;
  const auto& r = std::get<RealTable>(f);
  for (double v : r.values()) {
    if (v != 1.0 && v != -1.0) throw DomainError("expected a boolean (+/-1-valued) function");
  }
  return sign_of(r);
}

RealTable as_real(const AnyTable& f) {
  if (const auto* t = std::get_if<TruthTable>(&f)) return to_real(*t);
  return std::get<RealTable>(f);
}

}  // namespace bfa
