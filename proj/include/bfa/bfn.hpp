#pragma once

// The .bfn text format:
//
//   bfn 1
//   n <int>
//   kind bool|real
//   <payload>
//
// bool payload: one line of 2^n characters over {0,1}, '1' meaning f(x) = -1.
// real payload: 2^n lines, one decimal value each. Entries run in ascending
// input-bitmask order.

#include <string>
#include <string_view>
#include <variant>

#include "bfa/core.hpp"

namespace bfa {

using AnyTable = std::variant<TruthTable, RealTable>;

// Accepts .bfn text or a family string (see family.hpp).
AnyTable parse_function(std::string_view text);

std::string serialize_function(const TruthTable& f);
std::string serialize_function(const RealTable& f);
std::string serialize_function(const AnyTable& f);

// `source` is either a path to a .bfn file or a family string.
AnyTable load_function(const std::string& source);

// Boolean tables pass through; real tables must be +/-1-valued.
TruthTable require_boolean(const AnyTable& f);
RealTable as_real(const AnyTable& f);

}  // namespace bfa
