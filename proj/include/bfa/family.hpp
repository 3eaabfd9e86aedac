#pragma once

// Named boolean function families and the short string syntax for them:
//
//   maj:n            majority, n odd
//   dict:i:n         x_i (1-based)
//   parity:S:n       chi_S; S is decimal, 0b..., 0x..., {1,3,..} or "full"
//   tribes:w:s       s-way OR of disjoint w-way ANDs (-1 is "true")
//   and:n, or:n      with -1 as "true"
//   const:+1:n       constant (+1 or -1)
//   random:seed:n    uniformly random table
//   ltf:a0,a1,..,an  sgn(a0 + a1 x1 + ... + an xn); ties are rejected
//
// Families other than random can also be evaluated pointwise for n beyond the
// dense-table cap, which is what the Monte-Carlo paths use.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfa/core.hpp"

namespace bfa {

enum class FamilyKind { Majority, Dictator, Parity, Tribes, And, Or, Constant, Random, Threshold };

struct FamilySpec {
  FamilyKind kind = FamilyKind::Constant;
  int n = 0;
  int index = 0;                      // dictator variable (1-based)
  int width = 0;                      // tribes w
  int tribes = 0;                     // tribes s
  int constant = 1;                   // +1 / -1
  std::uint64_t seed = 0;             // random
  std::vector<std::uint64_t> parity;  // parity set, packed like inputs
  std::vector<double> weights;        // ltf: a0, a1..an

  std::string to_string() const;
};

FamilySpec parse_family(std::string_view text);

// Pointwise value at an input packed into 64-bit words (bit i = variable i+1).
int evaluate(const FamilySpec& spec, std::span<const std::uint64_t> input);

TruthTable make_family(const FamilySpec& spec);
TruthTable make_family(std::string_view text);

TruthTable majority(int n);
TruthTable dictator(int i, int n);
TruthTable parity(Mask set, int n);
TruthTable tribes(int width, int count);
TruthTable random_table(std::uint64_t seed, int n);

}  // namespace bfa
