#pragma once

// Unique Label Cover instances and the long-code reduction to MAX-CSP.
//
// Labels are 0-based. An edge (u, v, pi) is satisfied by a labelling l iff
// l(u) = pi(l(v)); seen from v the same edge carries pi^{-1}. The long code
// of label j is the dictator on variable x_{j+1}, i.e. input bit j.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bfa/core.hpp"
#include "bfa/mc.hpp"

namespace bfa {

using Labelling = std::vector<int>;

struct UlcEdge {
  int u = 0;
  int v = 0;
  std::vector<int> perm;  // perm[j] = pi(j)
};

struct Neighbor {
  int vertex = 0;
  std::vector<int> perm;  // pi_{u,v}: the edge wants l(u) = perm[l(v)]
};

class UlcInstance {
 public:
  // Checks bijections, endpoints, no self-loops, at least one edge, and regularity.
  UlcInstance(int labels, int vertices, std::vector<UlcEdge> edges, std::optional<Labelling> planted = {});

  int labels() const { return labels_; }
  int vertices() const { return vertices_; }
  int degree() const { return degree_; }
  const std::vector<UlcEdge>& edges() const { return edges_; }
  const std::vector<Neighbor>& neighbors(int u) const { return adjacency_[static_cast<std::size_t>(u)]; }
  const std::optional<Labelling>& planted() const { return planted_; }

  // Fraction of edges satisfied.
  double value(const Labelling& l) const;

 private:
  int labels_;
  int vertices_;
  int degree_ = 0;
  std::vector<UlcEdge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::optional<Labelling> planted_;
};

void to_json(nlohmann::json& j, const UlcInstance& psi);
UlcInstance ulc_from_json(const nlohmann::json& j);

struct UlcOptimum {
  double value = 0.0;
  Labelling labelling;
  std::string method;  // propagation or search
};

inline constexpr double kMaxBruteLabellings = 1e8;

// Exact optimum. Tries breadth-first propagation first (finds value-1
// labellings at any size), then branch and bound when L^|V| <= 1e8.
UlcOptimum ulc_brute_opt(const UlcInstance& psi);

// Circulant graph on `vertices` with the given degree (odd degree adds the
// antipodal chord, so needs an even vertex count). A hidden uniform labelling
// is planted; round(delta |E|) random edges get a uniformly random permutation.
UlcInstance planted_instance(int vertices, int degree, int labels, double delta, std::uint64_t seed);

enum class Predicate { Equal2, Nae3, Xor3 };

int arity(Predicate p);
std::string predicate_name(Predicate p);
Predicate parse_predicate(const std::string& name);
bool accepts(Predicate p, std::span<const int> values);

// 0/1 table of a predicate on {-1,1}^k (bit i set <=> y_{i+1} = -1).
RealTable predicate_table(Predicate p);

inline constexpr int kMaxPredicateArity = 8;

// Multilinear extension sum_S phi^(S) prod_{i in S} y_i of a 0/1 table, y in [-1,1]^k.
double phi_star(const RealTable& phi, std::span<const double> y);
double phi_star(Predicate p, std::span<const double> y);

enum class TesterKind { Nae, Kkmo, ThreeXor, Blr };

struct Tester {
  TesterKind kind = TesterKind::Nae;
  double param = 0.0;  // rho for kkmo, delta for 3xor

  int arity() const { return kind == TesterKind::Kkmo ? 2 : 3; }
  Predicate predicate() const;
  // Dictator acceptance: nae 1, kkmo 1/2 + rho/2, 3xor 1 - delta/2, blr 1.
  double completeness() const;
  std::string to_string() const;  // nae, kkmo:<rho>, 3xor:<delta>, blr
};

Tester parse_tester(const std::string& text);

struct VarRef {
  int vertex = 0;
  Mask mask = 0;
  int sign = 1;
};

struct Constraint {
  std::vector<VarRef> vars;
};

struct CspInstance {
  int labels = 0;
  int vertices = 0;
  std::string tester;
  Predicate predicate = Predicate::Nae3;
  bool folded = false;
  std::uint64_t seed = 0;
  std::vector<Constraint> constraints;  // equally weighted

  int k() const { return arity(predicate); }
};

void to_json(nlohmann::json& j, const CspInstance& c);
CspInstance csp_from_json(const nlohmann::json& j);

inline constexpr int kMaxReductionLabels = 10;

// Reference to Z_{v,x}, folded over global negation when requested: inputs
// with x_1 = -1 are read as -f_v(-x).
VarRef make_ref(int vertex, Mask x, int labels, bool folded);

// (x o pi)_j = x_{pi(j)}
Mask compose(Mask x, std::span<const int> perm);

// M i.i.d. constraints: uniform u, k uniform neighbours v_i, a tester query
// tuple x_1..x_k on L bits, and the constraint phi(Z_{v_i, x_i o pi_{u,v_i}}).
CspInstance reduce(const UlcInstance& psi, const Tester& tester, std::uint64_t m, std::uint64_t seed, bool folded);

// Per-vertex functions, boolean or [-1,1]-valued.
using VertexTable = std::variant<TruthTable, RealTable>;

struct Assignment {
  int labels = 0;
  std::vector<VertexTable> tables;

  double read(const VarRef& ref) const;
};

// Real values are clamped to [-1,1].
Assignment make_assignment(int labels, std::vector<VertexTable> tables);

void to_json(nlohmann::json& j, const Assignment& a);
Assignment assignment_from_json(const nlohmann::json& j);

Assignment dictator_assignment(const UlcInstance& psi, const Labelling& l);
Assignment constant_assignment(int labels, int vertices);
Assignment random_assignment(int labels, int vertices, std::uint64_t seed);

// Average of phi (or phi* once a real value is read) over the constraints.
// mc = nullopt uses every constraint; otherwise that many are drawn with
// replacement. stderr is the spread across the constraints used.
McReport csp_value(const CspInstance& c, const Assignment& a, std::optional<McParams> mc = {});

inline constexpr int kMaxExactKkmoLabels = 6;

// Exact value of the kkmo reduction: every u, every ordered neighbour pair and
// every rho-correlated (x, y), weighted.
double kkmo_expected_value(const UlcInstance& psi, const Assignment& a, double rho, bool folded);

struct DecodedVertex {
  std::vector<int> j;        // labels with Inf^(1-gamma)(g_u) >= gamma
  std::vector<int> j_prime;  // labels with Inf^(1-gamma)(f_u) >= gamma/2
  int label = 0;
};

struct DecodeReport {
  Labelling labelling;
  std::vector<DecodedVertex> vertices;
  double gamma = 0.0;
  double j_bound = 0.0;        // 1/gamma^2
  double j_prime_bound = 0.0;  // 2/gamma^2
  std::size_t bound_violations = 0;
  double value = 0.0;  // value of the decoded labelling on psi
};

// g_u is the average over neighbours v of f_v(x o pi_{u,v}), read through the
// folding when `folded` is set.
RealTable composed_average(const UlcInstance& psi, const Assignment& a, int u, bool folded);

DecodeReport decode_labelling(const UlcInstance& psi, const Assignment& a, double gamma, std::uint64_t seed,
                              bool folded = false);

}  // namespace bfa
