#include "bfa/ulc.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <deque>
#include <set>

#include "bfa/bfn.hpp"
#include "bfa/error.hpp"
#include "bfa/family.hpp"
#include "bfa/format.hpp"
#include "bfa/operators.hpp"

namespace bfa {
namespace {

constexpr int kMaxLabels = 32;

std::vector<int> inverse(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) inv[static_cast<std::size_t>(perm[j])] = static_cast<int>(j);
  return inv;
}

Mask full_mask(int labels) { return labels >= 32 ? ~Mask{0} : (Mask{1} << labels) - 1; }

std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = j;
  for (int j = n - 1; j > 0; --j) {
    std::swap(perm[static_cast<std::size_t>(j)], perm[rng.below(static_cast<std::uint64_t>(j) + 1)]);
  }
  return perm;
}

void check_labelling(const Labelling& l, int vertices, int labels) {
  if (l.size() != static_cast<std::size_t>(vertices)) throw DomainError("labelling must cover every vertex");
  for (int x : l) {
    if (x < 0 || x >= labels) throw DomainError("label outside [0, L)");
  }
}

// Sum_S phi^(S) prod_{i in S} y_i for a precomputed spectrum.
double multilinear_at(const Spectrum& s, std::span<const double> y) {
  double total = 0.0;
  for (std::size_t set = 0; set < s.size(); ++set) {
    if (s.coeffs()[set] == 0.0) continue;
    double term = s.coeffs()[set];
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (set >> i & 1u) term *= y[i];
    }
    total += term;
  }
  return total;
}

template <class T>
T json_get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("json: field '") + key + "': " + e.what());
  }
}

void check_assignment(const Assignment& a, int labels, int vertices) {
  if (a.labels != labels) throw DomainError("assignment tables have the wrong number of variables");
  if (a.tables.size() < static_cast<std::size_t>(vertices)) throw DomainError("assignment is missing a vertex table");
}

}  // namespace

UlcInstance::UlcInstance(int labels, int vertices, std::vector<UlcEdge> edges, std::optional<Labelling> planted)
    : labels_(labels), vertices_(vertices), edges_(std::move(edges)), planted_(std::move(planted)) {
  if (labels < 1 || labels > kMaxLabels) throw DomainError("ulc: need 1 <= L <= 32");
  if (vertices < 2) throw DomainError("ulc: need at least two vertices");
  if (edges_.empty()) throw DomainError("ulc: graph has no edges");
  adjacency_.resize(static_cast<std::size_t>(vertices));
  for (const auto& e : edges_) {
    if (e.u < 0 || e.u >= vertices || e.v < 0 || e.v >= vertices) throw DomainError("ulc: edge endpoint out of range");
    if (e.u == e.v) throw DomainError("ulc: self-loop");
    if (e.perm.size() != static_cast<std::size_t>(labels)) throw DomainError("ulc: permutation has the wrong length");
    std::vector<bool> seen(static_cast<std::size_t>(labels), false);
    for (int x : e.perm) {
      if (x < 0 || x >= labels || seen[static_cast<std::size_t>(x)]) throw DomainError("ulc: edge map is not a bijection");
      seen[static_cast<std::size_t>(x)] = true;
    }
    adjacency_[static_cast<std::size_t>(e.u)].push_back({e.v, e.perm});
    adjacency_[static_cast<std::size_t>(e.v)].push_back({e.u, inverse(e.perm)});
  }
  degree_ = static_cast<int>(adjacency_[0].size());
  for (const auto& nbrs : adjacency_) {
    if (nbrs.size() != static_cast<std::size_t>(degree_)) throw DomainError("ulc: graph is not regular");
  }
  if (planted_) check_labelling(*planted_, vertices, labels);
}

double UlcInstance::value(const Labelling& l) const {
  check_labelling(l, vertices_, labels_);
  std::size_t good = 0;
  for (const auto& e : edges_) {
    if (l[static_cast<std::size_t>(e.u)] == e.perm[static_cast<std::size_t>(l[static_cast<std::size_t>(e.v)])]) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(edges_.size());
}

void to_json(nlohmann::json& j, const UlcInstance& psi) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : psi.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"perm", e.perm}});
  j = nlohmann::json{{"L", psi.labels()}, {"vertices", psi.vertices()}, {"edges", edges}};
  if (psi.planted()) j["planted"] = *psi.planted();
}

UlcInstance ulc_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("ulc json: expected an object");
  const int labels = json_get<int>(j, "L");
  const int vertices = json_get<int>(j, "vertices");
  std::vector<UlcEdge> edges;
  for (const auto& e : json_get<nlohmann::json>(j, "edges")) {
    edges.push_back({json_get<int>(e, "u"), json_get<int>(e, "v"), json_get<std::vector<int>>(e, "perm")});
  }
  std::optional<Labelling> planted;
  if (j.contains("planted")) planted = json_get<Labelling>(j, "planted");
  return UlcInstance(labels, vertices, std::move(edges), std::move(planted));
}

UlcOptimum ulc_brute_opt(const UlcInstance& psi) {
  const int n = psi.vertices();
  const int labels = psi.labels();

  // Breadth-first propagation from each root label, per component.
  Labelling l(static_cast<std::size_t>(n), -1);
  bool consistent = true;
  for (int root = 0; root < n && consistent; ++root) {
    if (l[static_cast<std::size_t>(root)] >= 0) continue;
    bool found = false;
    for (int r = 0; r < labels && !found; ++r) {
      Labelling trial = l;
      std::deque<int> queue{root};
      trial[static_cast<std::size_t>(root)] = r;
      bool ok = true;
      while (!queue.empty() && ok) {
        const int u = queue.front();
        queue.pop_front();
        const int lu = trial[static_cast<std::size_t>(u)];
        for (const auto& nb : psi.neighbors(u)) {
          // l(u) = perm[l(v)]
          const auto it = std::find(nb.perm.begin(), nb.perm.end(), lu);
          const int lv = static_cast<int>(it - nb.perm.begin());
          int& slot = trial[static_cast<std::size_t>(nb.vertex)];
          if (slot < 0) {
            slot = lv;
            queue.push_back(nb.vertex);
          } else if (slot != lv) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        l = std::move(trial);
        found = true;
      }
    }
    consistent = found;
  }
  if (consistent) return {1.0, l, "propagation"};

  if (std::pow(static_cast<double>(labels), n) > kMaxBruteLabellings) {
    throw CapacityError("ulc_brute_opt: L^|V| exceeds 1e8 and the instance is not satisfiable by propagation");
  }

  // Branch and bound over vertices in index order; each edge is scored once
  // both endpoints are labelled.
  struct Back {
    int other;
    const std::vector<int>* perm;
    bool later_is_u;
  };
  std::vector<std::vector<Back>> back(static_cast<std::size_t>(n));
  for (const auto& e : psi.edges()) {
    const int later = std::max(e.u, e.v);
    back[static_cast<std::size_t>(later)].push_back({std::min(e.u, e.v), &e.perm, later == e.u});
  }
  const auto total = static_cast<int>(psi.edges().size());
  UlcOptimum best{0.0, Labelling(static_cast<std::size_t>(n), 0), "search"};
  best.value = psi.value(best.labelling);
  int best_good = static_cast<int>(std::lround(best.value * total));
  Labelling cur(static_cast<std::size_t>(n), 0);

  auto search = [&](auto&& self, int u, int bad) -> void {
    if (total - bad <= best_good) return;
    if (u == n) {
      best_good = total - bad;
      best.labelling = cur;
      return;
    }
    for (int x = 0; x < labels; ++x) {
      cur[static_cast<std::size_t>(u)] = x;
      int added = 0;
      for (const auto& b : back[static_cast<std::size_t>(u)]) {
        const int lo = cur[static_cast<std::size_t>(b.other)];
        const bool sat = b.later_is_u ? x == (*b.perm)[static_cast<std::size_t>(lo)]
                                      : lo == (*b.perm)[static_cast<std::size_t>(x)];
        if (!sat) ++added;
      }
      self(self, u + 1, bad + added);
    }
  };
  search(search, 0, 0);
  best.value = static_cast<double>(best_good) / total;
  return best;
}

UlcInstance planted_instance(int vertices, int degree, int labels, double delta, std::uint64_t seed) {
  if (vertices < 2 || degree < 1 || degree >= vertices) throw DomainError("planted_instance: need 1 <= degree < |V|");
  if (degree % 2 == 1 && vertices % 2 == 1) throw DomainError("planted_instance: odd degree needs an even |V|");
  if (2 * (degree / 2) >= vertices) {
    throw DomainError("planted_instance: degree too large for a simple circulant graph");
  }
  if (labels < 1 || labels > kMaxLabels) throw DomainError("planted_instance: need 1 <= L <= 32");
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("planted_instance: delta must lie in [0,1]");

  Rng rng(seed);
  Labelling hidden(static_cast<std::size_t>(vertices));
  for (auto& x : hidden) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(labels)));

  std::vector<UlcEdge> edges;
  for (int i = 0; i < vertices; ++i) {
    for (int off = 1; off <= degree / 2; ++off) edges.push_back({i, (i + off) % vertices, {}});
  }
  if (degree % 2 == 1) {
    for (int i = 0; i < vertices / 2; ++i) edges.push_back({i, i + vertices / 2, {}});
  }

  for (auto& e : edges) {
    e.perm = random_permutation(rng, labels);
    const int want = hidden[static_cast<std::size_t>(e.u)];
    const int from = hidden[static_cast<std::size_t>(e.v)];
    const auto it = std::find(e.perm.begin(), e.perm.end(), want);
    std::swap(*it, e.perm[static_cast<std::size_t>(from)]);
  }
  const auto corrupt = static_cast<std::size_t>(std::llround(delta * static_cast<double>(edges.size())));
  std::vector<std::size_t> order(edges.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  for (std::size_t k = 0; k < corrupt; ++k) {
    std::swap(order[k], order[k + rng.below(order.size() - k)]);
    edges[order[k]].perm = random_permutation(rng, labels);
  }
  return UlcInstance(labels, vertices, std::move(edges), hidden);
}

int arity(Predicate p) { return p == Predicate::Equal2 ? 2 : 3; }

std::string predicate_name(Predicate p) {
  switch (p) {
    case Predicate::Equal2: return "eq";
    case Predicate::Nae3: return "nae";
    case Predicate::Xor3: return "xor3";
  }
  return "";
}

Predicate parse_predicate(const std::string& name) {
  if (name == "eq") return Predicate::Equal2;
  if (name == "nae") return Predicate::Nae3;
  if (name == "xor3") return Predicate::Xor3;
  throw ParseError("unknown predicate '" + name + "'");
}

bool accepts(Predicate p, std::span<const int> v) {
  switch (p) {
    case Predicate::Equal2: return v[0] == v[1];
    case Predicate::Nae3: return !(v[0] == v[1] && v[1] == v[2]);
    case Predicate::Xor3: return v[0] * v[1] * v[2] == 1;
  }
  return false;
}

RealTable predicate_table(Predicate p) {
  const int k = arity(p);
  return RealTable::from_function(k, [&](Mask x) {
    int v[3];
    for (int i = 0; i < k; ++i) v[i] = (x >> i & 1u) ? -1 : 1;
    return accepts(p, std::span<const int>(v, static_cast<std::size_t>(k))) ? 1.0 : 0.0;
  });
}

double phi_star(const RealTable& phi, std::span<const double> y) {
  if (phi.n() > kMaxPredicateArity) throw DomainError("phi_star: arity above 8");
  if (y.size() != static_cast<std::size_t>(phi.n())) throw DomainError("phi_star: wrong number of arguments");
  for (double v : y) {
    if (!(v >= -1.0 && v <= 1.0)) throw DomainError("phi_star: argument outside [-1,1]");
  }
  return multilinear_at(wht(phi), y);
}

double phi_star(Predicate p, std::span<const double> y) { return phi_star(predicate_table(p), y); }

Predicate Tester::predicate() const {
  switch (kind) {
    case TesterKind::Kkmo: return Predicate::Equal2;
    case TesterKind::Nae: return Predicate::Nae3;
    default: return Predicate::Xor3;
  }
}

double Tester::completeness() const {
  switch (kind) {
    case TesterKind::Kkmo: return 0.5 + 0.5 * param;
    case TesterKind::ThreeXor: return 1.0 - 0.5 * param;
    default: return 1.0;
  }
}

std::string Tester::to_string() const {
  switch (kind) {
    case TesterKind::Nae: return "nae";
    case TesterKind::Kkmo: return "kkmo:" + format_double(param);
    case TesterKind::ThreeXor: return "3xor:" + format_double(param);
    case TesterKind::Blr: return "blr";
  }
  return "";
}

Tester parse_tester(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  auto param = [&]() {
    if (colon == std::string::npos) throw ParseError("tester '" + name + "' needs a parameter, e.g. " + name + ":0.5");
    const std::string rest = text.substr(colon + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc{} || ptr != rest.data() + rest.size()) throw ParseError("bad tester parameter '" + rest + "'");
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("tester parameter must lie in [0,1]");
    return v;
  };
  if (name == "nae" && colon == std::string::npos) return {TesterKind::Nae, 0.0};
  if (name == "blr" && colon == std::string::npos) return {TesterKind::Blr, 0.0};
  if (name == "kkmo") return {TesterKind::Kkmo, param()};
  if (name == "3xor" || name == "threexor") return {TesterKind::ThreeXor, param()};
  throw ParseError("unknown tester '" + text + "' (nae, blr, kkmo:<rho>, 3xor:<delta>)");
}

VarRef make_ref(int vertex, Mask x, int labels, bool folded) {
  if (folded && (x & 1u)) return {vertex, ~x & full_mask(labels), -1};
  return {vertex, x, 1};
}

Mask compose(Mask x, std::span<const int> perm) {
  Mask out = 0;
  for (std::size_t j = 0; j < perm.size(); ++j) out |= ((x >> perm[j]) & 1u) << j;
  return out;
}

void to_json(nlohmann::json& j, const CspInstance& c) {
  nlohmann::json constraints = nlohmann::json::array();
  for (const auto& con : c.constraints) {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& r : con.vars) vars.push_back({r.vertex, r.mask, r.sign});
    constraints.push_back({{"vars", vars}});
  }
  j = nlohmann::json{{"k", c.k()},         {"predicate", predicate_name(c.predicate)},
                     {"L", c.labels},      {"vertices", c.vertices},
                     {"tester", c.tester}, {"folded", c.folded},
                     {"seed", c.seed},     {"constraints", constraints}};
}

CspInstance csp_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("csp json: expected an object");
  CspInstance c;
  c.predicate = parse_predicate(json_get<std::string>(j, "predicate"));
  if (json_get<int>(j, "k") != c.k()) throw ParseError("csp json: k does not match the predicate arity");
  c.labels = json_get<int>(j, "L");
  c.vertices = json_get<int>(j, "vertices");
  if (c.labels < 1 || c.labels > kMaxLabels || c.vertices < 1) throw ParseError("csp json: bad L or vertex count");
  c.tester = j.value("tester", std::string());
  c.folded = j.value("folded", false);
  c.seed = j.value("seed", std::uint64_t{0});
  for (const auto& con : json_get<nlohmann::json>(j, "constraints")) {
    const auto vars = json_get<std::vector<std::vector<long long>>>(con, "vars");
    if (vars.size() != static_cast<std::size_t>(c.k())) throw ParseError("csp json: constraint arity mismatch");
    Constraint out;
    for (const auto& v : vars) {
      if (v.size() != 3) throw ParseError("csp json: variable reference must be [vertex, mask, sign]");
      if (v[0] < 0 || v[0] >= c.vertices) throw ParseError("csp json: vertex out of range");
      if (v[1] < 0 || static_cast<unsigned long long>(v[1]) > full_mask(c.labels)) {
        throw ParseError("csp json: mask out of range");
      }
      if (v[2] != 1 && v[2] != -1) throw ParseError("csp json: sign must be +1 or -1");
      out.vars.push_back({static_cast<int>(v[0]), static_cast<Mask>(v[1]), static_cast<int>(v[2])});
    }
    c.constraints.push_back(std::move(out));
  }
  if (c.constraints.empty()) throw ParseError("csp json: no constraints");
  return c;
}

CspInstance reduce(const UlcInstance& psi, const Tester& tester, std::uint64_t m, std::uint64_t seed, bool folded) {
  const int labels = psi.labels();
  if (labels > kMaxReductionLabels) throw CapacityError("reduce: L above 10 makes 2^L tables per vertex too large");
  if (m == 0) throw DomainError("reduce: need at least one constraint");
  CspInstance c;
  c.labels = labels;
  c.vertices = psi.vertices();
  c.tester = tester.to_string();
  c.predicate = tester.predicate();
  c.folded = folded;
  c.seed = seed;
  c.constraints.reserve(m);

  const int k = tester.arity();
  Rng rng(seed);
  std::uint64_t q[3] = {0, 0, 0};
  for (std::uint64_t t = 0; t < m; ++t) {
    const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(psi.vertices())));
    const Neighbor* nb[3];
    for (int i = 0; i < k; ++i) {
      nb[i] = &psi.neighbors(u)[rng.below(static_cast<std::uint64_t>(psi.degree()))];
    }
    switch (tester.kind) {
      case TesterKind::Kkmo:
        sample_uniform(rng, {&q[0], 1}, labels);
        sample_correlated(rng, {&q[0], 1}, {&q[1], 1}, labels, tester.param);
        break;
      case TesterKind::Nae:
        q[0] = q[1] = q[2] = 0;
        for (int i = 0; i < labels; ++i) {
          const std::uint64_t triple = rng.below(6) + 1;
          for (int r = 0; r < 3; ++r) q[r] |= ((triple >> r) & 1u) << i;
        }
        break;
      case TesterKind::ThreeXor: {
        std::uint64_t x = 0;
        sample_uniform(rng, {&x, 1}, labels);
        sample_uniform(rng, {&q[1], 1}, labels);
        q[2] = x ^ q[1];
        sample_correlated(rng, {&x, 1}, {&q[0], 1}, labels, 1.0 - tester.param);
        break;
      }
      case TesterKind::Blr:
        sample_uniform(rng, {&q[0], 1}, labels);
        sample_uniform(rng, {&q[1], 1}, labels);
        q[2] = q[0] ^ q[1];
        break;
    }
    Constraint con;
    for (int i = 0; i < k; ++i) {
      con.vars.push_back(make_ref(nb[i]->vertex, compose(static_cast<Mask>(q[i]), nb[i]->perm), labels, folded));
    }
    c.constraints.push_back(std::move(con));
  }
  return c;
}

double Assignment::read(const VarRef& ref) const {
  if (ref.vertex < 0 || static_cast<std::size_t>(ref.vertex) >= tables.size()) {
    throw DomainError("assignment is missing a vertex table");
  }
  const auto& t = tables[static_cast<std::size_t>(ref.vertex)];
  if (const auto* b = std::get_if<TruthTable>(&t)) return ref.sign * (*b)(ref.mask);
  return ref.sign * std::get<RealTable>(t)[ref.mask];
}

Assignment make_assignment(int labels, std::vector<VertexTable> tables) {
  Assignment a{labels, {}};
  for (auto& t : tables) {
    if (auto* r = std::get_if<RealTable>(&t)) {
      if (r->n() != labels) throw DomainError("assignment table has the wrong number of variables");
      std::vector<double> v(r->values().begin(), r->values().end());
      for (double& x : v) x = std::clamp(x, -1.0, 1.0);
      a.tables.emplace_back(RealTable(labels, std::move(v)));
    } else {
      if (std::get<TruthTable>(t).n() != labels) throw DomainError("assignment table has the wrong number of variables");
      a.tables.push_back(std::move(t));
    }
  }
  return a;
}

void to_json(nlohmann::json& j, const Assignment& a) {
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : a.tables) {
    if (const auto* b = std::get_if<TruthTable>(&t)) {
      std::string payload;
      for (std::size_t x = 0; x < b->size(); ++x) payload.push_back(b->bit(static_cast<Mask>(x)) ? '1' : '0');
      tables.push_back({{"kind", "bool"}, {"payload", payload}});
    } else {
      const auto values = std::get<RealTable>(t).values();
      tables.push_back({{"kind", "real"}, {"values", std::vector<double>(values.begin(), values.end())}});
    }
  }
  j = nlohmann::json{{"L", a.labels}, {"tables", tables}};
}

Assignment assignment_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("assignment json: expected an object");
  const int labels = json_get<int>(j, "L");
  if (labels < 1 || labels > kMaxTableVars) throw ParseError("assignment json: bad L");
  std::vector<VertexTable> tables;
  for (const auto& t : json_get<nlohmann::json>(j, "tables")) {
    const auto kind = json_get<std::string>(t, "kind");
    if (kind == "bool") {
      const std::string text = "bfn 1\nn " + std::to_string(labels) + "\nkind bool\n" +
                               json_get<std::string>(t, "payload") + "\n";
      tables.emplace_back(std::get<TruthTable>(parse_function(text)));
    } else if (kind == "real") {
      auto values = json_get<std::vector<double>>(t, "values");
      if (values.size() != (std::size_t{1} << labels)) throw ParseError("assignment json: real table has the wrong size");
      tables.emplace_back(RealTable(labels, std::move(values)));
    } else {
      throw ParseError("assignment json: kind must be bool or real");
    }
  }
  return make_assignment(labels, std::move(tables));
}

Assignment dictator_assignment(const UlcInstance& psi, const Labelling& l) {
  check_labelling(l, psi.vertices(), psi.labels());
  std::vector<VertexTable> tables;
  for (int x : l) tables.emplace_back(dictator(x + 1, psi.labels()));
  return make_assignment(psi.labels(), std::move(tables));
}

Assignment constant_assignment(int labels, int vertices) {
  return make_assignment(labels, std::vector<VertexTable>(static_cast<std::size_t>(vertices), TruthTable(labels)));
}

Assignment random_assignment(int labels, int vertices, std::uint64_t seed) {
  std::vector<VertexTable> tables;
  for (int v = 0; v < vertices; ++v) tables.emplace_back(random_table(mix_seed(seed, static_cast<std::uint64_t>(v)), labels));
  return make_assignment(labels, std::move(tables));
}

McReport csp_value(const CspInstance& c, const Assignment& a, std::optional<McParams> mc) {
  check_assignment(a, c.labels, c.vertices);
  const Spectrum phi = wht(predicate_table(c.predicate));
  const auto k = static_cast<std::size_t>(c.k());
  auto score = [&](const Constraint& con) {
    double y[3];
    int b[3];
    bool boolean = true;
    for (std::size_t i = 0; i < k; ++i) {
      y[i] = a.read(con.vars[i]);
      b[i] = y[i] > 0.0 ? 1 : -1;
      boolean = boolean && (y[i] == 1.0 || y[i] == -1.0);
    }
    if (boolean) return accepts(c.predicate, std::span<const int>(b, k)) ? 1.0 : 0.0;
    return multilinear_at(phi, std::span<const double>(y, k));
  };
  MeanAccumulator acc;
  if (!mc) {
    for (const auto& con : c.constraints) acc.add(score(con));
    return acc.report(c.seed);
  }
  check_samples(*mc);
  Rng rng(mc->seed);
  for (std::uint64_t t = 0; t < mc->samples; ++t) acc.add(score(c.constraints[rng.below(c.constraints.size())]));
  return acc.report(mc->seed);
}

double kkmo_expected_value(const UlcInstance& psi, const Assignment& a, double rho, bool folded) {
  check_rho(rho, 0.0, 1.0);
  const int labels = psi.labels();
  if (labels > kMaxExactKkmoLabels) throw CapacityError("kkmo_expected_value: L above 6");
  check_assignment(a, labels, psi.vertices());
  const std::size_t size = std::size_t{1} << labels;

  std::vector<double> by_distance(static_cast<std::size_t>(labels) + 1);
  for (int d = 0; d <= labels; ++d) {
    by_distance[static_cast<std::size_t>(d)] = edge_weight(0, d == 0 ? 0 : (Mask{1} << d) - 1, rho, labels);
  }

  double total = 0.0;
  for (int u = 0; u < psi.vertices(); ++u) {
    // Composed tables of every neighbour, then T_rho of each.
    std::vector<std::vector<double>> composed;
    std::vector<std::vector<double>> smoothed;
    for (const auto& nb : psi.neighbors(u)) {
      std::vector<double> vals(size);
      for (std::size_t x = 0; x < size; ++x) {
        vals[x] = a.read(make_ref(nb.vertex, compose(static_cast<Mask>(x), nb.perm), labels, folded));
      }
      std::vector<double> sm(size, 0.0);
      for (std::size_t x = 0; x < size; ++x) {
        for (std::size_t y = 0; y < size; ++y) {
          sm[x] += by_distance[static_cast<std::size_t>(std::popcount(x ^ y))] * vals[y];
        }
      }
      composed.push_back(std::move(vals));
      smoothed.push_back(std::move(sm));
    }
    // phi*(a, b) = 1/2 + ab/2 for equality.
    double acc = 0.0;
    for (const auto& f : composed) {
      for (const auto& g : smoothed) {
        double corr = 0.0;
        for (std::size_t x = 0; x < size; ++x) corr += f[x] * g[x];
        acc += 0.5 + 0.5 * corr;
      }
    }
    total += acc / static_cast<double>(composed.size() * composed.size());
  }
  return total / psi.vertices();
}

RealTable composed_average(const UlcInstance& psi, const Assignment& a, int u, bool folded) {
  check_assignment(a, psi.labels(), psi.vertices());
  const int labels = psi.labels();
  const auto& nbrs = psi.neighbors(u);
  return RealTable::from_function(labels, [&](Mask x) {
    double total = 0.0;
    for (const auto& nb : nbrs) total += a.read(make_ref(nb.vertex, compose(x, nb.perm), labels, folded));
    return total / static_cast<double>(nbrs.size());
  });
}

DecodeReport decode_labelling(const UlcInstance& psi, const Assignment& a, double gamma, std::uint64_t seed,
                              bool folded) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("decode_labelling: gamma must lie in (0,1)");
  check_assignment(a, psi.labels(), psi.vertices());
  const int labels = psi.labels();
  DecodeReport out;
  out.gamma = gamma;
  out.j_bound = 1.0 / (gamma * gamma);
  out.j_prime_bound = 2.0 / (gamma * gamma);
  for (int u = 0; u < psi.vertices(); ++u) {
    DecodedVertex dv;
    const auto g_inf = noisy_influences(wht(composed_average(psi, a, u, folded)), 1.0 - gamma);
    const RealTable f = RealTable::from_function(labels, [&](Mask x) { return a.read(make_ref(u, x, labels, folded)); });
    const auto f_inf = noisy_influences(wht(f), 1.0 - gamma);
    for (int i = 0; i < labels; ++i) {
      if (g_inf[static_cast<std::size_t>(i)] >= gamma) dv.j.push_back(i);
      if (f_inf[static_cast<std::size_t>(i)] >= gamma / 2.0) dv.j_prime.push_back(i);
    }
    std::set<int> pool(dv.j.begin(), dv.j.end());
    pool.insert(dv.j_prime.begin(), dv.j_prime.end());
    if (!pool.empty()) {
      Rng rng(seed, static_cast<std::uint64_t>(u));
      dv.label = *std::next(pool.begin(), static_cast<long>(rng.below(pool.size())));
    }
    if (static_cast<double>(dv.j.size()) > out.j_bound + 1e-9 ||
        static_cast<double>(dv.j_prime.size()) > out.j_prime_bound + 1e-9) {
      ++out.bound_violations;
    }
    out.labelling.push_back(dv.label);
    out.vertices.push_back(std::move(dv));
  }
  out.value = psi.value(out.labelling);
  return out;
}

}  // namespace bfa
