#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfa/bfn.hpp"
#include "bfa/error.hpp"
#include "bfa/family.hpp"
#include "bfa/format.hpp"
#include "bfa/gaussian.hpp"
#include "bfa/inequalities.hpp"
#include "bfa/invariance.hpp"
#include "bfa/operators.hpp"
#include "bfa/symmetric.hpp"
#include "bfa/testers.hpp"
#include "bfa/ulc.hpp"

namespace bfa::cli {
namespace {

using ojson = nlohmann::ordered_json;

constexpr double kFailTolerance = 1e-9;

struct Result {
  ojson doc;
  std::string text;  // preformatted TSV/CSV/JSON that replaces the generic rendering
};

struct Globals {
  bool json = false;
  bool assert_mode = false;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
};

// ---------------------------------------------------------------- rendering

std::string scalar_text(const ojson& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string flat_text(const ojson& v) {
  if (!v.is_array() && !v.is_object()) return scalar_text(v);
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + flat_text(v[i]);
    return s;
  }
  std::string s;
  bool first = true;
  for (const auto& [k, x] : v.items()) {
    s += (first ? "" : ";") + k + "=" + flat_text(x);
    first = false;
  }
  return s;
}

bool array_of_objects(const ojson& v) { return v.is_array() && !v.empty() && v[0].is_object(); }

void render_tsv(const ojson& doc, std::ostream& out, const std::string& prefix = "") {
  for (const auto& [key, v] : doc.items()) {
    const std::string name = prefix + key;
    if (array_of_objects(v)) {
      out << "# " << name << '\n';
      std::vector<std::string> cols;
      for (const auto& [c, _] : v[0].items()) cols.push_back(c);
      for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "\t" : "") << cols[c];
      out << '\n';
      for (const auto& row : v) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
          out << (c ? "\t" : "") << (row.contains(cols[c]) ? flat_text(row[cols[c]]) : "");
        }
        out << '\n';
      }
    } else if (v.is_object()) {
      render_tsv(v, out, name + ".");
    } else {
      out << name << '\t' << flat_text(v) << '\n';
    }
  }
}

// A report fails if it is asserted and has a negative margin, holds == false,
// or consistent == false.
bool has_failure(const ojson& v) {
  if (v.is_array()) {
    for (const auto& x : v) {
      if (has_failure(x)) return true;
    }
    return false;
  }
  if (!v.is_object()) return false;
  const bool asserted = !v.contains("asserted") || v["asserted"].get<bool>();
  if (asserted) {
    if (v.contains("margin") && v["margin"].is_number() && v["margin"].get<double>() < -kFailTolerance) return true;
    if (v.contains("holds") && v["holds"].is_boolean() && !v["holds"].get<bool>()) return true;
  }
  if (v.contains("consistent") && v["consistent"].is_boolean() && !v["consistent"].get<bool>()) return true;
  for (const auto& [_, x] : v.items()) {
    if (has_failure(x)) return true;
  }
  return false;
}

// ---------------------------------------------------------------- helpers

ojson mc_json(const McReport& r) {
  return ojson{{"estimate", r.estimate}, {"stderr", r.std_error}, {"samples", r.samples}, {"seed", r.seed}};
}

std::string set_string(std::uint64_t set) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < 64; ++i) {
    if (set >> i & 1u) {
      s += (first ? "" : ",") + std::to_string(i + 1);
      first = false;
    }
  }
  return s + "}";
}

ojson report_json(const InequalityReport& r) {
  ojson params = ojson::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  ojson j{{"inequality", r.inequality}, {"lhs", r.lhs},     {"rhs", r.rhs},           {"margin", r.margin},
          {"holds", r.holds},           {"asserted", r.asserted}, {"params", params}};
  if (!r.subject.empty()) j["subject"] = r.subject;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) throw ParseError("bad number '" + item + "' in list");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty list");
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// A function argument: a .bfn path, a .bfn text, or a family string. Families
// beyond the dense-table cap stay pointwise.
struct Loaded {
  std::string source;
  std::optional<AnyTable> table;
  std::optional<FamilySpec> family;

  int n() const {
    if (table) return std::visit([](const auto& t) { return t.n(); }, *table);
    return family->n;
  }
  bool large_majority() const { return !table && family->kind == FamilyKind::Majority; }
};

Loaded load(const std::string& source) {
  Loaded l{source, std::nullopt, std::nullopt};
  std::error_code ec;
  if (source.starts_with("bfn") || std::filesystem::is_regular_file(source, ec)) {
    l.table = load_function(source);
    return l;
  }
  l.family = parse_family(source);
  if (l.family->n <= kMaxTableVars) l.table = make_family(*l.family);
  return l;
}

TruthTable need_bool(const Loaded& l) {
  if (!l.table) throw CapacityError("'" + l.source + "' is beyond the dense-table cap for this operation");
  return require_boolean(*l.table);
}

RealTable need_real(const Loaded& l) {
  if (!l.table) throw CapacityError("'" + l.source + "' is beyond the dense-table cap for this operation");
  return as_real(*l.table);
}

Oracle oracle_of(const Loaded& l) {
  if (l.table) return Oracle::of(require_boolean(*l.table));
  return Oracle::of(*l.family);
}

MultilinearPoly load_poly(const std::string& text) {
  if (text.starts_with("pairwise:")) {
    int n = 0;
    const std::string rest = text.substr(9);
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (ec != std::errc{} || ptr != rest.data() + rest.size()) throw ParseError("bad polynomial '" + text + "'");
    return pairwise_sum(n);
  }
  return MultilinearPoly::from_spectrum(wht(need_real(load(text))));
}

ojson outcome_json(const TestOutcome& t) {
  ojson j{{"test", t.test}};
  for (const auto& [k, v] : t.params) j[k] = v;
  if (t.exact_accept) j["exact"] = *t.exact_accept;
  if (t.mc) j["mc"] = mc_json(*t.mc);
  if (t.exact_accept && t.mc) j["consistent"] = t.consistent();
  return j;
}

// ---------------------------------------------------------------- commands

class Cli {
 public:
  Cli() : app_("Fourier analysis of boolean functions", "bfa") {
    app_.set_help_all_flag("--help-all", "Expand all help");
    app_.require_subcommand(1);
    app_.fallthrough();
    app_.add_flag("--json", g_.json, "JSON output instead of TSV");
    app_.add_flag("--assert", g_.assert_mode, "Exit 1 if any asserted report row fails");
    seed_opt_ = app_.add_option("--seed", g_.seed, "Seed (default: $BFA_SEED or 1)");
    app_.add_option("--samples", g_.samples, "Monte-Carlo sample count")->capture_default_str();

    add_fourier();
    add_influence();
    add_stability();
    add_test();
    add_gaussian();
    add_ineq();
    add_clt();
    add_ulc();
  }

  int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
      app_.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out << app_.help();
      return 0;
    } catch (const CLI::CallForAllHelp& e) {
      out << app_.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
    try {
      if (seed_opt_->count() == 0) {
        if (const char* env = std::getenv("BFA_SEED"); env && *env) {
          const std::string text(env);
          const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), g_.seed);
          if (ec != std::errc{} || ptr != text.data() + text.size()) throw ParseError("BFA_SEED is not an integer");
        }
      }
      if (!action_) throw ParseError("missing subcommand");
      Result r = action_();
      if (r.doc.is_object() && !r.doc.contains("seed")) r.doc["seed"] = g_.seed;
      if (!r.text.empty() && !g_.json) {
        out << r.text;
      } else if (g_.json) {
        out << r.doc.dump(2) << '\n';
      } else {
        render_tsv(r.doc, out);
      }
      return g_.assert_mode && has_failure(r.doc) ? 1 : 0;
    } catch (const ParseError& e) {
      err << "parse error: " << e.what() << "\n";
    } catch (const CapacityError& e) {
      err << "capacity error: " << e.what() << "\n";
    } catch (const DomainError& e) {
      err << "domain error: " << e.what() << "\n";
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
    }
    return 2;
  }

 private:
  McParams mc() const { return {g_.samples, g_.seed}; }

  CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& help, std::function<Result()> fn) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([this, fn = std::move(fn)] { action_ = fn; });
    return sub;
  }

  CLI::App* group(const std::string& name, const std::string& help) {
    CLI::App* sub = app_.add_subcommand(name, help);
    sub->require_subcommand(1);
    sub->fallthrough();
    return sub;
  }

  void add_fourier() {
    auto* sub = leaf(&app_, "fourier", "Fourier spectrum and summary", [this] {
      const Loaded l = load(fn_);
      ojson doc{{"command", "fourier"}, {"fn", fn_}, {"n", l.n()}};
      if (l.large_majority()) {
        const SymmetricSpectrum s = majority_spectrum(l.n());
        ojson levels = ojson::array();
        for (int k = 0; k <= s.n(); ++k) {
          if (s.level_weight(k) > tol_) {
            levels.push_back({{"level", k}, {"coefficient", s.coefficient(k)}, {"level_weight", s.level_weight(k)}});
          }
        }
        doc["levels"] = levels;
        doc["mean"] = s.mean();
        return Result{doc, ""};
      }
      const Spectrum s = wht(need_real(l));
      const SpectralSummary sum = summary(s);
      ojson coeffs = ojson::array();
      for (std::size_t set = 0; set < s.size(); ++set) {
        const double c = s.coeffs()[set];
        if (std::abs(c) > tol_) coeffs.push_back({{"set", set_string(set)}, {"mask", set}, {"value", c}});
      }
      doc["coefficients"] = coeffs;
      doc["mean"] = sum.mean;
      doc["variance"] = sum.variance;
      doc["degree"] = sum.degree;
      doc["level_weights"] = sum.level_weights;
      return Result{doc, ""};
    });
    sub->add_option("--fn", fn_, "Function: family string or .bfn file")->required();
    sub->add_option("--tol", tol_, "Hide coefficients with |value| <= tol")->capture_default_str();
  }

  void add_influence() {
    auto* sub = leaf(&app_, "influence", "Influences and total influence", [this] {
      const Loaded l = load(fn_);
      ojson doc{{"command", "influence"}, {"fn", fn_}, {"n", l.n()}};
      if (rho_opt_->count()) doc["rho"] = rho_;
      if (l.large_majority()) {
        const SymmetricSpectrum s = majority_spectrum(l.n());
        doc["influence_each"] = s.influence();
        doc["total"] = s.total_influence();
        if (rho_opt_->count()) {
          check_rho(rho_, 0.0, 1.0);
          doc["noisy_each"] = s.noisy_influence(rho_);
        }
        return Result{doc, ""};
      }
      const RealTable f = need_real(l);
      const Spectrum s = wht(f);
      const InfluenceProfile spectral = influences(s);
      const InfluenceProfile direct = std::holds_alternative<TruthTable>(*l.table)
                                          ? influences(std::get<TruthTable>(*l.table))
                                          : influences(f);
      std::vector<double> noisy;
      if (rho_opt_->count()) noisy = noisy_influences(s, rho_);
      ojson rows = ojson::array();
      for (int i = 0; i < l.n(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        ojson row{{"var", i + 1}, {"influence", direct.per_var[k]}, {"spectral", spectral.per_var[k]}};
        if (!noisy.empty()) row["noisy"] = noisy[k];
        rows.push_back(row);
      }
      doc["variables"] = rows;
      doc["total"] = direct.total;
      doc["total_spectral"] = total_influence(s);
      return Result{doc, ""};
    });
    sub->add_option("--fn", fn_, "Function")->required();
    rho_opt_ = sub->add_option("--rho", rho_, "Also report noisy influences Inf^(rho)");
  }

  void add_stability() {
    auto* sub = leaf(&app_, "stability", "Noise stability Stab_rho", [this] {
      const Loaded l = load(fn_);
      ojson doc{{"command", "stability"}, {"fn", fn_}, {"rho", rho_}};
      std::optional<double> exact;
      if (l.large_majority()) {
        check_rho(rho_);
        exact = majority_spectrum(l.n()).stability(rho_);
      } else if (l.table) {
        exact = stability(wht(need_real(l)), rho_);
      }
      if (exact) doc["exact"] = *exact;
      if (use_mc_ || !exact) {
        const McReport r = stability_mc(oracle_of(l), rho_, mc());
        doc["mc"] = mc_json(r);
        if (exact) doc["consistent"] = agrees(*exact, r);
      }
      return Result{doc, ""};
    });
    sub->add_option("--fn", fn_, "Function")->required();
    sub->add_option("--rho", rho_, "Correlation in [-1,1]")->required();
    sub->add_flag("--mc", use_mc_, "Also run the Monte-Carlo estimator");
  }

  void add_test() {
    CLI::App* test = group("test", "Property testers");
    auto mode_for = [this](const Loaded& l, bool exact_available) {
      TestMode m;
      m.exact = exact_ || (!use_mc_ && exact_available);
      if (use_mc_ || !m.exact) m.mc = mc();
      if (m.exact && !exact_available) throw CapacityError("exact mode needs a dense table or a majority spectrum");
      (void)l;
      return m;
    };
    auto tester_opts = [this](CLI::App* sub) {
      sub->add_option("--fn", fn_, "Function")->required();
      sub->add_flag("--exact", exact_, "Exact spectral acceptance");
      sub->add_flag("--mc", use_mc_, "Monte-Carlo run of the protocol");
    };

    auto* blr_cmd = leaf(test, "blr", "BLR linearity test", [this, mode_for] {
      const Loaded l = load(fn_);
      const TestMode m = mode_for(l, l.table.has_value());
      TestOutcome t{"blr", {}, std::nullopt, std::nullopt};
      if (m.exact) t.exact_accept = blr_accept(wht(need_real(l)));
      if (m.mc) t.mc = blr_mc(oracle_of(l), *m.mc);
      ojson doc = outcome_json(t);
      doc["fn"] = fn_;
      if (l.table) {
        const NearestLinear near = nearest_linear(need_bool(l));
        doc["nearest_linear"] = set_string(near.set);
        doc["distance"] = near.dist;
      }
      return Result{doc, ""};
    });
    tester_opts(blr_cmd);

    auto* nae_cmd = leaf(test, "nae", "NAE (Condorcet) test", [this, mode_for] {
      const Loaded l = load(fn_);
      const TestMode m = mode_for(l, l.table.has_value() || l.large_majority());
      TestOutcome t{"nae", {}, std::nullopt, std::nullopt};
      if (m.exact) t.exact_accept = l.table ? nae_accept(wht(need_real(l))) : nae_accept(majority_spectrum(l.n()));
      if (m.mc) t.mc = nae_mc(oracle_of(l), *m.mc);
      ojson doc = outcome_json(t);
      doc["fn"] = fn_;
      return Result{doc, ""};
    });
    tester_opts(nae_cmd);

    auto* kkmo_cmd = leaf(test, "kkmo", "rho-noise dictator test", [this, mode_for] {
      const Loaded l = load(fn_);
      const TestMode m = mode_for(l, l.table.has_value() || l.large_majority());
      TestOutcome t{"kkmo", {{"rho", rho_}}, std::nullopt, std::nullopt};
      if (m.exact) {
        t.exact_accept = l.table ? kkmo_accept(wht(need_real(l)), rho_) : kkmo_accept(majority_spectrum(l.n()), rho_);
      }
      if (m.mc) t.mc = kkmo_mc(oracle_of(l), rho_, *m.mc);
      ojson doc = outcome_json(t);
      doc["fn"] = fn_;
      doc["dictator"] = 0.5 + 0.5 * rho_;
      return Result{doc, ""};
    });
    tester_opts(kkmo_cmd);
    kkmo_cmd->add_option("--rho", rho_, "Correlation in [0,1]")->required();

    auto* xor_cmd = leaf(test, "3xor", "3XOR_delta test", [this, mode_for] {
      const Loaded l = load(fn_);
      const TestMode m = mode_for(l, l.table.has_value() || l.large_majority());
      TestOutcome t{"3xor", {{"delta", delta_}}, std::nullopt, std::nullopt};
      if (m.exact) {
        t.exact_accept =
            l.table ? threexor_accept(wht(need_real(l)), delta_) : threexor_accept(majority_spectrum(l.n()), delta_);
      }
      if (m.mc) t.mc = threexor_mc(oracle_of(l), delta_, *m.mc);
      ojson doc = outcome_json(t);
      doc["fn"] = fn_;
      doc["dictator"] = 1.0 - 0.5 * delta_;
      return Result{doc, ""};
    });
    tester_opts(xor_cmd);
    xor_cmd->add_option("--delta", delta_, "Noise in [0,1]")->required();

    auto* decode_cmd = leaf(test, "decode", "Local decoding of a near-linear function", [this] {
      const TruthTable f = need_bool(load(fn_));
      const NearestLinear near = nearest_linear(f);
      const int value = local_decode(f, point_, trials_, g_.seed);
      ojson doc{{"test", "decode"}, {"fn", fn_},     {"x", point_},
                {"trials", trials_}, {"value", value}, {"nearest_linear", set_string(near.set)},
                {"distance", near.dist}, {"linear_value", chi(near.set, point_)}};
      return Result{doc, ""};
    });
    decode_cmd->add_option("--fn", fn_, "Function")->required();
    decode_cmd->add_option("--x", point_, "Input bitmask")->required();
    decode_cmd->add_option("--trials", trials_, "Odd number of probes")->capture_default_str();
  }

  void add_gaussian() {
    CLI::App* gauss = group("gaussian", "Gaussian experiments");
    auto* shep = leaf(gauss, "sheppard", "Pr[sgn G != sgn H] vs arccos(rho)/pi", [this] {
      const double exact = sheppard(rho_);
      const McReport r = sheppard_mc(rho_, mc());
      return Result{ojson{{"command", "sheppard"}, {"rho", rho_}, {"exact", exact}, {"mc", mc_json(r)},
                          {"consistent", agrees(exact, r)}},
                    ""};
    });
    shep->add_option("--rho", rho_, "Correlation in [-1,1]")->required();

    auto* rs = leaf(gauss, "rs", "Rotation sensitivity and the Kindler-O'Donnell bound", [this] {
      GaussianPredicate f;
      bool is_halfspace = false;
      if (!halfspace_.empty()) {
        f = halfspace(parse_list(halfspace_));
        is_halfspace = true;
      } else if (!fn_.empty()) {
        f = sign_of(load_poly(fn_));
      } else {
        throw ParseError("rs needs --halfspace or --fn");
      }
      ojson doc{{"command", "rs"}, {"predicate", is_halfspace ? halfspace_ : fn_}};
      if (ell_opt_->count()) {
        const KoReport k = ko_bound_check(f, ell_, mc());
        doc["ell"] = k.ell;
        doc["delta"] = k.delta;
        doc["rs"] = mc_json(k.rs);
        doc["bound"] = k.bound;
        doc["mean"] = mc_json(k.mean);
        doc["balanced"] = k.balanced;
        // Slack after the 4-stderr allowance; negative means the bound failed.
        doc["margin"] = k.margin + 4.0 * k.rs.std_error;
        doc["holds"] = k.holds;
      } else {
        const McReport r = rotation_sensitivity_mc(f, delta_, mc());
        doc["delta"] = delta_;
        doc["rs"] = mc_json(r);
        if (is_halfspace) {
          doc["exact"] = delta_ / std::numbers::pi;
          doc["consistent"] = agrees(delta_ / std::numbers::pi, r);
        }
      }
      return Result{doc, ""};
    });
    rs->add_option("--halfspace", halfspace_, "Comma-separated weights a for sgn(a.x)");
    rs->add_option("--fn", fn_, "sgn of this function's multilinear form (or pairwise:n)");
    rs->add_option("--delta", delta_, "Rotation angle in [0,pi]");
    ell_opt_ = rs->add_option("--ell", ell_, "Check RS(pi/2ell) >= 1/(2ell)");

    auto* gs = leaf(gauss, "gstab", "Gaussian noise stability of a multilinear form", [this] {
      const MultilinearPoly q = load_poly(fn_);
      const double exact = gstab(q, rho_);
      ojson doc{{"command", "gstab"}, {"fn", fn_}, {"rho", rho_}, {"exact", exact}};
      if (use_mc_) {
        const McReport r = gstab_mc(q, rho_, mc());
        doc["mc"] = mc_json(r);
        doc["consistent"] = agrees(exact, r);
      }
      return Result{doc, ""};
    });
    gs->add_option("--fn", fn_, "Function or pairwise:n")->required();
    gs->add_option("--rho", rho_, "Correlation in [-1,1]")->required();
    gs->add_flag("--mc", use_mc_, "Also estimate by sampling");
  }

  void add_ineq() {
    CLI::App* ineq = group("ineq", "Inequality checks");
    auto single = [this, ineq](const std::string& name, const std::string& help,
                               std::function<std::vector<InequalityReport>(const Loaded&)> fn) {
      auto* sub = leaf(ineq, name, help, [this, fn] {
        const Loaded l = load(fn_);
        ojson rows = ojson::array();
        for (auto& r : fn(l)) {
          if (r.subject.empty()) r.subject = fn_;
          rows.push_back(report_json(r));
        }
        return Result{ojson{{"command", "ineq"}, {"reports", rows}}, ""};
      });
      sub->add_option("--fn", fn_, "Function")->required();
      return sub;
    };

    single("bonami", "E[f^4] <= 9^d E[f^2]^2", [this](const Loaded& l) {
      return std::vector{bonami_check(need_real(l), degree_)};
    })->add_option("--d", degree_, "Degree bound")->required();

    auto* hyper = single("hyper", "||T_rho f||_q <= ||f||_p", [this](const Loaded& l) {
      const double rho = hyper_rho_opt_->count() ? rho_ : (q_ == p_ ? 1.0 : std::sqrt((p_ - 1.0) / (q_ - 1.0)));
      return std::vector{hypercontractivity_check(need_real(l), p_, q_, rho)};
    });
    hyper->add_option("--p", p_, "p >= 1")->capture_default_str();
    hyper->add_option("--q", q_, "q >= p")->capture_default_str();
    hyper_rho_opt_ = hyper->add_option("--rho", rho_, "Default sqrt((p-1)/(q-1))");

    single("sse", "Stab_rho(1_A) <= alpha^{2/(1+rho)}; A = inputs where f = -1", [this](const Loaded& l) {
      return std::vector{sse_check(indicator_of(need_bool(l)), sse_rho_)};
    })->add_option("--rho", sse_rho_, "rho in [0,1]")->capture_default_str();

    single("kkl", "3 * 9^{-Inf} <= sqrt(max Inf_i)", [this](const Loaded& l) {
      return std::vector{kkl_check(need_bool(l))};
    });

    single("level1", "W^1(1_A) <= alpha^2 (sqrt(2 ln(1/alpha)) + 2)^2", [this](const Loaded& l) {
      return std::vector{level1_check(indicator_of(need_bool(l)))};
    });

    single("twopi", "W^1(f) against 2/pi", [this](const Loaded& l) {
      std::vector<InequalityReport> out;
      if (l.large_majority() || (l.family && l.family->kind == FamilyKind::Majority)) {
        out.push_back(two_pi_check(majority_spectrum(l.n()), eps_));
        out.push_back(two_pi_majority(l.n()));
      } else {
        out.push_back(two_pi_check(wht(need_real(l)), eps_));
      }
      return out;
    })->add_option("--eps", eps_, "Bound on max |f^(i)|")->capture_default_str();

    auto* mist = single("mist", "Stab_rho(f) against 1 - (2/pi) arccos rho", [this](const Loaded& l) {
      std::vector<InequalityReport> out;
      if (l.large_majority() || (l.family && l.family->kind == FamilyKind::Majority)) {
        out.push_back(mist_check(majority_spectrum(l.n()), mist_rho_, eps_));
        out.push_back(mist_majority(l.n(), mist_rho_));
      } else {
        out.push_back(mist_check(wht(need_real(l)), mist_rho_, eps_));
      }
      return out;
    });
    mist->add_option("--rho", mist_rho_, "rho in [0,1]")->required();
    mist->add_option("--eps", eps_, "Influence bound")->capture_default_str();

    single("poincare", "Var(f) <= Inf(f)", [this](const Loaded& l) {
      return std::vector{poincare_check(need_bool(l))};
    });
    single("edgeiso", "2 alpha log2(1/alpha) <= Inf(f)", [this](const Loaded& l) {
      return std::vector{edge_isoperimetry_check(need_bool(l))};
    });

    auto* suite = leaf(ineq, "suite", "Exhaustive or random suite, one TSV row per function", [this] {
      SuiteConfig cfg;
      cfg.suite = suite_;
      cfg.n = suite_n_;
      cfg.count = count_;
      cfg.seed = g_.seed;
      cfg.degree = degree_;
      cfg.p = p_;
      cfg.q = q_;
      if (suite_rho_opt_->count()) cfg.rho = suite_rho_;
      const SuiteResult res = run_suite(cfg);
      std::ostringstream tsv;
      write_tsv(tsv, res.rows);
      ojson rows = ojson::array();
      for (const auto& r : res.rows) rows.push_back(report_json(r));
      ojson doc{{"command", "suite"}, {"suite", suite_}, {"n", suite_n_}, {"checked", res.rows.size()},
                {"violations", res.violations}, {"reports", rows}};
      return Result{doc, tsv.str()};
    });
    suite->add_option("--name", suite_, "bonami, hyper, sse, kkl, level1, poincare, edgeiso")->required();
    suite->add_option("--n", suite_n_, "Variables")->capture_default_str();
    suite->add_option("--count", count_, "Functions in random suites")->capture_default_str();
    suite->add_option("--d", degree_, "Degree for bonami")->capture_default_str();
    suite->add_option("--p", p_, "p for hyper")->capture_default_str();
    suite->add_option("--q", q_, "q for hyper")->capture_default_str();
    suite_rho_opt_ = suite->add_option("--rho", suite_rho_, "rho for sse/hyper");
  }

  void add_clt() {
    CLI::App* clt = group("clt", "Central limit experiments");
    auto csv_of = [this](const std::string& experiment) {
      ExperimentConfig cfg;
      cfg.experiment = experiment;
      for (double v : parse_list(ns_)) cfg.ns.push_back(static_cast<int>(v));
      cfg.mc = mc();
      cfg.t = t_;
      cfg.lambda = lambda_;
      const auto rows = run_experiment(cfg);
      std::ostringstream csv;
      write_csv(csv, rows);
      ojson list = ojson::array();
      for (const auto& r : rows) list.push_back({{"experiment", r.experiment}, {"n", r.x}, {"gap", r.gap}, {"bound", r.bound}});
      return Result{ojson{{"command", "clt"}, {"rows", list}}, csv.str()};
    };
    auto weights = [this] {
      if (!weights_.empty()) return WeightedSum(parse_list(weights_));
      return WeightedSum::equal(n_);
    };

    auto* be = leaf(clt, "be", "Berry-Esseen sup-CDF gap of a Rademacher sum", [this, csv_of, weights] {
      if (!ns_.empty()) return csv_of("be");
      const BerryEsseenReport r = berry_esseen_gap(weights(), step_);
      return Result{ojson{{"command", "be"},
                          {"gap", r.gap},
                          {"at", r.at},
                          {"epsilon", r.epsilon},
                          {"ratio", r.ratio},
                          {"tau", r.tau},
                          {"weak_reference", r.weak_bound}},
                    ""};
    });
    be->add_option("--n", n_, "Equal weights on n variables")->capture_default_str();
    be->add_option("--weights", weights_, "Comma-separated weights (normalized)");
    be->add_option("--step", step_, "Grid step")->capture_default_str();
    be->add_option("--ns", ns_, "Comma-separated n values: CSV over equal weights");

    auto* hybrid = leaf(clt, "hybrid", "|E psi(S) - E psi(G)| against M4 sum a_i^4", [this, csv_of, weights] {
      if (!ns_.empty()) return csv_of("hybrid");
      const SmoothThreshold psi(t_, lambda_);
      const HybridReport r = hybrid_smooth_gap(weights(), psi, mc());
      ojson doc{{"command", "hybrid"},  {"t", t_},           {"lambda", lambda_},
                {"rademacher", r.smooth_rademacher}, {"gaussian", r.smooth_gaussian}, {"gap", r.gap},
                {"bound", r.bound},     {"margin", r.bound - r.gap}, {"exact", r.exact}};
      if (r.mc) doc["mc"] = mc_json(*r.mc);
      return Result{doc, ""};
    });
    hybrid->add_option("--n", n_, "Equal weights on n variables")->capture_default_str();
    hybrid->add_option("--weights", weights_, "Comma-separated weights (normalized)");
    hybrid->add_option("--t", t_, "Threshold")->capture_default_str();
    hybrid->add_option("--lambda", lambda_, "Window scale")->capture_default_str();
    hybrid->add_option("--ns", ns_, "Comma-separated n values: CSV over equal weights");

    auto* inv = leaf(clt, "invariance", "Rademacher vs Gaussian sup-CDF gap of a polynomial", [this, csv_of] {
      if (!ns_.empty()) return csv_of("invariance");
      const InvarianceReport r = invariance_gap(load_poly(fn_), mc());
      return Result{ojson{{"command", "invariance"},
                          {"fn", fn_},
                          {"gap", r.gap},
                          {"tau", r.tau},
                          {"degree", r.degree},
                          {"reference", r.reference},
                          {"rademacher_exact", r.rademacher_exact},
                          {"samples", r.samples}},
                    ""};
    });
    inv->add_option("--fn", fn_, "pairwise:n or a function (variance 1)");
    inv->add_option("--ns", ns_, "Comma-separated n values: CSV over pairwise:n");

    auto* cw = leaf(clt, "cw", "Gaussian small-ball probabilities", [this] {
      const CarberyWrightReport r = carbery_wright_mc(load_poly(fn_), parse_list(eps_list_), mc(), center_);
      ojson rows = ojson::array();
      for (const auto& row : r.rows) {
        rows.push_back({{"eps", row.eps},
                        {"probability", row.probability.estimate},
                        {"stderr", row.probability.std_error},
                        {"ratio", row.ratio}});
      }
      return Result{ojson{{"command", "cw"},
                          {"fn", fn_},
                          {"degree", r.degree},
                          {"center", r.center},
                          {"rows", rows},
                          {"fitted_c", r.fitted_c},
                          {"holds", r.monotone}},
                    ""};
    });
    cw->add_option("--fn", fn_, "pairwise:n or a function (variance 1)")->required();
    cw->add_option("--eps", eps_list_, "Comma-separated radii in (0,1)")->capture_default_str();
    cw->add_option("--center", center_, "Center t")->capture_default_str();
  }

  Assignment assignment_for(int labels, int vertices, const std::optional<UlcInstance>& psi) {
    if (!assignment_path_.empty()) return assignment_from_json(read_json_file(assignment_path_));
    if (source_ == "dictator") {
      if (!psi || !psi->planted()) throw DomainError("--source dictator needs --in with a planted labelling");
      return dictator_assignment(*psi, *psi->planted());
    }
    if (source_ == "random") return random_assignment(labels, vertices, g_.seed);
    if (source_ == "constant") return constant_assignment(labels, vertices);
    throw ParseError("assignment source must be dictator, random or constant (or use --assignment)");
  }

  void add_ulc() {
    CLI::App* ulc = group("ulc", "Unique Label Cover and the long-code reduction");
    auto json_text = [](const nlohmann::json& j) { return j.dump() + "\n"; };

    auto* gen = leaf(ulc, "gen", "Planted instance (JSON)", [this, json_text] {
      const UlcInstance psi = planted_instance(vertices_, degree_ulc_, labels_, delta_, g_.seed);
      nlohmann::json j = psi;
      return Result{ojson::parse(j.dump()), json_text(j)};
    });
    gen->add_option("--vertices", vertices_, "Vertex count")->capture_default_str();
    gen->add_option("--degree", degree_ulc_, "Regular degree")->capture_default_str();
    gen->add_option("--L", labels_, "Label count")->capture_default_str();
    gen->add_option("--delta", delta_, "Fraction of corrupted edges")->capture_default_str();

    auto* opt = leaf(ulc, "opt", "Exact optimum", [this] {
      const UlcInstance psi = ulc_from_json(read_json_file(in_));
      const UlcOptimum o = ulc_brute_opt(psi);
      return Result{ojson{{"command", "opt"}, {"value", o.value}, {"method", o.method}, {"labelling", o.labelling}}, ""};
    });
    opt->add_option("--in", in_, "ULC instance JSON")->required();

    auto* red = leaf(ulc, "reduce", "Sampled long-code CSP (JSON)", [this, json_text] {
      const UlcInstance psi = ulc_from_json(read_json_file(in_));
      const CspInstance c = reduce(psi, parse_tester(tester_), m_, g_.seed, fold_);
      nlohmann::json j = c;
      return Result{ojson::parse(j.dump()), json_text(j)};
    });
    red->add_option("--in", in_, "ULC instance JSON")->required();
    red->add_option("--tester", tester_, "nae, blr, kkmo:<rho>, 3xor:<delta>")->required();
    red->add_option("--m", m_, "Constraint count")->capture_default_str();
    red->add_flag("--fold", fold_, "Fold tables over global negation");

    auto* assign = leaf(ulc, "assign", "Assignment JSON (dictator, random or constant)", [this, json_text] {
      const UlcInstance psi = ulc_from_json(read_json_file(in_));
      nlohmann::json j = assignment_for(psi.labels(), psi.vertices(), psi);
      return Result{ojson::parse(j.dump()), json_text(j)};
    });
    assign->add_option("--in", in_, "ULC instance JSON")->required();
    assign->add_option("--source", source_, "dictator, random or constant")->required();

    auto* value = leaf(ulc, "value", "Value of an assignment on a CSP", [this] {
      std::optional<UlcInstance> psi;
      if (!in_.empty()) psi = ulc_from_json(read_json_file(in_));
      ojson doc{{"command", "value"}};
      if (!expected_.empty()) {
        if (!psi) throw ParseError("--expected needs --in");
        const Tester t = parse_tester(expected_);
        if (t.kind != TesterKind::Kkmo) throw DomainError("exact expectation is available for kkmo only");
        const Assignment a = assignment_for(psi->labels(), psi->vertices(), psi);
        doc["expected"] = kkmo_expected_value(*psi, a, t.param, fold_);
        doc["completeness"] = t.completeness();
        return Result{doc, ""};
      }
      if (csp_.empty()) throw ParseError("value needs --csp (or --expected with --in)");
      const CspInstance c = csp_from_json(read_json_file(csp_));
      const Assignment a = assignment_for(c.labels, c.vertices, psi);
      const McReport r = csp_value(c, a, use_mc_ ? std::optional<McParams>(mc()) : std::nullopt);
      doc["tester"] = c.tester;
      doc["folded"] = c.folded;
      doc["constraints"] = c.constraints.size();
      doc["value"] = mc_json(r);
      if (!c.tester.empty()) {
        const Tester t = parse_tester(c.tester);
        doc["completeness"] = t.completeness();
        if (source_ == "dictator") {
          // Completeness check: value >= c - 4 stderr.
          doc["margin"] = r.estimate - t.completeness() + 4.0 * r.std_error;
        }
      }
      return Result{doc, ""};
    });
    value->add_option("--csp", csp_, "CSP instance JSON");
    value->add_option("--in", in_, "ULC instance JSON (for dictator assignments)");
    value->add_option("--assignment", assignment_path_, "Assignment JSON");
    value->add_option("--source", source_, "dictator, random or constant");
    value->add_option("--expected", expected_, "kkmo:<rho>: exact expectation over the full reduction (L <= 6)");
    value->add_flag("--fold", fold_, "Folding for --expected");
    value->add_flag("--mc", use_mc_, "Subsample constraints with --samples");

    auto* decode = leaf(ulc, "decode", "Influence decoding of a labelling", [this] {
      const UlcInstance psi = ulc_from_json(read_json_file(in_));
      const Assignment a = assignment_for(psi.labels(), psi.vertices(), psi);
      const DecodeReport r = decode_labelling(psi, a, gamma_, g_.seed, fold_);
      ojson rows = ojson::array();
      for (std::size_t u = 0; u < r.vertices.size(); ++u) {
        const auto& v = r.vertices[u];
        rows.push_back({{"vertex", u}, {"label", v.label}, {"J", v.j}, {"J_prime", v.j_prime}});
      }
      ojson doc{{"command", "decode"},       {"gamma", gamma_},         {"value", r.value},
                {"j_bound", r.j_bound},      {"j_prime_bound", r.j_prime_bound},
                {"bound_violations", r.bound_violations}, {"holds", r.bound_violations == 0},
                {"vertices", rows}};
      if (psi.planted()) doc["matches_planted"] = r.labelling == *psi.planted();
      return Result{doc, ""};
    });
    decode->add_option("--in", in_, "ULC instance JSON")->required();
    decode->add_option("--assignment", assignment_path_, "Assignment JSON");
    decode->add_option("--source", source_, "dictator, random or constant");
    decode->add_option("--gamma", gamma_, "gamma in (0,1)")->capture_default_str();
    decode->add_flag("--fold", fold_, "Read tables through folding");
  }

  CLI::App app_;
  Globals g_;
  CLI::Option* seed_opt_ = nullptr;
  std::function<Result()> action_;

  std::string fn_;
  double tol_ = 1e-12;
  double rho_ = 0.0;
  CLI::Option* rho_opt_ = nullptr;
  CLI::Option* hyper_rho_opt_ = nullptr;
  double delta_ = 0.0;
  bool exact_ = false;
  bool use_mc_ = false;
  std::uint32_t point_ = 0;
  int trials_ = 41;

  std::string halfspace_;
  int ell_ = 2;
  CLI::Option* ell_opt_ = nullptr;

  int degree_ = 2;
  double p_ = 2.0;
  double q_ = 4.0;
  double sse_rho_ = 1.0 / 3.0;
  double mist_rho_ = 0.0;
  double eps_ = 0.1;
  std::string suite_;
  int suite_n_ = 4;
  std::uint64_t count_ = 1000;
  double suite_rho_ = 0.0;
  CLI::Option* suite_rho_opt_ = nullptr;

  int n_ = 100;
  std::string weights_;
  std::string ns_;
  double step_ = 1e-3;
  double t_ = 0.0;
  double lambda_ = 0.5;
  std::string eps_list_ = "0.1,0.01";
  double center_ = 0.0;

  int vertices_ = 10;
  int degree_ulc_ = 2;
  int labels_ = 4;
  std::string in_;
  std::string csp_;
  std::string tester_;
  std::uint64_t m_ = 100000;
  bool fold_ = false;
  std::string source_;
  std::string assignment_path_;
  std::string expected_;
  double gamma_ = 0.2;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Cli cli;
  return cli.run(argc, argv, out, err);
}

}  // namespace bfa::cli
