#include "lognabla/cli.hpp"

#include "criteria.hpp"
#include "lognabla/cohom.hpp"
#include "lognabla/fixtures.hpp"
#include "lognabla/fuchs.hpp"
#include "lognabla/projector.hpp"
#include "lognabla/robba.hpp"
#include "lognabla/sigma.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace lognabla {

namespace {

struct Job {
  const JobConfig& cfg;
  PadicContext ctx;
  Json inputs = Json::object();
  Json ledger = Json::array();
  Json diagnostics = Json::array();
  bool inconclusive = false;

  void record(const std::string& stage, std::int64_t min_precision) {
    Json e;
    e["stage"] = stage;
    if (min_precision >= PadicScalar::kInfinite)
      e["min_precision"] = nullptr;
    else
      e["min_precision"] = min_precision;
    ledger.push_back(std::move(e));
  }
  void note(const std::string& s) { diagnostics.push_back(s); }
};

Json norm_json(const NormValue& v, std::uint32_t p) { return norm_to_string(v, p); }

Json norms_json(const std::vector<NormValue>& v, std::uint32_t p) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(norm_json(x, p));
  return a;
}

Json scalars_json(const std::vector<PadicScalar>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

Json polynomial_json(const PadicPolynomial& f) { return scalars_json(f.coeffs()); }

Json eta_json(const EtaNullReport& r, std::uint32_t p) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["eta"] = norm_json(r.eta, p);
  j["witness"] = norm_json(r.witness, p);
  j["index_bound"] = r.index_bound;
  j["tail_start"] = r.tail_start;
  j["first_half_max"] = norm_json(r.first_half_max, p);
  j["second_half_max"] = norm_json(r.second_half_max, p);
  j["tail_slope"] = r.tail_slope;
  j["decaying"] = r.decaying;
  j["shells"] = norms_json(r.shells, p);
  j["reason"] = r.reason;
  return j;
}

Json form_json(const LogForm& f) {
  Json a = Json::array();
  for (const auto& [key, v] : f.terms()) {
    if (v.is_zero()) continue;
    Json t;
    Json idx = Json::array();
    for (int k = 0; k < f.nvars(); ++k) idx.push_back(key.index[static_cast<std::size_t>(k)]);
    t["index"] = std::move(idx);
    t["wedge"] = key.wedge;
    t["coefficient"] = to_json(v);
    a.push_back(std::move(t));
  }
  return a;
}

Rational rational_flag(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw SchemaError("--" + flag, e.detail());
  }
}

NormValue norm_flag(const std::string& text, std::uint32_t p, const std::string& flag) {
  try {
    return parse_norm(text, p);
  } catch (const Error& e) {
    throw SchemaError("--" + flag, e.detail());
  }
}

Json read_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SchemaError("--in", "cannot open '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("--in", std::string("JSON parse error: ") + e.what());
  }
}

// Modules from --fixture (comma list) or --in (a module, or {"modules": [...]}).
std::vector<LogNablaModule> load_modules(Job& job, std::size_t want) {
  std::vector<LogNablaModule> out;
  Json echo = Json::array();
  if (!job.cfg.fixtures.empty()) {
    for (const auto& name : job.cfg.fixtures) {
      try {
        out.push_back(fixture(name, job.ctx));
      } catch (const Error& e) {
        throw SchemaError("--fixture", e.detail());
      }
      echo.push_back(name);
    }
    job.inputs["fixtures"] = echo;
  } else if (!job.cfg.in.empty()) {
    Json j = read_input(job.cfg.in);
    if (j.is_object() && j.contains("modules")) {
      const Json& ms = j["modules"];
      if (!ms.is_array()) throw SchemaError("/modules", "expected an array");
      for (std::size_t k = 0; k < ms.size(); ++k) out.push_back(module_from_json(ms[k], "/modules/" + std::to_string(k)));
    } else {
      out.push_back(module_from_json(j, ""));
    }
  } else {
    throw SchemaError("--fixture", "a module is required: pass --fixture or --in");
  }
  if (out.size() != want)
    throw SchemaError(job.cfg.fixtures.empty() ? "/modules" : "--fixture",
                      "expected " + std::to_string(want) + " module(s), got " + std::to_string(out.size()));
  Json mods = Json::array();
  for (const auto& m : out) mods.push_back(to_json(m));
  job.inputs["modules"] = std::move(mods);
  return out;
}

// Give an exact module the bounded window required by probe-based solvers.
LogNablaModule windowed(Job& job, const LogNablaModule& e) {
  if (e.window().bounded()) return e;
  Window w = e.window();
  for (int j = 0; j < w.n; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    w.lo[jj] = e.intervals()[jj].contains_zero() ? 0 : -job.cfg.window;
    w.hi[jj] = job.cfg.window;
  }
  job.note("exact module placed on window " + to_json(w).dump());
  return LogNablaModule(e.context(), e.rank(), e.intervals(), w, e.matrices());
}

NormValue outer_radius(const LogNablaModule& e, int j) {
  const auto& iv = e.intervals().at(static_cast<std::size_t>(j));
  return iv.upper ? *iv.upper : NormValue::one();
}

std::vector<PadicScalar> scalars_from_flags(const Job& job, const std::vector<std::string>& v, const std::string& flag) {
  std::vector<PadicScalar> out;
  for (const auto& s : v) out.push_back(PadicScalar::from_rational(job.ctx, rational_flag(s, flag)));
  return out;
}

Json exponent_list(const ExponentAnalysis& a) {
  Json list = Json::array();
  for (std::size_t k = 0; k < a.exponents.size(); ++k) {
    Json x;
    x["value"] = to_json(a.exponents[k].value);
    x["multiplicity"] = a.exponents[k].multiplicity;
    x["algebraic_multiplicity"] = k < a.algebraic_multiplicity.size() ? a.algebraic_multiplicity[k] : 0;
    list.push_back(std::move(x));
  }
  return list;
}

// ------------------------------------------------------------ subcommands

Json cmd_residue(Job& job) {
  auto e = load_modules(job, 1)[0];
  Json vars = Json::array();
  for (int j = 0; j < e.nvars(); ++j) {
    ResidueData r = residue(e, j);
    Json v;
    v["variable"] = j;
    v["constant"] = r.constant;
    v["residue"] = to_json(r.at_origin);
    v["exponents"] = exponent_list(r.analysis);
    v["characteristic"] = polynomial_json(r.analysis.characteristic);
    v["minimal"] = polynomial_json(r.analysis.minimal);
    job.record("residue t_" + std::to_string(j + 1), r.at_origin.min_precision());
    vars.push_back(std::move(v));
  }
  Json res;
  res["variables"] = std::move(vars);
  return res;
}

Json cmd_exponents(Job& job) {
  auto e = load_modules(job, 1)[0];
  ExponentSet set;
  set.p = job.ctx.p;
  Json vars = Json::array();
  bool all_rational = true;
  for (int j = 0; j < e.nvars(); ++j) {
    ResidueData r = residue(e, j);
    Json v;
    v["variable"] = j;
    v["exponents"] = exponent_list(r.analysis);
    std::vector<ZpElement> row;
    for (const auto& x : r.analysis.exponents) {
      if (auto q = x.value.to_rational())
        row.push_back(*q);
      else
        all_rational = false;
    }
    set.per_variable.push_back(std::move(row));
    vars.push_back(std::move(v));
  }
  Json res;
  res["variables"] = std::move(vars);
  if (all_rational) {
    NidReport nid = nid_check(set, std::int64_t{1} << 20);
    res["nid"] = to_string(nid.status);
    Json w = Json::array();
    for (const auto& x : nid.witnesses)
      w.push_back(Json{{"variable", x.variable}, {"first", x.first}, {"second", x.second}, {"difference", x.difference}});
    res["nid_witnesses"] = std::move(w);
  } else {
    res["nid"] = to_string(NidStatus::unresolved);
    res["nid_witnesses"] = Json::array();
    job.note("some exponents have no small rational form; NID not checked");
  }
  return res;
}

Json fuchs_json(const FuchsResult& r, const NormValue& a, std::uint32_t p) {
  Json j;
  j["variable"] = r.variable;
  j["order"] = r.order;
  j["n0"] = to_json(r.n0);
  j["eigenvalues"] = scalars_json(r.eigenvalues);
  j["gauge"] = to_json(r.gauge);
  j["coefficient_norms"] = norms_json(r.coefficient_norms, p);
  j["residual"] = norm_json(r.residual, p);
  Json c;
  c["a"] = norm_json(r.constants.a, p);
  c["c"] = norm_json(r.constants.c, p);
  c["c_series"] = norm_json(r.constants.c_series, p);
  c["c_operator"] = norm_json(r.constants.c_operator, p);
  c["e"] = r.constants.e;
  c["a_partial"] = norms_json(r.constants.a_partial, p);
  c["rho_inv"] = norm_json(r.constants.rho_inv, p);
  j["constants"] = std::move(c);
  RadiusBound b = radius_bound(r, a);
  Json rb;
  rb["certified_sup"] = norm_json(b.certified_sup, p);
  rb["certified"] = norm_json(b.certified, p);
  rb["empirical"] = norm_json(b.empirical, p);
  rb["sanity"] = norm_json(b.sanity, p);
  rb["polynomial"] = b.polynomial;
  j["radius"] = std::move(rb);
  return j;
}

Json cmd_extend(Job& job) {
  auto e = load_modules(job, 1)[0];
  ExtensionResult x = multivariable_extend(e, job.cfg.order);
  Json res;
  Json model = Json::array();
  for (const auto& w : x.model) model.push_back(to_json(w));
  res["model"] = std::move(model);
  res["gauge"] = to_json(x.gauge);
  res["descent_ok"] = x.descent_ok;
  Json steps = Json::array();
  NormValue worst = NormValue::zero();
  for (const auto& s : x.steps) {
    steps.push_back(fuchs_json(s, outer_radius(e, s.variable), job.ctx.p));
    worst = max(worst, s.residual);
    job.record("gauge t_" + std::to_string(s.variable + 1), s.gauge.min_precision());
  }
  res["steps"] = std::move(steps);
  res["residual"] = norm_json(worst, job.ctx.p);
  return res;
}

std::vector<std::vector<PadicScalar>> sigma_from(Job& job, const LogNablaModule& e) {
  std::vector<std::vector<PadicScalar>> sigma;
  if (!job.cfg.sigma.empty()) {
    if (static_cast<int>(job.cfg.sigma.size()) != e.nvars()) throw SchemaError("--sigma", "one exponent list per variable");
    for (const auto& s : job.cfg.sigma) {
      std::vector<PadicScalar> row;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ':')) row.push_back(PadicScalar::from_rational(job.ctx, rational_flag(item, "sigma")));
      sigma.push_back(std::move(row));
    }
    return sigma;
  }
  for (int j = 0; j < e.nvars(); ++j) {
    std::vector<PadicScalar> row;
    for (const auto& x : residue(e, j).analysis.exponents) row.push_back(x.value);
    sigma.push_back(std::move(row));
  }
  job.note("sigma taken from the residue exponents");
  return sigma;
}

Json cmd_filtrate(Job& job) {
  auto e = windowed(job, load_modules(job, 1)[0]);
  auto sigma = sigma_from(job, e);
  Json sj = Json::array();
  for (const auto& row : sigma) sj.push_back(scalars_json(row));
  job.inputs["sigma"] = std::move(sj);
  FiltrationOptions opt;
  opt.nld_s_max = job.cfg.smax;
  opt.log_index_bound = job.cfg.index_bound;
  if (job.cfg.eta) opt.horizontal.eta = norm_flag(*job.cfg.eta, job.ctx.p, "eta");
  Filtration f = unipotent_filtration(e, sigma, opt);
  Json res;
  Json pieces = Json::array();
  for (const auto& g : f.pieces) {
    Json pj;
    pj["xi"] = scalars_json(g.xi);
    pj["dimension"] = g.dimension;
    pj["sections"] = to_json(g.sections);
    pieces.push_back(std::move(pj));
  }
  res["length"] = f.pieces.size();
  res["pieces"] = std::move(pieces);
  res["adapted_basis"] = to_json(f.adapted_basis);
  Json am = Json::array();
  for (const auto& m : f.adapted_matrices) am.push_back(to_json(m));
  res["adapted_matrices"] = std::move(am);
  res["log_convergence"] = eta_json(f.log_convergence.eta_report, job.ctx.p);
  res["nld_suspect"] = f.nld.suspect;
  res["nld_pairs"] = f.nld.pairs.size();
  job.record("adapted basis", f.adapted_basis.min_precision());
  if (f.log_convergence.eta_report.verdict == Verdict::inconclusive) job.inconclusive = true;
  return res;
}

Json cmd_horiz(Job& job) {
  auto e = windowed(job, load_modules(job, 1)[0]);
  std::vector<PadicScalar> xi;
  if (!job.cfg.xi.empty()) {
    xi = scalars_from_flags(job, job.cfg.xi, "xi");
    if (static_cast<int>(xi.size()) != e.nvars()) throw SchemaError("--xi", "one exponent per variable");
  } else {
    for (int j = 0; j < e.nvars(); ++j) {
      auto a = residue(e, j).analysis;
      if (a.exponents.empty()) throw Error(ErrorKind::invalid_argument, "no exponent along t_" + std::to_string(j + 1));
      xi.push_back(a.exponents[0].value);
    }
    job.note("target exponent defaults to the first exponent per variable");
  }
  job.inputs["xi"] = scalars_json(xi);
  HorizontalOptions opt;
  if (job.cfg.eta) opt.eta = norm_flag(*job.cfg.eta, job.ctx.p, "eta");
  HorizontalSpace h = horizontal_sections(e, xi, opt);
  Json res;
  res["dimension"] = h.dimension;
  res["sections"] = to_json(h.sections);
  res["l_max"] = h.l_max;
  res["run"] = h.run;
  res["probe_count"] = h.probe_count;
  res["stable_combinations"] = h.stable_combinations;
  res["difference_norms"] = norms_json(h.difference_norms, job.ctx.p);
  res["eta_null"] = eta_json(h.eta_report, job.ctx.p);
  res["note"] = h.note;
  Json loss;
  loss["stage"] = "D_l iteration";
  loss["digits_lost"] = h.precision_loss;
  job.ledger.push_back(std::move(loss));
  if (h.eta_report.verdict == Verdict::inconclusive && h.dimension > 0) job.inconclusive = true;
  return res;
}

Json cmd_logconv(Job& job) {
  auto e = windowed(job, load_modules(job, 1)[0]);
  const NormValue eta = job.cfg.eta ? norm_flag(*job.cfg.eta, job.ctx.p, "eta") : NormValue::from_exponent(Rational(1, 2));
  const NormValue a_prime = outer_radius(e, 0) * NormValue::from_exponent(Rational(1, 2));
  job.inputs["eta"] = norm_json(eta, job.ctx.p);
  job.inputs["a_prime"] = norm_json(a_prime, job.ctx.p);
  LogConvergenceReport r = log_convergence_check(e, a_prime, eta, job.cfg.index_bound);
  Json res;
  res["verdict"] = to_string(r.eta_report.verdict);
  res["radius"] = norm_json(r.radius, job.ctx.p);
  res["index_bound"] = r.index_bound;
  res["shell_norms"] = norms_json(r.shell_norms, job.ctx.p);
  res["eta_null"] = eta_json(r.eta_report, job.ctx.p);
  if (r.eta_report.verdict == Verdict::inconclusive) job.inconclusive = true;
  return res;
}

Json cmd_type(Job& job) {
  ZpElement a;
  if (!job.cfg.in.empty()) {
    Json j = read_input(job.cfg.in);
    a = zp_from_json(j, job.ctx.p, "");
    job.inputs["element"] = j;
  } else if (!job.cfg.xi.empty()) {
    const Rational r = rational_flag(job.cfg.xi[0], "xi");
    if (r.denominator() % static_cast<std::int64_t>(job.ctx.p) == 0) throw SchemaError("--xi", "not in Z_p");
    a = r;
    job.inputs["element"] = Json{{"rational", to_string(r)}};
  } else {
    throw SchemaError("--in", "type needs --in or --xi");
  }
  TypeEstimate t = type_estimate(a, job.ctx.p, job.cfg.smax);
  Json res;
  res["target"] = t.target;
  res["s_max"] = t.s_max;
  res["tail_start"] = t.tail_start;
  res["theta"] = to_string(t.theta);
  res["estimate"] = norm_json(t.estimate, job.ctx.p);
  res["witness"] = t.witness;
  res["verdict"] = to_string(t.verdict);
  Json trace = Json::array();
  for (const auto& e : t.trace)
    trace.push_back(Json::array({e.s, e.valuation, norm_to_string(e.value, job.ctx.p)}));
  res["trace_columns"] = Json::array({"s", "valuation", "value"});
  res["trace"] = std::move(trace);
  return res;
}

Json cohom_json(const CohomologyReport& r, std::uint32_t p, int n) {
  Json j;
  j["dims"] = r.dims;
  j["model_dims"] = r.model_dims;
  Json shift = Json::array();
  for (int k = 0; k < n; ++k) shift.push_back(r.shift[static_cast<std::size_t>(k)]);
  j["shift"] = std::move(shift);
  Json reps = Json::array();
  for (const auto& deg : r.representatives) {
    Json d = Json::array();
    for (const auto& f : deg) d.push_back(form_json(f));
    reps.push_back(std::move(d));
  }
  j["representatives"] = std::move(reps);
  j["homotopy"] = Json{{"monomials", r.homotopy.monomials},
                       {"failures", r.homotopy.failures},
                       {"defect", norm_to_string(r.homotopy.defect, p)}};
  j["phi_growth"] = norm_json(r.phi_growth, p);
  return j;
}

std::vector<PadicMatrix> model_of(const LogNablaModule& e) {
  std::vector<PadicMatrix> out;
  for (int j = 0; j < e.nvars(); ++j) {
    if (!e.matrix(j).is_constant())
      throw Error(ErrorKind::invalid_argument, "Ext comparison needs constant matrices; run extend first");
    out.push_back(e.matrix(j).coefficient(MultiIndex{0, 0, 0}));
  }
  return out;
}

Json cmd_cohom(Job& job) {
  const int w = job.cfg.window;
  Json res;
  if (job.cfg.fixtures.size() == 2 || (!job.cfg.in.empty() && job.cfg.alpha.empty())) {
    auto mods = load_modules(job, 2);
    const int n = mods[0].nvars();
    if (mods[1].nvars() != n) throw Error(ErrorKind::shape_mismatch, "modules have different variable counts");
    std::vector<AlignedInterval> ivs(static_cast<std::size_t>(n),
                                     AlignedInterval::annulus(NormValue::from_exponent(Rational(1)), NormValue::one()));
    ExtComparison x = ext_compare(model_of(mods[0]), model_of(mods[1]), ivs, Window::box(n, -w, w));
    res["mode"] = "ext";
    res["model"] = x.model;
    res["annulus"] = x.annulus;
    res["equal"] = x.equal;
    res["witness"] = x.witness;
    res["annulus_report"] = cohom_json(x.annulus_report, job.ctx.p, n);
    return res;
  }
  std::vector<std::string> alpha_text = job.cfg.alpha.empty() ? std::vector<std::string>{"0"} : job.cfg.alpha;
  if (alpha_text.size() > static_cast<std::size_t>(kMaxVars)) throw SchemaError("--alpha", "too many variables");
  auto alpha = scalars_from_flags(job, alpha_text, "alpha");
  job.inputs["alpha"] = alpha_text;
  const int n = static_cast<int>(alpha.size());
  std::vector<AlignedInterval> ivs(static_cast<std::size_t>(n),
                                   AlignedInterval::annulus(NormValue::from_exponent(Rational(1)), NormValue::one()));
  CohomologyReport r = dr_cohomology(job.ctx, alpha, ivs, Window::box(n, -w, w), std::min(w, job.cfg.index_bound));
  res["mode"] = "twist";
  res["report"] = cohom_json(r, job.ctx.p, n);
  return res;
}

Json cmd_hom(Job& job) {
  auto mods = load_modules(job, 2);
  auto e = windowed(job, mods[0]);
  auto f = windowed(job, mods[1]);
  HomReport h = hom_space(e, f);
  Json res;
  res["dimension"] = h.dimension;
  Json basis = Json::array();
  for (const auto& b : h.basis) basis.push_back(to_json(b));
  res["basis"] = std::move(basis);
  return res;
}

Json estimate_json(const SpectralEstimate& s, std::uint32_t p) {
  Json j;
  j["probe_window"] = s.probe_window;
  j["probes"] = s.probes;
  j["roots"] = norms_json(s.roots, p);
  j["tail_upper"] = norm_json(s.tail_upper, p);
  j["tail_lower"] = norm_json(s.tail_lower, p);
  if (s.upper_root)
    j["upper_root"] = norm_json(*s.upper_root, p);
  else
    j["upper_root"] = nullptr;
  j["exact_on_window"] = s.exact_on_window;
  return j;
}

Json cmd_robba(Job& job) {
  auto e = load_modules(job, 1)[0];
  std::vector<NormValue> radii;
  std::vector<std::string> text = job.cfg.radii.empty() ? std::vector<std::string>{"p^(-1/2)", "p^(-1/4)"} : job.cfg.radii;
  for (const auto& r : text) radii.push_back(norm_flag(r, job.ctx.p, "radii"));
  const Rational tol = job.cfg.tol ? rational_flag(*job.cfg.tol, "tol") : Rational(0);
  if (job.cfg.tol && tol <= Rational(0)) throw SchemaError("--tol", "tolerance must be positive");
  job.inputs["radii"] = norms_json(radii, job.ctx.p);
  job.inputs["n_max"] = job.cfg.n_max;
  RobbaReport rep = robba_check(e, radii, job.cfg.n_max, tol);
  Json res;
  res["robba_consistent"] = rep.robba_consistent;
  res["tolerance"] = to_string(rep.tolerance);
  Json vs = Json::array();
  for (const auto& v : rep.verdicts) {
    Json vj;
    vj["radius"] = norm_json(v.radius, job.ctx.p);
    vj["consistent"] = v.consistent;
    if (v.max_gap)
      vj["max_gap"] = to_string(*v.max_gap);
    else
      vj["max_gap"] = nullptr;
    vj["module"] = estimate_json(v.module, job.ctx.p);
    vj["reference"] = estimate_json(v.reference, job.ctx.p);
    vs.push_back(std::move(vj));
  }
  res["verdicts"] = std::move(vs);
  return res;
}

Json cmd_selftest(Job& job, bool& failed) {
  job.inputs["seed"] = job.cfg.seed;
  job.inputs["criteria"] = job.cfg.criteria;
  auto results = acceptance::run_criteria(job.cfg.seed, job.cfg.criteria);
  Json list = Json::array();
  bool all = true;
  for (const auto& r : results) {
    list.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    all = all && r.pass;
  }
  failed = !all;
  Json res;
  res["all_pass"] = all;
  res["criteria"] = std::move(list);
  return res;
}

const std::map<std::string, std::vector<std::string>>& result_schema() {
  static const std::map<std::string, std::vector<std::string>> s{
      {"residue", {"variables"}},
      {"exponents", {"variables", "nid", "nid_witnesses"}},
      {"extend", {"model", "gauge", "descent_ok", "steps", "residual"}},
      {"filtrate", {"length", "pieces", "adapted_basis", "adapted_matrices", "log_convergence", "nld_suspect"}},
      {"horiz", {"dimension", "sections", "l_max", "run", "difference_norms", "eta_null"}},
      {"logconv", {"verdict", "radius", "index_bound", "shell_norms", "eta_null"}},
      {"type", {"target", "s_max", "tail_start", "estimate", "witness", "verdict", "trace"}},
      {"cohom", {"mode"}},
      {"hom", {"dimension", "basis"}},
      {"robba", {"robba_consistent", "tolerance", "verdicts"}},
      {"selftest", {"all_pass", "criteria"}},
  };
  return s;
}

void validate_config(const JobConfig& c) {
  if (c.p < 2 || c.p > (1u << 20) || !is_prime(c.p)) throw SchemaError("--p", "p must be a prime below 2^20");
  if (c.prec < 1 || c.prec > max_exponent(c.p))
    throw SchemaError("--prec", "precision must be in [1, " + std::to_string(max_exponent(c.p)) + "] for this p");
  if (c.order < 1 || c.order > 200) throw SchemaError("--order", "order must be in [1, 200]");
  if (c.window < 1 || c.window > 200) throw SchemaError("--window", "window must be in [1, 200]");
  if (c.smax < 2 || c.smax > (std::int64_t{1} << 24)) throw SchemaError("--smax", "S_max must be in [2, 2^24]");
  if (c.n_max < 1 || c.n_max > 500) throw SchemaError("--nmax", "n_max must be in [1, 500]");
  if (c.index_bound < 1 || c.index_bound > 200) throw SchemaError("--index-bound", "index bound must be in [1, 200]");
  if (c.format != "json" && c.format != "text") throw SchemaError("--format", "format is json or text");
}

Json config_json(const JobConfig& c) {
  Json j;
  j["p"] = c.p;
  j["prec"] = c.prec;
  j["order"] = c.order;
  j["window"] = c.window;
  j["eta"] = c.eta ? Json(*c.eta) : Json(nullptr);
  j["smax"] = c.smax;
  j["radii"] = c.radii;
  j["tol"] = c.tol ? Json(*c.tol) : Json(nullptr);
  j["seed"] = c.seed;
  j["n_max"] = c.n_max;
  j["index_bound"] = c.index_bound;
  j["strict"] = c.strict;
  return j;
}

}  // namespace

std::vector<std::string> cli_commands() {
  return {"residue", "exponents", "extend", "filtrate", "horiz", "logconv", "type", "cohom", "hom", "robba", "selftest"};
}

RunResult run_job(const JobConfig& config) {
  RunResult out;
  Json& rep = out.report;
  rep["command"] = config.command;
  rep["status"] = "ok";
  try {
    validate_config(config);
    if (!result_schema().count(config.command)) throw SchemaError("/command", "unknown command '" + config.command + "'");
    Job job{config, PadicContext(config.p, config.prec)};
    job.inputs["config"] = config_json(config);
    bool failed = false;
    Json results;
    const std::string& c = config.command;
    if (c == "residue") results = cmd_residue(job);
    else if (c == "exponents") results = cmd_exponents(job);
    else if (c == "extend") results = cmd_extend(job);
    else if (c == "filtrate") results = cmd_filtrate(job);
    else if (c == "horiz") results = cmd_horiz(job);
    else if (c == "logconv") results = cmd_logconv(job);
    else if (c == "type") results = cmd_type(job);
    else if (c == "cohom") results = cmd_cohom(job);
    else if (c == "hom") results = cmd_hom(job);
    else if (c == "robba") results = cmd_robba(job);
    else results = cmd_selftest(job, failed);
    rep["inputs"] = std::move(job.inputs);
    rep["results"] = std::move(results);
    rep["precision"] = Json{{"cap", config.prec}, {"ledger", std::move(job.ledger)}};
    rep["diagnostics"] = std::move(job.diagnostics);
    rep["inconclusive"] = job.inconclusive;
    const std::string bad = validate_report(rep);
    if (!bad.empty()) throw Error(ErrorKind::internal_consistency, "report fails its schema: " + bad);
    if (failed) {
      rep["status"] = "failed";
      out.exit_code = kExitSolver;
    } else if (job.inconclusive && config.strict) {
      rep["status"] = "inconclusive";
      out.exit_code = kExitInconclusive;
    }
  } catch (const SchemaError& e) {
    rep["status"] = "error";
    rep["error"] = Json{{"kind", to_string(e.kind())}, {"detail", e.detail()}, {"pointer", e.pointer()}};
    out.exit_code = kExitInput;
  } catch (const Error& e) {
    rep["status"] = "error";
    rep["error"] = Json{{"kind", to_string(e.kind())}, {"detail", e.detail()}};
    out.exit_code = is_input_error(e.kind()) ? kExitInput : kExitSolver;
  } catch (const std::exception& e) {
    rep["status"] = "error";
    rep["error"] = Json{{"kind", "internal"}, {"detail", e.what()}};
    out.exit_code = kExitSolver;
  }
  return out;
}

std::string validate_report(const Json& r) {
  if (!r.is_object()) return "report is not an object";
  for (const char* k : {"command", "status", "inputs", "results", "precision", "diagnostics", "inconclusive"})
    if (!r.contains(k)) return std::string("missing /") + k;
  if (!r["command"].is_string() || !r["status"].is_string()) return "command and status must be strings";
  if (!r["inputs"].is_object() || !r["results"].is_object()) return "inputs and results must be objects";
  if (!r["precision"].is_object() || !r["precision"].contains("ledger") || !r["precision"]["ledger"].is_array())
    return "missing /precision/ledger";
  if (!r["diagnostics"].is_array()) return "/diagnostics must be an array";
  const auto it = result_schema().find(r["command"].get<std::string>());
  if (it == result_schema().end()) return "unknown command";
  for (const auto& k : it->second)
    if (!r["results"].contains(k)) return "missing /results/" + k;
  return "";
}

std::string render_text(const Json& r) {
  std::ostringstream os;
  os << r.value("command", "?") << ": " << r.value("status", "?") << "\n";
  if (r.contains("error")) {
    os << "error " << r["error"].value("kind", "") << ": " << r["error"].value("detail", "") << "\n";
    return os.str();
  }
  const std::function<void(const std::string&, const Json&, int)> walk = [&](const std::string& key, const Json& v, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
    if (v.is_object()) {
      if (depth >= 2) {
        os << pad << key << ": {...}\n";
        return;
      }
      os << pad << key << ":\n";
      for (const auto& [k, x] : v.items()) walk(k, x, depth + 1);
    } else if (v.is_array()) {
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); });
      if (flat && v.size() <= 16)
        os << pad << key << ": " << v.dump() << "\n";
      else
        os << pad << key << ": [" << v.size() << " items]\n";
    } else {
      os << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  };
  walk("results", r["results"], 0);
  if (r["results"].contains("criteria"))
    for (const auto& c : r["results"]["criteria"])
      os << (c["pass"].get<bool>() ? "[PASS] C" : "[FAIL] C") << c["id"].get<int>() << " " << c["name"].get<std::string>()
         << ": " << c["detail"].get<std::string>() << "\n";
  for (const auto& d : r["diagnostics"]) os << "note: " << d.get<std::string>() << "\n";
  return os.str();
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  JobConfig cfg;
  CLI::App app{"Logarithmic p-adic connections: canonical extensions, projectors, cohomology, Robba checks"};
  app.add_option("command", cfg.command, "Subcommand")->required()->check(CLI::IsMember(cli_commands()));
  app.add_option("--p", cfg.p, "Prime");
  app.add_option("--prec", cfg.prec, "Relative precision cap in digits");
  app.add_option("--order", cfg.order, "Series order for extend");
  app.add_option("--window", cfg.window, "Truncation window bound for probe-based solvers");
  app.add_option("--eta", cfg.eta, "Norm eta, e.g. p^(-1/2)");
  app.add_option("--smax", cfg.smax, "S_max for type estimates");
  app.add_option("--radii", cfg.radii, "Radii, e.g. p^(-1/2),p^(-1/4)")->delimiter(',');
  app.add_option("--tol", cfg.tol, "Robba tolerance as a log_p gap");
  app.add_option("--seed", cfg.seed, "Seed for randomized fixtures");
  app.add_option("--in", cfg.in, "Input JSON file");
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--format", cfg.format, "json or text");
  app.add_option("--fixture", cfg.fixtures, "Named fixture(s), comma separated")->delimiter(',');
  app.add_flag("--strict", cfg.strict, "Exit 4 on inconclusive verdicts");
  app.add_option("--nmax", cfg.n_max, "Iteration depth for robba");
  app.add_option("--index-bound", cfg.index_bound, "Index bound for log-convergence");
  app.add_option("--xi", cfg.xi, "Target exponent per variable (rationals)")->delimiter(',');
  app.add_option("--alpha", cfg.alpha, "Twist per variable for cohom (rationals)")->delimiter(',');
  app.add_option("--sigma", cfg.sigma, "Exponent lists per variable, a:b:c,...")->delimiter(',');
  app.add_option("--criteria", cfg.criteria, "Selftest criterion ids")->delimiter(',');
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  RunResult r = run_job(cfg);
  const std::string text = cfg.format == "text" ? render_text(r.report) : dump(r.report);
  if (r.report.contains("error"))
    err << "error " << r.report["error"].value("kind", "") << ": " << r.report["error"].value("detail", "") << "\n";
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      err << "error: cannot write '" << cfg.out << "'\n";
      return kExitInput;
    }
    f << text;
  }
  return r.exit_code;
}

}  // namespace lognabla
