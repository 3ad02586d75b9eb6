#include "hsalpha/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hsalpha/errors.hpp"

namespace hsalpha {

namespace {

Window support_of(const PiecewiseLinearFn& u, const MonotoneCDF& F, const MonotoneCDF& G) {
  double lo = kInf;
  double hi = -kInf;
  auto take = [&](double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  };
  for (double x : u.nodes()) take(x);
  for (double x : F.continuous_part().nodes()) take(x);
  for (double x : G.continuous_part().nodes()) take(x);
  for (const Atom& a : F.atoms()) take(a.x);
  for (const Atom& a : G.atoms()) take(a.x);
  if (lo > hi) return {0.0, 0.0};
  return {lo, hi};
}

std::vector<Atom> drop_light_atoms(std::span<const Atom> atoms, double total) {
  std::vector<Atom> kept;
  for (const Atom& a : atoms) {
    if (a.mass >= 1e-14 * total) kept.push_back(a);
  }
  return kept;
}

std::vector<double> merged_cells(const EulerianTriple& s) {
  auto nodes = refine(s.u.nodes(), s.F.continuous_part().nodes()).merged_nodes;
  return refine(nodes, s.G.continuous_part().nodes()).merged_nodes;
}

struct CellData {
  double a, b;
  double du;  // u increment
  double dF;  // F_ac increment
  double dG;  // G_ac increment
};

std::vector<CellData> cell_data(const EulerianTriple& s) {
  const auto x = merged_cells(s);
  std::vector<CellData> out;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i];
    const double b = x[i + 1];
    out.push_back({a, b, s.u(b) - s.u(a), s.F.continuous_part()(b) - s.F.continuous_part()(a),
                   s.G.continuous_part()(b) - s.G.continuous_part()(a)});
  }
  return out;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

void check_common(const EulerianTriple& s, double tol, ValidationReport& r) {
  const double abs_tol = tol * std::max(1.0, total_energy(s));
  if (!(s.alpha >= 0.0 && s.alpha <= 1.0)) {
    r.violations.push_back({"alpha in [0,1]", 0.0, s.alpha});
  }

  // i: u has u_x in L^2 and is constant outside the support window.
  const double u_scale = tol * std::max({1.0, std::abs(s.u.left_tail()), std::abs(s.u.right_tail())});
  for (double x : s.u.nodes()) {
    if (x < s.support.lo && !near(s.u(x), s.u(s.support.lo), u_scale)) {
      r.violations.push_back({"i: u_x vanishes outside support", x, std::abs(s.u(x) - s.u(s.support.lo))});
    }
    if (x > s.support.hi && !near(s.u(x), s.u(s.support.hi), u_scale)) {
      r.violations.push_back({"i: u_x vanishes outside support", x, std::abs(s.u(x) - s.u(s.support.hi))});
    }
  }

  // v, vi: cumulative functions start at zero and carry no mass outside the support.
  for (const auto* cdf : {&s.F, &s.G}) {
    const char* name = cdf == &s.F ? "v: F" : "vi: G";
    if (!near(cdf->continuous_part().left_tail(), 0.0, abs_tol)) {
      r.violations.push_back({std::string(name) + "(-inf) = 0", -kInf, cdf->continuous_part().left_tail()});
    }
    for (const Atom& a : cdf->atoms()) {
      if (a.x < s.support.lo || a.x > s.support.hi) {
        r.violations.push_back({std::string(name) + " atom outside support", a.x, a.mass});
      }
    }
    const auto& c = cdf->continuous_part();
    const double below = c(s.support.lo) - c.left_tail();
    const double above = c.right_tail() - c(s.support.hi);
    if (std::abs(below) > abs_tol) r.violations.push_back({std::string(name) + " mass outside support", s.support.lo, below});
    if (std::abs(above) > abs_tol) r.violations.push_back({std::string(name) + " mass outside support", s.support.hi, above});
  }

  const auto cells = cell_data(s);
  for (const CellData& c : cells) {
    const double h = c.b - c.a;
    const double energy = c.du * c.du / h;
    // iii: mu_ac <= nu_ac
    if (c.dF - c.dG > abs_tol) r.violations.push_back({"iii: mu_ac <= nu_ac", c.a, c.dF - c.dG});
    // iv: dmu_ac = u_x^2 dx, checked on cell integrals.
    if (!near(c.dF, energy, abs_tol)) {
      r.violations.push_back({"iv: dmu_ac = u_x^2 dx", c.a, std::abs(c.dF - energy)});
    }
    if (s.alpha == 1.0 && !near(c.dG, energy, abs_tol)) {
      r.violations.push_back({"vii: dnu_ac = u_x^2 dx when alpha = 1", c.a, std::abs(c.dG - energy)});
    }
  }

  // ii: mu <= nu on the singular parts.
  for (const Atom& a : s.F.atoms()) {
    const double g = s.G.atom_mass_at(a.x);
    if (a.mass - g > abs_tol) r.violations.push_back({"ii: mu <= nu", a.x, a.mass - g});
  }
  if (s.alpha == 1.0) {
    for (const Atom& a : s.F.atoms()) {
      if (a.mass > abs_tol) r.violations.push_back({"vii: mu has no singular part when alpha = 1", a.x, a.mass});
    }
  }
}

void check_density_ratio(const EulerianTriple& s, double tol, std::vector<Violation>& sink) {
  if (s.alpha >= 1.0) return;
  const double abs_tol = tol * std::max(1.0, total_energy(s));
  auto admissible = [&](double mu, double nu) {
    return near(mu, nu, abs_tol) || near(mu, (1.0 - s.alpha) * nu, abs_tol);
  };
  for (const Atom& a : s.G.atoms()) {
    const double m = s.F.atom_mass_at(a.x);
    if (!admissible(m, a.mass)) sink.push_back({"viii: dmu/dnu in {1-alpha, 1}", a.x, m / a.mass});
  }
  for (const CellData& c : cell_data(s)) {
    if (c.dG <= abs_tol) continue;
    if (!admissible(c.dF, c.dG)) {
      sink.push_back({"viii: dmu/dnu in {1-alpha, 1}", c.a, c.dF / c.dG});
    } else if (c.du < 0.0 && !near(c.dF, c.dG, abs_tol)) {
      sink.push_back({"viii: dmu_ac/dnu_ac = 1 where u_x < 0", c.a, c.dF / c.dG});
    }
  }
}

}  // namespace

EulerianTriple EulerianTriple::with_equal_measures(PiecewiseLinearFn u, MonotoneCDF F, double alpha) {
  const double total = F.total();
  MonotoneCDF cleaned(F.continuous_part(), drop_light_atoms(F.atoms(), total));
  EulerianTriple s{std::move(u), cleaned, cleaned, {}, alpha};
  s.support = support_of(s.u, s.F, s.G);
  return s;
}

EulerianTriple EulerianTriple::from_profile(PiecewiseLinearFn u, std::vector<Atom> atoms, double alpha) {
  std::vector<double> xs(u.nodes().begin(), u.nodes().end());
  std::vector<double> F(xs.size(), 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double s = u.slope(i - 1);
    F[i] = F[i - 1] + s * s * (xs[i] - xs[i - 1]);
  }
  MonotoneCDF cdf(PiecewiseLinearFn(std::move(xs), std::move(F)), std::move(atoms));
  return with_equal_measures(std::move(u), std::move(cdf), alpha);
}

EulerianTriple EulerianTriple::zero(double alpha) {
  return from_profile(PiecewiseLinearFn::constant(0.0), {}, alpha);
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  if (ok()) {
    os << "valid";
  } else {
    os << violations.size() << " violation(s)";
  }
  for (const Violation& v : violations) {
    os << "\n  [" << v.clause << "] at x=" << v.location << " magnitude " << v.magnitude;
  }
  for (const Violation& v : notes) {
    os << "\n  note [" << v.clause << "] at x=" << v.location << " value " << v.magnitude;
  }
  return os.str();
}

ValidationReport validate_D0(const EulerianTriple& s, double tol) {
  ValidationReport r;
  check_common(s, tol, r);
  const double abs_tol = tol * std::max(1.0, total_energy(s));
  // mu = nu
  for (const Atom& a : s.G.atoms()) {
    if (!near(a.mass, s.F.atom_mass_at(a.x), abs_tol)) {
      r.violations.push_back({"D0: mu = nu", a.x, a.mass - s.F.atom_mass_at(a.x)});
    }
  }
  for (const Atom& a : s.F.atoms()) {
    if (s.G.atom_mass_at(a.x) == 0.0 && a.mass > abs_tol) {
      r.violations.push_back({"D0: mu = nu", a.x, a.mass});
    }
  }
  for (const CellData& c : cell_data(s)) {
    if (!near(c.dF, c.dG, abs_tol)) r.violations.push_back({"D0: mu = nu", c.a, c.dG - c.dF});
  }
  check_density_ratio(s, tol, r.violations);
  return r;
}

ValidationReport validate_D(const EulerianTriple& s, double tol) {
  ValidationReport r;
  check_common(s, tol, r);
  check_density_ratio(s, tol, r.notes);
  return r;
}

double total_energy(const EulerianTriple& s) { return s.F.total(); }

PiecewiseConstantFn derivative(const PiecewiseLinearFn& u) {
  PiecewiseConstantFn d;
  d.breaks.assign(u.nodes().begin(), u.nodes().end());
  for (std::size_t i = 0; i < u.num_cells(); ++i) d.values.push_back(u.slope(i));
  if (d.values.empty()) d.breaks.clear();
  return d;
}

StabilityDensityEulerian f_stability(const EulerianTriple& s) {
  PiecewiseConstantFn d = derivative(s.u);
  for (double& v : d.values) v = (v < 0.0 ? (1.0 - s.alpha) : 1.0) * v * v;
  return {std::move(d)};
}

namespace {

std::vector<double> number_array(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string("initial data: '") + what + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(std::string("initial data: '") + what + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

PiecewiseLinearFn pwl_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("values")) {
    throw ConfigError(std::string("initial data: '") + what + "' needs 'nodes' and 'values'");
  }
  auto nodes = number_array(j.at("nodes"), "nodes");
  auto values = number_array(j.at("values"), "values");
  if (nodes.size() != values.size()) {
    throw ConfigError(std::string("initial data: '") + what + "' nodes/values length mismatch");
  }
  for (double x : nodes) {
    if (!std::isfinite(x)) throw ConfigError("initial data: unbounded support");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw ConfigError(std::string("initial data: '") + what + "' nodes must be strictly increasing");
    }
  }
  try {
    return PiecewiseLinearFn(std::move(nodes), std::move(values));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial data: ") + e.what());
  }
}

}  // namespace

EulerianTriple parse_initial_data(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("initial data: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("initial data: top level must be an object");
  if (!doc.contains("alpha") || !doc["alpha"].is_number()) {
    throw ConfigError("initial data: missing numeric 'alpha'");
  }
  const double alpha = doc["alpha"].get<double>();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("initial data: alpha must lie in [0,1]");
  if (!doc.contains("u")) throw ConfigError("initial data: missing 'u'");
  PiecewiseLinearFn u = pwl_from_json(doc["u"], "u");

  std::vector<Atom> atoms;
  if (doc.contains("F_atoms")) {
    if (!doc["F_atoms"].is_array()) throw ConfigError("initial data: 'F_atoms' must be an array");
    for (const auto& a : doc["F_atoms"]) {
      if (!a.is_object() || !a.contains("x") || !a.contains("mass") || !a["x"].is_number() ||
          !a["mass"].is_number()) {
        throw ConfigError("initial data: atoms need numeric 'x' and 'mass'");
      }
      const double x = a["x"].get<double>();
      const double m = a["mass"].get<double>();
      if (!std::isfinite(x)) throw ConfigError("initial data: unbounded support");
      if (!(m >= 0.0)) throw ConfigError("initial data: atom masses must be nonnegative");
      atoms.push_back({x, m});
    }
  }

  EulerianTriple s;
  const nlohmann::json fc = doc.contains("F_continuous") ? doc["F_continuous"] : nlohmann::json("from_u");
  if (fc.is_string()) {
    if (fc.get<std::string>() != "from_u") {
      throw ConfigError("initial data: 'F_continuous' must be \"from_u\" or an object");
    }
    s = EulerianTriple::from_profile(std::move(u), std::move(atoms), alpha);
  } else {
    PiecewiseLinearFn Fc = pwl_from_json(fc, "F_continuous");
    try {
      s = EulerianTriple::with_equal_measures(std::move(u), MonotoneCDF(std::move(Fc), std::move(atoms)),
                                              alpha);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("initial data: ") + e.what());
    }
  }
  if (!std::isfinite(s.support.lo) || !std::isfinite(s.support.hi)) {
    throw ConfigError("initial data: unbounded support");
  }
  const ValidationReport report = validate_D0(s);
  if (!report.ok()) throw ValidationError("initial data is not admissible: " + report.summary());
  return s;
}

EulerianTriple load_initial_data(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open initial data file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_initial_data(buf.str());
}

}  // namespace hsalpha
