#include "acousticbc/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "acousticbc/audit.hpp"
#include "acousticbc/elliptic.hpp"
#include "acousticbc/error.hpp"
#include "acousticbc/transforms.hpp"

namespace acbc {

using json = nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::ConfigParseError, field, msg);
}

[[noreturn]] void invalid(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::ValidationError, field, msg);
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) parse_fail(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) parse_fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

template <class T>
T read(const json& obj, const char* key, const std::string& path, std::optional<T> dflt = std::nullopt) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!obj.contains(key)) {
    if (dflt) return *dflt;
    parse_fail(field, "missing required key");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    if constexpr (std::is_same_v<T, std::string>)
      parse_fail(field, "expected a string");
    else if constexpr (std::is_integral_v<T>)
      parse_fail(field, "expected an integer");
    else
      parse_fail(field, "expected a number");
  }
}

PresetKind parse_preset(const std::string& s) {
  if (s == "Zero") return PresetKind::Zero;
  if (s == "Remark34") return PresetKind::StationaryDrift;
  if (s == "ManufacturedElliptic") return PresetKind::ManufacturedElliptic;
  if (s == "RandomCompatible") return PresetKind::RandomCompatible;
  invalid("initial_data.preset", "unknown preset '" + s + "'");
}

const std::set<std::string> kAudits = {"energy", "conservation", "weak_residual", "compatibility", "exact_solution",
                                       "equivalence"};
const std::set<std::string> kStudies = {"energy_identity", "elliptic", "weak_residual", "cross_integrator"};

// Family of a model tag: 0 potential, 1 Lagrangian, 2 Eulerian.
int family(ModelTag t) {
  if (t == ModelTag::P || t == ModelTag::Pc) return 0;
  if (t == ModelTag::L) return 1;
  return 2;
}

void validate_scenario(Scenario& sc) {
  std::pair<DomainSpec, RadialGrid> dom;
  try {
    dom = make_domain(sc.R0, sc.R1, sc.N);
  } catch (const Error& e) {
    invalid("domain." + e.field(), e.what());
  }
  try {
    validate_params(sc.material);
  } catch (const Error& e) {
    invalid("material." + e.field(), e.what());
  }
  try {
    sc.integrator.steps();
  } catch (const Error& e) {
    invalid(e.field(), e.what());
  }
  if (sc.integrator.record_every < 1) invalid("integrator.record_every", "must be >= 1");
  if (sc.modes.modes.empty()) invalid("modes", "at least one mode is required");
  for (const auto& a : sc.audits)
    if (!kAudits.count(a)) invalid("audits", "unknown audit '" + a + "'");
  if (sc.convergence) {
    if (!kStudies.count(sc.convergence->study)) invalid("convergence.study", "unknown study");
    if (sc.convergence->levels.size() < 3) invalid("convergence.levels", "a ladder needs at least 3 levels");
    for (const auto& lv : sc.convergence->levels) {
      if (lv.N < 8) invalid("convergence.levels", "N must be >= 8");
      if (!(lv.dt > 0.0)) invalid("convergence.levels", "dt must be > 0");
      IntegratorConfig c = sc.integrator;
      c.dt = lv.dt;
      try {
        c.steps();
      } catch (const Error& e) {
        invalid("convergence.levels", e.what());
      }
    }
  }
  if (sc.equivalence && family(sc.equivalence->source) == family(sc.equivalence->target))
    invalid("equivalence.target", "source and target must be different models");
  // Build the initial data once per degree so preset/model mismatches and
  // constraint violations surface before any run.
  const ModelTag tag = sc.equivalence ? sc.equivalence->source : sc.model;
  for (int l : sc.modes.degrees()) {
    const ModalOperatorSet ops = assemble_mode_operators(dom.first, dom.second, l);
    ModeState s;
    try {
      s = make_initial_state(ops, sc.material, tag, sc.initial);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ValidationError) throw;
      invalid("initial_data", e.what());
    }
    if (is_constrained(tag)) {
      const double c = std::visit(
          [&](const auto& st) {
            using S = std::decay_t<decltype(st)>;
            return ModelTraits<S>::constraint(ops, sc.material, st);
          },
          s);
      const double norm = std::visit([](const auto& st) { return st.max_abs(); }, s);
      if (std::abs(c) > constraint_tol(norm))
        invalid("initial_data.preset", "preset does not satisfy the integral constraint of model " +
                                           std::string(to_string(tag)));
    }
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    parse_fail("line " + std::to_string(line) + ", column " + std::to_string(col), e.what());
  }
  Scenario sc;
  sc.raw = text;
  only_keys(j, "", {"domain", "material", "model", "modes", "initial_data", "integrator", "audits", "output",
                    "convergence", "equivalence"});

  if (!j.contains("domain")) parse_fail("domain", "missing required key");
  const json& d = j["domain"];
  only_keys(d, "domain", {"R0", "R1", "N"});
  sc.R0 = read<double>(d, "R0", "domain", 0.0);
  sc.R1 = read<double>(d, "R1", "domain");
  sc.N = read<int>(d, "N", "domain");

  if (j.contains("material")) {
    const json& m = j["material"];
    only_keys(m, "material", {"rho0", "B", "mu", "sigma", "delta", "kappa"});
    MaterialParams def;
    sc.material.rho0 = read<double>(m, "rho0", "material", def.rho0);
    sc.material.B = read<double>(m, "B", "material", def.B);
    sc.material.mu = read<double>(m, "mu", "material", def.mu);
    sc.material.sigma = read<double>(m, "sigma", "material", def.sigma);
    sc.material.delta = read<double>(m, "delta", "material", def.delta);
    sc.material.kappa = read<double>(m, "kappa", "material", def.kappa);
  }

  try {
    sc.model = parse_model_tag(read<std::string>(j, "model", "", std::string("P")));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigParseError) throw;
    invalid("model", e.what());
  }

  std::vector<ModeEntry> modes;
  if (j.contains("modes")) {
    if (!j["modes"].is_array()) parse_fail("modes", "expected an array");
    for (std::size_t i = 0; i < j["modes"].size(); ++i) {
      const json& e = j["modes"][i];
      const std::string path = "modes[" + std::to_string(i) + "]";
      ModeEntry me;
      if (e.is_number_integer()) {
        me.l = e.get<int>();
      } else {
        only_keys(e, path, {"l", "m"});
        me.l = read<int>(e, "l", path);
        if (e.contains("m")) me.m = read<int>(e, "m", path);
      }
      modes.push_back(me);
    }
  } else {
    modes.push_back({0, std::nullopt});
  }
  try {
    sc.modes = make_mode_set(modes);
  } catch (const Error& e) {
    invalid("modes", e.what());
  }

  if (j.contains("initial_data")) {
    const json& in = j["initial_data"];
    only_keys(in, "initial_data", {"preset", "u1", "k0", "seed"});
    sc.initial.kind = parse_preset(read<std::string>(in, "preset", "initial_data"));
    sc.initial.u1 = read<double>(in, "u1", "initial_data", 1.0);
    sc.initial.k0 = read<double>(in, "k0", "initial_data", sc.material.kappa);
    sc.initial.seed = read<std::uint64_t>(in, "seed", "initial_data", std::uint64_t{0});
  }

  if (!j.contains("integrator")) parse_fail("integrator", "missing required key");
  const json& it = j["integrator"];
  only_keys(it, "integrator", {"dt", "t_end", "scheme", "linear_solver_tol", "record_every"});
  sc.integrator.dt = read<double>(it, "dt", "integrator");
  sc.integrator.t_end = read<double>(it, "t_end", "integrator");
  try {
    sc.integrator.scheme = parse_scheme(read<std::string>(it, "scheme", "integrator", std::string("ImplicitMidpoint")));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigParseError) throw;
    invalid("integrator.scheme", e.what());
  }
  sc.integrator.linear_solver_tol = read<double>(it, "linear_solver_tol", "integrator", 1e-12);
  sc.integrator.record_every = read<int>(it, "record_every", "integrator", 1);

  if (j.contains("audits")) {
    if (!j["audits"].is_array()) parse_fail("audits", "expected an array of names");
    for (const auto& a : j["audits"]) {
      if (!a.is_string()) parse_fail("audits", "expected an array of names");
      sc.audits.push_back(a.get<std::string>());
    }
  }

  if (j.contains("output")) {
    const json& o = j["output"];
    only_keys(o, "output", {"csv", "summary"});
    sc.csv_path = read<std::string>(o, "csv", "output", sc.csv_path);
    sc.summary_path = read<std::string>(o, "summary", "output", sc.summary_path);
  }

  if (j.contains("convergence")) {
    const json& c = j["convergence"];
    only_keys(c, "convergence", {"study", "levels", "min_order"});
    ConvergenceSpec cs;
    cs.study = read<std::string>(c, "study", "convergence");
    cs.min_order = read<double>(c, "min_order", "convergence", 1.7);
    if (!c.contains("levels") || !c["levels"].is_array()) parse_fail("convergence.levels", "expected an array");
    for (std::size_t i = 0; i < c["levels"].size(); ++i) {
      const std::string path = "convergence.levels[" + std::to_string(i) + "]";
      const json& lv = c["levels"][i];
      only_keys(lv, path, {"N", "dt"});
      cs.levels.push_back({read<int>(lv, "N", path), read<double>(lv, "dt", path)});
    }
    sc.convergence = cs;
  }

  if (j.contains("equivalence")) {
    const json& e = j["equivalence"];
    only_keys(e, "equivalence", {"source", "target", "round_trip"});
    EquivalenceSpec es;
    try {
      es.source = parse_model_tag(read<std::string>(e, "source", "equivalence"));
      es.target = parse_model_tag(read<std::string>(e, "target", "equivalence"));
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::ConfigParseError) throw;
      invalid("equivalence", err.what());
    }
    if (e.contains("round_trip")) {
      if (!e["round_trip"].is_boolean()) parse_fail("equivalence.round_trip", "expected a boolean");
      es.round_trip = e["round_trip"].get<bool>();
    }
    sc.equivalence = es;
  }

  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

bool RunSummary::pass() const {
  return std::all_of(audits.begin(), audits.end(), [](const AuditEntry& a) { return a.pass; });
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

int effective_threads(const RunOptions& opt) {
  if (opt.threads > 0) return opt.threads;
  if (const char* env = std::getenv("ACOUSTICBC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs fn(i) for i in [0, n) on at most `threads` workers.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

AuditEntry entry(std::string name, int l, double value, double tol) {
  return {std::move(name), l, value, tol, std::isfinite(value) && std::abs(value) <= tol};
}

ModalOperatorSet ops_for(const Scenario& sc, int N, int l) {
  const auto [d, g] = make_domain(sc.R0, sc.R1, N);
  return assemble_mode_operators(d, g, l);
}

template <class S>
S initial_as(const ModalOperatorSet& ops, const Scenario& sc, ModelTag tag) {
  return std::get<S>(make_initial_state(ops, sc.material, tag, sc.initial));
}

template <class S>
ModelTag default_tag() {
  if constexpr (std::is_same_v<S, PotentialModeState>) return ModelTag::P;
  else if constexpr (std::is_same_v<S, LagrangianModeState>) return ModelTag::L;
  else return ModelTag::E;
}

// ---- maps between trajectory types ----

template <class To, class From>
TrajectoryRecord<To> map_traj(const ModalOperatorSet& ops, const MaterialParams& p, const TrajectoryRecord<From>& t) {
  if constexpr (std::is_same_v<From, PotentialModeState> && std::is_same_v<To, LagrangianModeState>)
    return map_potential_to_lagrangian(ops, p, t);
  else if constexpr (std::is_same_v<From, PotentialModeState> && std::is_same_v<To, EulerianModeState>)
    return map_potential_to_eulerian(ops, p, t);
  else if constexpr (std::is_same_v<From, LagrangianModeState> && std::is_same_v<To, EulerianModeState>)
    return map_lagrangian_to_eulerian(ops, p, t);
  else if constexpr (std::is_same_v<From, LagrangianModeState> && std::is_same_v<To, PotentialModeState>)
    return map_lagrangian_to_potential(ops, p, t);
  else if constexpr (std::is_same_v<From, EulerianModeState> && std::is_same_v<To, PotentialModeState>)
    return map_eulerian_to_potential(ops, p, t);
  else if constexpr (std::is_same_v<From, EulerianModeState> && std::is_same_v<To, LagrangianModeState>)
    return map_eulerian_to_lagrangian(ops, p, t);
  else
    static_assert(sizeof(To) == 0, "no map between these models");
}

template <class To, class From>
To map_data(const ModalOperatorSet& ops, const MaterialParams& p, const From& s, double dt) {
  TrajectoryRecord<From> one;
  one.l = ops.l;
  one.dt = dt;
  one.times = {0.0};
  one.states = {s};
  return map_traj<To>(ops, p, one).states.front();
}

double discrepancy(const ModalOperatorSet& ops, const PotentialTrajectory& a, const PotentialTrajectory& b) {
  return trajectory_discrepancy(ops, a, b, true);
}
double discrepancy(const ModalOperatorSet& ops, const LagrangianTrajectory& a, const LagrangianTrajectory& b) {
  return trajectory_discrepancy(ops, a, b);
}
double discrepancy(const ModalOperatorSet& ops, const EulerianTrajectory& a, const EulerianTrajectory& b) {
  return trajectory_discrepancy(ops, a, b);
}

template <class A, class B>
EquivalenceReport equivalence_of(const ModalOperatorSet& ops, const MaterialParams& p, const A& a, const B& b) {
  if constexpr (std::is_same_v<A, LagrangianModeState> || (std::is_same_v<A, EulerianModeState> &&
                                                           std::is_same_v<B, PotentialModeState>))
    return data_equivalence(ops, p, b, a);
  else
    return data_equivalence(ops, p, a, b);
}

// Whether the source data can be pushed into the target family; maps into or
// out of the Lagrangian model need the integral constraint at l = 0.
template <class S>
bool constraint_holds(const ModalOperatorSet& ops, const MaterialParams& p, const S& s) {
  return std::abs(ModelTraits<S>::constraint(ops, p, s)) <= constraint_tol(s.max_abs());
}

// ---- per-mode simulation ----

struct ModeOutput {
  ModeEntry mode;
  std::vector<std::string> rows;
  std::vector<AuditEntry> audits;
};

template <class S>
double bulk_trace(const ModalOperatorSet& ops, const S& s) {
  if constexpr (std::is_same_v<S, PotentialModeState>) return s.u.back();
  else if constexpr (std::is_same_v<S, LagrangianModeState>) return lagrangian_div(ops, s).back();
  else return s.p.back();
}

template <class S>
double curl_now(const ModalOperatorSet& ops, const S& s) {
  if (ops.l == 0) return 0.0;
  Samples c;
  if constexpr (std::is_same_v<S, LagrangianModeState>) c = curl_defect(ops, s.F, s.G);
  else if constexpr (std::is_same_v<S, EulerianModeState>) c = curl_defect(ops, s.f, s.g);
  else return 0.0;
  double m = 0.0;
  for (double x : c) m = std::max(m, std::abs(x));
  return m;
}

template <class S>
void battery_equivalence(const ModalOperatorSet& ops, const Scenario& sc, const TrajectoryRecord<S>& src,
                         double tol_scale, std::vector<AuditEntry>& out) {
  auto one = [&]<class T>(T*) {
    const S& s0 = src.states.front();
    if ((std::is_same_v<S, LagrangianModeState> || std::is_same_v<T, LagrangianModeState>) &&
        !constraint_holds(ops, sc.material, s0))
      return;
    const TrajectoryRecord<T> a = map_traj<T>(ops, sc.material, src);
    IntegratorConfig cfg = sc.integrator;
    const TrajectoryRecord<T> b =
        evolve(ops, sc.material, map_data<T>(ops, sc.material, s0, cfg.dt), cfg, default_tag<T>());
    out.push_back(entry(std::string("equivalence_") + to_string(default_tag<S>()) + "_to_" +
                            to_string(default_tag<T>()),
                        ops.l, discrepancy(ops, a, b), 1e-8 * tol_scale));
  };
  if constexpr (!std::is_same_v<S, PotentialModeState>) one(static_cast<PotentialModeState*>(nullptr));
  if constexpr (!std::is_same_v<S, LagrangianModeState>) one(static_cast<LagrangianModeState*>(nullptr));
  if constexpr (!std::is_same_v<S, EulerianModeState>) one(static_cast<EulerianModeState*>(nullptr));
}

template <class S>
ModeOutput simulate_mode(const Scenario& sc, const ModeEntry& mode, const RunOptions& opt,
                         const std::set<std::string>& audits) {
  const ModalOperatorSet ops = ops_for(sc, sc.N, mode.l);
  const S init = initial_as<S>(ops, sc, sc.model);
  const TrajectoryRecord<S> tr = evolve(ops, sc.material, init, sc.integrator, sc.model);
  const double ts = opt.tol_scale;
  ModeOutput out;
  out.mode = mode;
  const std::string mlabel = mode.m ? std::to_string(*mode.m) : "";
  for (std::size_t n = 0; n < tr.times.size(); ++n) {
    const S& s = tr.states[n];
    const EnergyBreakdown& e = tr.energy[n];
    const double diss =
        sc.integrator.scheme == Scheme::ImplicitMidpoint ? tr.dissipation_midpoint[n] : tr.dissipation_trapezoid[n];
    std::string row = std::string(to_string(sc.model)) + "," + std::to_string(mode.l) + "," + mlabel;
    for (double x : {tr.times[n], e.acoustic_kinetic, e.acoustic_compression, e.membrane_tension, e.membrane_kinetic,
                     e.membrane_stiffness, e.total(), diss, ModelTraits<S>::constraint(ops, sc.material, s),
                     curl_now(ops, s), bulk_trace(ops, s), s.v, s.vt})
      row += "," + fmt(x);
    out.rows.push_back(std::move(row));
  }

  const int l = mode.l;
  if (audits.count("energy")) {
    const EnergyAudit ea = audit_energy(tr);
    const double res = ea.residual(sc.integrator.scheme);
    const double rel = ea.E0 > 0.0 ? res / ea.E0 : res;
    const double tol = sc.integrator.scheme == Scheme::ImplicitMidpoint ? 1e-10 : 1e-6;
    out.audits.push_back(entry("energy_identity", l, rel, tol * ts));
  }
  if (audits.count("conservation")) {
    const ConservationAudit ca = audit_conservation(ops, sc.material, tr);
    if (!std::is_same_v<S, LagrangianModeState> && l == 0)
      out.audits.push_back(
          entry("constraint_drift", l, ca.constraint_drift, 1e-12 * std::max(1.0, std::abs(ca.constraint_initial)) * ts));
    if (!std::is_same_v<S, PotentialModeState> && l >= 1)
      out.audits.push_back(
          entry("curl_drift_per_time", l, ca.curl_drift_per_time(), 1e-10 * std::max(1.0, init.max_abs()) * ts));
  }
  if (audits.count("compatibility")) {
    CompatReport rep;
    if constexpr (std::is_same_v<S, PotentialModeState>) rep = check_compat_potential(ops, sc.material, init, 2);
    else if constexpr (std::is_same_v<S, LagrangianModeState>) rep = check_compat_lagrangian(ops, sc.material, init, 2);
    else rep = check_compat_eulerian(ops, sc.material, init, 2);
    out.audits.push_back(entry("compatibility_order2", l, rep.max_abs(), rep.tol * ts));
  }
  if (audits.count("weak_residual") && sc.integrator.t_end > 0.0) {
    std::map<std::string, double> worst;
    for (const auto& w : audit_weak_residual(ops, sc.material, tr, default_test_family(ops, sc.integrator.t_end)))
      worst[w.identity] = std::max(worst[w.identity], w.relative());
    const double h2 = ops.h() * ops.h() + sc.integrator.dt * sc.integrator.dt;
    for (const auto& [name, v] : worst) out.audits.push_back(entry("weak_" + name, l, v, 10.0 * h2 * ts));
  }
  if (audits.count("exact_solution") && sc.initial.kind == PresetKind::StationaryDrift && l == 0) {
    const double u1 = sc.initial.u1, v0 = -sc.material.rho0 * u1 / sc.initial.k0;
    double dev = 0.0;
    for (const S& s : tr.states) {
      if constexpr (std::is_same_v<S, PotentialModeState>)
        for (double x : s.ut) dev = std::max(dev, std::abs(x - u1));
      else if constexpr (std::is_same_v<S, EulerianModeState>)
        for (double x : s.p) dev = std::max(dev, std::abs(x - sc.material.rho0 * u1));
      dev = std::max(dev, std::abs(s.v - v0));
    }
    out.audits.push_back(entry("exact_solution", l, dev, 1e-10 * std::max(1.0, std::abs(u1)) * ts));
  }
  if (audits.count("equivalence")) battery_equivalence(ops, sc, tr, ts, out.audits);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ValidationError, "output", "cannot write " + path);
  out << text;
}

json audits_json(const std::vector<AuditEntry>& audits) {
  json a = json::array();
  for (const auto& e : audits)
    a.push_back({{"name", e.name}, {"l", e.l}, {"value", e.value}, {"tol", e.tol}, {"pass", e.pass}});
  return a;
}

json summary_base(const Scenario& sc, const RunOptions& opt, const RunSummary& rs) {
  json modes = json::array();
  for (const auto& m : sc.modes.modes) {
    json e = {{"l", m.l}};
    if (m.m) e["m"] = *m.m;
    modes.push_back(e);
  }
  const auto [d, g] = make_domain(sc.R0, sc.R1, sc.N);
  return {{"command", rs.command},
          {"config_sha256", sha256_hex(sc.raw)},
          {"model", to_string(sc.model)},
          {"modes", modes},
          {"grid", {{"R0", sc.R0}, {"R1", sc.R1}, {"N", sc.N}, {"h", g.h}}},
          {"integrator",
           {{"dt", sc.integrator.dt},
            {"t_end", sc.integrator.t_end},
            {"scheme", to_string(sc.integrator.scheme)},
            {"steps", sc.integrator.steps()},
            {"record_every", sc.integrator.record_every}}},
          {"tol_scale", opt.tol_scale},
          {"audits", audits_json(rs.audits)},
          {"pass", rs.pass()}};
}

const char* kCsvHeader =
    "model,l,m,time,acoustic_kinetic,acoustic_compression,membrane_tension,membrane_kinetic,membrane_stiffness,"
    "energy_total,dissipation_to_date,constraint,curl_defect,trace_bulk_R1,trace_v,trace_vt";

}  // namespace

RunSummary run_scenario(const Scenario& sc, const RunOptions& opt, bool full_battery) {
  std::set<std::string> audits(sc.audits.begin(), sc.audits.end());
  if (full_battery) audits = kAudits;
  const auto& modes = sc.modes.modes;
  std::vector<ModeOutput> outs(modes.size());
  parallel_for(static_cast<int>(modes.size()), effective_threads(opt), [&](int i) {
    switch (family(sc.model)) {
      case 0: outs[i] = simulate_mode<PotentialModeState>(sc, modes[i], opt, audits); break;
      case 1: outs[i] = simulate_mode<LagrangianModeState>(sc, modes[i], opt, audits); break;
      default: outs[i] = simulate_mode<EulerianModeState>(sc, modes[i], opt, audits); break;
    }
  });
  RunSummary rs;
  rs.command = full_battery ? "verify" : "simulate";
  std::string csv = std::string(kCsvHeader) + "\r\n";
  for (const auto& o : outs) {
    for (const auto& r : o.rows) csv += r + "\r\n";
    rs.audits.insert(rs.audits.end(), o.audits.begin(), o.audits.end());
  }
  write_text(sc.csv_path, csv);
  write_text(sc.summary_path, summary_base(sc, opt, rs).dump(2) + "\n");
  return rs;
}

namespace {

// Residual per quantity name for one (N, dt) level, max over the mode degrees.
using LevelResult = std::map<std::string, double>;

template <class S>
void level_dynamic(const Scenario& sc, const ModalOperatorSet& ops, const IntegratorConfig& cfg, LevelResult& out) {
  const S init = initial_as<S>(ops, sc, sc.model);
  auto bump = [&](const std::string& k, double v) { out[k] = std::max(out[k], v); };
  const std::string& study = sc.convergence->study;
  if (study == "energy_identity") {
    bump("energy_identity", audit_energy(evolve(ops, sc.material, init, cfg, sc.model)).residual_trapezoid);
  } else if (study == "weak_residual") {
    const auto tr = evolve(ops, sc.material, init, cfg, sc.model);
    for (const auto& w : audit_weak_residual(ops, sc.material, tr, default_test_family(ops, cfg.t_end)))
      bump("weak_" + w.identity, std::abs(w.residual));
  } else {
    IntegratorConfig rk = cfg;
    rk.scheme = Scheme::ExplicitRK4;
    IntegratorConfig mid = cfg;
    mid.scheme = Scheme::ImplicitMidpoint;
    bump("cross_integrator",
         discrepancy(ops, evolve(ops, sc.material, init, mid, sc.model), evolve(ops, sc.material, init, rk, sc.model)));
  }
}

void level_elliptic(const Scenario& sc, const ModalOperatorSet& ops, LevelResult& out) {
  const ManufacturedDivCurl m = manufactured_div_curl(ops, sc.material);
  const DivCurlSolution s = solve_div_curl(ops, sc.material, m.problem);
  double e = 0.0, n = 0.0;
  for (int f = 1; f < ops.N(); ++f) {
    const double wgt = ops.area[f] * ops.h();
    e += wgt * (s.F[f] - m.F[f]) * (s.F[f] - m.F[f]);
    n += wgt * m.F[f] * m.F[f];
  }
  for (int j = 0; j < ops.N(); ++j) {
    e += ops.w[j] * (s.G[j] - m.G[j]) * (s.G[j] - m.G[j]);
    n += ops.w[j] * m.G[j] * m.G[j];
  }
  const double rel = n > 0.0 ? std::sqrt(e / n) : std::sqrt(e);
  out["elliptic_l2"] = std::max(out["elliptic_l2"], rel);
}

}  // namespace

RunSummary run_convergence(const Scenario& sc, const RunOptions& opt) {
  if (!sc.convergence) throw Error(ErrorKind::ValidationError, "convergence", "scenario has no convergence block");
  const ConvergenceSpec& cs = *sc.convergence;
  const bool spatial = cs.study == "elliptic";
  std::vector<LevelResult> levels(cs.levels.size());
  std::vector<double> hs(cs.levels.size());
  const auto degrees = sc.modes.degrees();
  parallel_for(static_cast<int>(cs.levels.size()), effective_threads(opt), [&](int k) {
    const ConvergenceLevel& lv = cs.levels[k];
    IntegratorConfig cfg = sc.integrator;
    cfg.dt = lv.dt;
    for (int l : degrees) {
      const ModalOperatorSet ops = ops_for(sc, lv.N, l);
      hs[k] = ops.h();
      if (spatial) level_elliptic(sc, ops, levels[k]);
      else if (family(sc.model) == 0) level_dynamic<PotentialModeState>(sc, ops, cfg, levels[k]);
      else if (family(sc.model) == 1) level_dynamic<LagrangianModeState>(sc, ops, cfg, levels[k]);
      else level_dynamic<EulerianModeState>(sc, ops, cfg, levels[k]);
    }
  });

  RunSummary rs;
  rs.command = "convergence";
  std::string csv = "quantity,level,N,h,dt,residual,observed_order,flag\r\n";
  json table = json::array();
  for (const auto& [name, _] : levels.front()) {
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const double r = levels[k].at(name);
      double order = std::nan("");
      bool flag = false;
      if (k > 0) {
        const double step_prev = spatial ? hs[k - 1] : cs.levels[k - 1].dt;
        const double step = spatial ? hs[k] : cs.levels[k].dt;
        order = std::log(levels[k - 1].at(name) / r) / std::log(step_prev / step);
        flag = !(order >= cs.min_order);
        AuditEntry e{"order_" + name + "_level" + std::to_string(k), -1, order, cs.min_order, !flag};
        rs.audits.push_back(e);
      }
      csv += name + "," + std::to_string(k) + "," + std::to_string(cs.levels[k].N) + "," + fmt(hs[k]) + "," +
             fmt(cs.levels[k].dt) + "," + fmt(r) + "," + (k > 0 ? fmt(order) : "") + "," + (flag ? "LOW" : "") + "\r\n";
      json row = {{"quantity", name}, {"level", k}, {"N", cs.levels[k].N}, {"h", hs[k]}, {"dt", cs.levels[k].dt},
                  {"residual", r}, {"flag", flag}};
      row["observed_order"] = k > 0 ? json(order) : json(nullptr);
      table.push_back(row);
    }
  }
  write_text(sc.csv_path, csv);
  json sum = summary_base(sc, opt, rs);
  sum["study"] = cs.study;
  sum["min_order"] = cs.min_order;
  sum["table"] = table;
  write_text(sc.summary_path, sum.dump(2) + "\n");
  return rs;
}

namespace {

template <class From, class To>
void equivalence_pair(const Scenario& sc, const ModeEntry& mode, const RunOptions& opt, std::vector<AuditEntry>& out,
                      json& report) {
  const EquivalenceSpec& es = *sc.equivalence;
  const ModalOperatorSet ops = ops_for(sc, sc.N, mode.l);
  const MaterialParams& p = sc.material;
  const From s0 = initial_as<From>(ops, sc, es.source);
  const IntegratorConfig& cfg = sc.integrator;
  const TrajectoryRecord<From> src = evolve(ops, p, s0, cfg, es.source);
  const TrajectoryRecord<To> a = map_traj<To>(ops, p, src);
  const double tol = 1e-8 * opt.tol_scale;
  json r = {{"l", mode.l}};
  if (es.round_trip) {
    const TrajectoryRecord<From> back = map_traj<From>(ops, p, a);
    const double d = discrepancy(ops, back, src);
    out.push_back(entry("round_trip", mode.l, d, tol));
    r["round_trip_discrepancy"] = d;
  } else {
    const To t0 = map_data<To>(ops, p, s0, cfg.dt);
    const TrajectoryRecord<To> b = evolve(ops, p, t0, cfg, es.target);
    const double d = discrepancy(ops, a, b);
    out.push_back(entry("evolve_map_vs_map_evolve", mode.l, d, tol));
    r["trajectory_discrepancy"] = d;
    const EquivalenceReport er = equivalence_of(ops, p, s0, t0);
    double worst = 0.0;
    json res = json::object();
    for (const auto& x : er.residuals) {
      worst = std::max(worst, std::abs(x.value));
      res[x.name] = x.value;
    }
    out.push_back(entry("data_equivalence", mode.l, worst, er.tol * opt.tol_scale));
    r["data_equivalence"] = res;
  }
  report.push_back(r);
}

}  // namespace

RunSummary run_equivalence(const Scenario& sc, const RunOptions& opt) {
  if (!sc.equivalence) throw Error(ErrorKind::ValidationError, "equivalence", "scenario has no equivalence block");
  const EquivalenceSpec& es = *sc.equivalence;
  const auto& modes = sc.modes.modes;
  std::vector<std::vector<AuditEntry>> outs(modes.size());
  std::vector<json> reports(modes.size(), json::array());
  parallel_for(static_cast<int>(modes.size()), effective_threads(opt), [&](int i) {
    const int from = family(es.source), to = family(es.target);
    auto& o = outs[i];
    auto& r = reports[i];
    if (from == 0 && to == 1) equivalence_pair<PotentialModeState, LagrangianModeState>(sc, modes[i], opt, o, r);
    else if (from == 0 && to == 2) equivalence_pair<PotentialModeState, EulerianModeState>(sc, modes[i], opt, o, r);
    else if (from == 1 && to == 0) equivalence_pair<LagrangianModeState, PotentialModeState>(sc, modes[i], opt, o, r);
    else if (from == 1 && to == 2) equivalence_pair<LagrangianModeState, EulerianModeState>(sc, modes[i], opt, o, r);
    else if (from == 2 && to == 0) equivalence_pair<EulerianModeState, PotentialModeState>(sc, modes[i], opt, o, r);
    else equivalence_pair<EulerianModeState, LagrangianModeState>(sc, modes[i], opt, o, r);
  });
  RunSummary rs;
  rs.command = "equivalence";
  json rep = json::array();
  std::string csv = "l,check,value,tol,pass\r\n";
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (const auto& e : outs[i]) {
      rs.audits.push_back(e);
      csv += std::to_string(e.l) + "," + e.name + "," + fmt(e.value) + "," + fmt(e.tol) + "," +
             (e.pass ? "true" : "false") + "\r\n";
    }
    for (const auto& x : reports[i]) rep.push_back(x);
  }
  write_text(sc.csv_path, csv);
  json sum = summary_base(sc, opt, rs);
  sum["equivalence"] = {{"source", to_string(es.source)},
                        {"target", to_string(es.target)},
                        {"round_trip", es.round_trip},
                        {"modes", rep}};
  write_text(sc.summary_path, sum.dump(2) + "\n");
  return rs;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Acoustic boundary-condition wave models: simulation and audits"};
  app.require_subcommand(1);
  app.fallthrough();
  RunOptions opt;
  app.add_option("--tol-scale", opt.tol_scale, "multiply every audit tolerance")->check(CLI::PositiveNumber);
  std::string config;
  auto* sim = app.add_subcommand("simulate", "evolve the scenario and run the requested audits");
  auto* conv = app.add_subcommand("convergence", "run a refinement ladder and report observed orders");
  auto* eq = app.add_subcommand("equivalence", "compare evolve-then-map with map-then-evolve");
  auto* ver = app.add_subcommand("verify", "evolve the scenario and run every audit");
  for (auto* sub : {sim, conv, eq, ver}) sub->add_option("config", config, "scenario JSON file")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    const Scenario sc = load_scenario(config);
    RunSummary rs;
    if (sim->parsed()) rs = run_scenario(sc, opt, false);
    else if (ver->parsed()) rs = run_scenario(sc, opt, true);
    else if (conv->parsed()) rs = run_convergence(sc, opt);
    else rs = run_equivalence(sc, opt);
    for (const auto& a : rs.audits)
      if (!a.pass)
        std::cerr << "FAIL " << a.name << " l=" << a.l << " value=" << fmt(a.value) << " tol=" << fmt(a.tol) << "\n";
    return rs.pass() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return (e.kind() == ErrorKind::ConfigParseError || e.kind() == ErrorKind::ValidationError) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace acbc
