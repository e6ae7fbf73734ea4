#include "twomode/probe.hpp"

#include <cmath>
#include <optional>
#include <set>

#include "twomode/metrology.hpp"
#include "twomode/spectral.hpp"
#include "twomode/states.hpp"
#include "twomode/variational.hpp"

namespace twomode {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void allow_only(const json& obj, const std::string& path, const std::set<std::string>& keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!keys.count(it.key())) fail(path + "." + it.key(), "unknown field");
}

double get_real(const json& obj, const std::string& path, const std::string& key, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(path + "." + key, "required field missing");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path + "." + key, "must be finite");
  return x;
}

cplx as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) return {v[0].get<double>(), v[1].get<double>()};
  fail(path, "expected a number or [re, im]");
}

cplx get_complex(const json& obj, const std::string& path, const std::string& key, std::optional<cplx> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(path + "." + key, "required field missing");
  }
  return as_complex(obj.at(key), path + "." + key);
}

int get_int(const json& obj, const std::string& path, const std::string& key, std::optional<int> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(path + "." + key, "required field missing");
  }
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& key) {
  if (!obj.contains(key)) return false;
  if (!obj.at(key).is_boolean()) fail(key, "expected true or false");
  return obj.at(key).get<bool>();
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

json vector_json(const DickeVector& v) {
  json a = json::array();
  for (const auto& c : v.amplitudes()) a.push_back(complex_json(c));
  return a;
}

SpherePoint point_from_json(const json& s, const std::string& path) {
  const int given = s.contains("zeta") + s.contains("direction") + (s.contains("theta") || s.contains("phi")) +
                    (s.contains("infinity") && s.at("infinity").is_boolean() && s.at("infinity").get<bool>());
  if (given != 1) fail(path, "give exactly one of zeta, direction, theta/phi or infinity");
  if (s.contains("zeta")) return SpherePoint::finite(get_complex(s, path, "zeta"));
  if (s.contains("direction")) {
    const auto& d = s.at("direction");
    if (!d.is_array() || d.size() != 3) fail(path + ".direction", "expected [nx, ny, nz]");
    for (const auto& x : d)
      if (!x.is_number()) fail(path + ".direction", "expected [nx, ny, nz]");
    try {
      return SpherePoint::from_direction(d[0].get<double>(), d[1].get<double>(), d[2].get<double>());
    } catch (const DomainError& e) {
      fail(path + ".direction", e.what());
    }
  }
  if (s.contains("theta") || s.contains("phi"))
    return SpherePoint::from_angles(get_real(s, path, "theta"), get_real(s, path, "phi", 0.0));
  return SpherePoint::infinity();
}

BandedHermitian operator_named(ParticleNumber n, const json& g, const std::string& path, const BandedHermitian* ham,
                               std::string* name) {
  if (g.is_object()) {
    allow_only(g, path, {"axis"});
    const auto& a = g.contains("axis") ? g.at("axis") : json();
    if (!a.is_array() || a.size() != 3) fail(path + ".axis", "expected [nx, ny, nz]");
    double nx[3];
    for (int i = 0; i < 3; ++i) {
      if (!a[i].is_number()) fail(path + ".axis", "expected [nx, ny, nz]");
      nx[i] = a[i].get<double>();
    }
    const double len = std::sqrt(nx[0] * nx[0] + nx[1] * nx[1] + nx[2] * nx[2]);
    if (!(len > 0.0) || !std::isfinite(len)) fail(path + ".axis", "must be a nonzero finite vector");
    if (name) *name = "n.J";
    return (nx[0] / len) * build_su2(n, Axis::X) + (nx[1] / len) * build_su2(n, Axis::Y) +
           (nx[2] / len) * build_su2(n, Axis::Z);
  }
  if (!g.is_string()) fail(path, "expected a term name, Jx/Jy/Jz, \"hamiltonian\" or {\"axis\": [...]}");
  const auto s = g.get<std::string>();
  if (name) *name = s;
  if (s == "Jx") return build_su2(n, Axis::X);
  if (s == "Jy") return build_su2(n, Axis::Y);
  if (s == "Jz") return build_su2(n, Axis::Z);
  if (s == "hamiltonian") {
    if (!ham) fail(path, "\"hamiltonian\" needs couplings or overlaps in the config");
    return *ham;
  }
  try {
    return build_term(n, parse_term(s));
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

}  // namespace

CouplingSet couplings_from_json(const json& j) {
  const std::string p = "couplings";
  if (!j.is_object()) fail(p, "expected an object");
  allow_only(j, p, {"vartheta", "V00", "V01", "V11", "A1", "A2", "T0", "T1"});
  CouplingSet c;
  c.vartheta = get_real(j, p, "vartheta", 0.0);
  c.V00 = get_real(j, p, "V00", 0.0);
  c.V01 = get_real(j, p, "V01", 0.0);
  c.V11 = get_real(j, p, "V11", 0.0);
  c.A1 = get_complex(j, p, "A1", cplx{});
  c.A2 = get_complex(j, p, "A2", cplx{});
  c.T0 = get_complex(j, p, "T0", cplx{});
  c.T1 = get_complex(j, p, "T1", cplx{});
  return c;
}

ModeOverlaps overlaps_from_json(const json& j) {
  const std::string p = "overlaps";
  if (!j.is_object()) fail(p, "expected an object");
  allow_only(j, p, {"z", "V0", "o_0000", "o_1111", "o_0011", "o_pair", "o_t0", "o_t1", "vartheta_in", "A1_in"});
  ModeOverlaps m;
  m.z = get_complex(j, p, "z", cplx{});
  m.V0 = get_real(j, p, "V0", 0.0);
  m.o_0000 = get_real(j, p, "o_0000", 0.0);
  m.o_1111 = get_real(j, p, "o_1111", 0.0);
  m.o_0011 = get_real(j, p, "o_0011", 0.0);
  m.o_pair = get_complex(j, p, "o_pair", cplx{});
  m.o_t0 = get_complex(j, p, "o_t0", cplx{});
  m.o_t1 = get_complex(j, p, "o_t1", cplx{});
  m.vartheta_in = get_real(j, p, "vartheta_in", 0.0);
  m.A1_in = get_complex(j, p, "A1_in", cplx{});
  return m;
}

json to_json(const CouplingSet& c) {
  return {{"vartheta", c.vartheta}, {"V00", c.V00},           {"V01", c.V01},           {"V11", c.V11},
          {"A1", complex_json(c.A1)}, {"A2", complex_json(c.A2)}, {"T0", complex_json(c.T0)}, {"T1", complex_json(c.T1)}};
}

DickeVector state_from_json(ParticleNumber n, const json& s, const BandedHermitian* ham) {
  const std::string p = "state";
  if (!s.is_object()) fail(p, "expected an object with a \"family\" field");
  if (!s.contains("family") || !s.at("family").is_string()) fail(p + ".family", "required string field missing");
  const auto family = s.at("family").get<std::string>();
  const std::string fp = p + "(" + family + ")";
  try {
    if (family == "dicke") {
      allow_only(s, p, {"family", "k"});
      const int k = get_int(s, p, "k");
      if (k < 0 || k > n.value()) fail(p + ".k", "must lie in [0, N]");
      return DickeVector::basis(n, k);
    }
    if (family == "noon") {
      allow_only(s, p, {"family", "phi"});
      return noon(n, get_real(s, p, "phi", 0.0));
    }
    if (family == "coherent") {
      allow_only(s, p, {"family", "zeta", "direction", "theta", "phi", "infinity"});
      return coherent(n, point_from_json(s, p));
    }
    if (family == "antipodal") {
      allow_only(s, p, {"family", "zeta", "direction", "theta", "phi", "infinity", "eta"});
      const double eta = get_real(s, p, "eta", 0.0);
      json point = s;
      point.erase("eta");
      return antipodal_superposition(n, point_from_json(point, p), eta);
    }
    if (family == "psi_theta_phi") {
      allow_only(s, p, {"family", "theta", "phi"});
      return psi_theta_phi(n, get_real(s, p, "theta"), get_real(s, p, "phi", 0.0));
    }
    if (family == "psi_v01") {
      allow_only(s, p, {"family", "theta", "phi", "eta"});
      return psi_v01(n, get_real(s, p, "theta"), get_real(s, p, "phi", 0.0), get_real(s, p, "eta", 0.0));
    }
    if (family == "psi_v01_odd") {
      allow_only(s, p, {"family", "theta", "phi", "theta2", "phi2", "eta"});
      return psi_v01_odd(n, get_real(s, p, "theta"), get_real(s, p, "phi", 0.0), get_real(s, p, "theta2"),
                         get_real(s, p, "phi2", 0.0), get_real(s, p, "eta", 0.0));
    }
    if (family == "omega") {
      allow_only(s, p, {"family", "c", "branch"});
      const double c = s.contains("c") ? get_real(s, p, "c") : tilde_c(n).c_tilde;
      std::string b = "+";
      if (s.contains("branch")) {
        if (!s.at("branch").is_string()) fail(p + ".branch", "expected \"+\" or \"-\"");
        b = s.at("branch").get<std::string>();
      }
      if (b != "+" && b != "-") fail(p + ".branch", "expected \"+\" or \"-\"");
      return omega(n, c, b == "+" ? Branch::Plus : Branch::Minus);
    }
    if (family == "xi") {
      allow_only(s, p, {"family", "w", "z"});
      return xi_pair(n, get_complex(s, p, "w"), get_complex(s, p, "z"));
    }
    if (family == "psi4") {
      allow_only(s, p, {"family"});
      return psi4(n);
    }
    if (family == "a2_even") {
      allow_only(s, p, {"family", "eta"});
      return near_optimal_family(FamilyKind::A2Even, n, get_real(s, p, "eta", 0.0));
    }
    if (family == "a2_odd") {
      allow_only(s, p, {"family", "eta", "theta", "phi", "theta2", "phi2"});
      return near_optimal_family(FamilyKind::A2Odd, n, get_real(s, p, "eta", 0.0),
                                 {get_real(s, p, "theta", 0.0), get_real(s, p, "phi", 0.0),
                                  get_real(s, p, "theta2", 0.0), get_real(s, p, "phi2", 0.0)});
    }
    if (family == "t0") {
      allow_only(s, p, {"family", "eta", "w0", "z0"});
      return near_optimal_family(FamilyKind::T0, n, get_real(s, p, "eta", 0.0),
                                 {get_real(s, p, "w0"), get_real(s, p, "z0")});
    }
    if (family == "eigenstate" || family == "optimal") {
      allow_only(s, p, {"family", "operator", "index", "eta"});
      if (!s.contains("operator")) fail(p + ".operator", "required field missing");
      const auto op = operator_named(n, s.at("operator"), p + ".operator", ham, nullptr);
      const bool parity_ok = op.effective_bandwidth() == 2 &&
                             std::all_of(op.super1().begin(), op.super1().end(), [](cplx c) { return c == 0.0; });
      const auto dec = parity_ok ? eigh_by_parity(op) : eigh(op);
      if (family == "eigenstate") {
        const int idx = get_int(s, p, "index", 0);
        if (idx < 0 || idx >= dec.size()) fail(p + ".index", "must lie in [0, N]");
        return dec.eigenvectors[idx];
      }
      return variational_superposition(SuperpositionSpec::from_states(dec.eigenvectors.front(), dec.eigenvectors.back(),
                                                                       get_real(s, p, "eta", 0.0)));
    }
    if (family == "amplitudes") {
      allow_only(s, p, {"family", "amplitudes"});
      if (!s.contains("amplitudes") || !s.at("amplitudes").is_array())
        fail(p + ".amplitudes", "expected an array of N+1 complex numbers");
      const auto& a = s.at("amplitudes");
      if (static_cast<int>(a.size()) != n.dim()) fail(p + ".amplitudes", "expected N+1 = " + std::to_string(n.dim()) + " entries");
      std::vector<cplx> c;
      for (size_t i = 0; i < a.size(); ++i) c.push_back(as_complex(a[i], p + ".amplitudes[" + std::to_string(i) + "]"));
      return DickeVector(n, std::move(c));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    fail(fp, e.what());
  }
  fail(p + ".family", "unknown family '" + family + "'");
}

json run_probe(const json& config) {
  if (!config.is_object()) fail("config", "expected a JSON object");
  allow_only(config, "config", {"N", "couplings", "overlaps", "generator", "state", "nu", "bounds", "sld", "fragmentation"});
  const int N = get_int(config, "config", "N");
  if (N < 1) fail("N", "must be at least 1");
  const ParticleNumber n(N);
  if (config.contains("couplings") && config.contains("overlaps")) fail("config", "give couplings or overlaps, not both");

  std::optional<BandedHermitian> ham;
  json out;
  if (config.contains("couplings") || config.contains("overlaps")) {
    const CouplingSet c = config.contains("couplings") ? couplings_from_json(config.at("couplings"))
                                                       : couplings_from_overlaps(overlaps_from_json(config.at("overlaps")));
    ham = assemble_hamiltonian(n, c);
    out["couplings"] = to_json(c);
  }
  if (!config.contains("generator")) fail("generator", "required field missing");
  std::string gname;
  const auto gen = operator_named(n, config.at("generator"), "generator", ham ? &*ham : nullptr, &gname);
  if (!config.contains("state")) fail("state", "required field missing");
  const auto state = state_from_json(n, config.at("state"), ham ? &*ham : nullptr);
  const double nu = get_real(config, "config", "nu", 1.0);
  if (!(nu > 0.0)) fail("nu", "must be positive");

  const bool with_bounds = get_bool(config, "bounds");
  const auto r = qfi_pure(state, gen, gname, with_bounds);
  out["N"] = r.N;
  out["generator"] = r.generator;
  out["state"] = config.at("state");
  out["mean"] = r.mean;
  out["variance"] = r.variance;
  out["qfi"] = r.qfi;
  out["nu"] = nu;
  if (r.qfi > 0.0) {
    out["qcr"] = r.qcr(1.0);
    out["qcr_nu"] = r.qcr(nu);
  } else {
    out["qcr"] = nullptr;
    out["qcr_nu"] = nullptr;
  }
  if (r.bounds) {
    out["bounds"] = {{"lambda_min", r.bounds->lambda_min},
                     {"lambda_max", r.bounds->lambda_max},
                     {"norm", r.bounds->norm()},
                     {"qfi_max", r.bounds->qfi_max()}};
  }
  if (get_bool(config, "sld")) {
    const auto m = sld(state, gen);
    out["sld"] = {{"eigenvalues", m.eigenvalues},
                  {"projectors", json::array({vector_json(m.projectors[0]), vector_json(m.projectors[1])})}};
  }
  if (get_bool(config, "fragmentation")) {
    const auto f = fragmentation(state);
    out["fragmentation"] = {{"fd", f.fd}, {"jvec", f.jvec}, {"opdm_eigenvalues", f.opdm_eigenvalues}};
  }
  return out;
}

}  // namespace twomode
