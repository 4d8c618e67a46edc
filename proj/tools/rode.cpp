// Command-line front end: exponents, solve, reduce, rw.
//
// Exit codes: 0 success, 2 input or precondition error, 3 no solution.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rode/json_io.hpp"
#include "rode/rode.hpp"

namespace {

using rode::io::json;
using namespace rode;

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kNoSolution = 3;

int log_level() {
  const char* v = std::getenv("RODE_LOG");
  if (!v) return 0;
  const std::string s(v);
  if (s == "debug" || s == "2") return 2;
  if (s == "info" || s == "1") return 1;
  return 0;
}

void log(int level, const std::string& msg) {
  if (log_level() >= level) std::cerr << "[rode] " << msg << "\n";
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Optional "parameters" block: M, omega, l, A for expression strings.
SymbolTable symbols_of(const json& j, RWParams* out = nullptr) {
  if (!j.is_object() || !j.contains("parameters")) return {};
  const json& p = j.at("parameters");
  RWParams rw;
  if (p.contains("M")) rw.M = io::rational_from_json(p.at("M"));
  if (p.contains("omega")) rw.omega = io::rational_from_json(p.at("omega"));
  if (p.contains("l")) rw.l = p.at("l").get<std::int64_t>();
  if (p.contains("A")) rw.A = io::rational_from_json(p.at("A"));
  rw.validate();
  if (out) *out = rw;
  return rw_symbols(rw);
}

/// Operator either at top level or under "operator".
DiffOp operator_of(const json& j, const SymbolTable& symbols) {
  return io::diffop_from_json(j.is_object() && j.contains("operator") ? j.at("operator") : j, symbols);
}

class Report {
 public:
  explicit Report(std::string format) : format_(std::move(format)) {}
  std::ostringstream text;
  json data;

  void emit(std::ostream& os) const {
    if (format_ == "json") {
      os << data.dump(2) << "\n";
      return;
    }
    os << text.str() << "\n```json\n" << data.dump(2) << "\n```\n";
  }

 private:
  std::string format_;
};

std::string vec_to_string(const RatVec& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + v[k].to_string();
  return out + ")";
}

std::string exps_to_string(const std::vector<std::int64_t>& e) {
  std::string out = "[";
  for (std::size_t k = 0; k < e.size(); ++k) out += (k ? ", " : "") + std::to_string(e[k]);
  return out + "]";
}

ExpansionPoint parse_point(const std::string& s, const std::optional<RWParams>& rw) {
  if (s == "inf" || s == "infinity") return ExpansionPoint::infinity();
  if (s == "2M") {
    if (!rw) throw PreconditionViolation("point 2M needs a parameters block with M");
    return ExpansionPoint::finite(rw->horizon());
  }
  return ExpansionPoint::finite(GaussianRational::parse(s));
}

int cmd_exponents(const std::string& system_path, const std::string& point_text,
                  const std::string& multipliers_path, bool search, Report& rep) {
  const json sys = load_json(system_path);
  RWParams rw;
  const SymbolTable symbols = symbols_of(sys, &rw);
  std::optional<RWParams> params;
  if (sys.is_object() && sys.contains("parameters")) params = rw;
  const DiffOp e = operator_of(sys, symbols);
  const ExpansionPoint point = parse_point(point_text, params);

  MultiplierMap given;
  if (sys.is_object() && sys.contains("multipliers")) given = io::multiplier_map_from_json(sys.at("multipliers"), symbols);
  if (!multipliers_path.empty()) given = io::multiplier_map_from_json(load_json(multipliers_path), symbols);

  std::optional<MultiplierPair> m;
  if (auto it = given.find(point); it != given.end()) {
    m = it->second;
  } else if (search) {
    m = find_multipliers(e, point);
    if (!m) throw MissingMultiplier("bounded multiplier search found nothing at " + point.to_string());
  } else {
    m = MultiplierPair::trivial(point, e.rows());
  }
  log(1, "multipliers at " + point.to_string() + ": S = " + m->S().to_string() + ", T = " + m->T().to_string());
  const CharMatrix E = char_matrix(e, *m);
  rep.text << "point: " << point << "\n"
           << "S: " << m->S() << "\n"
           << "T: " << m->T() << "\n"
           << "E_n: " << E.entries << "\n"
           << "det E_n: " << E.det << "\n"
           << "exponents: " << exps_to_string(E.exponents);
  rep.data = {{"command", "exponents"}, {"multipliers", io::to_json(*m)}, {"char_matrix", io::to_json(E)}};
  return kOk;
}

void describe_space(const SolutionSpace& s, Report& rep) {
  rep.text << "R: " << s.R << "\n"
           << "ansatz powers: " << s.lower << " .. " << s.upper << "\n"
           << "linear system: " << s.equations << " equations, " << s.unknowns << " unknowns, rank " << s.rank << "\n";
  for (const auto& a : s.analyses)
    rep.text << "  at " << a.point << ": exponents " << exps_to_string(a.E.exponents) << ", source order "
             << a.source_order << ", bound " << a.bound << "\n";
}

int cmd_solve(const std::string& system_path, const std::string& rhs_path, const std::string& multipliers_path,
              Report& rep) {
  const json sys = load_json(system_path);
  const SymbolTable symbols = symbols_of(sys);
  const DiffOp e = operator_of(sys, symbols);
  const json rhs_file = load_json(rhs_path);
  const SymbolTable rhs_symbols = rhs_file.is_object() && rhs_file.contains("parameters") ? symbols_of(rhs_file) : symbols;
  const RatVec v = io::ratvec_from_json(rhs_file.is_object() ? rhs_file.at("rhs") : rhs_file, rhs_symbols);
  MultiplierMap given;
  if (sys.is_object() && sys.contains("multipliers")) given = io::multiplier_map_from_json(sys.at("multipliers"), symbols);
  if (!multipliers_path.empty()) given = io::multiplier_map_from_json(load_json(multipliers_path), symbols);

  const SolutionSpace s = solve_rational(e, v, given);
  describe_space(s, rep);
  rep.data = {{"command", "solve"}, {"space", io::to_json(s)}};
  if (!s.consistent()) {
    rep.text << "no rational solution: the " << s.equations << " x " << s.unknowns
             << " coefficient system is inconsistent (rank " << s.rank << ")";
    rep.data["exists"] = false;
    return kNoSolution;
  }
  rep.data["exists"] = true;
  rep.text << "particular: " << vec_to_string(*s.particular) << "\n"
           << "kernel dimension: " << s.kernel_basis.size();
  for (const auto& k : s.kernel_basis) rep.text << "\n  " << vec_to_string(k);
  return kOk;
}

int cmd_reduce(const std::string& upper_path, const std::string& multipliers_path, Report& rep) {
  const json sys = load_json(upper_path);
  const SymbolTable symbols = symbols_of(sys);
  const TriangularSystem t(io::diffop_from_json(sys.at("e0"), symbols), io::diffop_from_json(sys.at("e1"), symbols),
                           io::diffop_from_json(sys.at("Delta"), symbols));
  MultiplierMap given;
  if (sys.contains("multipliers")) given = io::multiplier_map_from_json(sys.at("multipliers"), symbols);
  if (!multipliers_path.empty()) given = io::multiplier_map_from_json(load_json(multipliers_path), symbols);

  const ReductionResult res = decide_reduction(t, given);
  describe_space(res.space, rep);
  rep.data = {{"command", "reduce"}, {"exists", res.exists()}, {"space", io::to_json(res.space)}};
  if (!res.exists()) {
    rep.text << "no reduction: the decoupling system has no rational solution\n"
             << "remainder of Delta modulo e1: " << res.certificate;
    rep.data["certificate"] = io::to_json(res.certificate);
    return kNoSolution;
  }
  rep.data["unique"] = res.unique;
  rep.data["pair"] = io::to_json(*res.pair);
  json kernel = json::array();
  for (const auto& k : res.kernel) kernel.push_back(io::to_json(k));
  rep.data["kernel"] = kernel;
  rep.text << "delta: " << res.pair->delta << "\n"
           << "epsilon: " << res.pair->epsilon << "\n"
           << (res.unique ? "unique" : "not unique, kernel dimension " + std::to_string(res.kernel.size()));
  return kOk;
}

RWDelta load_rw_delta(const json& j, const SymbolTable& symbols) {
  if (j.contains("Delta0") || j.contains("Delta1"))
    return {j.contains("Delta0") ? io::ratfunc_from_json(j.at("Delta0"), symbols) : RatFunc(),
            j.contains("Delta1") ? io::ratfunc_from_json(j.at("Delta1"), symbols) : RatFunc()};
  if (j.contains("dr") || j.contains("id")) {
    const RatFunc dr = j.contains("dr") ? io::ratfunc_from_json(j.at("dr"), symbols) : RatFunc();
    const RatFunc id = j.contains("id") ? io::ratfunc_from_json(j.at("id"), symbols) : RatFunc();
    return RWDelta::from_operator(DiffOp::scalar({id, dr}));
  }
  if (j.contains("operator")) return RWDelta::from_operator(io::diffop_from_json(j.at("operator"), symbols));
  throw ParseError("Delta file needs Delta0/Delta1, dr/id or operator");
}

int cmd_rw(const std::string& s0t, const std::string& s1t, const RWParams& p, const std::string& delta_path,
           Report& rep) {
  p.validate();
  const GaussianRational s0 = GaussianRational::parse(s0t);
  const GaussianRational s1 = GaussianRational::parse(s1t);
  const json dj = load_json(delta_path);
  const RWDelta d = load_rw_delta(dj.contains("Delta") ? dj.at("Delta") : dj, rw_symbols(p));
  log(1, "Delta0 = " + d.Delta0.to_string() + ", Delta1 = " + d.Delta1.to_string());

  const RWReduction res = rw_reduce(d, s0, s1, p);
  const RWBounds& b = res.bounds;
  rep.text << "Delta0: " << d.Delta0 << "\nDelta1: " << d.Delta1 << "\n"
           << "orders: m_low " << b.m_low << ", m_high " << b.m_high << ", m(2M) " << b.m << "\n"
           << "bounds: n_low " << b.n_low << ", n_high " << b.n_high << ", R = " << b.R << "\n"
           << "ansatz: R * sum_{n=" << b.lower << "}^{" << b.upper << "} d_n r^n\n"
           << "linear system: " << res.space.equations << " equations, " << res.space.unknowns << " unknowns, rank "
           << res.space.rank << "\n";
  rep.data = {{"command", "rw"},
              {"s0", io::to_json(s0)},
              {"s1", io::to_json(s1)},
              {"parameters",
               {{"M", io::to_json(p.M)}, {"omega", io::to_json(p.omega)}, {"l", p.l}, {"A", io::to_json(p.A)}}},
              {"Delta", {{"Delta0", io::to_json(d.Delta0)}, {"Delta1", io::to_json(d.Delta1)}}},
              {"bounds",
               {{"m_low", io::to_json(b.m_low)},
                {"m_high", io::to_json(b.m_high)},
                {"m", b.m},
                {"n_low", b.n_low},
                {"n_high", b.n_high},
                {"R", io::to_json(b.R)},
                {"lower", b.lower},
                {"upper", b.upper}}},
              {"exists", res.exists()},
              {"space", io::to_json(res.space)}};
  if (!res.exists()) {
    rep.text << "no solution: D_s0 o delta = Delta + epsilon o D_s1 has no rational (delta, epsilon)";
    return kNoSolution;
  }
  const RatVec& x = *res.space.particular;
  rep.data["unique"] = res.unique();
  rep.data["delta"] = {{"delta0", io::to_json(x[0])}, {"delta1", io::to_json(x[1])}, {"operator", io::to_json(res.pair->delta)}};
  rep.data["epsilon"] = io::to_json(res.pair->epsilon);
  json kernel = json::array();
  for (const auto& k : res.kernel) kernel.push_back(io::to_json(k));
  rep.data["kernel"] = kernel;
  rep.text << "delta0: " << x[0] << "\ndelta1: " << x[1] << "\n"
           << "delta: " << res.pair->delta << "\n"
           << "epsilon: " << res.pair->epsilon << "\n"
           << (res.unique() ? "unique" : "not unique, kernel dimension " + std::to_string(res.kernel.size()));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational solutions of linear ODE systems over Q(i)"};
  app.require_subcommand(1);
  std::string format = "text";
  std::string output;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("-o,--output", output, "Write the report to this file");

  std::string system, rhs, multipliers, point, upper, delta;
  bool search = false;
  auto* ex = app.add_subcommand("exponents", "Characteristic matrix and exponents at a point");
  ex->add_option("--system", system, "Operator file")->required();
  ex->add_option("--point", point, "0, 2M, inf or a rational")->required();
  ex->add_option("--multipliers", multipliers, "Multiplier file");
  ex->add_flag("--search", search, "Search for diagonal multipliers instead of S = T = 1");

  auto* so = app.add_subcommand("solve", "All rational solutions of e[u] = v");
  so->add_option("--system", system, "Operator file")->required();
  so->add_option("--rhs", rhs, "Right-hand side file")->required();
  so->add_option("--multipliers", multipliers, "Multiplier file");

  auto* re = app.add_subcommand("reduce", "Reduce [[e0, Delta], [0, e1]] to block diagonal form");
  re->add_option("--upper", upper, "Triangular system file")->required();
  re->add_option("--multipliers", multipliers, "Multiplier file for the decoupling system");

  std::string s0 = "0", s1 = "0", M = "1", omega = "1", Al = "1";
  std::int64_t l = 2;
  auto* rw = app.add_subcommand("rw", "Regge-Wheeler reduction D_s0 o delta = Delta + epsilon o D_s1");
  rw->add_option("--s0", s0, "Spin of the upper block")->required();
  rw->add_option("--s1", s1, "Spin of the lower block")->required();
  rw->add_option("--M", M, "Mass");
  rw->add_option("--omega", omega, "Frequency");
  rw->add_option("--l", l, "Angular momentum");
  rw->add_option("--Al", Al, "Auxiliary constant A");
  rw->add_option("--delta", delta, "Delta file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  Report rep(format);
  int code = kOk;
  try {
    if (*ex) code = cmd_exponents(system, point, multipliers, search, rep);
    if (*so) code = cmd_solve(system, rhs, multipliers, rep);
    if (*re) code = cmd_reduce(upper, multipliers, rep);
    if (*rw) {
      RWParams p;
      p.M = GaussianRational::parse(M);
      p.omega = GaussianRational::parse(omega);
      p.l = l;
      p.A = GaussianRational::parse(Al);
      code = cmd_rw(s0, s1, p, delta, rep);
    }
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kInputError;
  }

  if (output.empty()) {
    rep.emit(std::cout);
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "error: cannot write " << output << "\n";
      return kInputError;
    }
    rep.emit(out);
  }
  return code;
}
