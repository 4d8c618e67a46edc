#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "rode/diffop.hpp"
#include "rode/error.hpp"
#include "rode/expr.hpp"
#include "rode/laurent.hpp"
#include "rode/ratsolve.hpp"
#include "rode/triangular.hpp"

// JSON forms. Numbers are always strings so nothing passes through a
// binary float. Rational functions are {"num": [...], "den": [...]} with
// coefficients low to high; on input a plain string is also accepted and
// parsed as an expression in r.

namespace rode::io {

using json = nlohmann::json;

inline json to_json(const GaussianRational& q) { return q.to_string(); }

inline GaussianRational rational_from_json(const json& j) {
  if (j.is_string()) return GaussianRational::parse(j.get<std::string>());
  if (j.is_number_integer()) return GaussianRational(j.get<long>());
  throw ParseError("expected a rational as a string, got " + j.dump());
}

inline json to_json(const Poly& p) {
  json out = json::array();
  for (const auto& c : p.coeffs()) out.push_back(to_json(c));
  return out;
}

inline Poly poly_from_json(const json& j, Var v = Var::r) {
  if (!j.is_array()) throw ParseError("expected a coefficient array, got " + j.dump());
  std::vector<GaussianRational> c;
  for (const auto& x : j) c.push_back(rational_from_json(x));
  return Poly(std::move(c), v);
}

inline json to_json(const RatFunc& f) { return {{"num", to_json(f.num())}, {"den", to_json(f.den())}}; }

inline RatFunc ratfunc_from_json(const json& j, const SymbolTable& symbols = {}) {
  if (j.is_string()) return parse_expression(j.get<std::string>(), symbols);
  if (j.is_number_integer()) return RatFunc(j.get<long>());
  if (!j.is_object() || !j.contains("num")) throw ParseError("expected {num, den} or an expression, got " + j.dump());
  const Poly den = j.contains("den") ? poly_from_json(j.at("den")) : Poly(1);
  if (den.is_zero()) throw ParseError("zero denominator in " + j.dump());
  return RatFunc(poly_from_json(j.at("num")), den);
}

inline json to_json(const RatVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline RatVec ratvec_from_json(const json& j, const SymbolTable& symbols = {}) {
  if (!j.is_array()) throw ParseError("expected an array of rational functions");
  RatVec out;
  for (const auto& x : j) out.push_back(ratfunc_from_json(x, symbols));
  return out;
}

inline json to_json(const RatFuncMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    out.push_back(row);
  }
  return out;
}

inline RatFuncMatrix matrix_from_json(const json& j, const SymbolTable& symbols = {}) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) throw ParseError("expected a nested matrix array");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  std::vector<RatFunc> entries;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw ParseError("ragged matrix");
    for (const auto& x : row) entries.push_back(ratfunc_from_json(x, symbols));
  }
  return RatFuncMatrix(rows, cols, std::move(entries));
}

inline json to_json(const DiffOp& e) {
  json coeffs = json::array();
  for (const auto& c : e.coeffs()) coeffs.push_back(to_json(c));
  return {{"rows", e.rows()}, {"cols", e.cols()}, {"coeffs", coeffs}};
}

inline DiffOp diffop_from_json(const json& j, const SymbolTable& symbols = {}) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("coeffs"))
    throw ParseError("operator needs rows, cols and coeffs");
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  if (rows == 0 || cols == 0) throw ParseError("operator dimensions must be positive");
  std::vector<RatFuncMatrix> c;
  for (const auto& m : j.at("coeffs")) {
    c.push_back(matrix_from_json(m, symbols));
    if (c.back().rows() != rows || c.back().cols() != cols) throw ParseError("coefficient shape differs from rows x cols");
  }
  return DiffOp(rows, cols, std::move(c));
}

inline json to_json(const ExpansionPoint& p) { return p.to_string(); }

inline ExpansionPoint point_from_json(const json& j) {
  if (j.is_number_integer()) return ExpansionPoint::finite(j.get<long>());
  if (!j.is_string()) throw ParseError("expected an expansion point, got " + j.dump());
  const auto s = j.get<std::string>();
  if (s == "inf" || s == "infinity") return ExpansionPoint::infinity();
  return ExpansionPoint::finite(GaussianRational::parse(s));
}

inline json to_json(const Order& o) {
  if (o.is_finite()) return o.value();
  return o.to_string();
}

inline Order order_from_json(const json& j) {
  if (j.is_number_integer()) return Order(j.get<std::int64_t>());
  if (j == "+inf") return Order::plus_infinity();
  if (j == "-inf") return Order::minus_infinity();
  throw ParseError("expected an order, got " + j.dump());
}

inline json to_json(const MultiplierPair& m) {
  return {{"point", to_json(m.point())}, {"S", to_json(m.S())}, {"T", to_json(m.T())}};
}

inline MultiplierPair multipliers_from_json(const json& j, const SymbolTable& symbols = {}) {
  return {point_from_json(j.at("point")), matrix_from_json(j.at("S"), symbols), matrix_from_json(j.at("T"), symbols)};
}

/// Accepts an array of pairs or {"multipliers": [...]}.
inline MultiplierMap multiplier_map_from_json(const json& j, const SymbolTable& symbols = {}) {
  const json& list = j.is_object() && j.contains("multipliers") ? j.at("multipliers") : j;
  if (!list.is_array()) throw ParseError("expected a list of multipliers");
  MultiplierMap out;
  for (const auto& x : list) {
    MultiplierPair m = multipliers_from_json(x, symbols);
    out.insert_or_assign(m.point(), std::move(m));
  }
  return out;
}

inline json to_json(const CharMatrix& E) {
  json entries = json::array();
  for (std::size_t i = 0; i < E.entries.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < E.entries.cols(); ++k) row.push_back(to_json(E.entries(i, k)));
    entries.push_back(row);
  }
  return {{"point", to_json(E.point)}, {"E_n", entries}, {"det", to_json(E.det)}, {"exponents", E.exponents}};
}

inline CharMatrix char_matrix_from_json(const json& j) {
  CharMatrix E;
  E.point = point_from_json(j.at("point"));
  const json& rows = j.at("E_n");
  const std::size_t n = rows.size();
  E.entries = Matrix<Poly>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) E.entries(i, k) = poly_from_json(rows.at(i).at(k), Var::n);
  E.det = poly_from_json(j.at("det"), Var::n);
  E.exponents = j.at("exponents").get<std::vector<std::int64_t>>();
  return E;
}

inline json to_json(const LocalAnalysis& a) {
  json out = {{"point", to_json(a.point)},
              {"char_matrix", to_json(a.E)},
              {"source_order", to_json(a.source_order)},
              {"bound", to_json(a.bound)}};
  if (a.multipliers) out["multipliers"] = to_json(*a.multipliers);
  return out;
}

inline json to_json(const SolutionSpace& s) {
  json kernel = json::array();
  for (const auto& k : s.kernel_basis) kernel.push_back(to_json(k));
  json analyses = json::array();
  for (const auto& a : s.analyses) analyses.push_back(to_json(a));
  return {{"R", to_json(s.R)},
          {"lower", to_json(s.lower)},
          {"upper", to_json(s.upper)},
          {"particular", s.particular ? to_json(*s.particular) : json(nullptr)},
          {"kernel_basis", kernel},
          {"analyses", analyses},
          {"linear_system", {{"equations", s.equations}, {"unknowns", s.unknowns}, {"rank", s.rank}}}};
}

/// Reads back the solution part of a SolutionSpace (analyses are not restored).
inline SolutionSpace solution_space_from_json(const json& j) {
  SolutionSpace s;
  s.R = matrix_from_json(j.at("R"));
  s.lower = order_from_json(j.at("lower"));
  s.upper = order_from_json(j.at("upper"));
  if (!j.at("particular").is_null()) s.particular = ratvec_from_json(j.at("particular"));
  for (const auto& k : j.at("kernel_basis")) s.kernel_basis.push_back(ratvec_from_json(k));
  const json& ls = j.at("linear_system");
  s.equations = ls.at("equations").get<std::size_t>();
  s.unknowns = ls.at("unknowns").get<std::size_t>();
  s.rank = ls.at("rank").get<std::size_t>();
  return s;
}

inline json to_json(const ReductionPair& p) { return {{"delta", to_json(p.delta)}, {"epsilon", to_json(p.epsilon)}}; }

inline ReductionPair reduction_pair_from_json(const json& j) {
  return {diffop_from_json(j.at("delta")), diffop_from_json(j.at("epsilon"))};
}

}  // namespace rode::io
