#pragma once

// JSON encoding of elements, expressions and reports. Output documents use
// ordered keys so that repeated runs produce byte-identical files.

#include <cmath>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "slicefn/classify.hpp"
#include "slicefn/expansions.hpp"
#include "slicefn/geometry.hpp"
#include "slicefn/rational.hpp"

namespace slicefn::io {

using Json = nlohmann::ordered_json;

/// Reals serialize as numbers; infinities as "unbounded" / "-unbounded".
inline Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "unbounded" : "-unbounded";
  if (std::isnan(v)) return nullptr;
  return v;
}

inline Json to_json(const Elem& e) {
  Json a = Json::array();
  for (double c : e.coeffs()) a.push_back(number(c));
  return a;
}

inline Elem elem_from_json(const AlgebraSpec& alg, const Json& j) {
  if (!j.is_array()) throw DomainError("element must be an array of " + std::to_string(alg.dim()) + " numbers");
  if (j.size() != alg.dim())
    throw DimensionMismatch("element has " + std::to_string(j.size()) + " entries, algebra " + to_string(alg.name()) +
                            " needs " + std::to_string(alg.dim()));
  Elem e = alg.zero();
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw DomainError("element entries must be numbers");
    e[i] = j[i].get<double>();
  }
  return e;
}

/// Expression grammar:
///   {"poly": [a_0, a_1, ...]}  coefficients on the right, a_m arrays
///   {"const": a}
///   {"add": [e, ...]}, {"mul": [e, ...]}  folded left to right
///   {"conj": e}, {"inv": e}
///   {"pow": {"base": e, "n": int}}  star power, negative n inverts
inline RationalExpr expr_from_json(const std::shared_ptr<const AlgebraSpec>& alg, const Json& j) {
  if (!j.is_object() || j.size() != 1) throw DomainError("expression node must be an object with a single key");
  const auto& [key, body] = *j.items().begin();
  if (key == "poly") {
    if (!body.is_array() || body.empty()) throw DomainError("poly needs a nonempty coefficient list");
    std::vector<Elem> c;
    for (const auto& a : body) c.push_back(elem_from_json(*alg, a));
    return RationalExpr::poly(alg, StarPoly(alg->dim(), std::move(c)));
  }
  if (key == "const") return RationalExpr::constant(alg, elem_from_json(*alg, body));
  if (key == "add" || key == "mul") {
    if (!body.is_array() || body.empty()) throw DomainError(key + " needs a nonempty operand list");
    RationalExpr acc = expr_from_json(alg, body[0]);
    for (std::size_t i = 1; i < body.size(); ++i)
      acc = key == "add" ? add(acc, expr_from_json(alg, body[i])) : mul(acc, expr_from_json(alg, body[i]));
    return acc;
  }
  if (key == "conj") return conj(expr_from_json(alg, body));
  if (key == "inv") return inv(expr_from_json(alg, body));
  if (key == "pow") {
    if (!body.is_object() || !body.contains("base") || !body.contains("n") || !body["n"].is_number_integer())
      throw DomainError("pow needs base and integer n");
    const RationalExpr base = expr_from_json(alg, body["base"]);
    const int n = body["n"].get<int>();
    if (std::abs(n) > 64) throw DomainError("pow exponent out of range");
    RationalExpr acc = RationalExpr::constant(alg, alg->one());
    const RationalExpr step = n < 0 ? inv(base) : base;
    for (int i = 0; i < std::abs(n); ++i) acc = mul(acc, step);
    return acc;
  }
  throw DomainError("unknown expression node: " + key);
}

inline Json to_json(const SphereId& s) { return Json{{"alpha", number(s.alpha)}, {"beta", number(s.beta)}}; }

inline Json to_json(const Multiplicity& m) {
  if (!m.applicable) return nullptr;
  if (m.infinite) return "infinite";
  return m.value;
}

inline Json to_json(const OrderValue& o) { return Json{{"value", o.value}, {"capped", o.capped}}; }

inline Json to_json(const AffineSet& h) {
  Json out{{"consistent", h.consistent}, {"base", to_json(h.base)}};
  Json dirs = Json::array();
  for (const auto& d : h.directions) dirs.push_back(to_json(d));
  out["directions"] = dirs;
  out["finite"] = h.finite;
  out["dimension"] = h.dimension;
  Json pts = Json::array();
  for (const auto& p : h.sphere_points) pts.push_back(to_json(p));
  out[h.finite ? "points" : "sample_points"] = pts;
  return out;
}

inline Json to_json(const SingularityReport& r) {
  Json out{{"sphere", to_json(r.sphere)}, {"kind", to_string(r.kind)}, {"spherical_order", to_json(r.spherical_order)},
           {"cap_K", r.cap_K}, {"exact", r.exact}};
  Json orders = Json::array();
  for (const auto& p : r.order_at) orders.push_back(Json{{"point", to_json(p.point)}, {"order", to_json(p.order)}});
  out["order_at"] = orders;
  out["leading_pair"] = r.leading_pair ? Json{{"u", to_json(r.leading_pair->u)}, {"v", to_json(r.leading_pair->v)}}
                                       : Json(nullptr);
  out["exceptional"] = r.exceptional ? to_json(*r.exceptional) : Json(nullptr);
  out["spherical_multiplicity"] = to_json(r.spherical_multiplicity);
  out["classical_multiplicity"] = to_json(r.classical_multiplicity);
  return out;
}

inline Json to_json(const Radii& r) { return Json{{"R1", number(r.R1)}, {"R2", number(r.R2)}}; }

inline Json coeff_table(const std::map<int, Elem>& m) {
  Json t = Json::array();
  for (const auto& [n, a] : m) t.push_back(Json{{"n", n}, {"value", to_json(a)}});
  return t;
}

inline Json to_json(const LaurentData& d) {
  return Json{{"kind", "laurent"},
              {"center", to_json(d.center)},
              {"slice", to_json(d.J)},
              {"r", number(d.r)},
              {"N", d.N},
              {"K", d.K},
              {"principal_truncated", d.principal_truncated},
              {"radii", to_json(d.est)},
              {"coefficients", coeff_table(d.coeffs)}};
}

inline Json to_json(const SphericalData& d) {
  Json pairs = Json::array();
  for (const auto& [k, p] : d.pairs) pairs.push_back(Json{{"k", k}, {"u", to_json(p.u)}, {"v", to_json(p.v)}});
  return Json{{"kind", "spherical"},
              {"center", to_json(d.center)},
              {"slice", to_json(d.J)},
              {"r", number(d.r)},
              {"rho", number(d.rho)},
              {"N", d.N},
              {"K", d.K},
              {"principal_truncated", d.principal_truncated},
              {"radii", to_json(d.est)},
              {"coefficients", coeff_table(d.c)},
              {"pairs", pairs}};
}

inline Json to_json(const RealPoly& p) {
  Json a = Json::array();
  for (double c : p.c) a.push_back(number(c));
  return a;
}

inline Json to_json(const StarPoly& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_json(c));
  return a;
}

}  // namespace slicefn::io
