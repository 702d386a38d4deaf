#pragma once

// Request validation and the analysis pipeline behind the command-line tool.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "slicefn/classify.hpp"
#include "slicefn/conversion.hpp"
#include "slicefn/expansions.hpp"
#include "slicefn/geometry.hpp"
#include "slicefn/io/json.hpp"
#include "slicefn/rational.hpp"

namespace slicefn {

inline constexpr const char* kVersion = "1.0.0";

enum class Task { ClassifyAll, Expand, Evaluate, Constants, MembershipGrid };

inline Task parse_task(const std::string& s) {
  if (s == "classify-all") return Task::ClassifyAll;
  if (s == "expand") return Task::Expand;
  if (s == "evaluate") return Task::Evaluate;
  if (s == "constants") return Task::Constants;
  if (s == "membership-grid") return Task::MembershipGrid;
  throw DomainError("unknown task: " + s);
}

inline std::string to_string(Task t) {
  switch (t) {
    case Task::ClassifyAll: return "classify-all";
    case Task::Expand: return "expand";
    case Task::Evaluate: return "evaluate";
    case Task::Constants: return "constants";
    case Task::MembershipGrid: return "membership-grid";
  }
  return "?";
}

struct AnalysisRequest {
  std::string algebra;
  io::Json expression;  // null when the task needs none
  Task task = Task::ClassifyAll;
  std::uint64_t seed = 1;
  int K = kDefaultK;
  int N = kDefaultN;
  // expand
  io::Json center;
  std::string expansion = "laurent";
  std::optional<double> r;
  // evaluate
  io::Json points;
  // constants
  std::size_t samples = 2000;
  // membership-grid
  io::Json shell;
  int resolution = 41;
};

struct Report {
  io::Json doc;
  std::string csv;  // coefficient table for expand, empty otherwise
};

namespace detail {

inline bool needs_expression(Task t) { return t != Task::Constants && t != Task::MembershipGrid; }

inline void validate(const AnalysisRequest& q) {
  if (q.K < 0 || q.K > kMaxK) throw DomainError("K must lie in [0, " + std::to_string(kMaxK) + "]");
  if (q.N < 8 || q.N > kMaxN) throw DomainError("N must lie in [8, " + std::to_string(kMaxN) + "]");
  if (needs_expression(q.task) && q.expression.is_null()) throw DomainError("task " + to_string(q.task) + " needs an expression");
  if (q.task == Task::Expand) {
    if (q.center.is_null()) throw DomainError("expand needs a center");
    if (q.expansion != "laurent" && q.expansion != "spherical") throw DomainError("expansion kind must be laurent or spherical");
    if (q.r && !(*q.r > 0.0)) throw DomainError("radius must be positive");
  }
  if (q.task == Task::Evaluate && !q.points.is_array()) throw DomainError("evaluate needs a point list");
  if (q.task == Task::MembershipGrid) {
    if (!q.shell.is_object()) throw DomainError("membership-grid needs a shell");
    if (q.resolution < 2 || q.resolution > 1001) throw DomainError("resolution must lie in [2, 1001]");
  }
  if (q.task == Task::Constants && q.samples == 0) throw DomainError("sample count must be positive");
}

inline io::Json tolerances() {
  return io::Json{{"real", kRealTol},           {"singular", kSingularTol}, {"zero_coefficient", kZeroTol},
                  {"normal_real", kNormalRealTol}, {"svd_truncation", 1e-10},  {"sphere_membership", 1e-9}};
}

inline std::string csv_row(int n, const Elem& a) {
  std::ostringstream os;
  os.precision(17);
  os << n;
  for (double c : a.coeffs()) os << ',' << c;
  return os.str();
}

inline std::string csv_table(const std::map<int, Elem>& m, std::size_t dim) {
  std::string out = "n";
  for (std::size_t i = 0; i < dim; ++i) out += ",c" + std::to_string(i);
  out += '\n';
  for (const auto& [n, a] : m) out += csv_row(n, a) + '\n';
  return out;
}

inline ShellSpec shell_from_json(const AlgebraSpec& alg, const io::Json& j) {
  ShellSpec s;
  if (!j.contains("center") || !j.contains("kind")) throw DomainError("shell needs center and kind");
  s.center = io::elem_from_json(alg, j["center"]);
  s.kind = parse_shell_kind(j["kind"].get<std::string>());
  if (j.contains("r1")) s.r1 = j["r1"].get<double>();
  if (j.contains("r2") && !(j["r2"].is_string() && j["r2"] == "unbounded")) s.r2 = j["r2"].get<double>();
  s.validate(alg);
  return s;
}

}  // namespace detail

/// Runs one request. Deterministic for a fixed request and seed.
inline Report run(const AnalysisRequest& q) {
  detail::validate(q);
  const auto alg = shared_algebra(q.algebra);
  Report rep;
  io::Json& doc = rep.doc;
  doc["tool"] = "slicefn";
  doc["version"] = kVersion;
  doc["algebra"] = to_string(alg->name());
  doc["task"] = to_string(q.task);
  doc["seed"] = q.seed;
  doc["tolerances"] = detail::tolerances();

  std::optional<RationalExpr> expr;
  if (detail::needs_expression(q.task)) {
    expr = io::expr_from_json(alg, q.expression);
    doc["expression"] = q.expression;
    doc["normal_form"] = io::Json{{"denominator", io::to_json(expr->denominator())},
                                  {"numerator", io::to_json(expr->numerator())}};
    io::Json spheres = io::Json::array();
    for (const auto& s : expr->singular_spheres())
      spheres.push_back(io::Json{{"sphere", io::to_json(s.sphere)}, {"multiplicity", s.multiplicity}});
    doc["singular_spheres"] = spheres;
  }

  switch (q.task) {
    case Task::ClassifyAll: {
      ClassifyOptions o;
      o.K = q.K;
      o.N = q.N;
      o.seed = q.seed;
      io::Json reports = io::Json::array();
      for (const auto& s : expr->singular_spheres()) {
        try {
          reports.push_back(io::to_json(classify(*expr, s.sphere, o)));
        } catch (const NumericError& e) {
          throw NumericError("classify " + to_string(s.sphere) + ": " + e.what());
        }
      }
      doc["reports"] = reports;
      break;
    }
    case Task::Expand: {
      const SliceFn f = expr->as_slice_fn();
      const Elem y = io::elem_from_json(*alg, q.center);
      if (q.expansion == "laurent") {
        const LaurentData d = laurent_coeffs(f, y, q.r.value_or(default_laurent_radius(f, y)), q.K, q.N);
        doc["expansion"] = io::to_json(d);
        rep.csv = detail::csv_table(d.coeffs, alg->dim());
      } else {
        const SphericalData d = spherical_numbers(f, y, q.r.value_or(default_spherical_radius(f, y)), q.K, q.N);
        doc["expansion"] = io::to_json(d);
        rep.csv = detail::csv_table(d.c, alg->dim());
      }
      break;
    }
    case Task::Evaluate: {
      io::Json values = io::Json::array();
      for (const auto& p : q.points) {
        const Elem x = io::elem_from_json(*alg, p);
        io::Json row{{"point", io::to_json(x)}};
        try {
          row["value"] = io::to_json(expr->eval(x));
        } catch (const SingularPointError& e) {
          row["value"] = nullptr;
          row["singular_sphere"] = io::to_json(e.sphere());
        }
        values.push_back(row);
      }
      doc["values"] = values;
      break;
    }
    case Task::Constants: {
      const MultiplicativeBounds b = estimate_constants(*alg, q.samples, q.seed);
      doc["samples"] = q.samples;
      doc["constants"] = io::Json{{"C_A_lower", b.C_A_lower}, {"c_A_upper", b.c_A_upper}};
      break;
    }
    case Task::MembershipGrid: {
      const ShellSpec s = detail::shell_from_json(*alg, q.shell);
      const ConeDecomposition c = cone_decompose(*alg, s.center);
      const double reach = std::isinf(s.r2) ? s.r1 + 2.0 : s.r2;
      const double half = 1.25 * std::max(1.0, reach) + std::abs(c.beta);
      const Elem J = alg->record_unit();
      io::Json rows = io::Json::array();
      const int n = q.resolution;
      for (int i = 0; i < n; ++i) {
        const double im = half - 2.0 * half * i / (n - 1);
        std::string row;
        for (int k = 0; k < n; ++k) {
          const double re = c.alpha - half + 2.0 * half * k / (n - 1);
          row += contains(*alg, s, in_slice(Complex(re, im), J)) ? '#' : '.';
        }
        rows.push_back(row);
      }
      doc["shell"] = io::Json{{"center", io::to_json(s.center)}, {"kind", to_string(s.kind)},
                              {"r1", io::number(s.r1)},         {"r2", io::number(s.r2)}};
      doc["grid"] = io::Json{{"slice", io::to_json(J)},
                             {"re_range", {c.alpha - half, c.alpha + half}},
                             {"im_range", {-half, half}},
                             {"resolution", n},
                             {"rows", rows}};
      break;
    }
  }
  return rep;
}

}  // namespace slicefn
