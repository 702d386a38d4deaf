// slicefn: run one analysis on a star-rational expression and write a JSON
// report. Exit codes: 0 ok, 2 input error, 3 numeric error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "slicefn/report.hpp"

namespace {

constexpr int kInputError = 2;
constexpr int kNumericError = 3;

slicefn::io::Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw slicefn::DomainError("cannot read " + path);
  try {
    return slicefn::io::Json::parse(in);
  } catch (const slicefn::io::Json::parse_error& e) {
    throw slicefn::DomainError(path + ": " + e.what());
  }
}

// Parses an inline JSON value given on the command line.
slicefn::io::Json inline_json(const std::string& text, const char* flag) {
  try {
    return slicefn::io::Json::parse(text);
  } catch (const slicefn::io::Json::parse_error&) {
    throw slicefn::DomainError(std::string("malformed JSON for ") + flag);
  }
}

// Write to a sibling temp file, then rename over the target.
void write_atomic(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw slicefn::DomainError("cannot write " + path);
    out << body;
    if (!out.flush()) throw slicefn::DomainError("cannot write " + path);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slice function analysis over C, H, O, CL3 and BC"};
  std::string algebra, task = "classify-all", expr_path, out_path, csv_path;
  std::string center, kind = "laurent", points, shell;
  slicefn::AnalysisRequest q;
  double r = 0.0;
  app.add_option("--algebra", algebra, "Algebra name")->required()->check(CLI::IsMember({"C", "H", "O", "CL3", "BC"}));
  app.add_option("--task", task, "Analysis to run")
      ->check(CLI::IsMember({"classify-all", "expand", "evaluate", "constants", "membership-grid"}));
  app.add_option("--expr", expr_path, "Expression JSON file");
  app.add_option("--out", out_path, "Report path (stdout when omitted)");
  app.add_option("--seed", q.seed, "Random seed");
  app.add_option("--K", q.K, "Coefficient cap");
  app.add_option("--N", q.N, "Quadrature nodes");
  app.add_option("--center", center, "Expansion center as a JSON array");
  app.add_option("--kind", kind, "Expansion kind")->check(CLI::IsMember({"laurent", "spherical"}));
  auto* r_opt = app.add_option("--r", r, "Contour radius");
  app.add_option("--points", points, "Evaluation points as a JSON array of arrays");
  app.add_option("--samples", q.samples, "Samples for the constants task");
  app.add_option("--shell", shell, "Shell as a JSON object {center, kind, r1, r2}");
  app.add_option("--resolution", q.resolution, "Grid resolution");
  app.add_option("--csv", csv_path, "Coefficient CSV path for expand");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    q.algebra = algebra;
    q.task = slicefn::parse_task(task);
    if (!expr_path.empty()) {
      slicefn::io::Json doc = read_json(expr_path);
      // Files may wrap the expression with its algebra.
      if (doc.is_object() && doc.contains("expr")) {
        if (doc.contains("algebra") && doc["algebra"] != algebra)
          throw slicefn::DomainError("expression file is for algebra " + doc["algebra"].dump());
        doc = doc["expr"];
      }
      q.expression = doc;
    }
    if (!center.empty()) q.center = inline_json(center, "--center");
    q.expansion = kind;
    if (r_opt->count()) q.r = r;
    if (!points.empty()) q.points = inline_json(points, "--points");
    if (!shell.empty()) q.shell = inline_json(shell, "--shell");

    const slicefn::Report rep = slicefn::run(q);
    const std::string body = rep.doc.dump(2) + "\n";
    if (out_path.empty())
      std::cout << body;
    else
      write_atomic(out_path, body);
    if (!csv_path.empty()) write_atomic(csv_path, rep.csv);
    return 0;
  } catch (const slicefn::Error& e) {
    std::cerr << "slicefn: " << e.what() << "\n";
    return e.input_error() ? kInputError : kNumericError;
  } catch (const slicefn::io::Json::exception& e) {
    std::cerr << "slicefn: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "slicefn: " << e.what() << "\n";
    return kNumericError;
  }
}
