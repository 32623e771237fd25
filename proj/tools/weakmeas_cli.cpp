// weakmeas: weak values, Fisher information and Monte Carlo estimation of a weak coupling.
//
//   weakmeas weak-values <file>
//   weakmeas fisher <file>
//   weakmeas simulate <file>
//   weakmeas scan <file> --theta-start S --theta-end E --points N
//
// Shared flags: --format {doc,csv}  --tolerance T  --out PATH
// Exit codes: 0 success, 2 input validation failure, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "weakmeas/error.hpp"
#include "weakmeas/problem.hpp"
#include "weakmeas/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw weakmeas::InputError({"file: cannot open " + path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw weakmeas::InputError({"--out: cannot write " + out_path});
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-measurement parameter estimation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "doc";
  double tolerance = weakmeas::kDefaultTolerances.structural;
  std::string out_path;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"doc", "csv"}));
  app.add_option("--tolerance", tolerance, "Structural tolerance (orthonormality, real weak values)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Write the report to PATH instead of stdout");

  std::string input;
  weakmeas::ScanOptions scan;
  auto* weak_values = app.add_subcommand("weak-values", "Weak-value table and real-basis verdict");
  auto* fisher = app.add_subcommand("fisher", "Fisher information for the coupling strength");
  auto* simulate = app.add_subcommand("simulate", "Sample outcomes and estimate the coupling");
  auto* scan_cmd = app.add_subcommand("scan", "Sweep rotated qubit post-selection bases");
  for (auto* sub : {weak_values, fisher, simulate, scan_cmd}) {
    sub->add_option("file", input, "Problem document")->required();
  }
  scan_cmd->add_option("--theta-start", scan.theta_start, "First angle (radians)")->required();
  scan_cmd->add_option("--theta-end", scan.theta_end, "End of the half-open angle range")->required();
  scan_cmd->add_option("--points", scan.points, "Number of angles")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  weakmeas::CommandOptions options;
  options.tol.structural = tolerance;

  try {
    const auto problem = weakmeas::parse_problem(read_file(input), options.tol);
    nlohmann::ordered_json report;
    if (*weak_values) {
      report = weakmeas::cmd_weak_values(problem, options);
    } else if (*fisher) {
      report = weakmeas::cmd_fisher(problem, options);
    } else if (*simulate) {
      report = weakmeas::cmd_simulate(problem, options);
    } else {
      report = weakmeas::cmd_scan(problem, scan, options);
    }
    if (format == "csv") {
      emit(weakmeas::render_scan_csv(report), out_path);
    } else {
      emit(weakmeas::render_document(report), out_path);
    }
    return kExitOk;
  } catch (const weakmeas::InputError& e) {
    for (const auto& m : e.messages()) std::cerr << "error: " << m << "\n";
    return kExitInput;
  } catch (const weakmeas::NumericFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    try {
      emit(weakmeas::render_document(e.report()), out_path);
    } catch (const weakmeas::InputError&) {
    }
    return kExitNumeric;
  } catch (const weakmeas::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
