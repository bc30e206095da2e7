// Command-line front end: moments, allocate, and sweep jobs driven by a JSON
// configuration. Exit codes: 0 success, 2 configuration/usage error,
// 3 solver or domain error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "possport/possport.hpp"

namespace {

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream stream(out_path, std::ios::binary);
  if (!stream) throw possport::ConfigError("$", "cannot open output file '" + out_path + "'");
  stream.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"possibilistic portfolio choice toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string format = "table";
  std::string out_path;
  int quadrature_order = -1;
  double solver_tol = -1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "path to the JSON run configuration")
        ->required();
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "csv"}));
    sub->add_option("--out", out_path, "write output to this file (default: stdout)");
    sub->add_option("--quadrature-order", quadrature_order,
                    "override the configured quadrature order");
    sub->add_option("--tol", solver_tol, "override the configured solver tolerance");
  };

  CLI::App* moments =
      app.add_subcommand("moments", "possibilistic moments of the excess return");
  CLI::App* allocate =
      app.add_subcommand("allocate", "exact and approximate optimal allocation");
  CLI::App* sweep =
      app.add_subcommand("sweep", "allocation accuracy sweep over premium values");
  add_common(moments);
  add_common(allocate);
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    possport::RunConfig config = possport::load_config_file(config_path);
    if (moments->count("--quadrature-order") || allocate->count("--quadrature-order") ||
        sweep->count("--quadrature-order")) {
      if (quadrature_order < 1 || quadrature_order > possport::kMaxQuadratureOrder)
        throw possport::ConfigError("quadrature_order", "must lie in [1, 512]; got " +
                                                            std::to_string(quadrature_order));
      config.quadrature_order = quadrature_order;
    }
    if (moments->count("--tol") || allocate->count("--tol") || sweep->count("--tol")) {
      if (!(solver_tol > 0.0))
        throw possport::ConfigError("solver_tol", "must be positive");
      config.solver_tol = solver_tol;
    }

    const possport::OutputFormat output_format =
        format == "csv" ? possport::OutputFormat::csv : possport::OutputFormat::table;

    std::string output;
    if (moments->parsed())
      output = possport::emit_moments(possport::run_moments(config), output_format);
    else if (allocate->parsed())
      output = possport::emit_report(possport::run_allocate(config), output_format);
    else
      output = possport::emit_sweep(possport::run_sweep(config), output_format);
    write_output(output, out_path);
    return 0;
  } catch (const possport::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const possport::BoundaryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const possport::FeasibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const possport::PoleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const possport::SingularError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const possport::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
