#pragma once

// Job layer behind the CLI: moments, single allocation, premium sweep, and
// deterministic table/CSV emission. All reals are printed with 12 significant
// digits through the locale-independent formatter, so identical configs
// produce byte-identical output.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "possport/allocation.hpp"
#include "possport/config.hpp"
#include "possport/errors.hpp"

namespace possport {

enum class OutputFormat { table, csv };

inline constexpr const char* kAllocationCsvHeader =
    "k,ef_b,var_b,m3_b,mz,alpha_exact,alpha_approx,term1,term2,abs_err,rel_err,status";

struct MomentsResult {
  double mean = 0.0;           // E_f(B), quadrature
  double variance = 0.0;       // Var_f(B), quadrature
  double third_central = 0.0;  // E_f[(B-E_f(B))^3], quadrature
  std::optional<TriangularMoments> closed_form;  // triangular input with power(2) only
};

struct SweepRow {
  double premium = 0.0;  // requested k
  std::optional<double> mean_excess;
  std::optional<double> variance_excess;
  std::optional<double> third_central_excess;
  std::optional<double> mean_background;
  std::optional<double> alpha_exact;
  std::optional<double> alpha_approx;
  std::optional<double> first_term;
  std::optional<double> second_term;
  std::optional<double> abs_error;
  std::optional<double> rel_error;
  std::string status = "ok";
};

inline QuadratureRule config_rule(const RunConfig& config) {
  return gauss_legendre_01(config.quadrature_order);
}

inline MomentsResult run_moments(const RunConfig& config) {
  const QuadratureRule rule = config_rule(config);
  const FuzzyNumber excess = config.excess_return();
  MomentsResult result;
  result.mean = expected_value(excess, config.weighting, rule);
  result.variance = variance(excess, config.weighting, rule);
  result.third_central = central_moment(excess, config.weighting, 3, rule);
  if (excess.shape() == FuzzyNumber::Shape::triangular &&
      config.weighting.kind() == WeightingFunction::Kind::power &&
      config.weighting.exponent() == 2.0)
    result.closed_form = triangular_closed_moments(excess.core_lower(),
                                                   excess.left_spread(),
                                                   excess.right_spread());
  return result;
}

inline AllocationReport run_allocate(const RunConfig& config) {
  const QuadratureRule rule = config_rule(config);
  if (config.background_risk) {
    const MixedModel model(config.wealth(), config.excess_return(), config.weighting,
                           config.utility, *config.background_risk, rule);
    return allocate_mixed(model, config.solver_tol);
  }
  const StandardModel model(config.wealth(), config.excess_return(), config.weighting,
                            config.utility, rule);
  return allocate_standard(model, config.solver_tol);
}

inline SweepRow to_sweep_row(const AllocationReport& report) {
  SweepRow row;
  row.premium = report.mean_excess;
  row.mean_excess = report.mean_excess;
  row.variance_excess = report.variance_excess;
  row.third_central_excess = report.third_central_excess;
  row.mean_background = report.mean_background;
  row.alpha_exact = report.alpha_exact;
  row.alpha_approx = report.alpha_approx;
  row.first_term = report.first_order_term;
  row.second_term = report.second_order_term;
  row.abs_error = report.abs_error;
  row.rel_error = report.rel_error;
  row.status = "ok";
  return row;
}

// One row per requested premium, in input order. The excess return is
// re-centered once and shifted to each premium (B_k = k + A). Per-row
// failures are recorded in the status column and the sweep continues:
// boundary/feasibility failures as "infeasible", the mixed second-order pole
// as "pole", anything else as "error".
inline std::vector<SweepRow> run_sweep(const RunConfig& config) {
  if (config.sweep_premiums.empty())
    throw ConfigError("sweep.k_values", "sweep requires a non-empty list of premiums");
  const QuadratureRule rule = config_rule(config);
  const FuzzyNumber excess = config.excess_return();
  const double mean_excess = expected_value(excess, config.weighting, rule);
  const FuzzyNumber centered = excess.shifted(-mean_excess);

  std::vector<SweepRow> rows;
  rows.reserve(config.sweep_premiums.size());
  for (const double premium : config.sweep_premiums) {
    SweepRow row;
    row.premium = premium;
    try {
      const FuzzyNumber scaled = centered.shifted(premium);
      AllocationReport report;
      if (config.background_risk) {
        const MixedModel model(config.wealth(), scaled, config.weighting, config.utility,
                               *config.background_risk, rule);
        row.mean_excess = model.mean_excess();
        row.variance_excess = model.variance_excess();
        row.third_central_excess = model.third_central_excess();
        row.mean_background = model.mean_background();
        report = allocate_mixed(model, config.solver_tol);
      } else {
        const StandardModel model(config.wealth(), scaled, config.weighting,
                                  config.utility, rule);
        row.mean_excess = model.mean_excess();
        row.variance_excess = model.variance_excess();
        row.third_central_excess = model.third_central_excess();
        report = allocate_standard(model, config.solver_tol);
      }
      row.alpha_exact = report.alpha_exact;
      row.alpha_approx = report.alpha_approx;
      row.first_term = report.first_order_term;
      row.second_term = report.second_order_term;
      row.abs_error = report.abs_error;
      row.rel_error = report.rel_error;
      row.status = "ok";
    } catch (const BoundaryError&) {
      row.status = "infeasible";
    } catch (const FeasibilityError&) {
      row.status = "infeasible";
    } catch (const PoleError&) {
      row.status = "pole";
    } catch (const std::exception&) {
      row.status = "error";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline std::string csv_cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

inline std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

inline std::string table_cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string("-");
}

}  // namespace detail

inline std::string emit_sweep(const std::vector<SweepRow>& rows, OutputFormat format) {
  std::string out;
  if (format == OutputFormat::csv) {
    out += kAllocationCsvHeader;
    out += '\n';
    for (const SweepRow& row : rows) {
      out += detail::format_double(row.premium);
      out += ',';
      out += detail::csv_cell(row.mean_excess);
      out += ',';
      out += detail::csv_cell(row.variance_excess);
      out += ',';
      out += detail::csv_cell(row.third_central_excess);
      out += ',';
      out += detail::csv_cell(row.mean_background);
      out += ',';
      out += detail::csv_cell(row.alpha_exact);
      out += ',';
      out += detail::csv_cell(row.alpha_approx);
      out += ',';
      out += detail::csv_cell(row.first_term);
      out += ',';
      out += detail::csv_cell(row.second_term);
      out += ',';
      out += detail::csv_cell(row.abs_error);
      out += ',';
      out += detail::csv_cell(row.rel_error);
      out += ',';
      out += row.status;
      out += '\n';
    }
    return out;
  }
  constexpr std::size_t kWidth = 18;
  for (const char* header : {"k", "ef_b", "var_b", "m3_b", "mz", "alpha_exact",
                             "alpha_approx", "term1", "term2", "abs_err", "rel_err"})
    out += detail::pad(header, kWidth);
  out += "status\n";
  for (const SweepRow& row : rows) {
    out += detail::pad(detail::format_double(row.premium), kWidth);
    out += detail::pad(detail::table_cell(row.mean_excess), kWidth);
    out += detail::pad(detail::table_cell(row.variance_excess), kWidth);
    out += detail::pad(detail::table_cell(row.third_central_excess), kWidth);
    out += detail::pad(detail::table_cell(row.mean_background), kWidth);
    out += detail::pad(detail::table_cell(row.alpha_exact), kWidth);
    out += detail::pad(detail::table_cell(row.alpha_approx), kWidth);
    out += detail::pad(detail::table_cell(row.first_term), kWidth);
    out += detail::pad(detail::table_cell(row.second_term), kWidth);
    out += detail::pad(detail::table_cell(row.abs_error), kWidth);
    out += detail::pad(detail::table_cell(row.rel_error), kWidth);
    out += row.status;
    out += '\n';
  }
  return out;
}

inline std::string emit_report(const AllocationReport& report, OutputFormat format) {
  if (format == OutputFormat::csv) return emit_sweep({to_sweep_row(report)}, format);
  std::string out = "allocation report\n";
  auto line = [&out](const char* label, const std::string& value) {
    out += "  ";
    out += detail::pad(label, 14);
    out += value;
    out += '\n';
  };
  line("ef_b", detail::format_double(report.mean_excess));
  line("var_b", detail::format_double(report.variance_excess));
  line("m3_b", detail::format_double(report.third_central_excess));
  line("mz", report.mean_background ? detail::format_double(*report.mean_background)
                                    : std::string("-"));
  line("r_u", detail::format_double(report.risk_aversion));
  line("p_u", detail::format_double(report.prudence_index));
  line("alpha_exact", detail::format_double(report.alpha_exact));
  line("alpha_approx", detail::format_double(report.alpha_approx));
  line("term1", detail::format_double(report.first_order_term));
  line("term2", detail::format_double(report.second_order_term));
  line("abs_err", detail::format_double(report.abs_error));
  line("rel_err", detail::format_double(report.rel_error));
  line("solver", "iterations=" + std::to_string(report.solver.iterations) + " bracket=[" +
                     detail::format_double(report.solver.bracket_lower) + ", " +
                     detail::format_double(report.solver.bracket_upper) + "] residual=" +
                     detail::format_double(report.solver.residual));
  return out;
}

inline std::string emit_moments(const MomentsResult& result, OutputFormat format) {
  const char* names[3] = {"ef_b", "var_b", "m3_b"};
  const double quadrature[3] = {result.mean, result.variance, result.third_central};
  double closed[3] = {0.0, 0.0, 0.0};
  if (result.closed_form) {
    closed[0] = result.closed_form->mean;
    closed[1] = result.closed_form->variance;
    closed[2] = result.closed_form->third_central;
  }
  std::string out;
  if (format == OutputFormat::csv) {
    out += "quantity,quadrature,closed_form,abs_diff\n";
    for (int i = 0; i < 3; ++i) {
      out += names[i];
      out += ',';
      out += detail::format_double(quadrature[i]);
      if (result.closed_form) {
        out += ',';
        out += detail::format_double(closed[i]);
        out += ',';
        out += detail::format_double(std::abs(quadrature[i] - closed[i]));
      } else {
        out += ",n/a,n/a";
      }
      out += '\n';
    }
    return out;
  }
  constexpr std::size_t kWidth = 18;
  out += detail::pad("quantity", 10);
  out += detail::pad("quadrature", kWidth);
  out += detail::pad("closed_form", kWidth);
  out += "abs_diff\n";
  for (int i = 0; i < 3; ++i) {
    out += detail::pad(names[i], 10);
    out += detail::pad(detail::format_double(quadrature[i]), kWidth);
    if (result.closed_form) {
      out += detail::pad(detail::format_double(closed[i]), kWidth);
      out += detail::format_double(std::abs(quadrature[i] - closed[i]));
    } else {
      out += detail::pad("n/a", kWidth);
      out += "n/a";
    }
    out += '\n';
  }
  return out;
}

}  // namespace possport
