#include "ddestab/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "ddestab/char_oracle.hpp"
#include "json.hpp"

namespace ddestab::cli {

using nlohmann::json;

int exit_code_for(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stable:
      return kExitStable;
    case Verdict::Unstable:
      return kExitUnstable;
    case Verdict::Inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

GridSpec checked_grid(double horizon, double step) {
  if (!std::isfinite(horizon) || !std::isfinite(step) || horizon <= 0.0 || step <= 0.0) {
    throw std::invalid_argument("--horizon and --step must be positive numbers");
  }
  if (horizon / step > kMaxStepCount) {
    throw std::invalid_argument("T/h exceeds 5e8 steps; use a coarser step or shorter horizon");
  }
  return make_grid(horizon, step);
}

std::int64_t default_stride(const GridSpec& grid) noexcept {
  return std::max<std::int64_t>(1, grid.step_count / 10000);
}

namespace {

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) {
    return std::nullopt;
  }
  return doc.at(key).get<T>();
}

std::string optional_text(const std::optional<double>& v) {
  return v ? format_g9(*v) : std::string("n/a");
}

}  // namespace

std::string report_to_json(const Analysis& a) {
  const StabilityReport& r = a.report;
  json doc;
  doc["verdict"] = std::string(to_string(r.verdict));
  doc["theorem1_residual_abs"] = optional_json(r.theorem1_residual_abs);
  doc["theorem1_residual_rel"] = optional_json(r.theorem1_residual_rel);
  doc["coefficient_sum_invertible"] = r.coefficient_sum_invertible;
  doc["tail_growth_norm"] = optional_json(r.tail_growth_norm);
  doc["tail_growth_norm2"] = optional_json(r.tail_growth_norm2);
  doc["final_state_norm"] = r.final_state_norm;
  doc["max_state_norm"] = r.max_state_norm;
  doc["diverged"] = r.diverged;
  doc["divergence_step"] = optional_json(r.divergence_step);
  doc["grid"] = {{"horizon", r.grid.horizon},
                 {"step", r.grid.step},
                 {"step_count", r.grid.step_count}};
  doc["annotations"] = r.annotations;
  doc["oracle_rhp_roots"] = optional_json(r.oracle_rhp_roots);
  doc["integral_x"] = a.integral_x.all_finite() ? matrix_json(a.integral_x) : json(nullptr);
  doc["neg_inverse_coefficient_sum"] = a.neg_inverse ? matrix_json(*a.neg_inverse) : json(nullptr);
  doc["s_norm"] = std::isfinite(a.s_norm) ? json(a.s_norm) : json(nullptr);
  doc["s_norm2"] = std::isfinite(a.s_norm2) ? json(a.s_norm2) : json(nullptr);
  json cps = json::array();
  for (const auto& c : a.checkpoints) {
    cps.push_back({{"fraction", c.fraction},
                   {"step", c.step},
                   {"time", c.time},
                   {"s_norm", c.s_norm},
                   {"s_norm2", c.s_norm2}});
  }
  doc["checkpoints"] = std::move(cps);
  return doc.dump(2) + "\n";
}

StabilityReport report_from_json(const std::string& text) {
  const json doc = json::parse(text);
  StabilityReport r;
  const auto verdict = verdict_from_string(doc.at("verdict").get<std::string>());
  if (!verdict) {
    throw std::invalid_argument("unknown verdict in report");
  }
  r.verdict = *verdict;
  r.theorem1_residual_abs = optional_from<double>(doc, "theorem1_residual_abs");
  r.theorem1_residual_rel = optional_from<double>(doc, "theorem1_residual_rel");
  r.coefficient_sum_invertible = doc.at("coefficient_sum_invertible").get<bool>();
  r.tail_growth_norm = optional_from<double>(doc, "tail_growth_norm");
  r.tail_growth_norm2 = optional_from<double>(doc, "tail_growth_norm2");
  r.final_state_norm = doc.at("final_state_norm").get<double>();
  r.max_state_norm = doc.at("max_state_norm").get<double>();
  r.diverged = doc.at("diverged").get<bool>();
  r.divergence_step = optional_from<std::int64_t>(doc, "divergence_step");
  const auto& g = doc.at("grid");
  r.grid = GridSpec{g.at("horizon").get<double>(), g.at("step").get<double>(),
                    g.at("step_count").get<std::int64_t>()};
  r.annotations = doc.at("annotations").get<std::vector<std::string>>();
  r.oracle_rhp_roots = optional_from<int>(doc, "oracle_rhp_roots");
  return r;
}

std::string report_to_human(const Analysis& a) {
  const StabilityReport& r = a.report;
  std::ostringstream os;
  os << std::left;
  auto line = [&os](const std::string& label, const std::string& value) {
    os << "  " << std::setw(30) << label << value << "\n";
  };
  os << "verdict: " << to_string(r.verdict) << "\n";
  line("horizon T", format_g9(r.grid.horizon));
  line("step h", format_g9(r.grid.step));
  line("steps N", std::to_string(r.grid.step_count));
  line("coefficient sum invertible", r.coefficient_sum_invertible ? "yes" : "no");
  line("residual |S_X + M^-1|_F", optional_text(r.theorem1_residual_abs));
  line("residual (relative)", optional_text(r.theorem1_residual_rel));
  line("sum |X_n|_F h", format_g9(a.s_norm));
  line("sum |X_n|_F^2 h", format_g9(a.s_norm2));
  line("tail growth (norm)", optional_text(r.tail_growth_norm));
  line("tail growth (norm^2)", optional_text(r.tail_growth_norm2));
  line("final |X_N|_F", format_g9(r.final_state_norm));
  line("max |X_n|_F", format_g9(r.max_state_norm));
  line("diverged", r.diverged ? "yes" : "no");
  if (r.oracle_rhp_roots) {
    line("oracle roots, Re s >= 0", std::to_string(*r.oracle_rhp_roots));
  }

  auto print_matrix = [&os](const std::string& title, const Matrix& m) {
    os << title << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
      os << "  ";
      for (std::size_t j = 0; j < m.cols(); ++j) {
        os << std::right << std::setw(12) << std::fixed << std::setprecision(4) << m(i, j);
      }
      os << "\n";
    }
    os << std::left << std::defaultfloat;
  };
  if (a.integral_x.all_finite()) {
    print_matrix("sum X_n h:", a.integral_x);
  }
  if (a.neg_inverse) {
    print_matrix("-(A0 + sum Aj)^-1:", *a.neg_inverse);
  }
  for (const auto& note : r.annotations) {
    os << "note: " << note << "\n";
  }
  return os.str();
}

RunSummary write_trace(const DelaySystem& sys, const GridSpec& grid, std::int64_t stride,
                       std::ostream& out) {
  if (stride < 1) {
    throw std::invalid_argument("stride must be at least 1");
  }
  auto row = [&](std::int64_t n, double norm) {
    out << format_g9(grid.time_at(n)) << ',' << format_g9(norm) << '\n';
  };
  out << "t,frobenius_norm\n";
  row(0, std::sqrt(static_cast<double>(sys.dimension())));
  return run_fundamental(sys, grid, [&](std::int64_t n, const Matrix& x) {
    if (n % stride == 0 || n == grid.step_count) {
      row(n, frobenius_norm(x));
    }
  });
}

std::vector<double> sweep_scales(double scale_min, double scale_max, int steps) {
  if (!(scale_min > 0.0) || !(scale_max >= scale_min) || !std::isfinite(scale_max)) {
    throw std::invalid_argument("scales must satisfy 0 < scale-min <= scale-max");
  }
  if (steps < 1) {
    throw std::invalid_argument("--steps must be at least 1");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    out.push_back(scale_min);
    return out;
  }
  const double width = scale_max - scale_min;
  for (int k = 0; k < steps; ++k) {
    out.push_back(k + 1 == steps ? scale_max : scale_min + width * k / (steps - 1));
  }
  return out;
}

std::vector<SweepRow> run_sweep(const DelaySystem& sys, const GridSpec& grid,
                                const std::vector<double>& scales,
                                const CriteriaConfig& criteria) {
  auto one_row = [&sys, &grid, &criteria](double c) {
    SweepRow row;
    row.scale = c;
    try {
      const Analysis a = analyze_system(sys.with_scaled_delays(c), grid, criteria);
      row.verdict = a.report.verdict;
      row.residual_rel = a.report.theorem1_residual_rel;
      row.tail_growth_norm2 = a.report.tail_growth_norm2;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  };

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows;
  rows.reserve(scales.size());
  for (std::size_t begin = 0; begin < scales.size(); begin += workers) {
    const std::size_t end = std::min(scales.size(), begin + workers);
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t k = begin; k < end; ++k) {
      batch.push_back(std::async(std::launch::async, one_row, scales[k]));
    }
    for (auto& f : batch) {
      rows.push_back(f.get());
    }
  }
  return rows;
}

void write_sweep_table(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "scale,verdict,residual_rel,tail_growth_norm2\n";
  for (const auto& r : rows) {
    out << format_g9(r.scale) << ','
        << (r.verdict ? std::string(to_string(*r.verdict)) : std::string("error")) << ','
        << (r.residual_rel ? format_g9(*r.residual_rel) : "nan") << ','
        << (r.tail_growth_norm2 ? format_g9(*r.tail_growth_norm2) : "nan") << '\n';
  }
}

namespace {

// Loads the system or returns the failure exit code.
std::optional<DelaySystem> load_or_report(const std::string& path, std::ostream& err,
                                          int& status) {
  try {
    return load_system(path);
  } catch (const ParseError& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    status = kExitParseError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    status = kExitParseError;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    status = kExitIoError;
  }
  return std::nullopt;
}

}  // namespace

int cmd_analyze(const AnalyzeConfig& cfg, std::ostream& out, std::ostream& err) {
  GridSpec grid;
  try {
    grid = checked_grid(cfg.horizon, cfg.step);
    cfg.criteria.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  int status = 0;
  const auto sys = load_or_report(cfg.system_path, err, status);
  if (!sys) {
    return status;
  }

  QuadratureOptions quad;
  quad.compensated = cfg.compensated;
  Analysis analysis = analyze_system(*sys, grid, cfg.criteria, quad);
  if (cfg.oracle_enabled) {
    try {
      analysis.report.oracle_rhp_roots = rhp_zero_count_refined(*sys, cfg.oracle_margin);
    } catch (const std::exception& e) {
      analysis.report.annotations.push_back(std::string("oracle: ") + e.what());
    }
  }
  out << (cfg.format == OutputFormat::Json ? report_to_json(analysis)
                                           : report_to_human(analysis));
  return exit_code_for(analysis.report.verdict);
}

int cmd_trace(const TraceConfig& cfg, std::ostream& err) {
  GridSpec grid;
  try {
    grid = checked_grid(cfg.horizon, cfg.step);
    if (cfg.stride && *cfg.stride < 1) {
      throw std::invalid_argument("--stride must be at least 1");
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  int status = 0;
  const auto sys = load_or_report(cfg.system_path, err, status);
  if (!sys) {
    return status;
  }
  std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot open '" << cfg.output_path << "' for writing\n";
    return kExitIoError;
  }
  const RunSummary summary = write_trace(*sys, grid, cfg.stride.value_or(default_stride(grid)), file);
  file.flush();
  if (!file) {
    err << "error: write to '" << cfg.output_path << "' failed\n";
    return kExitIoError;
  }
  if (summary.diverged) {
    err << "warning: trace truncated, iterate overflowed at step "
        << summary.divergence_step.value_or(0) << "\n";
  }
  return 0;
}

int cmd_sweep(const SweepConfig& cfg, std::ostream& out, std::ostream& err) {
  GridSpec grid;
  std::vector<double> scales;
  try {
    grid = checked_grid(cfg.horizon, cfg.step);
    scales = sweep_scales(cfg.scale_min, cfg.scale_max, cfg.scale_steps);
    cfg.criteria.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  int status = 0;
  const auto sys = load_or_report(cfg.system_path, err, status);
  if (!sys) {
    return status;
  }
  const auto rows = run_sweep(*sys, grid, scales, cfg.criteria);
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      err << "warning: scale " << format_g9(r.scale) << ": " << r.error << "\n";
    }
  }
  write_sweep_table(rows, out);
  return 0;
}

}  // namespace ddestab::cli
