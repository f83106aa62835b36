#include "vpsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

namespace vpsim {
namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(v)) {
    throw UsageError("invalid " + std::string(what) + " '" + s + "'");
  }
  return v;
}

std::string describe(const vp::BetaErrorModel& m) {
  using Mode = vp::BetaErrorModel::Mode;
  switch (m.mode) {
    case Mode::kExact: return "exact beta";
    case Mode::kFixedSqr: return "SQR " + fmt("%g", m.sqr_db) + " dB";
    case Mode::kNoiseAdaptive: return "sigma_q2 = sigma_n2^" + fmt("%.4g", m.exponent);
  }
  return "";
}

}  // namespace

std::vector<double> parse_snr_grid(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t colon = text.find(':', pos);
    parts.push_back(text.substr(pos, colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (parts.size() == 1) return {parse_double(parts[0], "SNR")};
  if (parts.size() != 3) {
    throw UsageError("SNR grid must be 'start:stop:step' or a single value, got '" +
                     std::string(text) + "'");
  }
  const double start = parse_double(parts[0], "SNR start");
  const double stop = parse_double(parts[1], "SNR stop");
  const double step = parse_double(parts[2], "SNR step");
  if (!(step > 0.0)) throw UsageError("SNR step must be positive");
  if (stop < start) throw UsageError("SNR stop must not be below start");

  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (n > 10000) throw UsageError("SNR grid has too many points");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

RunSpec parse_args(int argc, const char* const* argv) {
  CLI::App app{"Monte Carlo BER simulator for vector-perturbation precoding", "vpsim"};

  std::vector<std::string> schemes;
  int nt = 4;
  int nr = 2;
  int order = 16;
  std::string snr = "0:40:5";
  std::optional<double> sqr_db;
  std::optional<std::string> sqr_mode;
  std::optional<double> exponent;
  std::int64_t trials = 10000;
  std::int64_t min_errors = 0;
  std::uint64_t seed = 1;
  std::string out = "vp_ber.csv";
  bool svg = false;
  unsigned workers = 1;

  app.add_option("--scheme", schemes, "Precoder (repeatable); default: all three")
      ->check(CLI::IsMember({"cvp", "mmse-vp", "robust-vp"}));
  app.add_option("--nt", nt, "Transmit antennas")->check(CLI::Range(1, 64));
  app.add_option("--nr", nr, "Single-antenna users")->check(CLI::Range(1, 64));
  app.add_option("--mod", order, "QAM order")->check(CLI::IsMember({4, 16, 64}));
  app.add_option("--snr", snr, "SNR grid in dB, start:stop:step");
  app.add_option("--sqr", sqr_db, "Signal-to-quantization-error ratio in dB (fixed mode)");
  app.add_option("--sqr-mode", sqr_mode, "Power-scaling error model")
      ->check(CLI::IsMember({"exact", "fixed", "adaptive"}));
  app.add_option("--exponent", exponent, "Adaptive mode: sigma_q2 = sigma_n2^exponent");
  app.add_option("--trials", trials, "Frames per SNR point")->check(CLI::PositiveNumber);
  app.add_option("--min-errors", min_errors, "Early-stop error count (0 disables)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", out, "CSV output path ('-' for stdout)");
  app.add_flag("--svg", svg, "Also write an SVG plot next to the CSV");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (nr > nt) throw UsageError("--nr must not exceed --nt");

  const std::string mode = sqr_mode.value_or(sqr_db ? "fixed" : "exact");
  vp::BetaErrorModel model;
  if (mode == "exact") {
    if (sqr_db) throw UsageError("--sqr conflicts with --sqr-mode exact");
    if (exponent) throw UsageError("--exponent requires --sqr-mode adaptive");
  } else if (mode == "fixed") {
    if (!sqr_db) throw UsageError("--sqr-mode fixed requires --sqr <dB>");
    if (exponent) throw UsageError("--exponent requires --sqr-mode adaptive");
    model = vp::BetaErrorModel::fixed_sqr(*sqr_db);
  } else {
    if (sqr_db) throw UsageError("--sqr conflicts with --sqr-mode adaptive");
    double e = exponent.value_or(1.0);
    if (std::abs(e - 1.0) < 1e-3) {
      e = 1.0;
    } else if (std::abs(e - 2.0 / 3.0) < 1e-3) {
      e = 2.0 / 3.0;
    } else if (std::abs(e - 0.5) < 1e-3) {
      e = 0.5;
    } else {
      throw UsageError("--exponent must be one of 1, 0.6667, 0.5");
    }
    model = vp::BetaErrorModel::noise_adaptive(e);
  }

  if (svg && out == "-") throw UsageError("--svg needs a file path for --out");
  if (schemes.empty()) schemes = {"cvp", "mmse-vp", "robust-vp"};

  RunSpec spec;
  spec.out_path = out;
  spec.format = svg ? OutputFormat::kCsvSvg : OutputFormat::kCsv;
  spec.workers = workers;
  const std::vector<double> grid = parse_snr_grid(snr);
  for (const std::string& name : schemes) {
    vp::SimConfig cfg;
    cfg.nt = nt;
    cfg.nr = nr;
    cfg.order = order;
    cfg.scheme = vp::parse_scheme(name);
    cfg.snr_grid_db = grid;
    cfg.beta_error = model;
    cfg.trials = trials;
    cfg.min_bit_errors = min_errors;
    cfg.master_seed = seed;
    try {
      vp::validate(cfg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    spec.combos.push_back(std::move(cfg));
  }
  return spec;
}

std::string format_csv(std::span<const vp::BerPoint> points) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const vp::BerPoint& p : points) {
    os << vp::scheme_name(p.scheme) << ',' << fmt("%.2f", p.snr_db) << ','
       << fmt("%.17g", p.sigma_q2) << ',' << p.trials << ',' << p.bits << ','
       << p.bit_errors << ',' << fmt("%.17g", p.ber) << ','
       << fmt("%.17g", p.ci_half_width) << ',' << p.seed << '\n';
  }
  return os.str();
}

std::string render_svg(std::span<const vp::BerPoint> points, const RunSpec& spec) {
  constexpr double kWidth = 720, kHeight = 480;
  constexpr double kLeft = 70, kRight = 200, kTop = 30, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  auto plotted = [](const vp::BerPoint& p) {
    return p.bit_errors > 0 ? p.ber : 3.0 / static_cast<double>(std::max<std::int64_t>(p.bits, 1));
  };

  double x_lo = points.front().snr_db, x_hi = x_lo;
  double y_lo = plotted(points.front()), y_hi = y_lo;
  for (const auto& p : points) {
    x_lo = std::min(x_lo, p.snr_db);
    x_hi = std::max(x_hi, p.snr_db);
    y_lo = std::min(y_lo, plotted(p));
    y_hi = std::max(y_hi, plotted(p));
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  const int dec_lo = static_cast<int>(std::floor(std::log10(y_lo)));
  const int dec_hi = std::max(dec_lo + 1, static_cast<int>(std::ceil(std::log10(y_hi))));

  auto sx = [&](double snr) { return kLeft + (snr - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double ber) {
    return kTop + (dec_hi - std::log10(ber)) / (dec_hi - dec_lo) * plot_h;
  };

  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
     << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int d = dec_lo; d <= dec_hi; ++d) {
    const double y = sy(std::pow(10.0, d));
    os << "<line x1=\"" << kLeft << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\""
       << kLeft + plot_w << "\" y2=\"" << fmt("%.2f", y)
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt("%.2f", y + 4)
       << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  std::vector<double> ticks;
  for (const auto& p : points) ticks.push_back(p.snr_db);
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  for (double t : ticks) {
    os << "<text x=\"" << fmt("%.2f", sx(t)) << "\" y=\"" << kTop + plot_h + 18
       << "\" text-anchor=\"middle\">" << fmt("%g", t) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\">SNR (dB)</text>\n";
  os << "<text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 16 " << kTop + plot_h / 2 << ")\">BER</text>\n";

  std::string error_model;
  if (!spec.combos.empty()) error_model = describe(spec.combos.front().beta_error);

  std::map<vp::Scheme, std::vector<const vp::BerPoint*>> series;
  for (const auto& p : points) series[p.scheme].push_back(&p);

  std::size_t index = 0;
  for (const auto& [scheme, pts] : series) {
    const char* color = kColors[index % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto* p : pts) {
      if (p->bit_errors == 0) continue;
      os << (first ? "" : " ") << fmt("%.2f", sx(p->snr_db)) << ','
         << fmt("%.2f", sy(p->ber));
      first = false;
    }
    os << "\"/>\n";
    for (const auto* p : pts) {
      const double cx = sx(p->snr_db), cy = sy(plotted(*p));
      if (p->bit_errors > 0) {
        os << "<circle cx=\"" << fmt("%.2f", cx) << "\" cy=\"" << fmt("%.2f", cy)
           << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      } else {
        os << "<path d=\"M" << fmt("%.2f", cx - 4) << ',' << fmt("%.2f", cy - 3) << " L"
           << fmt("%.2f", cx + 4) << ',' << fmt("%.2f", cy - 3) << " L"
           << fmt("%.2f", cx) << ',' << fmt("%.2f", cy + 4) << " Z\" fill=\"none\" stroke=\""
           << color << "\"/>\n";
      }
    }
    const double ly = kTop + 16 + 18 * static_cast<double>(index);
    os << "<line x1=\"" << kLeft + plot_w + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << kLeft + plot_w + 32 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + plot_w + 38 << "\" y=\"" << ly << "\">"
       << vp::scheme_name(scheme) << "</text>\n";
    ++index;
  }
  if (!error_model.empty()) {
    os << "<text x=\"" << kLeft + plot_w + 12 << "\" y=\""
       << kTop + 16 + 18 * static_cast<double>(index) + 6 << "\" fill=\"#555\">"
       << error_model << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_path(const std::string& csv_path) {
  const std::size_t slash = csv_path.find_last_of('/');
  const std::size_t dot = csv_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return csv_path.substr(0, dot) + ".svg";
  }
  return csv_path + ".svg";
}

void emit_results(std::span<const vp::BerPoint> points, const RunSpec& spec) {
  if (points.empty()) throw std::runtime_error("no results to write");
  auto write = [](const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << body;
    f.flush();
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
  };
  write(spec.out_path, format_csv(points));
  if (spec.format == OutputFormat::kCsvSvg) {
    write(svg_path(spec.out_path), render_svg(points, spec));
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunSpec spec;
  try {
    spec = parse_args(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "vpsim: " << e.what() << "\nRun with --help for usage.\n";
    return 1;
  }

  try {
    std::vector<vp::BerPoint> points;
    for (const vp::SimConfig& cfg : spec.combos) {
      for (const vp::BerPoint& p : vp::sweep(cfg, spec.workers)) {
        err << vp::scheme_name(p.scheme) << "  snr=" << fmt("%.2f", p.snr_db)
            << " dB  ber=" << fmt("%.3e", p.ber) << "  (" << p.bit_errors << '/'
            << p.bits << ")\n";
        points.push_back(p);
      }
    }
    if (spec.out_path == "-") {
      out << format_csv(points);
    } else {
      emit_results(points, spec);
    }
  } catch (const std::exception& e) {
    err << "vpsim: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace vpsim
