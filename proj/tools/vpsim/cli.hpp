#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vp/montecarlo.hpp"

namespace vpsim {

enum class OutputFormat { kCsv, kCsvSvg };

/// Parsed command line: one SimConfig per requested scheme, all sharing the
/// grid, error model, trial budget and seed.
struct RunSpec {
  std::vector<vp::SimConfig> combos;
  std::string out_path = "vp_ber.csv";
  OutputFormat format = OutputFormat::kCsv;
  unsigned workers = 1;
};

/// Bad flags or an inconsistent flag combination. `what()` is the message.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown for --help; `what()` holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kCsvHeader =
    "scheme,snr_db,sigma_q2,trials,bits,bit_errors,ber,ci_half_width,seed";

RunSpec parse_args(int argc, const char* const* argv);

/// `start:stop:step` in dB, stop included when it lies on the grid; a single
/// number yields a one-point grid.
std::vector<double> parse_snr_grid(std::string_view text);

std::string format_csv(std::span<const vp::BerPoint> points);

/// Log-scale BER vs SNR plot, one series per scheme. Zero-error points are
/// drawn as hollow markers at the 95% upper bound 3 / bits.
std::string render_svg(std::span<const vp::BerPoint> points, const RunSpec& spec);

/// Path of the SVG written next to the CSV.
std::string svg_path(const std::string& csv_path);

/// Writes the CSV (and SVG when requested). Throws std::runtime_error if a
/// file cannot be written.
void emit_results(std::span<const vp::BerPoint> points, const RunSpec& spec);

/// Whole program: returns 0 on success, 1 on usage errors, 2 on runtime
/// failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vpsim
