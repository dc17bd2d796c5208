#pragma once

#include "qgossip/errors.hpp"
#include "qgossip/io.hpp"
#include "qgossip/quantizer.hpp"
#include "qgossip/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qgossip {

enum class TopologyKind { complete, ring, rgg };
enum class ValueMode { real, quantized };
enum class OutputFormat { csv, json };

std::string_view to_string(TopologyKind k);
std::string_view to_string(ValueMode m);
std::string_view to_string(OutputFormat f);

struct TopologySpec {
  TopologyKind kind = TopologyKind::complete;
  std::size_t n = 10;
  double box_side = 1.0;
  double radius = 0.8;
  std::size_t max_attempts = 100;
};

/// Everything needed to reproduce a batch of trials.
struct ExperimentConfig {
  TopologySpec topology;
  ValueMode mode = ValueMode::quantized;
  int bits = 16;
  double range_min = 0.0;
  double range_max = 1.0;
  /// Real-mode consensus tolerance; defaults to the quantizer step.
  std::optional<double> tolerance;
  bool swap_enabled = true;
  /// Absent means i.i.d. uniform over [range_min, range_max].
  std::optional<std::vector<double>> init_values;
  std::string init_spec = "uniform";
  std::uint64_t seed = 0;
  Iteration max_iterations = 100000;
  std::size_t trials = 1;
  Iteration record_every = 1;
  bool full_state = false;
  bool run_to_cap = false;
  /// Output location; empty keeps everything in memory.
  std::filesystem::path out_dir;
  OutputFormat format = OutputFormat::csv;
  /// Only used by sweeps.
  std::vector<std::size_t> node_counts;
  unsigned threads = 1;

  Quantizer quantizer() const { return Quantizer(bits, range_min, range_max); }
  double consensus_tolerance() const { return tolerance ? *tolerance : quantizer().step(); }
};

/// Raised for --help; carries the usage text.
class HelpRequested : public Error {
 public:
  explicit HelpRequested(const std::string& text) : Error(text) {}
};

/// Parses command-line tokens (program name excluded), layered over an
/// optional flat `key = value` config file whose keys mirror the long flag
/// names. Flags win over file values; unknown keys are rejected. Throws
/// UsageError naming the offending key.
ExperimentConfig parse_config(std::span<const std::string> args,
                              const std::optional<std::filesystem::path>& file = std::nullopt);

/// Checks ranges and cross-field consistency. Throws UsageError.
void validate(const ExperimentConfig& cfg);

/// Reads whitespace- or comma-separated values.
std::vector<double> read_init_file(const std::filesystem::path& path);

/// Config echo. Output location and thread count are omitted: they do not
/// affect results.
Json to_json(const ExperimentConfig& cfg);

}  // namespace qgossip
