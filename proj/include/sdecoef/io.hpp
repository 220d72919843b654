#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include "sdecoef/harness.hpp"

namespace sdecoef {

/// Syntax or schema error in an input file; what() names the file and the
/// 1-based line (0 for file-level problems such as unreadable files).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::filesystem::path& file, std::size_t line,
             const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// 17-significant-digit decimal text; round-trips any finite double exactly.
std::string format_double(double value);

/// Writes content to a temporary sibling and renames it into place, so
/// readers never observe a partially written file.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

/// Path files: header line "delta=<decimal>", then one observation per line.
void write_path_file(const std::filesystem::path& path,
                     const SamplePath& sample);
SamplePath read_path_file(const std::filesystem::path& path);

/// Report tables. Columns and row order are fixed; failed replications
/// carry -1 model indices and nan errors.
void write_replications_csv(const std::filesystem::path& path,
                            std::span<const ReplicationRecord> records);
void write_curves_csv(const std::filesystem::path& path,
                      std::span<const CurvePoint> curves);
void write_scatter_csv(const std::filesystem::path& path,
                       std::span<const ScatterPoint> scatter);

/// Flat key=value experiment configuration ('#' comments and blank lines
/// allowed). Required keys: family, n, delta, replications, seed, target;
/// theta and c are required unless family=unittest-zerodrift; kappa and
/// rmax are optional. Unknown keys are an error.
ExperimentConfig read_experiment_config(const std::filesystem::path& path);

FamilyTag parse_family_tag(const std::string& name);
std::string family_tag_name(FamilyTag tag);
EstimationTarget parse_target(const std::string& name);
std::string target_name(EstimationTarget target);

}  // namespace sdecoef
