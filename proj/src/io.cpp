#include "sdecoef/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>
#include <vector>

namespace sdecoef {

namespace {

std::string strip(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

double parse_double_strict(const std::filesystem::path& file,
                           std::size_t line, const std::string& token) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ParseError(file, line, "expected a finite decimal number, got '" +
                                     token + "'");
  }
  return value;
}

std::uint64_t parse_u64_strict(const std::filesystem::path& file,
                               std::size_t line, const std::string& token) {
  std::uint64_t value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(file, line,
                     "expected a nonnegative integer, got '" + token + "'");
  }
  return value;
}

}  // namespace

ParseError::ParseError(const std::filesystem::path& file, std::size_t line,
                       const std::string& message)
    : std::runtime_error(file.string() + ":" + std::to_string(line) + ": " +
                         message),
      line_(line) {}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + temp.string());
    }
    out << content;
    if (!out.flush()) {
      throw std::runtime_error("write failed: " + temp.string());
    }
  }
  std::filesystem::rename(temp, path);
}

void write_path_file(const std::filesystem::path& path,
                     const SamplePath& sample) {
  std::string content = "delta=" + format_double(sample.delta) + "\n";
  for (double v : sample.values) {
    content += format_double(v);
    content += '\n';
  }
  write_text_atomic(path, content);
}

SamplePath read_path_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path, 1, "empty file");
  const std::string header = strip(line);
  if (header.rfind("delta=", 0) != 0) {
    throw ParseError(path, 1, "expected header 'delta=<decimal>'");
  }
  const double delta = parse_double_strict(path, 1, header.substr(6));
  if (!(delta > 0.0)) throw ParseError(path, 1, "delta must be positive");

  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string token = strip(line);
    if (token.empty()) {
      throw ParseError(path, line_no, "blank line in value section");
    }
    values.push_back(parse_double_strict(path, line_no, token));
  }
  if (values.size() < 2) {
    throw ParseError(path, line_no, "need at least two observations");
  }
  return make_sample_path(delta, std::move(values));
}

void write_replications_csv(const std::filesystem::path& path,
                            std::span<const ReplicationRecord> records) {
  std::string content =
      "replication,drift_p,drift_r,drift_err,vol_p,vol_r,vol_err,"
      "window_lo,window_hi\n";
  for (const auto& record : records) {
    content += std::to_string(record.replication) + ",";
    if (record.failed) {
      content += "-1,-1,nan,-1,-1,nan,nan,nan\n";
      continue;
    }
    content += std::to_string(record.drift_model.level) + "," +
               std::to_string(record.drift_model.degree) + "," +
               format_double(record.drift_err) + "," +
               std::to_string(record.vol_model.level) + "," +
               std::to_string(record.vol_model.degree) + "," +
               format_double(record.vol_err) + "," +
               format_double(record.window.lo) + "," +
               format_double(record.window.hi) + "\n";
  }
  write_text_atomic(path, content);
}

void write_curves_csv(const std::filesystem::path& path,
                      std::span<const CurvePoint> curves) {
  std::string content = "x,truth_drift,est_drift,truth_vol,est_vol\n";
  for (const auto& point : curves) {
    content += format_double(point.x) + "," +
               format_double(point.truth_drift) + "," +
               format_double(point.est_drift) + "," +
               format_double(point.truth_vol) + "," +
               format_double(point.est_vol) + "\n";
  }
  write_text_atomic(path, content);
}

void write_scatter_csv(const std::filesystem::path& path,
                       std::span<const ScatterPoint> scatter) {
  std::string content = "x,y_drift_response,u_vol_response\n";
  for (const auto& point : scatter) {
    content += format_double(point.x) + "," + format_double(point.y_drift) +
               "," + format_double(point.u_vol) + "\n";
  }
  write_text_atomic(path, content);
}

FamilyTag parse_family_tag(const std::string& name) {
  if (name == "family1") return FamilyTag::kFamily1;
  if (name == "family2") return FamilyTag::kFamily2;
  if (name == "family2-twobumps") return FamilyTag::kFamily2TwoBumps;
  if (name == "unittest-zerodrift") return FamilyTag::kUnitTestZeroDrift;
  throw std::invalid_argument(
      "unknown family '" + name +
      "' (expected family1 | family2 | family2-twobumps | "
      "unittest-zerodrift)");
}

std::string family_tag_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::kFamily1:
      return "family1";
    case FamilyTag::kFamily2:
      return "family2";
    case FamilyTag::kFamily2TwoBumps:
      return "family2-twobumps";
    case FamilyTag::kUnitTestZeroDrift:
      return "unittest-zerodrift";
  }
  throw std::invalid_argument("unknown family tag");
}

EstimationTarget parse_target(const std::string& name) {
  if (name == "xi") return EstimationTarget::kXiProcess;
  if (name == "x") return EstimationTarget::kXProcess;
  throw std::invalid_argument("unknown target '" + name +
                              "' (expected xi | x)");
}

std::string target_name(EstimationTarget target) {
  return target == EstimationTarget::kXiProcess ? "xi" : "x";
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");

  std::map<std::string, std::pair<std::string, std::size_t>> entries;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> unknown;
  const std::set<std::string> known = {"family", "theta",        "c",
                                       "n",      "delta",        "replications",
                                       "seed",   "target",       "kappa",
                                       "rmax"};
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = strip(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path, line_no, "expected key=value");
    }
    const std::string key = strip(text.substr(0, eq));
    const std::string value = strip(text.substr(eq + 1));
    if (!known.count(key)) {
      unknown.push_back(key);
      continue;
    }
    if (entries.count(key)) {
      throw ParseError(path, line_no, "duplicate key '" + key + "'");
    }
    entries[key] = {value, line_no};
  }
  if (!unknown.empty()) {
    std::string joined;
    for (const auto& key : unknown) {
      if (!joined.empty()) joined += ", ";
      joined += "'" + key + "'";
    }
    throw ParseError(path, 0, "unknown keys: " + joined);
  }

  const auto fetch = [&](const std::string& key) -> const std::string& {
    const auto it = entries.find(key);
    if (it == entries.end()) {
      throw ParseError(path, 0, "missing required key '" + key + "'");
    }
    return it->second.first;
  };
  const auto line_of = [&](const std::string& key) {
    return entries.at(key).second;
  };
  const auto required_double = [&](const std::string& key) {
    const std::string& text = fetch(key);
    return parse_double_strict(path, line_of(key), text);
  };
  const auto required_u64 = [&](const std::string& key) {
    const std::string& text = fetch(key);
    return parse_u64_strict(path, line_of(key), text);
  };

  ExperimentConfig config;
  FamilyTag tag;
  {
    const std::string& family_text = fetch("family");
    try {
      tag = parse_family_tag(family_text);
    } catch (const std::invalid_argument& bad) {
      throw ParseError(path, line_of("family"), bad.what());
    }
  }
  double theta = 1.0;
  double c = 1.0;
  if (tag != FamilyTag::kUnitTestZeroDrift) {
    theta = required_double("theta");
    c = required_double("c");
  } else {
    if (entries.count("theta")) theta = required_double("theta");
    if (entries.count("c")) c = required_double("c");
  }
  try {
    config.family = make_family(tag, theta, c);
  } catch (const std::invalid_argument& bad) {
    throw ParseError(path, line_of("family"), bad.what());
  }

  config.n = required_u64("n");
  config.delta = required_double("delta");
  config.replications = required_u64("replications");
  config.seed = required_u64("seed");
  {
    const std::string& target_text = fetch("target");
    try {
      config.target = parse_target(target_text);
    } catch (const std::invalid_argument& bad) {
      throw ParseError(path, line_of("target"), bad.what());
    }
  }
  if (entries.count("kappa")) config.kappa = required_double("kappa");
  if (entries.count("rmax")) {
    config.r_max = static_cast<int>(required_u64("rmax"));
  }

  try {
    return make_experiment_config(config);
  } catch (const std::invalid_argument& bad) {
    throw ParseError(path, 0, bad.what());
  }
}

}  // namespace sdecoef
