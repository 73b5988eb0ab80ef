#include "mirflow/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "mirflow/errors.hpp"

namespace mirflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    if (!value.empty() && value[0] == '-')
      throw ConfigError(key + ": negative value '" + value + "'");
    std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw ConfigError(key + ": trailing junk in '" + value + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

std::uint32_t parse_u32(const std::string& key, const std::string& value) {
  std::uint64_t v = parse_u64(key, value);
  if (v > 0xffffffffull) throw ConfigError(key + ": value '" + value + "' out of range");
  return static_cast<std::uint32_t>(v);
}

double parse_f64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw ConfigError(key + ": trailing junk in '" + value + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

std::string format_f64(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig cfg;
  bool saw_fc_up = false;
  bool saw_fc_down = false;

  std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters;
  setters["min_srna_freq"] = [&](const std::string& k, const std::string& v) {
    cfg.min_srna_freq = parse_u64(k, v);
  };
  setters["min_mirna_freq"] = [&](const std::string& k, const std::string& v) {
    cfg.min_mirna_freq = parse_u64(k, v);
  };
  setters["min_srna_len"] = [&](const std::string& k, const std::string& v) {
    cfg.min_srna_len = parse_u32(k, v);
  };
  setters["mirna_len_min"] = [&](const std::string& k, const std::string& v) {
    cfg.mirna_len_min = parse_u32(k, v);
  };
  setters["mirna_len_max"] = [&](const std::string& k, const std::string& v) {
    cfg.mirna_len_max = parse_u32(k, v);
  };
  setters["dust_threshold"] = [&](const std::string& k, const std::string& v) {
    cfg.dust_threshold = parse_f64(k, v);
  };
  setters["max_loci"] = [&](const std::string& k, const std::string& v) {
    cfg.max_loci = parse_u32(k, v);
  };
  setters["max_premirna_len"] = [&](const std::string& k, const std::string& v) {
    cfg.max_premirna_len = parse_u32(k, v);
  };
  setters["precursor_search_range"] = [&](const std::string& k, const std::string& v) {
    cfg.precursor_search_range = parse_u32(k, v);
  };
  setters["extra_flank"] = [&](const std::string& k, const std::string& v) {
    cfg.extra_flank = parse_u32(k, v);
  };
  setters["duplex_max_unpaired"] = [&](const std::string& k, const std::string& v) {
    cfg.duplex_max_unpaired = parse_u32(k, v);
  };
  setters["duplex_max_bulge"] = [&](const std::string& k, const std::string& v) {
    cfg.duplex_max_bulge = parse_u32(k, v);
  };
  setters["max_second_loop"] = [&](const std::string& k, const std::string& v) {
    cfg.max_second_loop = parse_u32(k, v);
  };
  setters["dominance_threshold"] = [&](const std::string& k, const std::string& v) {
    cfg.dominance_threshold = parse_f64(k, v);
  };
  setters["fc_up"] = [&](const std::string& k, const std::string& v) {
    cfg.fc_up = parse_f64(k, v);
    saw_fc_up = true;
  };
  setters["fc_down"] = [&](const std::string& k, const std::string& v) {
    cfg.fc_down = parse_f64(k, v);
    saw_fc_down = true;
  };
  setters["alpha"] = [&](const std::string& k, const std::string& v) {
    cfg.alpha = parse_f64(k, v);
  };
  setters["bitscore_threshold"] = [&](const std::string& k, const std::string& v) {
    cfg.bitscore_threshold = parse_f64(k, v);
  };
  setters["workers"] = [&](const std::string& k, const std::string& v) {
    cfg.workers = parse_u32(k, v);
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second(key, value);
  }

  if (saw_fc_up && !saw_fc_down) {
    if (cfg.fc_up == 0) throw ConfigError("fc_up: must be nonzero to derive fc_down");
    cfg.fc_down = 1.0 / cfg.fc_up;
  }

  validate_config(cfg);
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  return parse_config(in);
}

void serialize_config(const PipelineConfig& cfg, std::ostream& out) {
  out << "min_srna_freq=" << cfg.min_srna_freq << '\n';
  out << "min_mirna_freq=" << cfg.min_mirna_freq << '\n';
  out << "min_srna_len=" << cfg.min_srna_len << '\n';
  out << "mirna_len_min=" << cfg.mirna_len_min << '\n';
  out << "mirna_len_max=" << cfg.mirna_len_max << '\n';
  out << "dust_threshold=" << format_f64(cfg.dust_threshold) << '\n';
  out << "max_loci=" << cfg.max_loci << '\n';
  out << "max_premirna_len=" << cfg.max_premirna_len << '\n';
  out << "precursor_search_range=" << cfg.precursor_search_range << '\n';
  out << "extra_flank=" << cfg.extra_flank << '\n';
  out << "duplex_max_unpaired=" << cfg.duplex_max_unpaired << '\n';
  out << "duplex_max_bulge=" << cfg.duplex_max_bulge << '\n';
  out << "max_second_loop=" << cfg.max_second_loop << '\n';
  out << "dominance_threshold=" << format_f64(cfg.dominance_threshold) << '\n';
  out << "fc_up=" << format_f64(cfg.fc_up) << '\n';
  out << "fc_down=" << format_f64(cfg.fc_down) << '\n';
  out << "alpha=" << format_f64(cfg.alpha) << '\n';
  out << "bitscore_threshold=" << format_f64(cfg.bitscore_threshold) << '\n';
  out << "workers=" << cfg.workers << '\n';
}

void validate_config(const PipelineConfig& cfg) {
  if (cfg.workers < 1) throw ConfigError("workers: must be >= 1");
  if (cfg.mirna_len_min > cfg.mirna_len_max)
    throw ConfigError("mirna_len_min: exceeds mirna_len_max");
  if (cfg.min_srna_len == 0) throw ConfigError("min_srna_len: must be >= 1");
  if (cfg.max_premirna_len == 0) throw ConfigError("max_premirna_len: must be >= 1");
  if (cfg.dominance_threshold < 0.0 || cfg.dominance_threshold > 1.0)
    throw ConfigError("dominance_threshold: must lie in [0,1]");
  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0) throw ConfigError("alpha: must lie in (0,1)");
  if (cfg.fc_up <= 0.0) throw ConfigError("fc_up: must be positive");
  if (cfg.fc_down <= 0.0) throw ConfigError("fc_down: must be positive");
  if (cfg.dust_threshold < 0.0) throw ConfigError("dust_threshold: must be >= 0");
}

}  // namespace mirflow
