#include "g2r/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace g2r::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& v, std::size_t line_no) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  if (!v.empty() && v.front() == '"') throw ParseError("unterminated string", line_no);
  return v;
}

double parse_number(const std::string& v, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw ParseError("trailing characters after number '" + v + "'", line_no);
    return x;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    throw ParseError("expected a number, got '" + v + "'", line_no);
  }
}

std::size_t parse_count(const std::string& v, std::size_t line_no) {
  const double x = parse_number(v, line_no);
  if (x < 0 || x != std::floor(x)) throw ParseError("expected a non-negative integer, got '" + v + "'", line_no);
  return static_cast<std::size_t>(x);
}

Seed parse_seed(const std::string& v, std::size_t line_no) {
  Seed out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ParseError("expected an unsigned integer seed, got '" + v + "'", line_no);
  }
  return out;
}

gen::ScenarioKind parse_kind(const std::string& v, std::size_t line_no) {
  if (v == "gaussian-pair") return gen::ScenarioKind::gaussian_pair;
  if (v == "discrete-instance") return gen::ScenarioKind::discrete_instance;
  if (v == "overestimation") return gen::ScenarioKind::overestimation;
  throw ParseError("unknown scenario kind '" + v + "'", line_no);
}

}  // namespace

FileConfig parse_config_text(const std::string& text) {
  FileConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("malformed section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "train") {
        throw ParseError("unknown section [" + section + "]", line_no);
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)), line_no);
    if (key.empty() || value.empty()) throw ParseError("empty key or value", line_no);

    if (section == "scenario") {
      if (key == "kind") {
        cfg.scenario.kind = parse_kind(value, line_no);
      } else if (key == "gamma") {
        cfg.scenario.gamma = parse_number(value, line_no);
      } else if (key == "rho") {
        cfg.scenario.rho = parse_number(value, line_no);
      } else if (key == "n") {
        cfg.scenario.n = parse_count(value, line_no);
      } else if (key == "m") {
        cfg.scenario.m = parse_count(value, line_no);
      } else if (key == "dims") {
        cfg.scenario.dims = parse_count(value, line_no);
      } else if (key == "arity") {
        cfg.scenario.arity = static_cast<int>(parse_count(value, line_no));
      } else if (key == "seed") {
        cfg.scenario.seed = parse_seed(value, line_no);
      } else {
        throw ParseError("unknown key '" + key + "' in [scenario]", line_no);
      }
    } else if (section == "train") {
      if (key == "learning_rate") {
        cfg.train.learning_rate = parse_number(value, line_no);
      } else if (key == "batch_size") {
        cfg.train.batch_size = parse_count(value, line_no);
      } else if (key == "max_steps") {
        cfg.train.max_steps = parse_count(value, line_no);
      } else if (key == "beta1") {
        cfg.train.beta1 = parse_number(value, line_no);
      } else if (key == "beta2") {
        cfg.train.beta2 = parse_number(value, line_no);
      } else if (key == "seed") {
        cfg.train.seed = parse_seed(value, line_no);
      } else {
        throw ParseError("unknown key '" + key + "' in [train]", line_no);
      }
    } else {
      throw ParseError("key '" + key + "' outside any section", line_no);
    }
  }
  cfg.scenario.validate();
  cfg.train.validate();
  return cfg;
}

FileConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_to_text(const FileConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "[scenario]\n";
  os << "kind = \"" << gen::to_string(cfg.scenario.kind) << "\"\n";
  os << "gamma = " << cfg.scenario.gamma << "\n";
  os << "rho = " << cfg.scenario.rho << "\n";
  os << "n = " << cfg.scenario.n << "\n";
  os << "m = " << cfg.scenario.m << "\n";
  os << "dims = " << cfg.scenario.dims << "\n";
  os << "arity = " << cfg.scenario.arity << "\n";
  os << "seed = " << cfg.scenario.seed << "\n";
  os << "\n[train]\n";
  os << "learning_rate = " << cfg.train.learning_rate << "\n";
  os << "batch_size = " << cfg.train.batch_size << "\n";
  os << "max_steps = " << cfg.train.max_steps << "\n";
  os << "beta1 = " << cfg.train.beta1 << "\n";
  os << "beta2 = " << cfg.train.beta2 << "\n";
  os << "seed = " << cfg.train.seed << "\n";
  return os.str();
}

}  // namespace g2r::cli
