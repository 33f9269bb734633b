#include "mmwave/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mmwave::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("scenario: bad numeric value '" + v + "' for " + key);
  }
  if (pos != v.size())
    throw std::runtime_error("scenario: trailing junk in value '" + v + "' for " + key);
  return out;
}

long parse_int(const std::string& v, const std::string& key) {
  const double d = parse_double(v, key);
  if (d != std::floor(d))
    throw std::runtime_error("scenario: expected integer for " + key);
  return static_cast<long>(d);
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, key));
  }
  return out;
}

std::string format_double(double v) {
  // Shortest representation that round-trips exactly.
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

const char* kSweepParameters[] = {"lambda_s", "lambda_b", "alpha_n", "delta_db",
                                  "n_t"};

}  // namespace

Eigen::ArrayXd ThresholdGrid::grid() const {
  if (!(step_db > 0.0) || stop_db < start_db)
    throw std::invalid_argument("thresholds: need step_db > 0 and stop >= start");
  const int n = static_cast<int>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
  Eigen::ArrayXd g(n);
  for (int i = 0; i < n; ++i) g[i] = start_db + i * step_db;
  return g;
}

void Scenario::validate() const {
  network.validate();
  if (antenna_n_t < 1)
    throw std::invalid_argument("scenario: antenna.n_t must be >= 1");
  (void)thresholds.grid();  // throws when empty/inverted
  if (mc.n_layouts < 1 || mc.n_fading < 1)
    throw std::invalid_argument("scenario: mc sizes must be >= 1");
  if (!sweep.empty()) {
    const auto* begin = std::begin(kSweepParameters);
    const auto* end = std::end(kSweepParameters);
    if (std::find(begin, end, sweep.parameter) == end)
      throw std::invalid_argument("scenario: unknown sweep parameter '" +
                                  sweep.parameter + "'");
    if (sweep.values.empty())
      throw std::invalid_argument("scenario: sweep.values is empty");
  }
}

void apply_scenario_key(Scenario& s, const std::string& key,
                        const std::string& value) {
  if (key == "network.lambda_s") {
    s.network.lambda_s_h = s.network.lambda_s_v = parse_double(value, key);
  } else if (key == "network.lambda_s_h") {
    s.network.lambda_s_h = parse_double(value, key);
  } else if (key == "network.lambda_s_v") {
    s.network.lambda_s_v = parse_double(value, key);
  } else if (key == "network.lambda_b") {
    s.network.lambda_b = parse_double(value, key);
  } else if (key == "network.alpha_l") {
    s.network.alpha_los = parse_double(value, key);
  } else if (key == "network.alpha_n") {
    s.network.alpha_nlos = parse_double(value, key);
  } else if (key == "network.delta_db") {
    s.network.corner_loss_db = parse_double(value, key);
  } else if (key == "network.n0") {
    s.network.noise_power = parse_double(value, key);
  } else if (key == "network.tx_power") {
    s.network.tx_power = parse_double(value, key);
  } else if (key == "network.window_half") {
    s.network.window_half = parse_double(value, key);
  } else if (key == "antenna.n_t") {
    s.antenna_n_t = static_cast<int>(parse_int(value, key));
    s.network.num_tx_antennas = s.antenna_n_t;
  } else if (key == "thresholds.start_db") {
    s.thresholds.start_db = parse_double(value, key);
  } else if (key == "thresholds.stop_db") {
    s.thresholds.stop_db = parse_double(value, key);
  } else if (key == "thresholds.step_db") {
    s.thresholds.step_db = parse_double(value, key);
  } else if (key == "mc.n_layouts") {
    s.mc.n_layouts = static_cast<int>(parse_int(value, key));
  } else if (key == "mc.n_fading") {
    s.mc.n_fading = static_cast<int>(parse_int(value, key));
  } else if (key == "mc.seed") {
    s.mc.seed = static_cast<std::uint64_t>(parse_int(value, key));
  } else if (key == "sweep.parameter") {
    s.sweep.parameter = value;
  } else if (key == "sweep.values") {
    s.sweep.values = parse_list(value, key);
  } else if (key == "outputs.dir") {
    s.output_dir = value;
  } else {
    throw std::runtime_error("scenario: unknown key '" + key + "'");
  }
}

Scenario parse_scenario_text(const std::string& text,
                             const std::string& origin) {
  Scenario s;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "scenario: " << origin << ":" << line_no << ": expected key = value";
      throw std::runtime_error(os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_scenario_key(s, key, value);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << origin << ":" << line_no << ": " << e.what();
      throw std::runtime_error(os.str());
    }
  }
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  os << "network.lambda_s_h = " << format_double(s.network.lambda_s_h) << "\n";
  os << "network.lambda_s_v = " << format_double(s.network.lambda_s_v) << "\n";
  os << "network.lambda_b = " << format_double(s.network.lambda_b) << "\n";
  os << "network.alpha_l = " << format_double(s.network.alpha_los) << "\n";
  os << "network.alpha_n = " << format_double(s.network.alpha_nlos) << "\n";
  os << "network.delta_db = " << format_double(s.network.corner_loss_db) << "\n";
  os << "network.n0 = " << format_double(s.network.noise_power) << "\n";
  os << "network.tx_power = " << format_double(s.network.tx_power) << "\n";
  os << "network.window_half = " << format_double(s.network.window_half) << "\n";
  os << "antenna.n_t = " << s.antenna_n_t << "\n";
  os << "thresholds.start_db = " << format_double(s.thresholds.start_db) << "\n";
  os << "thresholds.stop_db = " << format_double(s.thresholds.stop_db) << "\n";
  os << "thresholds.step_db = " << format_double(s.thresholds.step_db) << "\n";
  os << "mc.n_layouts = " << s.mc.n_layouts << "\n";
  os << "mc.n_fading = " << s.mc.n_fading << "\n";
  os << "mc.seed = " << s.mc.seed << "\n";
  if (!s.sweep.empty()) {
    os << "sweep.parameter = " << s.sweep.parameter << "\n";
    os << "sweep.values = ";
    for (size_t i = 0; i < s.sweep.values.size(); ++i) {
      if (i) os << ",";
      os << format_double(s.sweep.values[i]);
    }
    os << "\n";
  }
  os << "outputs.dir = " << s.output_dir << "\n";
  return os.str();
}

bool scenario_equal(const Scenario& a, const Scenario& b) {
  return serialize_scenario(a) == serialize_scenario(b);
}

}  // namespace mmwave::cli
