#include "legwave/config.hpp"

#include <charconv>
#include <optional>
#include <type_traits>
#include <fstream>
#include <sstream>

#include "legwave/csv.hpp"

namespace legwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("'" + key + "': not a number: '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("'" + key + "': not an integer: '" + v + "'");
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
  return out;
}

// Reads known keys out of one section and rejects whatever is left over.
class Section {
 public:
  Section(const IniDocument& doc, const std::string& name) : name_(name) {
    if (auto it = doc.find(name); it != doc.end()) values_ = it->second;
  }
  ~Section() = default;

  void number(const char* key, double& out) {
    if (auto v = take(key)) out = to_double(qualified(key), *v);
  }
  void integer(const char* key, int& out) {
    if (auto v = take(key)) out = static_cast<int>(to_int(qualified(key), *v));
  }
  void text(const char* key, std::string& out) {
    if (auto v = take(key)) out = *v;
  }
  std::optional<std::string> take(const char* key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }
  void finish() const {
    if (!values_.empty())
      throw ConfigError("unknown key '" + qualified(values_.begin()->first.c_str()) + "'");
  }

 private:
  std::string qualified(const char* key) const { return name_.empty() ? key : name_ + "." + key; }
  std::string name_;
  std::map<std::string, std::string> values_;
};

const char* kSections[] = {"", "gait", "geometry", "controller", "sensor", "experiment"};

}  // namespace

IniDocument parse_ini(std::istream& is) {
  IniDocument doc;
  doc[""];
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    auto& sec = doc[section];
    if (sec.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    sec[key] = trim(line.substr(eq + 1));
  }
  return doc;
}

ExperimentSpec::ExperimentSpec() {
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
}

void ExperimentSpec::validate() const {
  try {
    gait.validate();
    geometry.validate();
    controller.validate();
    sensor.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (gait.a_v < 0.0 || gait.a_v >= 90.0) throw ConfigError("gait.a_v must lie in [0, 90)");
  if (r_g.empty() && terrain_files.empty()) throw ConfigError("experiment needs r_g values or terrain files");
  for (double r : r_g)
    if (!(r >= 0.0)) throw ConfigError("r_g values must be non-negative");
  if (av_grid.empty()) throw ConfigError("experiment.a_v grid is empty");
  for (double a : av_grid)
    if (!(a >= 0.0 && a < 90.0)) throw ConfigError("a_v grid values must lie in [0, 90)");
  if (seeds.empty()) throw ConfigError("experiment.seeds is empty");
  if (cycles < 1 || compare_cycles < 1) throw ConfigError("cycles must be >= 1");
  if (steps < 4 || steps % 2 != 0) throw ConfigError("steps must be even and >= 4");
  if (cols < 1) throw ConfigError("cols must be >= 1");
  if (!(block_size > 0.0)) throw ConfigError("block_size must be positive");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
  if (m < 4) throw ConfigError("m must be >= 4");
  if (slip_bins < 8) throw ConfigError("slip_bins must be >= 8");
  if (!(min_advance_ratio >= 0.0)) throw ConfigError("min_advance_ratio must be non-negative");
  if (update_every_sweep.empty()) throw ConfigError("update_every_sweep is empty");
  for (int u : update_every_sweep)
    if (u < 1) throw ConfigError("update_every_sweep values must be >= 1");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(text)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      const long long v = to_int("seeds", item);
      if (v < 0) throw ConfigError("seeds must be non-negative");
      out.push_back(static_cast<std::uint64_t>(v));
      continue;
    }
    const long long a = to_int("seeds", trim(item.substr(0, dash)));
    const long long b = to_int("seeds", trim(item.substr(dash + 1)));
    if (a < 0 || b < a) throw ConfigError("bad seed range '" + item + "'");
    if (b - a > 1000000) throw ConfigError("seed range too large");
    for (long long s = a; s <= b; ++s) out.push_back(static_cast<std::uint64_t>(s));
  }
  if (out.empty()) throw ConfigError("empty seed list");
  return out;
}

ExperimentSpec spec_from_ini(const IniDocument& doc) {
  for (const auto& [name, _] : doc) {
    bool known = false;
    for (const char* s : kSections) known = known || name == s;
    if (!known) throw ConfigError("unknown section [" + name + "]");
  }
  ExperimentSpec spec;

  Section top(doc, "");
  const auto version = top.take("schema_version");
  if (!version) throw ConfigError("missing schema_version");
  if (to_int("schema_version", *version) != kSchemaVersion)
    throw ConfigError("unsupported schema_version " + *version + " (expected " +
                      std::to_string(kSchemaVersion) + ")");
  top.text("name", spec.name);
  top.finish();

  Section gait(doc, "gait");
  gait.integer("n_pairs", spec.gait.n_pairs);
  gait.number("xi", spec.gait.xi);
  gait.number("duty", spec.gait.duty);
  gait.number("theta_leg_amp", spec.gait.theta_leg_amp);
  gait.number("theta_body_amp", spec.gait.theta_body_amp);
  gait.number("a_v", spec.gait.a_v);
  if (auto v = gait.take("phase_offset")) {
    if (*v == "optimal") {
      spec.gait.phase_offset_mode = PhaseOffsetMode::optimal;
    } else {
      spec.gait.phase_offset_mode = PhaseOffsetMode::explicit_value;
      spec.gait.phase_offset = to_double("gait.phase_offset", *v);
    }
  }
  gait.finish();

  Section geom(doc, "geometry");
  geom.number("h_l", spec.geometry.h_l);
  geom.number("h_l2", spec.geometry.h_l2);
  geom.number("d_l", spec.geometry.d_l);
  geom.number("module_length", spec.geometry.module_length);
  geom.number("leg_length", spec.geometry.leg_length);
  geom.number("lift_slack", spec.geometry.lift_slack);
  geom.number("mu", spec.geometry.mu);
  geom.number("f_w", spec.geometry.f_w);
  geom.number("v_open", spec.geometry.v_open);
  geom.number("c_fv", spec.geometry.c_fv);
  geom.finish();

  Section ctl(doc, "controller");
  ctl.number("k_p", spec.controller.k_p);
  ctl.number("gamma_set", spec.controller.gamma_set);
  ctl.number("av_min", spec.controller.av_min);
  ctl.number("av_max", spec.controller.av_max);
  ctl.integer("update_every", spec.controller.update_every);
  ctl.number("open_loop_av", spec.controller.open_loop_av);
  if (auto v = ctl.take("mode")) {
    try {
      spec.controller.mode = control_mode_from_string(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  ctl.finish();

  Section sensor(doc, "sensor");
  sensor.number("flip_prob", spec.sensor.flip_prob);
  sensor.integer("latch_steps", spec.sensor.latch_steps);
  sensor.finish();

  Section exp(doc, "experiment");
  if (auto v = exp.take("r_g")) spec.r_g = to_doubles("experiment.r_g", *v);
  if (auto v = exp.take("terrain_files")) spec.terrain_files = split_list(*v);
  if (auto v = exp.take("a_v")) spec.av_grid = to_doubles("experiment.a_v", *v);
  if (auto v = exp.take("seeds")) spec.seeds = parse_seed_list(*v);
  exp.integer("cycles", spec.cycles);
  exp.integer("steps", spec.steps);
  exp.integer("cols", spec.cols);
  exp.number("block_size", spec.block_size);
  exp.number("tolerance", spec.tolerance);
  exp.integer("m", spec.m);
  exp.integer("slip_bins", spec.slip_bins);
  exp.number("force_velocity_coeff", spec.force_velocity_coeff);
  exp.number("min_advance_ratio", spec.min_advance_ratio);
  if (auto v = exp.take("reseed_terrain")) {
    if (*v != "true" && *v != "false") throw ConfigError("'experiment.reseed_terrain': expected true or false");
    spec.reseed_terrain = *v == "true";
  }
  exp.number("compare_r_g", spec.compare_r_g);
  exp.integer("compare_cycles", spec.compare_cycles);
  if (auto v = exp.take("update_every_sweep")) {
    spec.update_every_sweep.clear();
    for (const auto& s : split_list(*v))
      spec.update_every_sweep.push_back(static_cast<int>(to_int("experiment.update_every_sweep", s)));
  }
  exp.finish();

  spec.validate();
  return spec;
}

ExperimentSpec read_spec(std::istream& is) { return spec_from_ini(parse_ini(is)); }

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return read_spec(in);
}

namespace {

std::string num(double v) {
  // shortest text that parses back to the same double
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>) out += num(xs[i]);
    else if constexpr (std::is_same_v<T, std::string>) out += xs[i];
    else out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

std::string spec_to_string(const ExperimentSpec& s) {
  std::ostringstream os;
  os << "schema_version = " << kSchemaVersion << "\nname = " << s.name << "\n\n[gait]\n"
     << "n_pairs = " << s.gait.n_pairs << "\nxi = " << num(s.gait.xi) << "\nduty = " << num(s.gait.duty)
     << "\ntheta_leg_amp = " << num(s.gait.theta_leg_amp)
     << "\ntheta_body_amp = " << num(s.gait.theta_body_amp) << "\na_v = " << num(s.gait.a_v)
     << "\nphase_offset = "
     << (s.gait.phase_offset_mode == PhaseOffsetMode::optimal ? std::string("optimal")
                                                               : num(s.gait.phase_offset))
     << "\n\n[geometry]\n"
     << "h_l = " << num(s.geometry.h_l) << "\nh_l2 = " << num(s.geometry.h_l2)
     << "\nd_l = " << num(s.geometry.d_l) << "\nmodule_length = " << num(s.geometry.module_length)
     << "\nleg_length = " << num(s.geometry.leg_length) << "\nlift_slack = " << num(s.geometry.lift_slack)
     << "\nmu = " << num(s.geometry.mu) << "\nf_w = " << num(s.geometry.f_w)
     << "\nv_open = " << num(s.geometry.v_open) << "\nc_fv = " << num(s.geometry.c_fv)
     << "\n\n[controller]\n"
     << "k_p = " << num(s.controller.k_p) << "\ngamma_set = " << num(s.controller.gamma_set)
     << "\nav_min = " << num(s.controller.av_min) << "\nav_max = " << num(s.controller.av_max)
     << "\nupdate_every = " << s.controller.update_every << "\nmode = " << to_string(s.controller.mode)
     << "\nopen_loop_av = " << num(s.controller.open_loop_av) << "\n\n[sensor]\n"
     << "flip_prob = " << num(s.sensor.flip_prob) << "\nlatch_steps = " << s.sensor.latch_steps
     << "\n\n[experiment]\n";
  if (!s.r_g.empty()) os << "r_g = " << join(s.r_g) << '\n';
  if (!s.terrain_files.empty()) os << "terrain_files = " << join(s.terrain_files) << '\n';
  os << "a_v = " << join(s.av_grid) << "\nseeds = " << join(s.seeds) << "\ncycles = " << s.cycles
     << "\nsteps = " << s.steps << "\ncols = " << s.cols << "\nblock_size = " << num(s.block_size)
     << "\ntolerance = " << num(s.tolerance) << "\nm = " << s.m << "\nslip_bins = " << s.slip_bins
     << "\nforce_velocity_coeff = " << num(s.force_velocity_coeff)
     << "\nmin_advance_ratio = " << num(s.min_advance_ratio)
     << "\nreseed_terrain = " << (s.reseed_terrain ? "true" : "false") << "\ncompare_r_g = " << num(s.compare_r_g)
     << "\ncompare_cycles = " << s.compare_cycles
     << "\nupdate_every_sweep = " << join(s.update_every_sweep) << '\n';
  return os.str();
}

std::uint64_t spec_hash(const ExperimentSpec& spec) { return fnv1a(spec_to_string(spec)); }

WalkSetup walk_setup(const ExperimentSpec& spec, int cycles) {
  WalkSetup w;
  w.cfg = spec.gait;
  w.geom = spec.geometry;
  w.cycles = cycles;
  w.steps = spec.steps;
  w.sensor = spec.sensor;
  w.options.force_velocity_coeff = spec.force_velocity_coeff;
  w.options.min_advance_ratio = spec.min_advance_ratio;
  w.cols = spec.cols;
  w.block_size = spec.block_size;
  w.reseed_terrain = spec.reseed_terrain;
  return w;
}

}  // namespace legwave
