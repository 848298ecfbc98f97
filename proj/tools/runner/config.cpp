#include "runner/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fdlab/errors.hpp"

namespace fdlab::runner {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("field '" + field + "': " + why);
}

double to_double(const std::string& key, const std::string& text, int line) {
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    fail(key, "expected a number, got '" + text + "' (line " + std::to_string(line) + ")");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(key, "expected an integer, got '" + text + "' (line " + std::to_string(line) + ")");
  }
  return v;
}

}  // namespace

const char* to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::cauchy_decay: return "cauchy_decay";
    case Scenario::profile_gap: return "profile_gap";
    case Scenario::triviality: return "triviality";
    case Scenario::bounded_decay: return "bounded_decay";
    case Scenario::blowup_probe: return "blowup_probe";
    case Scenario::analyticity: return "analyticity";
    case Scenario::crosscheck: return "crosscheck";
  }
  return "unknown";
}

const char* to_string(NormKind k) noexcept {
  switch (k) {
    case NormKind::inhomogeneous: return "inhomogeneous";
    case NormKind::homogeneous: return "homogeneous";
    case NormKind::homogeneous_seminorm: return "seminorm";
  }
  return "unknown";
}

KeyValueFile KeyValueFile::parse(const std::string& source, const std::string& origin) {
  KeyValueFile f;
  f.origin_ = origin;
  std::istringstream in(source);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line);
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string name = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (name.empty()) throw ConfigError(where + ": missing key");
    const std::string key = section.empty() ? name : section + "." + name;
    if (f.entries_.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    Entry e;
    e.line = line;
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') fail(key, "unterminated array (line " + std::to_string(line) + ")");
      e.is_array = true;
      std::stringstream items(value.substr(1, value.size() - 2));
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (!item.empty()) e.items.push_back(unquote(item));
      }
    } else {
      if (value.empty()) fail(key, "missing value (line " + std::to_string(line) + ")");
      e.text = unquote(value);
    }
    f.entries_.emplace(key, std::move(e));
  }
  return f;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

const KeyValueFile::Entry* KeyValueFile::find(const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->is_array) fail(key, "expected a scalar, got an array");
  return e->text;
}

double KeyValueFile::get_double(const std::string& key, double fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->is_array) fail(key, "expected a number, got an array");
  return to_double(key, e->text, e->line);
}

int KeyValueFile::get_int(const std::string& key, int fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->is_array) fail(key, "expected an integer, got an array");
  return to_int(key, e->text, e->line);
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->text == "true") return true;
  if (e->text == "false") return false;
  fail(key, "expected true or false, got '" + e->text + "'");
}

std::vector<double> KeyValueFile::get_doubles(const std::string& key,
                                              const std::vector<double>& fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (!e->is_array) fail(key, "expected an array like [1, 2]");
  std::vector<double> out;
  for (const auto& item : e->items) out.push_back(to_double(key, item, e->line));
  return out;
}

std::vector<int> KeyValueFile::get_ints(const std::string& key, const std::vector<int>& fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (!e->is_array) fail(key, "expected an array like [1, 2]");
  std::vector<int> out;
  for (const auto& item : e->items) out.push_back(to_int(key, item, e->line));
  return out;
}

void KeyValueFile::reject_unused() const {
  for (const auto& [key, e] : entries_) {
    if (!used_.count(key)) {
      throw ConfigError("field '" + key + "': unknown key (" + origin_ + ":" +
                        std::to_string(e.line) + ")");
    }
  }
}

namespace {

Scenario parse_scenario(const std::string& name) {
  for (Scenario s : {Scenario::cauchy_decay, Scenario::profile_gap, Scenario::triviality,
                     Scenario::bounded_decay, Scenario::blowup_probe, Scenario::analyticity,
                     Scenario::crosscheck}) {
    if (name == to_string(s)) return s;
  }
  fail("scenario", "unknown scenario '" + name + "'");
}

NormKind parse_norm_kind(const std::string& name) {
  if (name == "inhomogeneous") return NormKind::inhomogeneous;
  if (name == "homogeneous") return NormKind::homogeneous;
  if (name == "seminorm") return NormKind::homogeneous_seminorm;
  fail("norm.kind", "expected inhomogeneous, homogeneous or seminorm, got '" + name + "'");
}

bool interval_scenario(Scenario s) {
  return s == Scenario::bounded_decay || s == Scenario::blowup_probe;
}

void require_sorted_positive(const std::string& field, const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) fail(field, "entries must be positive");
    if (i > 0 && !(v[i] > v[i - 1])) fail(field, "entries must be strictly increasing");
  }
}

std::vector<double> read_times(KeyValueFile& f, const std::vector<double>& fallback,
                               const char* prefix) {
  const std::string p(prefix);
  if (f.has(p + ".list")) {
    if (f.has(p + ".t_min") || f.has(p + ".t_max") || f.has(p + ".count")) {
      fail(p + ".list", "give either a list or t_min/t_max/count, not both");
    }
    return f.get_doubles(p + ".list", {});
  }
  if (!f.has(p + ".t_min") && !f.has(p + ".t_max") && !f.has(p + ".count")) return fallback;
  const double lo = f.get_double(p + ".t_min", 1e2);
  const double hi = f.get_double(p + ".t_max", 1e4);
  const int count = f.get_int(p + ".count", 12);
  if (count == 0) return {};
  if (count < 2) fail(p + ".count", "need at least 2 points");
  if (!(lo > 0.0) || !(hi > lo)) fail(p + ".t_min", "need 0 < t_min < t_max");
  return log_times(lo, hi, count);
}

}  // namespace

ExperimentConfig parse_config(KeyValueFile f) {
  ExperimentConfig c;
  if (!f.has("scenario")) fail("scenario", "missing");
  c.scenario = parse_scenario(f.get_string("scenario", ""));
  const bool interval = interval_scenario(c.scenario);

  c.orders.alpha = f.get_double("orders.alpha", c.orders.alpha);
  c.orders.beta = f.get_double("orders.beta", c.orders.beta);
  try {
    c.orders.validate();
  } catch (const std::invalid_argument& e) {
    fail("orders", e.what());
  }
  const double alpha = c.orders.alpha;
  const double beta = c.orders.beta;

  c.dim = f.get_int("grid.dim", c.dim);
  c.n = f.get_int("grid.n", c.n);
  c.half_width = f.get_double("grid.half_width", c.half_width);
  if (c.dim < 1 || c.dim > 3) fail("grid.dim", "must be 1, 2 or 3");
  if (c.n < 4 || c.n % 2 != 0) fail("grid.n", "must be even and at least 4");
  if (!(c.half_width > 0.0)) fail("grid.half_width", "must be positive");

  c.length = f.get_double("interval.length", c.length);
  c.N = f.get_int("interval.N", c.N);
  c.quad_panels = f.get_int("interval.quad_panels", c.quad_panels);
  if (!(c.length > 0.0)) fail("interval.length", "must be positive");
  if (c.N < 4) fail("interval.N", "must be at least 4");
  if (c.quad_panels < 0) fail("interval.quad_panels", "must be non-negative");

  c.potential.kind = f.get_string("potential.kind", c.potential.kind);
  c.potential.c = f.get_double("potential.c", c.potential.c);
  c.potential.c0 = f.get_double("potential.c0", c.potential.c0);
  c.potential.c1 = f.get_double("potential.c1", c.potential.c1);
  {
    const auto& k = c.potential.kind;
    const bool ok = k == "zero" || k == "constant" || (interval ? k == "sine_profile" : k == "cosine");
    if (!ok) {
      fail("potential.kind", std::string("expected zero, constant or ") +
                                 (interval ? "sine_profile" : "cosine") + ", got '" + k + "'");
    }
    if (k == "constant" && c.potential.c > 0.0) fail("potential.c", "must be <= 0");
    if ((k == "cosine" || k == "sine_profile") &&
        c.potential.c0 + std::fabs(c.potential.c1) > 0.0) {
      fail("potential.c0", "profile must stay <= 0, need c0 + |c1| <= 0");
    }
  }

  c.datum.kind = f.get_string("datum.kind", interval ? "coefficient_law" : "gaussian");
  c.datum.sigma = f.get_double("datum.sigma", c.datum.sigma);
  c.datum.amplitude = f.get_double("datum.amplitude", c.datum.amplitude);
  c.datum.exponent = f.get_double("datum.exponent", interval ? 2.0 : 0.5);
  c.datum.k = f.get_ints("datum.k", {});
  c.datum.amplitudes = f.get_doubles("datum.amplitudes", {});
  {
    const auto& k = c.datum.kind;
    const bool ok = interval ? k == "coefficient_law"
                             : (k == "gaussian" || k == "modes" || k == "power_law" || k == "zero");
    if (!ok) fail("datum.kind", "unsupported datum '" + k + "' for this scenario");
    if (k == "gaussian" && !(c.datum.sigma > 0.0)) fail("datum.sigma", "must be positive");
    if (k == "modes") {
      if (c.datum.k.empty()) fail("datum.k", "mode list is empty");
      if (c.datum.k.size() != c.datum.amplitudes.size()) {
        fail("datum.amplitudes", "needs one amplitude per entry of datum.k");
      }
    }
  }

  std::vector<double> default_times;
  switch (c.scenario) {
    case Scenario::cauchy_decay:
    case Scenario::profile_gap:
    case Scenario::triviality:
    case Scenario::bounded_decay:
      default_times = log_times(1e2, 1e4, 12);
      break;
    case Scenario::crosscheck:
      default_times = {0.5, 1.0, 5.0};
      break;
    default:
      break;
  }
  c.times = read_times(f, default_times, "times");
  const bool needs_times = c.scenario != Scenario::blowup_probe && c.scenario != Scenario::analyticity;
  if (needs_times && c.times.empty()) fail("times", "time grid is empty");
  require_sorted_positive("times", c.times);

  c.window.t_min = f.get_double("fit.t_min", c.window.t_min);
  c.window.t_max = f.get_double("fit.t_max", c.window.t_max);
  if (!(c.window.t_min > 0.0) || !(c.window.t_max > c.window.t_min)) {
    fail("fit.t_min", "need 0 < t_min < t_max");
  }

  c.norm_gamma = f.get_double("norm.gamma", 0.5 * beta);
  const std::string default_kind =
      (c.scenario == Scenario::profile_gap || c.scenario == Scenario::triviality) ? "inhomogeneous"
                                                                                   : "seminorm";
  c.norm_kind = parse_norm_kind(f.get_string("norm.kind", default_kind));
  if (!(c.norm_gamma >= 0.0)) fail("norm.gamma", "must be non-negative");
  c.orders.gamma = c.norm_gamma;

  c.gammas = f.get_doubles("bounded.gammas", {0.0, 0.5 * beta, beta});
  if (c.scenario == Scenario::bounded_decay) {
    if (c.gammas.empty()) fail("bounded.gammas", "list is empty");
    for (double g : c.gammas) {
      if (g < 0.0 || g > beta) fail("bounded.gammas", "entries must lie in [0, beta]");
    }
  }

  c.N_list = f.get_ints("blowup.N_list", {64, 128, 256, 512, 1024, 2048});
  c.delta = f.get_double("blowup.delta", c.delta);
  c.probe_time = f.get_double("blowup.t", c.probe_time);
  if (c.scenario == Scenario::blowup_probe) {
    if (c.N_list.size() < 2) fail("blowup.N_list", "need at least two basis sizes");
    if (!std::is_sorted(c.N_list.begin(), c.N_list.end()) || c.N_list.front() < 4) {
      fail("blowup.N_list", "must be increasing and start at 4 or more");
    }
    if (!(c.delta > 0.0)) fail("blowup.delta", "must be positive");
    if (!(c.probe_time > 0.0)) fail("blowup.t", "must be positive");
    c.datum.exponent = 0.5 + 0.25 * c.delta;
  }

  c.rays = f.get_doubles("analyticity.rays", {0.0, 0.9});
  {
    std::vector<double> radii;
    for (int i = 0; i <= 4; ++i) radii.push_back(1e-7 * std::pow(100.0, i / 4.0));
    c.radii = read_times(f, radii, "analyticity.radii");
  }
  if (c.scenario == Scenario::analyticity) {
    if (c.rays.empty()) fail("analyticity.rays", "list is empty");
    for (double r : c.rays) {
      if (!(std::fabs(r) < 1.0)) fail("analyticity.rays", "fractions of theta0 must lie in (-1, 1)");
    }
    if (c.radii.size() < 2) fail("analyticity.radii", "need at least two radii");
    require_sorted_positive("analyticity.radii", c.radii);
  }

  c.margin = f.get_double("triviality.margin", c.margin);
  if (!(c.margin > 0.0)) fail("triviality.margin", "must be positive");

  c.contour.theta0 = f.get_double("contour.theta0", default_theta0(alpha));
  c.contour.eps = f.get_double("contour.eps", c.contour.eps);
  c.contour.R = f.get_double("contour.R", c.contour.R);
  c.contour.n_ray = f.get_int("contour.n_ray", c.contour.n_ray);
  c.contour.n_arc = f.get_int("contour.n_arc", c.contour.n_arc);

  c.resolvent.tol = f.get_double("resolvent.tol", c.resolvent.tol);
  c.resolvent.max_iter = f.get_int("resolvent.max_iter", c.resolvent.max_iter);
  c.resolvent.restart = f.get_int("resolvent.restart", c.resolvent.restart);
  if (!(c.resolvent.tol > 0.0)) fail("resolvent.tol", "must be positive");

  c.picard_tol = f.get_double("picard.tol", c.picard_tol);
  c.picard.max_iterates = f.get_int("picard.max_iterates", 400);
  c.picard.elements = f.get_int("picard.elements", c.picard.elements);
  c.picard.base_degree = f.get_int("picard.base_degree", c.picard.base_degree);
  c.picard.base_gauss = f.get_int("picard.base_gauss", c.picard.base_gauss);
  c.picard.max_level = f.get_int("picard.max_level", c.picard.max_level);
  if (!(c.picard_tol > 0.0)) fail("picard.tol", "must be positive");

  c.checks.slope_tol = f.get_double("assert.slope_tol", c.scenario == Scenario::profile_gap ? 0.1 : 0.05);
  c.checks.limit_rel_tol = f.get_double("assert.limit_rel_tol", c.checks.limit_rel_tol);
  c.checks.min_growth = f.get_double("assert.min_growth", c.checks.min_growth);
  c.checks.ratio_rel_tol = f.get_double("assert.ratio_rel_tol", c.checks.ratio_rel_tol);
  c.checks.crosscheck_rel_tol = f.get_double("assert.crosscheck_rel_tol", c.checks.crosscheck_rel_tol);

  c.out_dir = f.get_string("output.dir", c.out_dir.string());
  c.eigen_csv = f.get_bool("output.eigen_csv", c.eigen_csv);

  f.reject_unused();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(KeyValueFile::load(path));
}

void apply_resolution_scale(ExperimentConfig& config, int k) {
  if (k < 1) throw ConfigError("field 'resolution-scale': must be a positive integer");
  config.resolution_scale *= k;
  config.n *= k;
  config.N *= k;
}

}  // namespace fdlab::runner
