#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fdlab/asymptotics.hpp"
#include "fdlab/cauchy.hpp"

namespace fdlab::runner {

enum class Scenario {
  cauchy_decay,
  profile_gap,
  triviality,
  bounded_decay,
  blowup_probe,
  analyticity,
  crosscheck
};

const char* to_string(Scenario s) noexcept;
const char* to_string(NormKind k) noexcept;

/// Raw key/value table. Keys are "section.name"; values keep their source text.
class KeyValueFile {
 public:
  struct Entry {
    std::string text;                // scalar text, quotes removed
    std::vector<std::string> items;  // array items when is_array
    bool is_array = false;
    int line = 0;
  };

  static KeyValueFile parse(const std::string& source, const std::string& origin = "<string>");
  static KeyValueFile load(const std::filesystem::path& path);

  [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback);
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback);

  /// Throws ConfigError naming the first key no getter asked for.
  void reject_unused() const;

 private:
  const Entry* find(const std::string& key);
  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
  std::string origin_;
};

struct PotentialSpec {
  std::string kind = "zero";  // zero | constant | cosine (grid) | sine_profile (interval)
  double c = 0.0;             // constant value
  double c0 = -1.0;           // profile offset
  double c1 = -0.5;           // profile amplitude
};

struct DatumSpec {
  std::string kind = "gaussian";  // gaussian | modes | power_law | zero | coefficient_law
  double sigma = 1.0;
  double amplitude = 1.0;
  double exponent = 0.5;       // power_law: |k|^-exponent; coefficient_law: n^-exponent
  std::vector<int> k;          // modes
  std::vector<double> amplitudes;
};

struct Assertions {
  double slope_tol = 0.05;
  double limit_rel_tol = 0.05;
  double min_growth = 1.05;
  double ratio_rel_tol = 0.05;
  double crosscheck_rel_tol = 1e-6;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::cauchy_decay;
  FractionalOrders orders;
  int dim = 1;
  int n = 512;
  double half_width = 20.0;
  double length = 3.141592653589793;
  int N = 512;
  int quad_panels = 0;
  PotentialSpec potential;
  DatumSpec datum;
  std::vector<double> times;
  FitWindow window;
  double norm_gamma = 0.0;
  NormKind norm_kind = NormKind::homogeneous_seminorm;
  std::vector<double> gammas;      // bounded_decay
  std::vector<int> N_list;         // blowup_probe
  double delta = 0.2;              // blowup_probe
  double probe_time = 1e3;         // blowup_probe
  std::vector<double> rays;        // analyticity, fractions of theta0
  std::vector<double> radii;       // analyticity
  double margin = 10.0;            // triviality
  SectorContour contour;
  ResolventOptions resolvent;
  PicardOptions picard;
  double picard_tol = 1e-10;
  Assertions checks;
  std::filesystem::path out_dir = "fdlab_out";
  bool eigen_csv = false;
  int resolution_scale = 1;
};

/// Builds and validates a configuration. Scenario-dependent defaults are
/// filled in here so that the echoed configuration is complete.
ExperimentConfig parse_config(KeyValueFile file);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Multiplies every lattice and basis size by k.
void apply_resolution_scale(ExperimentConfig& config, int k);

}  // namespace fdlab::runner
