#pragma once

#include "spinrecon/coherent_assistant.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace spinrecon::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kIllConditioned = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheme { spin, coherent };

struct RunConfig {
  Scheme scheme = Scheme::coherent;
  double gamma = 0.1;
  double omega = 0.1;
  double alpha_re = 2.0;
  double alpha_im = 0.0;
  std::optional<int> n_max;          // unset: 30, raised until the Poisson tail < 1e-8
  double t_start = 0.0;
  double t_end = 200.0;
  int t_steps = 2000;
  std::int64_t shots = 0;            // 0: exact, noiseless probabilities
  std::uint64_t seed = 1;
  double det_floor = kDefaultDeterminantFloor;
  std::string output_path = "-";

  std::vector<double> alpha_sq{1.0, 4.0, 9.0};  // fig1 / validate sweep, alpha real
  std::optional<double> t;           // reconstruct: measurement time (default: |Delta| peak)
  std::array<double, 3> rho0{0.3, -0.5, 0.2};   // reconstruct self-simulation
  std::optional<std::string> input;  // reconstruct: counts file (JSON lines)
  int validate_points = 200;

  // Throws UsageError on invalid combinations.
  void validate() const;
  nlohmann::json to_json() const;
  // Fields present in j override those of base.
  static RunConfig from_json(const nlohmann::json& j, RunConfig base);
  static RunConfig from_json(const nlohmann::json& j);

  Complex alpha() const { return {alpha_re, alpha_im}; }
};

// t_start + k (t_end - t_start) / t_steps for k = 1..t_steps.
std::vector<double> time_grid(double t_start, double t_end, int steps);

int cmd_fig1(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_spin_demo(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_reconstruct(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full command line: parses, merges --config, dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinrecon::cli
