#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nslab/beltrami.hpp"
#include "nslab/error.hpp"
#include "nslab/field.hpp"
#include "nslab/trajectory.hpp"

namespace nslab {

enum class Scenario { Theorem13, Corollary18, EstimateSuite, BeltramiExactness };

std::string_view to_string(Scenario s);
/// Throws InvalidArgument for unknown names.
Scenario scenario_from_string(std::string_view name);

struct ExperimentConfig {
  Scenario scenario = Scenario::Theorem13;
  int N = 16;
  std::uint64_t seed = 1;

  // data
  int lambda_sq = 1;
  double M0 = 1.0;
  double epsilon = 0.01;
  double eps_threshold = 0.05;  // the admissible epsilon(b, M0)
  double b = 0.5;
  double eps1 = 0.0;            // BMO^-1 size of u02 (corollary18)
  double C = 0.1;               // constant in the T1 horizon
  std::vector<ShellSpec> shells;  // corollary18; empty means {lambda_sq, 1}
  int data_box = 2;             // perturbation data lives in |n_i| <= data_box

  // solver
  double dt = 1e-3;
  int record_every = 50;
  double horizon_extra = 5.0;   // solve to T2 + horizon_extra, T2 = T1 + 1
  int picard_steps = 20;
  double picard_tol = 1e-8;
  bool eps_scaling = true;      // three extra runs at epsilon, epsilon/2, epsilon/4

  // estimate_suite
  int ensemble = 20;
  std::vector<int> grids{16, 32};
  double amplitude = 1.0;       // 0 gives the all-zero ensemble

  // beltrami_exactness
  std::vector<int> lambda_sq_list{1, 2, 3};
};

/// Throws BadConfig / BadExponent when a knob is out of range for the scenario.
void validate(const ExperimentConfig& cfg);

struct CheckRow {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;  // measured <= bound
};

struct EstimateStats {
  std::string name;
  std::vector<int> grids;
  std::vector<double> max;
  std::vector<double> mean;
  double drift = 0.0;  // |mean(last grid) - mean(first grid)| / mean(first grid)
  bool finite = true;
};

struct ExperimentReport {
  Scenario scenario = Scenario::Theorem13;
  std::vector<CheckRow> rows;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<EstimateStats> estimates;
  std::vector<std::pair<double, Diagnostics>> diagnostics;  // full-solution trajectory
  std::vector<std::pair<std::string, SpectralField>> snapshots;
  std::vector<std::string> manifest;  // filled in by the writer

  /// Appends a row; names must be unique.
  const CheckRow& check(const std::string& name, double measured, double bound);
  void note(const std::string& key, double value);
  const CheckRow* find(const std::string& name) const;
  double summary_value(const std::string& key) const;
  bool passed() const;
};

/// Raised when a hypothesis of the targeted result fails; carries the report
/// with the hypothesis rows evaluated so far.
class ConditionViolation : public Error {
 public:
  ConditionViolation(const std::string& what, ExperimentReport report);
  const ExperimentReport& report() const { return report_; }

 private:
  ExperimentReport report_;
};

ExperimentReport run_theorem13(const ExperimentConfig& cfg);
ExperimentReport run_corollary18(const ExperimentConfig& cfg);
ExperimentReport run_estimate_suite(const ExperimentConfig& cfg);
ExperimentReport run_beltrami_exactness(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace nslab
