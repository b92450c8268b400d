#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathlaw/stattests.hpp"

namespace pathlaw {

// One registry entry per identity-in-law; ids are the stable CLI names.
enum class ExperimentId {
  ALG_SUITE,
  THM_MAIN,
  THM_MAIN_PRIME,
  QREV,
  COR_MAIN,
  BOUGEROL,
  DUFRESNE,
  PROP_OPPDG,
  PROP_PINV_1,
  PROP_PINV_2,
  PROP_PINV_LIMIT,
  PROP_PDII,
  LEMMA_CSYM,
  BRIDGE_TBB,
  PROP_PSDI_I,
  PROP_PSDI_II,
  PROP_PINVR_1,
  PROP_PINVR_2,
  DRIFTED_TALPHA,
};

const char* to_string(ExperimentId id);
std::optional<ExperimentId> experiment_id_from_string(std::string_view name);

struct ExperimentSpec {
  ExperimentId id = ExperimentId::THM_MAIN;
  double t_horizon = 1.0;
  int n_steps = 512;
  long n_paths = 100000;
  double mu = 0.0;                // drift, where applicable
  double x = 0.0;                 // shift parameter, where applicable
  double alpha_or_x_weight = 0.0; // T_alpha / reweighting parameter
  double u_extension = 0.5;       // duration extension for composition laws
  double truncation_T = 30.0;     // horizon standing in for time infinity
  std::vector<double> marginal_times = {0.2, 0.4, 0.6, 0.8, 1.0};
  std::uint64_t seed = 11;
  double family_alpha = 0.05;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<TestReport> tests;
  bool overall_pass = false;
  double wall_time_s = 0.0;
};

struct ExperimentInfo {
  ExperimentId id;
  std::string description;
  std::vector<std::string> required_params;
};

// Stable registry listing, one entry per id, in enum order.
const std::vector<ExperimentInfo>& list_experiments();

// Registry defaults for one experiment (sizes, drifts, parameters).
ExperimentSpec default_spec(ExperimentId id);

// Simulates both sides of the experiment's identity on disjoint RNG
// substreams and reduces them to statistical tests. Deterministic for a
// fixed spec regardless of the worker count.
ExperimentReport run_experiment(const ExperimentSpec& spec, int workers = 1);

// Deliberately corrupted variants that a correct pipeline must reject;
// they guard the test battery against vacuous passes.
enum class NegativeControl {
  ThmMainHalvedShift,    // t_z with z = phi_t instead of 2 phi_t
  QrevPerturbedExponent, // e^{B_t}/A_t in place of e^{2 B_t}/A_t
  BougerolDroppedSinh,   // compares against B_t instead of sinh B_t
  Pinvr2DroppedWeight,   // weight forced to 1 on the event
};

ExperimentReport run_negative_control(NegativeControl control,
                                      const ExperimentSpec& spec,
                                      int workers = 1);

// Per-marginal hard floor: a marginal KS fails only below this p-value.
// It is the suite-level Bonferroni correction of the default family alpha
// over the whole registry's marginal battery (~50 tests at 0.05).
inline constexpr double kMarginalPFloor = 0.001;
// Joint energy tests pass at p >= 0.01 with 500 permutations.
inline constexpr double kEnergyPFloor = 0.01;
inline constexpr int kEnergyPermutations = 500;
// Mean-comparison tests pass within 3 combined standard errors.
inline constexpr double kMeanKSigma = 3.0;
// Deterministic transform identities hold to this residual.
inline constexpr double kLawResidualTolerance = 1e-9;

}  // namespace pathlaw
