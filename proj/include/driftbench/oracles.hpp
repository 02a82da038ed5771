#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "driftbench/core_math.hpp"
#include "driftbench/projections.hpp"

namespace driftbench {

struct CostModel {
  enum class Kind { UniformRandom, BestExpertSwitcher, SingleSpike, AdversarialRadial, FileReplay };

  Kind kind = Kind::UniformRandom;
  /// UniformRandom: entry range. BestExpertSwitcher: cheap / expensive entry.
  double low = 0.0;
  double high = 1.0;
  /// BestExpertSwitcher: rounds per expert. AdversarialRadial: rounds per sign flip.
  std::size_t period = 10;
  /// SingleSpike: 1-based round and entry value. AdversarialRadial: cost norm.
  std::size_t spike_round = 1;
  double magnitude = 1.0;
  std::string path;
  /// Clamp every entry at zero (required for 1LA).
  bool nonneg = true;
  std::uint64_t seed = 0;
};

std::string to_string(CostModel::Kind k);
CostModel::Kind cost_kind_from_string(const std::string& s);

/// T cost vectors of dimension n. Deterministic given the model.
std::vector<Vector> gen_costs(const CostModel& model, std::size_t T, std::size_t n);

/// Cost replay format: one round per line, whitespace-separated decimals, '#' starts a
/// comment, the first data line fixes the dimension. Errors name the offending line.
std::vector<Vector> parse_cost_stream(std::istream& in, const std::string& source = "<stream>");
std::vector<Vector> read_cost_file(const std::string& path);

/// Uniform double in [0, 1) from a 64-bit generator word; platform independent.
double unit_uniform(std::uint64_t word);

struct FixedOpt {
  Vector u;
  double value = 0.0;
};

/// argmin over u in the body of sum_t c_t.u. Exact for the simplex and every p-ball.
FixedOpt offline_fixed_opt(const std::vector<Vector>& costs, const Body& body);

struct ComparatorPath {
  std::vector<Vector> u;
  /// sum_t ||u_t - u_{t-1}||_1
  double drift_l1 = 0.0;
  /// Drift in the body's own convention: half the l1 drift on the simplex,
  /// the l_p drift on a p-ball.
  double drift_lp = 0.0;
};

ComparatorPath make_path(const Body& body, std::vector<Vector> u);

struct OracleResult {
  ComparatorPath path;
  /// Objective of path (an upper bound on OPT).
  double value = 0.0;
  /// Certified lower bound on OPT (equal to value for exact methods).
  double lower_bound = 0.0;
  bool converged = true;
  /// value - lower_bound
  double residual = 0.0;
  std::size_t iterations = 0;
  std::string method;
};

struct SolverOptions {
  double relative_tolerance = 1e-6;
  std::size_t max_iterations = 50000;
};

/// min sum_{t=1}^T c_t.u_{t-1} over feasible u_0..u_{T-1} whose drift (measured over
/// t = 1..T-1 as in ComparatorPath::drift_lp) is at most L.
OracleResult offline_drifting_opt(const std::vector<Vector>& costs, const Body& body, double L,
                                  const SolverOptions& opts = {});

/// min sum_{t=1}^T c_t.x_t + alpha * movement over x_0..x_T with x_0 free. On the simplex
/// movement is sum of positive increments (half the l1 distance); on a 2-ball it is the
/// l2 distance.
OracleResult offline_onela_opt(const std::vector<Vector>& costs, const Body& body,
                               const NormSpec& movement_norm, double alpha_unfair = 1.0,
                               const SolverOptions& opts = {});

enum class ComparatorKind { Constant, KSwitch, Geodesic };

std::string to_string(ComparatorKind k);
ComparatorKind comparator_kind_from_string(const std::string& s);

struct ComparatorSpec {
  ComparatorKind kind = ComparatorKind::Constant;
  /// KSwitch: number of vertex changes.
  std::size_t switches = 0;
};

/// Feasible path of length T with measured drift at most L.
/// Constant: the body's default point. KSwitch (simplex): vertex path with evenly spaced
/// changes, needs L >= switches. Geodesic (ball): back-and-forth along a diameter with
/// step L/(T-1), needs that step to be at most 2D.
ComparatorPath gen_comparator_path(const ComparatorSpec& spec, const Body& body, double L,
                                   std::size_t T, std::uint64_t seed);

}  // namespace driftbench
