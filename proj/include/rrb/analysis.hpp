#pragma once

#include <vector>

#include "rrb/channels.hpp"
#include "rrb/core.hpp"
#include "rrb/random.hpp"
#include "rrb/rb.hpp"

namespace rrb {

struct DecayPoint {
  double m = 0.0;
  double value = 0.0;
  double weight = 1.0;
};

/// F(m) = A + B p^m.
struct DecayFit {
  double A = 0.0;
  double B = 0.0;
  double p = 0.0;
  double rss = 0.0;  ///< weighted residual sum of squares
  double se_A = 0.0;
  double se_B = 0.0;
  double se_p = 0.0;
  std::size_t n_points = 0;
  /// Data carry no decay (B vanishes); p is not identifiable and is set to 1.
  bool degenerate = false;
  /// The optimum lies beyond the outermost grid points of (0, 1).
  bool at_boundary = false;
};

inline constexpr int kFitGridPoints = 1000;

/// Weighted least squares, minimizing over p in (0, 1) with A and B solved
/// in closed form at each p. Needs at least three distinct m values.
DecayFit fit_exponential(const std::vector<DecayPoint>& points);

/// Points (m, mean) weighted 1/std^2 when every std is positive, else uniform.
std::vector<DecayPoint> decay_points(const RBResult& result);

struct DiamondEstimate {
  double value = 0.0;   ///< best restart: a lower bound on the diamond distance
  double spread = 0.0;  ///< best minus worst restart
  int restarts = 0;
};

inline constexpr int kDiamondRestarts = 32;
inline constexpr int kDiamondMaxIterations = 500;
inline constexpr double kDiamondTolerance = 1e-9;

/// max over pure |psi> of || (id (x) (a - b)) |psi><psi| ||_1, ancilla of
/// the same dimension, by see-saw ascent from the maximally entangled state
/// and random restarts (fixed internal seed).
DiamondEstimate diamond_distance_estimate(const Superoperator& a, const Superoperator& b);
double diamond_distance(const Superoperator& a, const Superoperator& b);

/// Trace norm of (id (x) (a - b)) applied to |psi><psi|; psi has length d^2,
/// ancilla index most significant.
double diamond_objective(const Superoperator& a, const Superoperator& b, const CVector& psi);

enum class LambdaConvention { Retention, Strength };

/// 2Q model with (Lambda_d o Lambda_AD) on each qubit after every CZ and
/// noiseless single-qubit gates.
NoiseModel cz_noise_model(double lambda_retention, double epsilon);

struct ScanCell {
  double lambda = 0.0;  ///< as given, in the scan's convention
  double epsilon = 0.0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double spread = 0.0;  ///< largest diamond restart spread in the cell
};

struct ScanGrid {
  std::vector<double> lambdas;
  std::vector<double> epsilons;
  std::size_t pairs = 0;
  LambdaConvention convention = LambdaConvention::Retention;
  std::vector<ScanCell> cells;  ///< lambda-major

  const ScanCell& at(std::size_t i_lambda, std::size_t i_epsilon) const {
    return cells[i_lambda * epsilons.size() + i_epsilon];
  }
};

/// Mean diamond distance between the effective noise channels of n_p pairs
/// of independent Haar-random 2Q template circuits, per (lambda, epsilon).
/// Cell k uses rng.substream(k).
ScanGrid gate_dependence_scan(const std::vector<double>& lambdas, const std::vector<double>& epsilons,
                              std::size_t pairs, const RandomSource& rng,
                              LambdaConvention convention = LambdaConvention::Retention);

/// One cell of the scan, retention convention.
ScanCell scan_cell(double lambda_retention, double epsilon, std::size_t pairs, RandomSource rng);

/// (1 - eps + 2 sqrt(1 - eps)) / 3: depolarizing parameter of amplitude damping.
double amplitude_damping_parameter(double epsilon);

}  // namespace rrb
