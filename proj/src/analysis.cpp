#include "rrb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "rrb/haar.hpp"
#include "rrb/parallel.hpp"
#include "rrb/stats.hpp"

namespace rrb {

// ---------------------------------------------------------------------------
// Exponential fit

namespace {

struct LinearFit {
  double A = 0.0;
  double B = 0.0;
  double rss = 0.0;
};

LinearFit solve_linear(const std::vector<DecayPoint>& pts, double p) {
  // weighted normal equations for the columns [1, p^m]
  double sw = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (const auto& q : pts) {
    const double x = std::pow(p, q.m);
    sw += q.weight;
    sx += q.weight * x;
    sxx += q.weight * x * x;
    sy += q.weight * q.value;
    sxy += q.weight * x * q.value;
  }
  LinearFit f;
  const double det = sw * sxx - sx * sx;
  if (std::abs(det) <= 1e-14 * sw * sxx) {
    f.A = sy / sw;
  } else {
    f.A = (sxx * sy - sx * sxy) / det;
    f.B = (sw * sxy - sx * sy) / det;
  }
  for (const auto& q : pts) {
    const double r = q.value - f.A - f.B * std::pow(p, q.m);
    f.rss += q.weight * r * r;
  }
  return f;
}

}  // namespace

DecayFit fit_exponential(const std::vector<DecayPoint>& points) {
  std::set<double> distinct;
  for (const auto& q : points) {
    if (!std::isfinite(q.m) || !std::isfinite(q.value) || !std::isfinite(q.weight) || q.weight <= 0.0)
      throw ValidationError("fit points need finite m, value and a positive weight");
    distinct.insert(q.m);
  }
  if (distinct.size() < 3) throw ValidationError("fit needs at least 3 distinct sequence lengths");

  DecayFit fit;
  fit.n_points = points.size();

  const auto [lo_it, hi_it] =
      std::minmax_element(points.begin(), points.end(), [](auto& a, auto& b) { return a.value < b.value; });
  if (hi_it->value - lo_it->value <= 1e-12 * std::max(1.0, std::abs(hi_it->value))) {
    double sw = 0, sy = 0;
    for (const auto& q : points) {
      sw += q.weight;
      sy += q.weight * q.value;
    }
    fit.A = sy / sw;
    fit.B = 0.0;
    fit.p = 1.0;
    fit.degenerate = true;
    return fit;
  }

  constexpr int n = kFitGridPoints;
  auto grid = [](int k) { return static_cast<double>(k) / (n + 1); };
  int best_k = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k) {
    const double r = solve_linear(points, grid(k)).rss;
    if (r < best) {
      best = r;
      best_k = k;
    }
  }
  double lo = grid(best_k - 1), hi = grid(best_k + 1);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = solve_linear(points, a).rss, fb = solve_linear(points, b).rss;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = solve_linear(points, a).rss;
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = solve_linear(points, b).rss;
    }
  }
  double p = 0.5 * (lo + hi);
  if (solve_linear(points, grid(best_k)).rss < solve_linear(points, p).rss) p = grid(best_k);
  const LinearFit lf = solve_linear(points, p);
  fit.A = lf.A;
  fit.B = lf.B;
  fit.p = p;
  fit.rss = lf.rss;
  fit.at_boundary = p < grid(1) || p > grid(n);

  // linearized covariance, scaled by the residual variance
  Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
  for (const auto& q : points) {
    const Eigen::Vector3d j(1.0, std::pow(p, q.m), q.m == 0.0 ? 0.0 : fit.B * q.m * std::pow(p, q.m - 1.0));
    jtj += q.weight * j * j.transpose();
  }
  const double dof = static_cast<double>(points.size()) - 3.0;
  const double s2 = dof > 0 ? lf.rss / dof : std::numeric_limits<double>::quiet_NaN();
  Eigen::FullPivLU<Eigen::Matrix3d> lu(jtj);
  if (lu.isInvertible()) {
    const Eigen::Matrix3d cov = s2 * lu.inverse();
    fit.se_A = std::sqrt(std::max(0.0, cov(0, 0)));
    fit.se_B = std::sqrt(std::max(0.0, cov(1, 1)));
    fit.se_p = std::sqrt(std::max(0.0, cov(2, 2)));
  } else {
    fit.se_A = fit.se_B = fit.se_p = std::numeric_limits<double>::infinity();
  }
  if (dof <= 0) fit.se_A = fit.se_B = fit.se_p = std::numeric_limits<double>::quiet_NaN();
  return fit;
}

std::vector<DecayPoint> decay_points(const RBResult& result) {
  bool weighted = true;
  for (const auto& l : result.lengths) weighted = weighted && l.stddev > 0.0;
  std::vector<DecayPoint> pts;
  for (const auto& l : result.lengths)
    pts.push_back({static_cast<double>(l.m), l.mean, weighted ? 1.0 / (l.stddev * l.stddev) : 1.0});
  return pts;
}

// ---------------------------------------------------------------------------
// Diamond distance

namespace {

// (id (x) S) applied to |psi><psi|, S acting on the second factor.
CMatrix apply_extended(const CMatrix& s, const CVector& psi, Index d) {
  CMatrix out(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      const CVector xa = psi.segment(a * d, d);
      const CVector xb = psi.segment(b * d, d);
      const CVector v = kron(CMatrix(xb.conjugate()), CMatrix(xa));
      out.block(a * d, b * d, d, d) = unvec(CVector(s * v), d);
    }
  return out;
}

// (id (x) S) applied blockwise to an operator on the doubled space.
CMatrix apply_extended_op(const CMatrix& s, const CMatrix& x, Index d) {
  CMatrix out(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      out.block(a * d, b * d, d, d) = unvec(CVector(s * vec(x.block(a * d, b * d, d, d))), d);
  return out;
}

double ascend(const CMatrix& delta, const CMatrix& delta_adj, CVector psi, Index d) {
  double value = -1.0;
  for (int it = 0; it < kDiamondMaxIterations; ++it) {
    const CMatrix m = apply_extended(delta, psi, d);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
    const double v = es.eigenvalues().cwiseAbs().sum();
    if (v - value < kDiamondTolerance) {
      value = std::max(value, v);
      break;
    }
    value = v;
    const Eigen::VectorXd sign = es.eigenvalues().unaryExpr([](double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); });
    const CMatrix s = es.eigenvectors() * sign.asDiagonal() * es.eigenvectors().adjoint();
    const CMatrix h = apply_extended_op(delta_adj, s, d);
    Eigen::SelfAdjointEigenSolver<CMatrix> top(0.5 * (h + h.adjoint()));
    psi = top.eigenvectors().col(d * d - 1);
  }
  return value;
}

}  // namespace

double diamond_objective(const Superoperator& a, const Superoperator& b, const CVector& psi) {
  if (a.hilbert_dim() != b.hilbert_dim()) throw ValidationError("diamond distance needs channels of equal dimension");
  const Index d = a.hilbert_dim();
  if (psi.size() != d * d) throw ValidationError("state has the wrong dimension");
  return hermitian_trace_norm(apply_extended(a.matrix() - b.matrix(), psi, d));
}

DiamondEstimate diamond_distance_estimate(const Superoperator& a, const Superoperator& b) {
  if (a.hilbert_dim() != b.hilbert_dim()) throw ValidationError("diamond distance needs channels of equal dimension");
  const Index d = a.hilbert_dim();
  const CMatrix delta = a.matrix() - b.matrix();
  const CMatrix delta_adj = delta.adjoint();

  const RandomSource seeds(0x6469616d6f6e64ULL);
  double best = 0.0, worst = std::numeric_limits<double>::infinity();
  for (int r = 0; r < kDiamondRestarts; ++r) {
    CVector psi(d * d);
    if (r == 0) {
      psi.setZero();
      for (Index k = 0; k < d; ++k) psi(k * d + k) = 1.0;
    } else {
      RandomSource rng = seeds.substream(static_cast<std::uint64_t>(r));
      for (Index k = 0; k < psi.size(); ++k) psi(k) = Complex(rng.normal(), rng.normal());
    }
    psi.normalize();
    const double v = ascend(delta, delta_adj, psi, d);
    best = std::max(best, v);
    worst = std::min(worst, v);
  }
  return {best, best - worst, kDiamondRestarts};
}

double diamond_distance(const Superoperator& a, const Superoperator& b) {
  return diamond_distance_estimate(a, b).value;
}

// ---------------------------------------------------------------------------
// Gate-dependence scan

double amplitude_damping_parameter(double epsilon) {
  return (1.0 - epsilon + 2.0 * std::sqrt(1.0 - epsilon)) / 3.0;
}

NoiseModel cz_noise_model(double lambda_retention, double epsilon) {
  NoiseModel m;
  m.cz = ChannelSpec::composite({ChannelSpec::depolarizing(lambda_retention, Support::Each),
                                 ChannelSpec::amplitude_damping(epsilon)});
  return m;
}

ScanCell scan_cell(double lambda_retention, double epsilon, std::size_t pairs, RandomSource rng) {
  if (pairs < 1) throw ValidationError("pairs per cell must be >= 1");
  const RegisterNoise noise(cz_noise_model(lambda_retention, epsilon), 2);
  std::vector<double> d(pairs);
  ScanCell cell;
  cell.lambda = lambda_retention;
  cell.epsilon = epsilon;
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto a = haar_2q(rng);
    const auto b = haar_2q(rng);
    const auto est = diamond_distance_estimate(effective_noise_channel(a.sequence, noise),
                                               effective_noise_channel(b.sequence, noise));
    d[i] = est.value;
    cell.spread = std::max(cell.spread, est.spread);
  }
  cell.mean = stats::mean(d);
  cell.stderr_ = stats::stddev(d) / std::sqrt(static_cast<double>(pairs));
  return cell;
}

ScanGrid gate_dependence_scan(const std::vector<double>& lambdas, const std::vector<double>& epsilons,
                              std::size_t pairs, const RandomSource& rng, LambdaConvention convention) {
  if (lambdas.empty() || epsilons.empty()) throw ValidationError("scan grids must be nonempty");
  if (pairs < 1) throw ValidationError("pairs per cell must be >= 1");
  for (double l : lambdas)
    if (!(l >= 0.0 && l <= 1.0)) throw ValidationError("lambda values must lie in [0, 1]");
  for (double e : epsilons)
    if (!(e >= 0.0 && e <= 1.0)) throw ValidationError("epsilon values must lie in [0, 1]");

  ScanGrid grid;
  grid.lambdas = lambdas;
  grid.epsilons = epsilons;
  grid.pairs = pairs;
  grid.convention = convention;
  grid.cells.resize(lambdas.size() * epsilons.size());
  parallel_for(grid.cells.size(), [&](std::size_t k) {
    const double lam = lambdas[k / epsilons.size()];
    const double eps = epsilons[k % epsilons.size()];
    const double retention = convention == LambdaConvention::Retention ? lam : 1.0 - lam;
    ScanCell c = scan_cell(retention, eps, pairs, rng.substream(k));
    c.lambda = lam;
    grid.cells[k] = c;
  });
  return grid;
}

}  // namespace rrb
