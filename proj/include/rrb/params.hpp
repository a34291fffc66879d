#pragma once

namespace rrb {

/// Angles of A(phi, theta, omega) = RZ(omega) RY(theta) RZ(phi) and the
/// global phase in front of it.
struct SingleQubitParams {
  double phi = 0.0;
  double theta = 0.0;
  double omega = 0.0;
  double global_phase = 0.0;
};

/// U = e^{i global_phase} (C (x) D) V(alpha, beta, delta) (A (x) B).
///
/// V(alpha, beta, delta) = exp(i/2 (beta XX + delta YY + alpha ZZ)); in the
/// magic basis its eigenphases are phi_1/2, phi_2/2, phi_3/2 and
/// -(phi_1 + phi_2 + phi_3)/2 whenever alpha, beta, delta are the pairwise
/// half-sums of phi_1, phi_2, phi_3.
struct TwoQubitParams {
  SingleQubitParams a;
  SingleQubitParams b;
  SingleQubitParams c;
  SingleQubitParams d;
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double global_phase = 0.0;
};

}  // namespace rrb
