#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "fsidd/harness.hpp"

namespace fsidd {

struct Check {
  std::string name;
  double value = 0.0;      // measured deviation (or count)
  double threshold = 0.0;  // pass bound
  bool passed = false;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool passed() const;
};

/// Interface operators and right-hand sides assembled densely from the
/// coupled space-time algebra: all slabs of a subdomain in one block system,
/// Dirichlet rows replaced by identities, the structure kept in (eta, eta_dot)
/// form, and slab-overlap projections computed directly.
struct DenseOracle {
  Eigen::MatrixXd sp;
  Eigen::VectorXd sp_rhs;
  Eigen::MatrixXd robin;
  Eigen::VectorXd robin_rhs;
};

/// Forms are reassembled from the problem, independent of any cached forms.
DenseOracle dense_oracle(const CoupledProblem& problem);

/// Operator matrix by applying a linear map to unit vectors.
Eigen::MatrixXd probe_columns(const LinearMap& apply, int size);

/// max |a - b| / max |b|.
double relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// max over random pairs of ||A(a x + b y) - a A x - b A y|| / (|a| ||A x|| + |b| ||A y||).
double linearity_defect(const LinearMap& apply, int size, int probes, unsigned seed);

/// Manufactured-solution identities over `points` random (x, y, t).
struct MmsExactness {
  double divergence = 0.0;   // max |div u|
  double kinematics = 0.0;   // max |eta_dot - u| on y = 1
  double forcing = 0.0;      // max |f - FD(rho d_t v - div sigma)|, relative to max |f|
  double eta_dot = 0.0;      // max |eta_dot - FD(d_t eta)|
};
MmsExactness check_mms_exactness(const MaterialParams& params, int points, unsigned seed);

/// Projection properties on random grids and series.
struct ProjectionProperties {
  double identity = 0.0;        // conforming grids, max |Πφ - φ|
  double integral = 0.0;        // max relative change of ∫φ dt
  double expansion = 0.0;       // max (||Πφ|| - ||φ||) / ||φ||
};
ProjectionProperties check_projection_properties(int series, unsigned seed);

/// Robin/Neumann identities of the recovered stresses over every slab of one
/// sweep with random interface data and the manufactured loads:
/// alpha_f u + sigma_f n_f = g_f and -alpha_s eta_dot - sigma_s n_s = g_s
/// (sigma n = g for Neumann), relative in the trace norm.
struct RobinIdentity {
  double fluid = 0.0;
  double structure = 0.0;
};
RobinIdentity check_robin_identities(ElementSet elements, int n, InterfaceMode mode, double alpha_f,
                                     double alpha_s, unsigned seed);

/// Largest relative increase B^k - B^{k-1} over the recorded energies
/// (nonpositive when the sequence is nonincreasing).
double energy_increase(const std::vector<double>& energy);

/// Dense-oracle equivalence of both operators and right-hand sides, linearity,
/// fault injection, projection properties, SWR energy decay, Robin identities
/// and manufactured-solution exactness. Robin coefficients come from config.
VerificationReport run_verification(const RunConfig& config);

}  // namespace fsidd
