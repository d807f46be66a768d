#pragma once

#include <Eigen/Dense>
#include <map>

#include "hdx/complex.hpp"
#include "hdx/gf.hpp"

namespace hdx {

constexpr double kSpectralTol = 1e-9;

struct SpectralReport {
    double lambda2 = 0;      // second largest normalized eigenvalue
    double lambda2_abs = 0;  // second largest in absolute value
    std::size_t n = 0;       // number of vertices / rows
    double tolerance = kSpectralTol;
};

/// Normalized second eigenvalues of the underlying weighted graph.
SpectralReport lambda2(const Complex& graph);

/// Second singular value of the measure-normalized bipartite operator.
struct WalkMatrix {
    std::vector<Face> rows, cols;
    Eigen::MatrixXd weight;        // joint edge measure, sums to 1
    Eigen::VectorXd row_measure;   // marginals
    Eigen::VectorXd col_measure;
    Eigen::MatrixXd stochastic() const;  // rows sum to 1
};

SpectralReport lambda2(const WalkMatrix& walk);

/// Swap walk S_{k,l}: bipartite between X(k) and X(l) through
/// (k+l+1)-faces split uniformly.
WalkMatrix swap_walk(const Complex& x, int k, int l);

/// Colored swap walk S_{J1,J2} on a partite complex.
WalkMatrix swap_walk_colored(const Complex& x, const std::set<int>& j1,
                             const std::set<int>& j2);

/// Reports for every link of X^{<= d-2}, including the empty face.
std::map<Face, SpectralReport> local_spectra(const Complex& x,
                                             std::size_t budget = 20000);

struct TrickleReport {
    double tau = 0;        // -min link eigenvalue
    double lambda = 0;     // max link second eigenvalue
    double lower_bound = 0, upper_bound = 0;
    double global_min = 0, global_lambda2 = 0;
    bool pass = false;
};

/// Measures the vertex-link eigenvalue range [-tau, lambda] and checks the
/// global non-trivial spectrum against [-tau/(1+tau), lambda/(1-lambda)].
TrickleReport trickle_check(const Complex& x);

// --- posets --------------------------------------------------------------

/// A pure sub-poset of the Grassmann: levels[i] holds the i-dimensional
/// subspaces, with the flag measure (uniform top level, uniform chains).
struct SubspacePoset {
    std::uint32_t n = 0;  // ambient dimension
    gf::FieldPrime fp;
    std::vector<std::vector<gf::Subspace>> levels;
};

SubspacePoset full_grassmann(std::uint32_t n, std::uint32_t p, int d);
SubspacePoset isotropic_poset(const gf::SymplecticForm& form, int d);

/// Containment graph between P(i) and P(j) with the flag edge measure.
WalkMatrix containment_graph(const SubspacePoset& poset, int i, int j);

struct EposetReport {
    std::vector<double> gammas;        // ||M_i - lower walk||, i = 0..d-1
    std::vector<double> lambda_upper;  // lambda(D_{i+1} U_i), i = 0..d-1
    std::vector<double> bounds;        // sum 1/p^t + sum gamma_t
    bool pass = false;
    double tolerance = kSpectralTol;
};

/// Measures all gamma_i and verifies lambda(D_{i+1}U_i) against the
/// assembled eposet bound.
EposetReport eposet_check(const SubspacePoset& poset);

/// Upper / lower / non-lazy walk matrices on level i (row-stochastic).
Eigen::MatrixXd upper_walk(const SubspacePoset& poset, int i);
Eigen::MatrixXd lower_walk(const SubspacePoset& poset, int i);
Eigen::MatrixXd nonlazy_upper_walk(const SubspacePoset& poset, int i);
Eigen::VectorXd level_measure(const SubspacePoset& poset, int i);

/// Second eigenvalue of a stochastic matrix reversible w.r.t. pi.
double lambda2_reversible(const Eigen::MatrixXd& walk, const Eigen::VectorXd& pi);
double min_eig_reversible(const Eigen::MatrixXd& walk, const Eigen::VectorXd& pi);

/// Operator norm w.r.t. the pi-weighted inner product.
double op_norm_weighted(const Eigen::MatrixXd& m, const Eigen::VectorXd& pi);

}  // namespace hdx
