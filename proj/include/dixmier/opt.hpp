// opt.hpp - small optimization kernels shared by the averaging and duality
// solvers: simplex/spectrahedron projections, Riemannian descent over block
// unitaries, and max-coordinate subgradient selection.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dixmier/algebra.hpp"

namespace dixmier {

// Euclidean projection onto {x >= 0, sum x = 1}.
RVec project_simplex(RVec v);

// Nearest density matrix: Hermitian part, eigendecomposition, simplex
// projection of the eigenvalues.
Mat project_density(const Mat& h);

Mat hermitian_part(const Mat& m);
Mat skew_part(const Mat& m);

// exp(S) for skew-Hermitian S (unitary result), via the Hermitian
// eigenproblem for iS.
Mat exp_skew(const Mat& s);

double lambda_min_hermitian(const Mat& h);

struct TopSingular {
  double sigma;
  CVec left;   // y with m x = sigma y
  CVec right;  // x
};
TopSingular top_singular(const Mat& m);

// Coordinate of a tuple achieving the max block spectral norm; ties broken
// by lowest (entry, block) index.
struct MaxCoord {
  int entry = 0;
  int block = 0;
  double value = 0.0;
};
MaxCoord tuple_argmax(const Tuple& t);

// Shared knobs for the projected-subgradient feasibility solvers.
struct FeasibilityOptions {
  int iterations = 500;
  int restarts = 5;
  std::uint64_t seed = 0;
  double tol = kCertificateTol;
  double step = 0.5;
  int polish_rounds = 300;  // alternating-projection finishing phase
};

// Riemannian descent over a list of block unitaries with exponential
// retraction and Armijo backtracking. `gradient` returns per-block G with
// directional derivative sum_k Re tr(S_k G_k) along u(t) = exp(t S) u; the
// descent direction is the skew part of G.
struct UnitaryDescentResult {
  std::vector<Mat> u;
  double value;
};
UnitaryDescentResult unitary_descent(
    std::vector<Mat> u0, const std::function<double(const std::vector<Mat>&)>& value,
    const std::function<std::vector<Mat>(const std::vector<Mat>&)>& gradient,
    int max_iters, double step0);

}  // namespace dixmier
