#include "dixmier/opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dixmier {

RVec project_simplex(RVec v) {
  const int n = static_cast<int>(v.size());
  if (n == 0) return v;
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double tau = 0.0;
  for (int i = 0; i < n; ++i) {
    css += u[static_cast<size_t>(i)];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<size_t>(i)] - t > 0.0) tau = t;
  }
  for (int i = 0; i < n; ++i) v(i) = std::max(v(i) - tau, 0.0);
  return v;
}

Mat hermitian_part(const Mat& m) { return (m + m.adjoint()) / 2.0; }

Mat skew_part(const Mat& m) { return (m - m.adjoint()) / 2.0; }

Mat project_density(const Mat& h) {
  const Mat herm = hermitian_part(h);
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  RVec lam = es.eigenvalues();
  lam = project_simplex(std::move(lam));
  Mat d = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(d);
}

Mat exp_skew(const Mat& s) {
  const int n = static_cast<int>(s.rows());
  const Mat h = Cx(0.0, 1.0) * s;  // Hermitian when s is skew
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  CVec phases(n);
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()(i);
    // s = -i h, so exp(s) = exp(-i lam) on the eigenbasis.
    phases(i) = Cx(std::cos(lam), -std::sin(lam));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double lambda_min_hermitian(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

TopSingular top_singular(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  TopSingular out;
  out.sigma = svd.singularValues()(0);
  out.left = svd.matrixU().col(0);
  out.right = svd.matrixV().col(0);
  return out;
}

namespace {

double block_norm(const Mat& m) {
  const Mat gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

MaxCoord tuple_argmax(const Tuple& t) {
  MaxCoord best;
  best.value = -1.0;
  for (int j = 0; j < t.size(); ++j) {
    for (int k = 0; k < t.entry(j).num_blocks(); ++k) {
      const double v = block_norm(t.entry(j).block(k));
      if (v > best.value) best = MaxCoord{j, k, v};
    }
  }
  return best;
}

UnitaryDescentResult unitary_descent(
    std::vector<Mat> u0, const std::function<double(const std::vector<Mat>&)>& value,
    const std::function<std::vector<Mat>(const std::vector<Mat>&)>& gradient,
    int max_iters, double step0) {
  std::vector<Mat> u = std::move(u0);
  double f = value(u);
  double step = step0;
  for (int it = 0; it < max_iters; ++it) {
    const std::vector<Mat> g = gradient(u);
    std::vector<Mat> dir;
    dir.reserve(g.size());
    double gnorm2 = 0.0;
    for (const Mat& gk : g) {
      Mat sk = skew_part(gk);
      gnorm2 += sk.squaredNorm();
      dir.push_back(std::move(sk));
    }
    if (gnorm2 <= 1e-24) break;

    bool accepted = false;
    double eta = step;
    for (int bt = 0; bt < 25; ++bt) {
      std::vector<Mat> trial;
      trial.reserve(u.size());
      for (size_t k = 0; k < u.size(); ++k) {
        trial.push_back(exp_skew((eta * dir[k]).eval()) * u[k]);
      }
      const double ft = value(trial);
      if (ft < f - 1e-4 * eta * gnorm2) {
        u = std::move(trial);
        f = ft;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    step = std::min(step0, eta * 2.0);  // reuse the working scale
  }
  return {std::move(u), f};
}

}  // namespace dixmier
