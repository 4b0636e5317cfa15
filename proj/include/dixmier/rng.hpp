// rng.hpp - seeded random sources; all randomness in the library flows
// through this type so identical seeds give identical results.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dixmier {

// splitmix64 step, used to derive independent sub-seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (explicit, so the stream is pinned by
  // the seed alone and not by a library's distribution internals).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  // Complex standard normal with E|z|^2 = 1.
  std::complex<double> cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

  Eigen::MatrixXcd ginibre(int n) {
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = cgaussian();
    return g;
  }

  Eigen::MatrixXcd hermitian(int n) {
    const Eigen::MatrixXcd g = ginibre(n);
    return (g + g.adjoint()) / 2.0;
  }

  // Haar unitary: QR of a Ginibre matrix with the R-diagonal phases fixed.
  Eigen::MatrixXcd unitary(int n) {
    const Eigen::MatrixXcd g = ginibre(n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
      const std::complex<double> d = r(j, j);
      const double a = std::abs(d);
      q.col(j) *= (a > 0.0) ? d / a : std::complex<double>(1.0, 0.0);
    }
    return q;
  }

  // Random density matrix GG*/tr(GG*).
  Eigen::MatrixXcd density(int n) {
    const Eigen::MatrixXcd g = ginibre(n);
    Eigen::MatrixXcd d = g * g.adjoint();
    const double tr = d.trace().real();
    if (tr > 0.0) d /= tr;
    else d = Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n);
    return d;
  }

  // Uniform point on the probability simplex (normalized exponentials).
  Eigen::VectorXd simplex(int n) {
    Eigen::VectorXd w(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double u = uniform();
      while (u <= 0.0) u = uniform();
      w(i) = -std::log(u);
      total += w(i);
    }
    return w / total;
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(gen_() % span);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace dixmier
