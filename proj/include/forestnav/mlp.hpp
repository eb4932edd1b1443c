#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "forestnav/rng.hpp"

namespace forestnav {

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

// Orthogonal(-ish) weight init: QR of a Gaussian matrix, signs fixed by
// diag(R), scaled by `gain`. Rows are orthonormal when rows <= cols and
// vice versa.
template <typename Scalar>
MatX<Scalar> orthogonal_matrix(int rows, int cols, double gain, Rng& rng) {
  const int big = std::max(rows, cols);
  const int small = std::min(rows, cols);
  Eigen::MatrixXd a(big, small);
  for (int j = 0; j < small; ++j)
    for (int i = 0; i < big; ++i) a(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(small).template triangularView<Eigen::Upper>();
  for (int j = 0; j < small; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  Eigen::MatrixXd w = (rows >= cols) ? q : Eigen::MatrixXd(q.transpose());
  return (gain * w).cast<Scalar>();
}

// Fixed-topology multilayer perceptron: two rectified-linear hidden layers of
// equal width and a linear output. Samples are matrix rows, so a forward
// pass over a batch is three GEMMs.
template <typename Scalar>
struct Mlp {
  MatX<Scalar> w1, w2, w3;  // (in x hidden), (hidden x hidden), (hidden x out)
  RowX<Scalar> b1, b2, b3;

  Mlp() = default;

  Mlp(int in_dim, int hidden_dim, int out_dim, double out_gain, Rng& rng) {
    const double relu_gain = std::sqrt(2.0);
    w1 = orthogonal_matrix<Scalar>(in_dim, hidden_dim, relu_gain, rng);
    w2 = orthogonal_matrix<Scalar>(hidden_dim, hidden_dim, relu_gain, rng);
    w3 = orthogonal_matrix<Scalar>(hidden_dim, out_dim, out_gain, rng);
    b1 = RowX<Scalar>::Zero(hidden_dim);
    b2 = RowX<Scalar>::Zero(hidden_dim);
    b3 = RowX<Scalar>::Zero(out_dim);
  }

  int in_dim() const { return static_cast<int>(w1.rows()); }
  int hidden_dim() const { return static_cast<int>(w1.cols()); }
  int out_dim() const { return static_cast<int>(w3.cols()); }

  // Post-activation values kept for the backward pass.
  struct Cache {
    MatX<Scalar> x, a1, a2;
  };

  MatX<Scalar> forward(const MatX<Scalar>& x, Cache* cache = nullptr) const {
    MatX<Scalar> a1 = ((x * w1).rowwise() + b1).cwiseMax(Scalar(0));
    MatX<Scalar> a2 = ((a1 * w2).rowwise() + b2).cwiseMax(Scalar(0));
    MatX<Scalar> y = (a2 * w3).rowwise() + b3;
    if (cache) {
      cache->x = x;
      cache->a1 = std::move(a1);
      cache->a2 = std::move(a2);
    }
    return y;
  }

  VecX<Scalar> forward_single(const VecX<Scalar>& x) const {
    MatX<Scalar> y = forward(x.transpose());
    return y.row(0).transpose();
  }

  struct Grads {
    MatX<Scalar> w1, w2, w3;
    RowX<Scalar> b1, b2, b3;

    static Grads zero_like(const Mlp& net) {
      Grads g;
      g.w1 = MatX<Scalar>::Zero(net.w1.rows(), net.w1.cols());
      g.w2 = MatX<Scalar>::Zero(net.w2.rows(), net.w2.cols());
      g.w3 = MatX<Scalar>::Zero(net.w3.rows(), net.w3.cols());
      g.b1 = RowX<Scalar>::Zero(net.b1.cols());
      g.b2 = RowX<Scalar>::Zero(net.b2.cols());
      g.b3 = RowX<Scalar>::Zero(net.b3.cols());
      return g;
    }
  };

  // Hand-derived backprop through the two relu layers. `dy` is dLoss/dY for
  // the batch in `cache`; relu passes gradient where the activation is
  // strictly positive.
  Grads backward(const Cache& cache, const MatX<Scalar>& dy) const {
    Grads g;
    g.w3 = cache.a2.transpose() * dy;
    g.b3 = dy.colwise().sum();
    MatX<Scalar> dz2 =
        (dy * w3.transpose()).cwiseProduct((cache.a2.array() > Scalar(0)).template cast<Scalar>().matrix());
    g.w2 = cache.a1.transpose() * dz2;
    g.b2 = dz2.colwise().sum();
    MatX<Scalar> dz1 =
        (dz2 * w2.transpose()).cwiseProduct((cache.a1.array() > Scalar(0)).template cast<Scalar>().matrix());
    g.w1 = cache.x.transpose() * dz1;
    g.b1 = dz1.colwise().sum();
    return g;
  }

  friend bool operator==(const Mlp& a, const Mlp& b) {
    return a.w1 == b.w1 && a.w2 == b.w2 && a.w3 == b.w3 && a.b1 == b.b1 && a.b2 == b.b2 &&
           a.b3 == b.b3;
  }
};

}  // namespace forestnav
