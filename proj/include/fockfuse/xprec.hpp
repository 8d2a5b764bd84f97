#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fockfuse::xp {

using real50 = boost::multiprecision::cpp_bin_float_50;

// Minimal complex type over an arbitrary real field; std::complex is only
// specified for builtin floating types.
template <typename R>
struct Cx {
    R re{}, im{};
    Cx() = default;
    Cx(R r) : re(std::move(r)) {}
    Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}
    Cx operator+(const Cx& o) const { return {re + o.re, im + o.im}; }
    Cx operator-(const Cx& o) const { return {re - o.re, im - o.im}; }
    Cx operator*(const Cx& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    Cx& operator+=(const Cx& o) {
      re += o.re;
      im += o.im;
      return *this;
    }
    Cx conj() const { return {re, -im}; }
    R norm2() const { return re * re + im * im; }
};

template <typename R>
struct XMat {
    std::size_t rows = 0, cols = 0;
    std::vector<Cx<R>> a;
    XMat() = default;
    XMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    Cx<R>& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Cx<R>& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

template <typename R>
XMat<R> matmul(const XMat<R>& x, const XMat<R>& y) {
  if (x.cols != y.rows) throw std::invalid_argument("xp::matmul: shape mismatch");
  XMat<R> z(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      Cx<R> xv = x(i, k);
      if (xv.re == 0 && xv.im == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += xv * y(k, j);
    }
  return z;
}

template <typename R>
struct PolarX {
    XMat<R> u;  // polar factor U V^dag
    R sigma_min{};
    R sigma_max{};
};

// One-sided Jacobi SVD: returns the polar factor U V^dag of a square matrix
// together with the extreme singular values.  Columns of g are
// orthogonalized in place; the accumulated right rotations give V.
template <typename R>
PolarX<R> polar_factor(XMat<R> g, int max_sweeps = 60) {
  const std::size_t n = g.cols;
  XMat<R> v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = Cx<R>(R(1));
  const R eps = std::numeric_limits<R>::epsilon();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        R app(0), aqq(0);
        Cx<R> apq;
        for (std::size_t i = 0; i < g.rows; ++i) {
          app += g(i, p).norm2();
          aqq += g(i, q).norm2();
          apq += g(i, p).conj() * g(i, q);
        }
        R mag2 = apq.norm2();
        if (mag2 <= eps * eps * app * aqq) continue;
        rotated = true;
        R mag = sqrt(mag2);
        Cx<R> phase(apq.re / mag, apq.im / mag);
        R tau = (aqq - app) / (2 * mag);
        R t = (tau >= 0) ? R(1) / (tau + sqrt(1 + tau * tau)) : R(-1) / (-tau + sqrt(1 + tau * tau));
        R c = R(1) / sqrt(1 + t * t);
        R s = t * c;
        for (std::size_t i = 0; i < g.rows; ++i) {
          Cx<R> gp = g(i, p), gq = g(i, q);
          g(i, p) = Cx<R>(c) * gp - Cx<R>(s) * (phase.conj() * gq);
          g(i, q) = Cx<R>(s) * (phase * gp) + Cx<R>(c) * gq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          Cx<R> vp = v(i, p), vq = v(i, q);
          v(i, p) = Cx<R>(c) * vp - Cx<R>(s) * (phase.conj() * vq);
          v(i, q) = Cx<R>(s) * (phase * vp) + Cx<R>(c) * vq;
        }
      }
    if (!rotated) break;
  }
  // u = normalized columns of g ; result = u v^dag
  PolarX<R> res;
  std::vector<R> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    R s(0);
    for (std::size_t i = 0; i < g.rows; ++i) s += g(i, j).norm2();
    norms[j] = sqrt(s);
    if (norms[j] == 0) throw std::runtime_error("xp::polar_factor: exactly singular column");
    if (j == 0 || norms[j] < res.sigma_min) res.sigma_min = norms[j];
    if (j == 0 || norms[j] > res.sigma_max) res.sigma_max = norms[j];
    for (std::size_t i = 0; i < g.rows; ++i) {
      g(i, j).re /= norms[j];
      g(i, j).im /= norms[j];
    }
  }
  res.u = XMat<R>(g.rows, n);
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Cx<R> acc;
      for (std::size_t k = 0; k < n; ++k) acc += g(i, k) * v(j, k).conj();
      res.u(i, j) = acc;
    }
  return res;
}

}  // namespace fockfuse::xp
