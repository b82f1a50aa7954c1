#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace graphrho {

// Row-major dense matrix of doubles. Small and unclever on purpose; the
// hot loops live in gnn.cpp and operate on raw spans.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * static_cast<size_t>(c), 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
  double operator()(int r, int c) const { return a[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }

  double* row(int r) { return a.data() + static_cast<size_t>(r) * static_cast<size_t>(cols); }
  const double* row(int r) const { return a.data() + static_cast<size_t>(r) * static_cast<size_t>(cols); }

  void zero() { std::fill(a.begin(), a.end(), 0.0); }

  bool operator==(const Matrix&) const = default;
};

// Read-only view of a (rows x cols) tensor inside a flat parameter vector.
struct MatView {
  const double* p = nullptr;
  int rows = 0;
  int cols = 0;
  const double* row(int r) const { return p + static_cast<size_t>(r) * static_cast<size_t>(cols); }
  double operator()(int r, int c) const { return p[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
};

struct MatViewMut {
  double* p = nullptr;
  int rows = 0;
  int cols = 0;
  double* row(int r) const { return p + static_cast<size_t>(r) * static_cast<size_t>(cols); }
  double& operator()(int r, int c) const { return p[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
};

inline double dot(const double* a, const double* b, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void axpy(double alpha, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// out(n) = W(n x m) * x(m) + b(n); b may be null.
inline void matvec(MatView w, const double* x, const double* b, double* out) {
  for (int r = 0; r < w.rows; ++r) out[r] = dot(w.row(r), x, w.cols) + (b ? b[r] : 0.0);
}

// Gradient halves of out = W x + b:  dW += dout (x)^T,  dx += W^T dout, db += dout.
inline void matvec_backward(MatView w, const double* x, const double* dout, MatViewMut dw,
                            double* dx, double* db) {
  for (int r = 0; r < w.rows; ++r) {
    double g = dout[r];
    if (g == 0.0) continue;
    axpy(g, x, dw.row(r), w.cols);
    if (dx) axpy(g, w.row(r), dx, w.cols);
    if (db) db[r] += g;
  }
}

}  // namespace graphrho
