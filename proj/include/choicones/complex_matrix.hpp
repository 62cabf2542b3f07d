#pragma once

#include <cassert>
#include <complex>
#include <initializer_list>
#include <vector>

#include "choicones/errors.hpp"

namespace choicones {

using Complex = std::complex<double>;

/// Dimensions (a, b) of a bipartite system M_A ⊗ M_B.
struct Dims {
  int a = 1;
  int b = 1;

  int total() const { return a * b; }
};

inline bool operator==(Dims x, Dims y) { return x.a == y.a && x.b == y.b; }
inline bool operator!=(Dims x, Dims y) { return !(x == y); }

/// Dense complex matrix, row-major storage. Column vectors are n×1 matrices.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {
    assert(rows >= 0 && cols >= 0);
  }
  ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    assert(entries_.size() == static_cast<size_t>(rows) * cols);
  }

  static ComplexMatrix identity(int n);
  /// Matrix unit e_{ij} (0-based).
  static ComplexMatrix unit(int rows, int cols, int i, int j);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return entries_[static_cast<size_t>(i) * cols_ + j];
  }
  Complex operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return entries_[static_cast<size_t>(i) * cols_ + j];
  }

  Complex* data() { return entries_.data(); }
  const Complex* data() const { return entries_.data(); }
  const std::vector<Complex>& entries() const { return entries_; }

  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix adjoint() const;
  /// (M + M†)/2; requires a square matrix.
  ComplexMatrix hermitized() const;

  Complex trace() const;
  double norm_fro() const;
  double norm_max() const;

  bool is_hermitian(double tol) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex z);

  /// Copies the br×bc block whose top-left corner is (i*br, j*bc).
  ComplexMatrix block(int i, int j, int br, int bc) const;
  void set_block(int i, int j, const ComplexMatrix& blk);
  void add_block(int i, int j, const ComplexMatrix& blk, Complex weight = 1.0);

  /// Column j as a rows×1 vector.
  ComplexMatrix column(int j) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix operator*(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix operator*(Complex z, const ComplexMatrix& x);
ComplexMatrix operator*(const ComplexMatrix& x, Complex z);

/// Frobenius distance ‖x − y‖.
double distance_fro(const ComplexMatrix& x, const ComplexMatrix& y);

/// Outer product u v† of two column vectors.
ComplexMatrix outer(const ComplexMatrix& u, const ComplexMatrix& v);
/// Inner product u†v of two column vectors.
Complex inner(const ComplexMatrix& u, const ComplexMatrix& v);
/// Euclidean norm of a column vector.
double vec_norm(const ComplexMatrix& u);

void require_same_shape(const ComplexMatrix& x, const ComplexMatrix& y, const char* where);
void require_square(const ComplexMatrix& x, const char* where);

}  // namespace choicones
