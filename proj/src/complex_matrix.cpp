#include "choicones/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace choicones {

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::unit(int rows, int cols, int i, int j) {
  ComplexMatrix m(rows, cols);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  ComplexMatrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    assert(static_cast<int>(row.size()) == c);
    int j = 0;
    for (Complex z : row) m(i, j++) = z;
    ++i;
  }
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m(rows_, cols_);
  for (size_t t = 0; t < entries_.size(); ++t) m.entries_[t] = std::conj(entries_[t]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::hermitized() const {
  require_square(*this, "hermitized");
  ComplexMatrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      m(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
  return m;
}

Complex ComplexMatrix::trace() const {
  require_square(*this, "trace");
  Complex t = 0.0;
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::norm_fro() const {
  double s = 0.0;
  for (const Complex& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::norm_max() const {
  double s = 0.0;
  for (const Complex& z : entries_) s = std::max(s, std::abs(z));
  return s;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator+=");
  for (size_t t = 0; t < entries_.size(); ++t) entries_[t] += o.entries_[t];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator-=");
  for (size_t t = 0; t < entries_.size(); ++t) entries_[t] -= o.entries_[t];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex z) {
  for (Complex& e : entries_) e *= z;
  return *this;
}

ComplexMatrix ComplexMatrix::block(int i, int j, int br, int bc) const {
  assert((i + 1) * br <= rows_ && (j + 1) * bc <= cols_);
  ComplexMatrix m(br, bc);
  for (int r = 0; r < br; ++r)
    for (int c = 0; c < bc; ++c) m(r, c) = (*this)(i * br + r, j * bc + c);
  return m;
}

void ComplexMatrix::set_block(int i, int j, const ComplexMatrix& blk) {
  assert((i + 1) * blk.rows() <= rows_ && (j + 1) * blk.cols() <= cols_);
  for (int r = 0; r < blk.rows(); ++r)
    for (int c = 0; c < blk.cols(); ++c) (*this)(i * blk.rows() + r, j * blk.cols() + c) = blk(r, c);
}

void ComplexMatrix::add_block(int i, int j, const ComplexMatrix& blk, Complex weight) {
  assert((i + 1) * blk.rows() <= rows_ && (j + 1) * blk.cols() <= cols_);
  for (int r = 0; r < blk.rows(); ++r)
    for (int c = 0; c < blk.cols(); ++c)
      (*this)(i * blk.rows() + r, j * blk.cols() + c) += weight * blk(r, c);
}

ComplexMatrix ComplexMatrix::column(int j) const {
  ComplexMatrix v(rows_, 1);
  for (int i = 0; i < rows_; ++i) v(i, 0) = (*this)(i, j);
  return v;
}

ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix m = x;
  m += y;
  return m;
}

ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix m = x;
  m -= y;
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.cols() != y.rows())
    throw DimMismatch("matrix product: inner dimensions disagree");
  ComplexMatrix m(x.rows(), y.cols());
  const int n = x.rows(), k = x.cols(), p = y.cols();
  for (int i = 0; i < n; ++i) {
    Complex* out = m.data() + static_cast<size_t>(i) * p;
    for (int t = 0; t < k; ++t) {
      const Complex xv = x(i, t);
      if (xv == Complex{}) continue;
      const Complex* yr = y.data() + static_cast<size_t>(t) * p;
      for (int j = 0; j < p; ++j) out[j] += xv * yr[j];
    }
  }
  return m;
}

ComplexMatrix operator*(Complex z, const ComplexMatrix& x) {
  ComplexMatrix m = x;
  m *= z;
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& x, Complex z) { return z * x; }

double distance_fro(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_shape(x, y, "distance_fro");
  double s = 0.0;
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) s += std::norm(x(i, j) - y(i, j));
  return std::sqrt(s);
}

ComplexMatrix outer(const ComplexMatrix& u, const ComplexMatrix& v) {
  assert(u.cols() == 1 && v.cols() == 1);
  ComplexMatrix m(u.rows(), v.rows());
  for (int i = 0; i < u.rows(); ++i)
    for (int j = 0; j < v.rows(); ++j) m(i, j) = u(i, 0) * std::conj(v(j, 0));
  return m;
}

Complex inner(const ComplexMatrix& u, const ComplexMatrix& v) {
  assert(u.cols() == 1 && v.cols() == 1 && u.rows() == v.rows());
  Complex s = 0.0;
  for (int i = 0; i < u.rows(); ++i) s += std::conj(u(i, 0)) * v(i, 0);
  return s;
}

double vec_norm(const ComplexMatrix& u) { return u.norm_fro(); }

void require_same_shape(const ComplexMatrix& x, const ComplexMatrix& y, const char* where) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimMismatch(std::string(where) + ": shapes disagree");
}

void require_square(const ComplexMatrix& x, const char* where) {
  if (x.rows() != x.cols()) throw DimMismatch(std::string(where) + ": matrix not square");
}

}  // namespace choicones
