#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqls {

using cplx = std::complex<double>;

/// Absolute entrywise tolerance used by all matrix comparisons.
struct Tolerance {
  double abs_eps = 1e-9;
};

/// Dense row-major complex matrix. Immutable by convention once built:
/// every operation below returns a fresh value.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    if (e_.size() != rows * cols)
      throw std::invalid_argument("ComplexMatrix: entry count mismatch");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return e_[r * cols_ + c];
  }

  const std::vector<cplx>& entries() const { return e_; }
  std::vector<cplx>& entries() { return e_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> e_;
};

/// Standard matrix product. The per-row summation order is fixed (k = 0..n),
/// so results do not depend on how rows are partitioned across workers.
inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul: shape mismatch (" +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " * " +
                                std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b);
}

/// Kronecker product; entry ((i*br + k), (j*bc + l)) = a(i,j) * b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

/// Conjugate transpose.
inline ComplexMatrix dagger(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(j, i) = std::conj(m(i, j));
  return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  return worst;
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                         Tolerance tol = {}) {
  return max_abs_diff(a, b) <= tol.abs_eps;
}

/// True iff max entry of |M†M - I| is within tolerance.
inline bool is_unitary(const ComplexMatrix& m, Tolerance tol = {}) {
  if (!m.square()) throw std::invalid_argument("is_unitary: matrix not square");
  return approx_equal(matmul(dagger(m), m),
                      ComplexMatrix::identity(m.rows()), tol);
}

// --- fixture format: first line "rows cols", then one line per row with
// --- entries written as "re+imj" (e.g. "0.5-0.5j").

inline std::string format_complex(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real();
  if (z.imag() >= 0 || std::isnan(z.imag())) os << '+';
  os << z.imag() << 'j';
  return os.str();
}

inline cplx parse_complex(const std::string& tok) {
  if (tok.empty() || tok.back() != 'j')
    throw std::invalid_argument("parse_complex: expected trailing 'j' in '" +
                                tok + "'");
  const std::string body = tok.substr(0, tok.size() - 1);
  // split at the sign that starts the imaginary part (not a leading sign,
  // not an exponent sign)
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    if ((body[i] == '+' || body[i] == '-') &&
        body[i - 1] != 'e' && body[i - 1] != 'E')
      split = i;  // keep the last candidate
  }
  if (split == std::string::npos)
    throw std::invalid_argument("parse_complex: malformed entry '" + tok + "'");
  return {std::stod(body.substr(0, split)), std::stod(body.substr(split))};
}

inline void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_complex(m(i, j));
    }
    os << '\n';
  }
}

inline ComplexMatrix read_matrix(std::istream& is) {
  std::size_t rows = 0, cols = 0;
  if (!(is >> rows >> cols))
    throw std::runtime_error("read_matrix: missing dimension header");
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      std::string tok;
      if (!(is >> tok))
        throw std::runtime_error("read_matrix: truncated matrix body");
      m(i, j) = parse_complex(tok);
    }
  return m;
}

}  // namespace eqls
