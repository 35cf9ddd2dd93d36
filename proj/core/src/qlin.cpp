#include "qrl/qlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(fmt::format("{}: shape mismatch {}x{} vs {}x{}", op, a.rows(), a.cols(),
                                     b.rows(), b.cols()));
  }
}

void require_square(const Matrix& m, const char* op) {
  if (!m.is_square()) {
    throw DimensionError(fmt::format("{}: expected a square matrix, got {}x{}", op, m.rows(), m.cols()));
  }
}

// Closed form for [[a, b], [conj(b), d]] with a, d real.
HermitianEig eigh2(const Matrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double mean = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const double radius = std::hypot(half_gap, std::abs(b));

  HermitianEig eig;
  eig.size = 2;
  eig.vectors = Matrix(2, 2);
  eig.values[0] = mean - radius;
  eig.values[1] = mean + radius;

  if (std::abs(b) <= 1e-300) {
    // Already diagonal; order the basis vectors by eigenvalue.
    const bool swap = a > d;
    eig.vectors(swap ? 1 : 0, 0) = 1.0;
    eig.vectors(swap ? 0 : 1, 1) = 1.0;
    return eig;
  }

  for (std::size_t k = 0; k < 2; ++k) {
    const double lambda = eig.values[k];
    // Two candidate null vectors of (m - lambda I); keep the better conditioned.
    Complex v0 = b;
    Complex v1 = lambda - a;
    Complex w0 = lambda - d;
    Complex w1 = std::conj(b);
    const double nv = std::hypot(std::abs(v0), std::abs(v1));
    const double nw = std::hypot(std::abs(w0), std::abs(w1));
    if (nw > nv) {
      v0 = w0 / nw;
      v1 = w1 / nw;
    } else {
      v0 /= nv;
      v1 /= nv;
    }
    eig.vectors(0, k) = v0;
    eig.vectors(1, k) = v1;
  }
  return eig;
}

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (r != c) {
        sum += std::norm(a(r, c));
      }
    }
  }
  return std::sqrt(sum);
}

// Cyclic complex Jacobi. Each rotation J = P R, where P rephases column q so
// that a(p, q) becomes real and R is the classical real Jacobi rotation.
HermitianEig eigh_jacobi(const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix a(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    a(r, r) = m(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
      a(c, r) = std::conj(a(r, c));
    }
  }
  Matrix v = Matrix::identity(n);

  double scale = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      scale = std::max(scale, std::abs(a(r, c)));
    }
  }
  const double threshold = 1e-14 * std::max(1.0, scale);

  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g < 1e-300) {
          continue;
        }
        const Complex phase = apq / g;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Column q of J carries the conj(phase) factor.
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);

        // a <- a J
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        // a <- J^dagger a
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        // v <- v J
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::array<std::size_t, Matrix::kMaxDim> order{};
  std::iota(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEig eig;
  eig.size = n;
  eig.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    eig.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) {
      eig.vectors(r, k) = v(r, order[k]);
    }
  }
  return eig;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows > kMaxDim || cols > kMaxDim) {
    throw DimensionError(fmt::format("Matrix: {}x{} exceeds the {}x{} storage limit", rows, cols,
                                     kMaxDim, kMaxDim));
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<Complex> row_major)
    : Matrix(rows, cols) {
  if (row_major.size() != rows * cols) {
    throw DimensionError(fmt::format("Matrix: {} entries supplied for a {}x{} matrix",
                                     row_major.size(), rows, cols));
  }
  auto it = row_major.begin();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      (*this)(r, c) = *it++;
    }
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    m(i, i) = values[i];
  }
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

Matrix Matrix::column(std::initializer_list<Complex> values) {
  Matrix m(values.size(), 1);
  std::size_t r = 0;
  for (const Complex& v : values) {
    m(r++, 0) = v;
  }
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      out(c, r) = std::conj((*this)(r, c));
    }
  }
  return out;
}

Complex Matrix::trace() const {
  require_square(*this, "trace");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    t += (*this)(i, i);
  }
  return t;
}

bool Matrix::is_finite() const noexcept {
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const Complex& z = (*this)(r, c);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        return false;
      }
    }
  }
  return true;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      (*this)(r, c) += other(r, c);
    }
  }
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      (*this)(r, c) -= other(r, c);
    }
  }
  return *this;
}

Matrix& Matrix::operator*=(Complex s) noexcept {
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      (*this)(r, c) *= s;
    }
  }
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError(fmt::format("operator*: cannot multiply {}x{} by {}x{}", a.rows(), a.cols(),
                                     b.rows(), b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex ark = a(r, k);
      for (std::size_t c = 0; c < b.cols(); ++c) {
        out(r, c) += ark * b(k, c);
      }
    }
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
    }
  }
  return worst;
}

double hermiticity_error(const Matrix& m) {
  require_square(m, "hermiticity_error");
  double worst = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = r; c < m.cols(); ++c) {
      worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
    }
  }
  return worst;
}

Matrix outer(const Matrix& a, const Matrix& b) { return a * b.adjoint(); }

Matrix pauli_x() { return Matrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
Matrix pauli_y() { return Matrix(2, 2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}); }
Matrix pauli_z() { return Matrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
      }
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& m, Subsystem keep) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw DimensionError(fmt::format("partial_trace: expected 4x4, got {}x{}", m.rows(), m.cols()));
  }
  Matrix out(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        out(i, j) += keep == Subsystem::first ? m(2 * i + k, 2 * j + k) : m(2 * k + i, 2 * k + j);
      }
    }
  }
  return out;
}

HermitianEig eigh(const Matrix& m) {
  require_square(m, "eigh");
  switch (m.rows()) {
    case 1: {
      HermitianEig eig;
      eig.size = 1;
      eig.values[0] = m(0, 0).real();
      eig.vectors = Matrix::identity(1);
      return eig;
    }
    case 2:
      return eigh2(m);
    case 3:
    case 4:
      return eigh_jacobi(m);
    default:
      throw DimensionError("eigh: empty matrix");
  }
}

Matrix herm_power(const Matrix& m, double p, double floor) {
  require_square(m, "herm_power");
  if (!(floor > 0.0)) {
    throw DomainError(fmt::format("herm_power: spectral floor must be positive, got {}", floor));
  }
  const double asym = hermiticity_error(m);
  if (asym > 1e-10) {
    throw DomainError(fmt::format("herm_power: input is not Hermitian (asymmetry {:.3e})", asym));
  }
  const HermitianEig eig = eigh(m);
  const std::size_t n = eig.size;
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::pow(std::max(eig.values[k], floor), p);
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = w * eig.vectors(r, k);
      for (std::size_t c = 0; c < n; ++c) {
        out(r, c) += vr * std::conj(eig.vectors(c, k));
      }
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    out(r, r) = out(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const Complex h = 0.5 * (out(r, c) + std::conj(out(c, r)));
      out(r, c) = h;
      out(c, r) = std::conj(h);
    }
  }
  return out;
}

DensityCheck validate_density(const Matrix& m, double tol) {
  DensityCheck check;
  if (!m.is_square() || m.rows() == 0) {
    check.failure = fmt::format("not square ({}x{})", m.rows(), m.cols());
    return check;
  }
  if (!m.is_finite()) {
    check.failure = "non-finite entries";
    return check;
  }
  check.hermiticity_error = hermiticity_error(m);
  check.trace_error = std::abs(m.trace() - 1.0);
  check.min_eigenvalue = eigh(m).values[0];

  if (check.hermiticity_error > tol) {
    check.failure = fmt::format("not Hermitian (asymmetry {:.3e})", check.hermiticity_error);
  } else if (check.min_eigenvalue < -tol) {
    check.failure = fmt::format("negative eigenvalue {:.3e}", check.min_eigenvalue);
  } else if (check.trace_error > tol) {
    check.failure = fmt::format("trace off by {:.3e}", check.trace_error);
  } else {
    check.valid = true;
  }
  return check;
}

}  // namespace qrl
