#pragma once

// Dense complex linear algebra for the 1x1 / 2x2 / 4x4 (and 4x2 isometry)
// matrices that appear in two-qubit channel calculations. Everything is
// stored inline; there is no heap allocation and no external dependency.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace qrl {

using Complex = std::complex<double>;

/// Row-major dense complex matrix with at most 4 rows and 4 columns.
class Matrix {
 public:
  static constexpr std::size_t kMaxDim = 4;

  Matrix() = default;
  /// Zero matrix. Throws DimensionError when a dimension exceeds kMaxDim.
  Matrix(std::size_t rows, std::size_t cols);
  /// Entries given in row-major order; the count must equal rows * cols.
  Matrix(std::size_t rows, std::size_t cols, std::initializer_list<Complex> row_major);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);
  static Matrix diagonal(std::initializer_list<double> values);
  /// Column vector.
  static Matrix column(std::initializer_list<Complex> values);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * kMaxDim + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * kMaxDim + c];
  }

  [[nodiscard]] Matrix adjoint() const;
  [[nodiscard]] Complex trace() const;
  /// True when every entry is finite.
  [[nodiscard]] bool is_finite() const noexcept;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex s) noexcept;

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, Complex s) noexcept { return a *= s; }
  friend Matrix operator*(Complex s, Matrix a) noexcept { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::array<Complex, kMaxDim * kMaxDim> data_{};
};

/// Largest entrywise modulus of a - b. Shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);
/// max |m - m^dagger| entrywise.
double hermiticity_error(const Matrix& m);
/// a b^dagger for column vectors a, b.
Matrix outer(const Matrix& a, const Matrix& b);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

Matrix kron(const Matrix& a, const Matrix& b);

enum class Subsystem { first, second };

/// Reduce a 4x4 operator on (first (x) second) to the 2x2 operator on the
/// `keep` factor, tracing out the other one.
Matrix partial_trace(const Matrix& m, Subsystem keep);

struct HermitianEig {
  std::size_t size = 0;
  std::array<double, Matrix::kMaxDim> values{};  ///< ascending
  Matrix vectors;                                ///< eigenvectors as columns

  [[nodiscard]] std::span<const double> eigenvalues() const noexcept { return {values.data(), size}; }
};

/// Eigendecomposition of a Hermitian matrix of size 1, 2 or 4. The 2x2 case is
/// closed form; 4x4 uses cyclic complex Jacobi sweeps until the off-diagonal
/// Frobenius norm drops below 1e-14 (relative to the largest entry). The
/// Hermitian part (m + m^dagger) / 2 is what gets decomposed.
HermitianEig eigh(const Matrix& m);

/// Spectral floor used for inverse fractional powers unless stated otherwise.
inline constexpr double kDefaultSpectralFloor = 1e-9;

/// m^p for Hermitian PSD m, with eigenvalues clamped below at `floor` first.
/// Throws DomainError when m is not Hermitian within 1e-10 or floor <= 0.
Matrix herm_power(const Matrix& m, double p, double floor = kDefaultSpectralFloor);

struct DensityCheck {
  bool valid = false;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double trace_error = 0.0;
  std::string failure;  ///< empty when valid

  explicit operator bool() const noexcept { return valid; }
};

/// Hermitian within `tol`, eigenvalues >= -tol and unit trace within `tol`.
DensityCheck validate_density(const Matrix& m, double tol = 1e-10);

}  // namespace qrl
