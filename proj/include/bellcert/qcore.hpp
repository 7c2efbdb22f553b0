// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bellcert {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHermitianTol = 1e-10;

// ---------------------------------------------------------------------------
// Small real 3-vector helpers
// ---------------------------------------------------------------------------
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 normalized(const Vec3& a) {
  double n = norm(a);
  if (!(n > 0)) throw std::invalid_argument("cannot normalize zero vector");
  return (1.0 / n) * a;
}
inline Vec3 mat_vec(const Mat3& m, const Vec3& v) {
  return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}
inline Mat3 transpose(const Mat3& m) {
  Mat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
  return t;
}

// ---------------------------------------------------------------------------
// ComplexMatrix: dense, row-major
// ---------------------------------------------------------------------------
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("matrix dimensions must be positive");
  }
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("matrix dimensions must be positive");
    if (data_.size() != rows * cols)
      throw std::invalid_argument("entry count does not match rows*cols");
  }
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0)
      throw std::invalid_argument("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("ragged matrix rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static ComplexMatrix diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  // |v><v|
  static ComplexMatrix outer(std::span<const cplx> v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j)
        m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  std::span<const cplx> entries() const noexcept { return data_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix a(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
  }
  ComplexMatrix conjugate() const {
    ComplexMatrix a = *this;
    for (auto& z : a.data_) z = std::conj(z);
    return a;
  }
  cplx trace() const {
    require_square("trace");
    cplx t = 0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }
  double max_abs() const {
    double m = 0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("matrix product shape mismatch");
    ComplexMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  double max_abs_diff(const ComplexMatrix& o) const {
    require_same_shape(o);
    double m = 0;
    for (std::size_t k = 0; k < data_.size(); ++k)
      m = std::max(m, std::abs(data_[k] - o.data_[k]));
    return m;
  }

 private:
  void require_square(const char* op) const {
    if (!square()) throw std::invalid_argument(std::string(op) + ": matrix not square");
  }
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return k;
}

// index 0 is the identity, 1..3 are sigma_x, sigma_y, sigma_z
inline const ComplexMatrix& pauli(int j) {
  static const std::array<ComplexMatrix, 4> p = {
      ComplexMatrix{{1, 0}, {0, 1}},
      ComplexMatrix{{0, 1}, {1, 0}},
      ComplexMatrix{{0, cplx(0, -1)}, {cplx(0, 1), 0}},
      ComplexMatrix{{1, 0}, {0, -1}},
  };
  if (j < 0 || j > 3) throw std::invalid_argument("pauli index out of range");
  return p[static_cast<std::size_t>(j)];
}

// r . sigma
inline ComplexMatrix pauli_dot(const Vec3& r) {
  return ComplexMatrix{{r[2], cplx(r[0], -r[1])}, {cplx(r[0], r[1]), -r[2]}};
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
  if (!m.square()) return false;
  const double scale = std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol * scale) return false;
  return true;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  ComplexMatrix h = m + m.adjoint();
  h *= 0.5;
  return h;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver (cyclic complex Jacobi)
// ---------------------------------------------------------------------------
struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

namespace detail {

inline HermitianEigen jacobi_eigen(ComplexMatrix a) {
  const std::size_t n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  double total = 0;
  for (auto z : a.entries()) total += std::norm(z);
  const double stop = 1e-30 * std::max(total, 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off <= stop) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::abs(apq);
        if (g < 1e-300) continue;
        const cplx e = apq / g;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2 * g);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1));
        if (theta < 0) t = -t;
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        // U = D R with D = diag(1, conj(e)) on (p, q)
        const cplx upp = c, upq = s, uqp = -s * std::conj(e), uqq = c * std::conj(e);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = a(q, p) = 0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace detail

inline HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  if (!m.square()) throw std::invalid_argument("eigensolve: matrix not square");
  if (!is_hermitian(m)) throw std::invalid_argument("eigensolve: matrix not hermitian");
  return detail::jacobi_eigen(hermitian_part(m));
}

inline std::vector<double> eigenvalues(const ComplexMatrix& m) {
  return hermitian_eigen(m).values;
}

// f applied through the spectral decomposition
template <class F>
ComplexMatrix hermitian_function(const ComplexMatrix& m, F&& f) {
  const auto eig = hermitian_eigen(m);
  const std::size_t n = m.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.values[k]);
    if (fk == 0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += fk * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return out;
}

inline double trace_norm(const ComplexMatrix& m) {
  double s = 0;
  for (double l : hermitian_eigen(m).values) s += std::abs(l);
  return s;
}

// eigen-decomposition of a real symmetric 3x3 matrix, ascending
inline std::pair<Vec3, Mat3> symmetric_eigen3(const Mat3& m) {
  ComplexMatrix c(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) c(i, j) = 0.5 * (m[i][j] + m[j][i]);
  const auto eig = detail::jacobi_eigen(c);
  Vec3 vals{};
  Mat3 vecs{};  // vecs[k] is eigenvector k
  for (std::size_t k = 0; k < 3; ++k) {
    vals[k] = eig.values[k];
    // Jacobi on a real matrix keeps the vectors real.
    for (std::size_t i = 0; i < 3; ++i) vecs[k][i] = eig.vectors(i, k).real();
  }
  return {vals, vecs};
}

// descending singular values of a real 3x3 matrix
inline Vec3 singular_values(const Mat3& t) {
  Mat3 tt{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) tt[i][j] += t[i][k] * t[j][k];
  auto [vals, vecs] = symmetric_eigen3(tt);
  (void)vecs;
  return {std::sqrt(std::max(0.0, vals[2])), std::sqrt(std::max(0.0, vals[1])),
          std::sqrt(std::max(0.0, vals[0]))};
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------
class PureState {
 public:
  explicit PureState(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw std::invalid_argument("pure state needs amplitudes");
    double n2 = 0;
    for (auto a : amps_) n2 += std::norm(a);
    if (std::abs(std::sqrt(n2) - 1) > 1e-12)
      throw std::invalid_argument("pure state amplitudes not normalized");
  }
  static PureState normalized(std::vector<cplx> amplitudes) {
    double n2 = 0;
    for (auto a : amplitudes) n2 += std::norm(a);
    if (!(n2 > 0)) throw std::invalid_argument("zero vector is not a state");
    const double s = 1 / std::sqrt(n2);
    for (auto& a : amplitudes) a *= s;
    return PureState(std::move(amplitudes));
  }

  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const cplx> amplitudes() const& noexcept { return amps_; }
  // a view into a temporary would dangle
  std::span<const cplx> amplitudes() const&& = delete;
  ComplexMatrix projector() const { return ComplexMatrix::outer(amps_); }

 private:
  std::vector<cplx> amps_;
};

class DensityOperator {
 public:
  explicit DensityOperator(const ComplexMatrix& m) {
    if (!m.square()) throw std::invalid_argument("density operator must be square");
    if (!is_hermitian(m)) throw std::invalid_argument("density operator not hermitian");
    m_ = hermitian_part(m);
    if (std::abs(m_.trace() - cplx(1)) > 1e-10)
      throw std::invalid_argument("density operator trace differs from 1");
    const auto ev = detail::jacobi_eigen(m_).values;
    if (ev.front() < -1e-10)
      throw std::invalid_argument("density operator has a negative eigenvalue");
  }
  explicit DensityOperator(const PureState& psi) : DensityOperator(psi.projector()) {}

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  ComplexMatrix m_;
};

inline PureState bell_state() {
  const double s = 1 / std::sqrt(2.0);
  return PureState({s, 0, 0, s});
}

inline PureState basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::invalid_argument("basis index out of range");
  std::vector<cplx> a(dim);
  a[index] = 1;
  return PureState(std::move(a));
}

inline PureState product_state(const PureState& a, const PureState& b) {
  std::vector<cplx> v;
  v.reserve(a.dim() * b.dim());
  for (auto x : a.amplitudes())
    for (auto y : b.amplitudes()) v.push_back(x * y);
  return PureState::normalized(std::move(v));
}

// Qubit state with Bloch vector r (up to global phase).
inline PureState qubit_state(const Vec3& r) {
  const Vec3 u = normalized(r);
  const double theta = std::acos(std::clamp(u[2], -1.0, 1.0));
  const double phi = std::atan2(u[1], u[0]);
  return PureState({std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)});
}

// Haar-random pure state; Rng needs normal().
template <class Rng>
PureState random_pure_state(std::size_t dim, Rng& rng) {
  std::vector<cplx> v(dim);
  for (auto& a : v) {
    const double re = rng.normal();
    const double im = rng.normal();
    a = cplx(re, im);
  }
  return PureState::normalized(std::move(v));
}

// ---------------------------------------------------------------------------
// Partial trace
// ---------------------------------------------------------------------------
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                   std::span<const std::size_t> keep) {
  if (dims.empty()) throw std::invalid_argument("partial trace: no subsystems");
  std::size_t total = 1;
  for (auto d : dims) {
    if (d == 0) throw std::invalid_argument("partial trace: zero dimension");
    total *= d;
  }
  if (!m.square() || m.rows() != total)
    throw std::invalid_argument("partial trace: dims do not match operator");
  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) {
    if (k >= dims.size() || kept[k])
      throw std::invalid_argument("partial trace: bad keep index set");
    kept[k] = true;
  }

  std::size_t kdim = 1, tdim = 1;
  for (std::size_t s = 0; s < dims.size(); ++s) (kept[s] ? kdim : tdim) *= dims[s];

  // split each full index into (kept index, traced index)
  std::vector<std::size_t> kidx(total), tidx(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i, ki = 0, ti = 0, kmul = 1, tmul = 1;
    for (std::size_t s = dims.size(); s-- > 0;) {
      const std::size_t digit = rem % dims[s];
      rem /= dims[s];
      if (kept[s]) {
        ki += digit * kmul;
        kmul *= dims[s];
      } else {
        ti += digit * tmul;
        tmul *= dims[s];
      }
    }
    kidx[i] = ki;
    tidx[i] = ti;
  }
  std::vector<std::vector<std::size_t>> groups(tdim);
  for (std::size_t i = 0; i < total; ++i) groups[tidx[i]].push_back(i);

  ComplexMatrix out(kdim, kdim);
  for (const auto& g : groups)
    for (auto i : g)
      for (auto j : g) out(kidx[i], kidx[j]) += m(i, j);
  return out;
}

inline DensityOperator partial_trace(const DensityOperator& rho,
                                     std::span<const std::size_t> dims,
                                     std::span<const std::size_t> keep) {
  return DensityOperator(partial_trace(rho.matrix(), dims, keep));
}

// ---------------------------------------------------------------------------
// Two-qubit Bloch decomposition and entanglement measures
// ---------------------------------------------------------------------------
struct TwoQubitState {
  ComplexMatrix density;
  Vec3 a{};
  Vec3 b{};
  Mat3 T{};
  double C = 0;
};

inline double concurrence(const DensityOperator& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("concurrence needs a two-qubit state");
  // lambda_k are the singular values of A = sqrt(rho) YY conj(sqrt(rho)). Taking them
  // from the Hermitian dilation [[0, A], [A^dag, 0]] keeps the small ones accurate.
  const ComplexMatrix yy = kron(pauli(2), pauli(2));
  // eigenvalues at rounding level are zero; their square roots would not be
  const ComplexMatrix s = hermitian_function(rho.matrix(), [](double l) { return l > 1e-14 ? std::sqrt(l) : 0.0; });
  const ComplexMatrix a = s * yy * s.conjugate();
  ComplexMatrix h(8, 8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      h(i, j + 4) = a(i, j);
      h(j + 4, i) = std::conj(a(i, j));
    }
  const auto ev = eigenvalues(h);  // ascending; the top four are the singular values
  const double c = ev[7] - ev[6] - ev[5] - ev[4];
  return std::clamp(c, 0.0, 1.0);
}

inline ComplexMatrix bloch_reconstruct(const Vec3& a, const Vec3& b, const Mat3& T) {
  ComplexMatrix rho = kron(pauli(0), pauli(0));
  for (int j = 0; j < 3; ++j) {
    rho += a[j] * kron(pauli(j + 1), pauli(0));
    rho += b[j] * kron(pauli(0), pauli(j + 1));
    for (int k = 0; k < 3; ++k) rho += T[j][k] * kron(pauli(j + 1), pauli(k + 1));
  }
  rho *= 0.25;
  return rho;
}

inline TwoQubitState bloch_decompose(const DensityOperator& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("bloch decomposition needs dim 4");
  TwoQubitState s;
  s.density = rho.matrix();
  auto expect = [&](int i, int j) {
    return (rho.matrix() * kron(pauli(i), pauli(j))).trace().real();
  };
  for (int j = 0; j < 3; ++j) {
    s.a[j] = expect(j + 1, 0);
    s.b[j] = expect(0, j + 1);
    for (int k = 0; k < 3; ++k) s.T[j][k] = expect(j + 1, k + 1);
  }
  s.C = concurrence(rho);
  return s;
}

// sqrt(2 (1 - tr rho_A^2)); equals the Wootters value for two qubits
inline double pure_concurrence(const PureState& psi, std::size_t dim_a, std::size_t dim_b) {
  if (dim_a * dim_b != psi.dim()) throw std::invalid_argument("bipartition does not match state");
  const std::array<std::size_t, 2> dims{dim_a, dim_b};
  const std::array<std::size_t, 1> keep{0};
  const ComplexMatrix ra = partial_trace(psi.projector(), dims, keep);
  const double purity = (ra * ra).trace().real();
  return std::clamp(std::sqrt(std::max(0.0, 2 * (1 - purity))), 0.0, 1.0);
}

// Fidelity with the Bell state maximized over Bob's local unitaries.
inline double reduced_fidelity(const PureState& psi, std::size_t dim_a, std::size_t dim_b) {
  if (dim_a < 2 || dim_b < 1 || dim_a * dim_b != psi.dim())
    throw std::invalid_argument("reduced fidelity: bad bipartition");
  const auto amp = psi.amplitudes();
  // G = M M^dagger with M the first two rows of the coefficient matrix
  cplx g00 = 0, g01 = 0, g11 = 0;
  for (std::size_t j = 0; j < dim_b; ++j) {
    const cplx m0 = amp[j], m1 = amp[dim_b + j];
    g00 += m0 * std::conj(m0);
    g01 += m0 * std::conj(m1);
    g11 += m1 * std::conj(m1);
  }
  const double tr = g00.real() + g11.real();
  const double det = std::max(0.0, g00.real() * g11.real() - std::norm(g01));
  // (s1 + s2)^2 = tr + 2 sqrt(det)
  return std::clamp(0.5 * (tr + 2 * std::sqrt(det)), 0.0, 1.0);
}

inline double reduced_fidelity(const DensityOperator& rho, std::size_t dim_a, std::size_t dim_b) {
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  if (std::abs(purity - 1) > 1e-10)
    throw std::invalid_argument("reduced fidelity is defined for pure states only");
  const auto eig = hermitian_eigen(rho.matrix());
  const std::size_t n = rho.dim();
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = eig.vectors(i, n - 1);
  return reduced_fidelity(PureState::normalized(std::move(v)), dim_a, dim_b);
}

}  // namespace bellcert
