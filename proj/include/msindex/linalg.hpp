#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "msindex/errors.hpp"

namespace msindex::linalg {

using cplx = std::complex<double>;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
T conj_value(const T& v) {
    if constexpr (is_complex<T>::value)
        return std::conj(v);
    else
        return v;
}

// Dense row-major matrix with value semantics.
template <class T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<T>> init) : rows_(init.size()) {
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<T>& data() const { return data_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block exceeds matrix bounds");
        Matrix out(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionMismatch("block exceeds matrix bounds");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    Matrix conj() const {
        Matrix out = *this;
        for (auto& v : out.data_) v = conj_value(v);
        return out;
    }

    Matrix adjoint() const { return transpose().conj(); }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, static_cast<double>(std::abs(v)));
        return m;
    }

    T trace() const {
        T s{};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
        return s;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o, "+");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        check_same(o, "-");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    Matrix& operator*=(const T& s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
    friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void check_same(const Matrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionMismatch(std::string("shape mismatch in matrix ") + op);
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RMatrix = Matrix<double>;
using CMatrix = Matrix<cplx>;

template <class T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("inner dimensions differ: " + std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()));
    Matrix<T> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

template <class T>
Matrix<T> hstack(const Matrix<T>& left, const Matrix<T>& right) {
    if (left.rows() != right.rows()) throw DimensionMismatch("hstack needs equal row counts");
    Matrix<T> out(left.rows(), left.cols() + right.cols());
    out.set_block(0, 0, left);
    out.set_block(0, left.cols(), right);
    return out;
}

inline RMatrix real_part(const CMatrix& m) {
    RMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).real();
    return out;
}

inline RMatrix imag_part(const CMatrix& m) {
    RMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).imag();
    return out;
}

inline CMatrix to_complex(const RMatrix& m) {
    CMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline CMatrix compose(const RMatrix& re, const RMatrix& im) {
    if (re.rows() != im.rows() || re.cols() != im.cols()) throw DimensionMismatch("compose needs equal shapes");
    CMatrix out(re.rows(), re.cols());
    for (std::size_t i = 0; i < re.rows(); ++i)
        for (std::size_t j = 0; j < re.cols(); ++j) out(i, j) = cplx(re(i, j), im(i, j));
    return out;
}

// Solves A X = B by Gaussian elimination with partial pivoting.
template <class T>
Matrix<T> solve(const Matrix<T>& a, const Matrix<T>& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionMismatch("solve needs a square coefficient matrix");
    if (b.rows() != n) throw DimensionMismatch("solve right-hand side has wrong row count");
    const double scale = a.frobenius_norm();
    const double pivot_floor = 1e-14 * scale;
    Matrix<T> lu = a;
    Matrix<T> x = b;
    const std::size_t m = b.cols();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu(k, k));
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(lu(r, k)) > best) {
                best = std::abs(lu(r, k));
                piv = r;
            }
        if (!(best > pivot_floor) || scale == 0.0) throw SingularMatrix("pivot below 1e-14 * ||A|| in solve");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(x(k, j), x(piv, j));
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const T f = lu(r, k) / lu(k, k);
            if (f == T{}) continue;
            for (std::size_t j = k; j < n; ++j) lu(r, j) -= f * lu(k, j);
            for (std::size_t j = 0; j < m; ++j) x(r, j) -= f * x(k, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            T s = x(kk, j);
            for (std::size_t c = kk + 1; c < n; ++c) s -= lu(kk, c) * x(c, j);
            x(kk, j) = s / lu(kk, kk);
        }
    }
    return x;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
    return solve(a, Matrix<T>::identity(a.rows()));
}

// ||M - M^H||_F / ||M||_F, zero for the zero matrix.
template <class T>
double hermitian_defect(const Matrix<T>& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("hermitian defect needs a square matrix");
    const double norm = m.frobenius_norm();
    if (norm == 0.0) return 0.0;
    return (m - m.adjoint()).frobenius_norm() / norm;
}

template <class T>
Matrix<T> symmetrized(const Matrix<T>& m) {
    Matrix<T> out = m + m.adjoint();
    out *= T{0.5};
    return out;
}

struct SignCounts {
    int positive = 0;
    int negative = 0;
    int zero = 0;
};

struct EigenResult {
    std::vector<double> eigenvalues;  // descending
    double zero_tol_used = 0.0;
    SignCounts counts;
};

inline SignCounts count_signs(const std::vector<double>& values, double zero_tol) {
    SignCounts c;
    for (double v : values) {
        if (std::abs(v) <= zero_tol)
            ++c.zero;
        else if (v > 0.0)
            ++c.positive;
        else
            ++c.negative;
    }
    return c;
}

namespace detail {

inline constexpr int kMaxSweeps = 60;
inline constexpr double kOffDiagonalTol = 1e-13;
inline constexpr double kAdjointTol = 1e-9;

// Cyclic Jacobi rotations on a real symmetric matrix; returns the unsorted diagonal.
inline std::vector<double> jacobi_eigenvalues(RMatrix a) {
    const std::size_t n = a.rows();
    const double norm = a.frobenius_norm();
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };
    bool converged = false;
    for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
        if (off_norm() <= kOffDiagonalTol * norm) {
            converged = true;
            break;
        }
        if (sweep == kMaxSweeps) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::hypot(t, 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    if (!converged) throw NonConvergence("cyclic Jacobi did not reach off-diagonal tolerance in 60 sweeps");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a(i, i);
    return out;
}

inline RMatrix real_embedding(const CMatrix& m) {
    const std::size_t n = m.rows();
    RMatrix re = real_part(m);
    RMatrix im = imag_part(m);
    RMatrix out(2 * n, 2 * n);
    out.set_block(0, 0, re);
    out.set_block(n, n, re);
    out.set_block(n, 0, im);
    im *= -1.0;
    out.set_block(0, n, im);
    return out;
}

}  // namespace detail

// Eigenvalues of a real symmetric or complex Hermitian matrix, descending.
template <class T>
EigenResult eig_selfadjoint(const Matrix<T>& m, double zero_tol) {
    if (m.rows() != m.cols()) throw DimensionMismatch("eigen-decomposition needs a square matrix");
    if (hermitian_defect(m) > detail::kAdjointTol) throw NotSelfAdjoint("matrix is not self-adjoint within 1e-9");
    const Matrix<T> sym = symmetrized(m);
    std::vector<double> values;
    if constexpr (is_complex<T>::value) {
        std::vector<double> doubled = detail::jacobi_eigenvalues(detail::real_embedding(sym));
        std::sort(doubled.begin(), doubled.end(), std::greater<>());
        values.resize(sym.rows());
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    } else {
        values = detail::jacobi_eigenvalues(sym);
        std::sort(values.begin(), values.end(), std::greater<>());
    }
    EigenResult res;
    res.eigenvalues = std::move(values);
    res.zero_tol_used = zero_tol;
    res.counts = count_signs(res.eigenvalues, zero_tol);
    return res;
}

}  // namespace msindex::linalg
