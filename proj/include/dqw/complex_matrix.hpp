#pragma once

// Small dense complex matrices (dim 2 or 4 in walk use) with the Pauli/gamma
// constructors, Kronecker products and the analytic 2x2 Hermitian
// eigendecomposition that the coin solver is built on.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqw {

using cplx = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
        if (dim < 1) throw std::invalid_argument("ComplexMatrix: dim must be positive");
    }
    ComplexMatrix(int dim, std::initializer_list<cplx> entries) : ComplexMatrix(dim) {
        if (static_cast<int>(entries.size()) != dim * dim)
            throw std::invalid_argument("ComplexMatrix: entry count mismatch");
        size_t i = 0;
        for (const cplx& v : entries) a_[i++] = v;
    }

    static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }
    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }
    cplx& at(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
    const cplx& at(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }
    const std::vector<cplx>& entries() const { return a_; }
    std::vector<cplx>& entries() { return a_; }

    // y = M x for column vectors stored contiguously.
    void apply(const cplx* x, cplx* y) const {
        for (int r = 0; r < dim_; ++r) {
            cplx s = 0.0;
            const cplx* row = a_.data() + static_cast<size_t>(r) * dim_;
            for (int c = 0; c < dim_; ++c) s += row[c] * x[c];
            y[r] = s;
        }
    }

private:
    int dim_ = 0;
    std::vector<cplx> a_;
};

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix product: dim mismatch");
    const int n = a.dim();
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < n; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix sum: dim mismatch");
    ComplexMatrix r = a;
    for (int i = 0; i < a.dim() * a.dim(); ++i) r.entries()[i] += b.entries()[i];
    return r;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix difference: dim mismatch");
    ComplexMatrix r = a;
    for (int i = 0; i < a.dim() * a.dim(); ++i) r.entries()[i] -= b.entries()[i];
    return r;
}

inline ComplexMatrix operator*(const cplx& s, const ComplexMatrix& a) {
    ComplexMatrix r = a;
    for (cplx& v : r.entries()) v *= s;
    return r;
}

inline ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix r(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) r.at(i, j) = std::conj(a.at(j, i));
    return r;
}

/// Max-norm over entries.
inline double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const cplx& v : a.entries()) m = std::max(m, std::abs(v));
    return m;
}

inline double unitarity_residual(const ComplexMatrix& a) {
    return max_abs(dagger(a) * a - ComplexMatrix::identity(a.dim()));
}

inline double hermiticity_residual(const ComplexMatrix& a) {
    return max_abs(a - dagger(a));
}

/// sigma_0 = I2, sigma_1, sigma_2, sigma_3.
inline ComplexMatrix pauli(int index) {
    const cplx i(0.0, 1.0);
    switch (index) {
        case 0: return ComplexMatrix(2, {1, 0, 0, 1});
        case 1: return ComplexMatrix(2, {0, 1, 1, 0});
        case 2: return ComplexMatrix(2, {0, -i, i, 0});
        case 3: return ComplexMatrix(2, {1, 0, 0, -1});
        default: throw std::invalid_argument("pauli: index must be 0..3");
    }
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    ComplexMatrix r(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cplx aij = a.at(i, j);
            for (int p = 0; p < nb; ++p)
                for (int q = 0; q < nb; ++q)
                    r.at(i * nb + p, j * nb + q) = aij * b.at(p, q);
        }
    return r;
}

/// Standard Dirac-representation gamma matrices: gamma^0 = sigma3 x I2,
/// gamma^j = i sigma2 x sigma_j.
inline ComplexMatrix gamma(int mu) {
    if (mu == 0) return kron(pauli(3), pauli(0));
    if (mu >= 1 && mu <= 3) return kron(cplx(0.0, 1.0) * pauli(2), pauli(mu));
    throw std::invalid_argument("gamma: index must be 0..3");
}

struct Eigen2 {
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    std::array<cplx, 2> v_plus{};
    std::array<cplx, 2> v_minus{};
};

namespace detail {

// Multiply a 2-vector by the phase making its first component with
// magnitude above tol real positive.
inline void fix_phase(std::array<cplx, 2>& v) {
    const double tol = 1e-300;
    cplx lead = (std::abs(v[0]) > tol) ? v[0] : v[1];
    const double r = std::abs(lead);
    if (r == 0.0) return;
    const cplx ph = std::conj(lead) / r;
    v[0] *= ph;
    v[1] *= ph;
}

}  // namespace detail

/// Analytic eigendecomposition of a 2x2 Hermitian matrix. lambda_plus >=
/// lambda_minus, eigenvectors orthonormal, phase fixed by making the first
/// nonzero component real positive.
inline Eigen2 hermitian_eigen2(const ComplexMatrix& m) {
    if (m.dim() != 2) throw std::invalid_argument("hermitian_eigen2: dim must be 2");
    if (hermiticity_residual(m) > 1e-10)
        throw std::invalid_argument("hermitian_eigen2: matrix is not Hermitian");
    const double a = m.at(0, 0).real();
    const double d = m.at(1, 1).real();
    const cplx b = 0.5 * (m.at(0, 1) + std::conj(m.at(1, 0)));

    const double half_tr = 0.5 * (a + d);
    const double half_gap = 0.5 * (a - d);
    const double disc = std::sqrt(half_gap * half_gap + std::norm(b));

    Eigen2 e;
    e.lambda_plus = half_tr + disc;
    e.lambda_minus = half_tr - disc;

    std::array<cplx, 2> v;
    if (std::abs(b) > 0.0) {
        v = {b, cplx(e.lambda_plus - a)};
        // (b, lambda-a) degenerates when lambda == a; that needs b == 0.
        if (std::abs(v[1]) == 0.0 && std::abs(e.lambda_plus - d) > 0.0)
            v = {cplx(e.lambda_plus - d), std::conj(b)};
    } else {
        v = (a >= d) ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
    }
    const double nrm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    v[0] /= nrm;
    v[1] /= nrm;
    detail::fix_phase(v);
    e.v_plus = v;
    // Exact orthonormal complement of v_plus.
    e.v_minus = {-std::conj(v[1]), std::conj(v[0])};
    detail::fix_phase(e.v_minus);
    return e;
}

}  // namespace dqw
