#pragma once

#include "bergman/domain.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

namespace bergman {

template <class S>
using CMatrix = Eigen::Matrix<std::complex<S>, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using CVector = Eigen::Matrix<std::complex<S>, Eigen::Dynamic, 1>;

struct QuadratureScheme {
    int nodes_per_panel = 48;
    int grading_levels = 0;
};

// M(j,k) = int_D z^j conj(z)^k dA / pi.
struct MomentMatrix {
    CMatrix<Real> M;
    int degree = 0;
    unsigned precision = 0;
    Real self_check_gap;
};

Complex boundary_moment(const DomainModel& d, int j, int k, const QuadratureScheme& q);
MomentMatrix gram(const DomainModel& d, int N, const QuadratureScheme& q);

// Row n holds the monomial coefficients of p_n; leading[n] = lambda_n.
template <class S>
struct OrthonormalSystemT {
    CMatrix<S> coeffs;
    std::vector<S> leading;
    int degree_max = 0;
    unsigned precision = 0;
};
using OrthonormalSystem = OrthonormalSystemT<Real>;

// Cholesky M = L L^*, coefficient table = L^{-1}.
template <class S>
OrthonormalSystemT<S> orthonormalize(const CMatrix<S>& M)
{
    using std::sqrt;
    const int n = int(M.rows());
    // Eigen's blocked LLT needs a rank update that the mpfr scalar does not provide.
    CMatrix<S> L = CMatrix<S>::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        S d = M(j, j).real();
        for (int k = 0; k < j; ++k)
            d -= std::norm(L(j, k));
        if (!(d > 0))
            throw Error(ErrorKind::PrecisionExhausted, "non-positive Cholesky pivot at degree " + std::to_string(j) +
                                                           "; raise precision or lower degree");
        S ljj = sqrt(d);
        L(j, j) = std::complex<S>(ljj);
        for (int i = j + 1; i < n; ++i) {
            std::complex<S> s = M(i, j);
            for (int k = 0; k < j; ++k)
                s -= L(i, k) * std::conj(L(j, k));
            L(i, j) = s / ljj;
        }
    }
    OrthonormalSystemT<S> sys;
    sys.coeffs = L.template triangularView<Eigen::Lower>().solve(CMatrix<S>::Identity(n, n));
    sys.degree_max = n - 1;
    sys.leading.resize(n);
    for (int i = 0; i < n; ++i) {
        sys.coeffs(i, i) = std::complex<S>(sys.coeffs(i, i).real(), S(0));
        sys.leading[i] = sys.coeffs(i, i).real();
        for (int j = i + 1; j < n; ++j)
            sys.coeffs(i, j) = std::complex<S>(0);
    }
    return sys;
}

OrthonormalSystem orthonormalize(const MomentMatrix& M);

template <class S, class Z>
Z eval_poly(const OrthonormalSystemT<S>& sys, int n, const Z& z)
{
    if (n < 0 || n > sys.degree_max)
        throw Error(ErrorKind::DegreeOutOfRange, "degree " + std::to_string(n) + " not in system");
    Z acc(0);
    for (int j = n; j >= 0; --j)
        acc = acc * z + Z(sys.coeffs(n, j));
    return acc;
}

Complex eval_p(const OrthonormalSystem& sys, int n, const Complex& z);
Complex eval_p_prime(const OrthonormalSystem& sys, int n, const Complex& z);
// Values p_0(z) .. p_n(z).
std::vector<Complex> eval_all(const OrthonormalSystem& sys, int n, const Complex& z);

// max |<p_m, p_n> - delta_mn| against M.
Real orthonormality_residual(const OrthonormalSystem& sys, const MomentMatrix& M);

// Quadratic form v^* M v for a coefficient vector (index = power of z).
Real gram_norm2(const MomentMatrix& M, const CVector<Real>& v);

} // namespace bergman
