#include "bergman/moments.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

namespace {

struct Panel {
    Real a, b;
};

bool is_corner(const DomainModel& d, const Complex& p)
{
    for (const auto& c : d.corners)
        if (cabs(c.location - p) < pow2(-40))
            return true;
    return false;
}

// Base panels scaled with the polynomial degree, optionally split dyadically toward corners.
std::vector<Panel> arc_panels(const DomainModel& d, const AnalyticArc& arc, int N, const QuadratureScheme& q,
                              int refine)
{
    int base = ((2 * N + 4) + q.nodes_per_panel - 1) / q.nodes_per_panel + 1;
    base <<= refine;
    std::vector<Panel> out;
    bool c0 = q.grading_levels > 0 && is_corner(d, arc.start);
    bool c1 = q.grading_levels > 0 && is_corner(d, arc.end);
    for (int i = 0; i < base; ++i) {
        Real a = Real(i) / base, b = Real(i + 1) / base;
        if (i == 0 && c0) {
            std::vector<Panel> g;
            Real lo = a, hi = b;
            for (int l = 0; l < q.grading_levels; ++l) {
                Real mid = (lo + hi) / 2;
                g.push_back({mid, hi});
                hi = mid;
            }
            g.push_back({lo, hi});
            out.insert(out.end(), g.rbegin(), g.rend());
        } else if (i == base - 1 && c1) {
            Real lo = a, hi = b;
            for (int l = 0; l < q.grading_levels; ++l) {
                Real mid = (lo + hi) / 2;
                out.push_back({lo, mid});
                lo = mid;
            }
            out.push_back({lo, hi});
        } else {
            out.push_back({a, b});
        }
    }
    return out;
}

// Sum over nodes of z^j conj(z)^(k+1)/(k+1) z' w, scaled by 1/(2 pi i).
CMatrix<Real> accumulate(const DomainModel& d, int N, int nodes, const QuadratureScheme& q, int refine)
{
    const auto& rule = gauss_legendre<Real>(nodes);
    CMatrix<Real> M = CMatrix<Real>::Zero(N + 1, N + 1);
    std::vector<Complex> zp(N + 1), cz(N + 1);
    std::vector<Real> inv(N + 2);
    for (int k = 1; k <= N + 1; ++k)
        inv[k] = Real(1) / k;
    Complex scale = Complex(1) / (Complex(0, 2) * pi_value());
    for (const auto& arc : d.arcs) {
        for (const auto& p : arc_panels(d, arc, N, q, refine)) {
            Real len = p.b - p.a;
            for (std::size_t i = 0; i < rule.size(); ++i) {
                Real t = p.a + len * rule.nodes[i];
                Complex z = arc.z(t);
                Complex w = arc.dz(t) * (rule.weights[i] * len) * scale;
                Complex zc = std::conj(z);
                zp[0] = Complex(1);
                for (int j = 1; j <= N; ++j)
                    zp[j] = zp[j - 1] * z;
                Complex c = zc * w;
                for (int k = 0; k <= N; ++k) {
                    cz[k] = c * inv[k + 1];
                    c *= zc;
                }
                for (int k = 0; k <= N; ++k) {
                    const Complex& ck = cz[k];
                    for (int j = 0; j <= N; ++j)
                        M(j, k) += zp[j] * ck;
                }
            }
        }
    }
    return M;
}

Real max_abs(const CMatrix<Real>& A)
{
    Real m(0);
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) {
            Real v = cabs(A(i, j));
            if (v > m)
                m = v;
        }
    return m;
}

void check_finite(const CMatrix<Real>& A)
{
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (!boost::multiprecision::isfinite(A(i, j).real()) || !boost::multiprecision::isfinite(A(i, j).imag()))
                throw Error(ErrorKind::QuadratureError, "non-finite moment");
}

} // namespace

MomentMatrix gram(const DomainModel& d, int N, const QuadratureScheme& q)
{
    if (N < 0)
        throw Error(ErrorKind::InvalidParameter, "negative degree");
    if (q.nodes_per_panel < 8 || q.grading_levels < 0)
        throw Error(ErrorKind::InvalidParameter, "quadrature scheme needs >= 8 nodes and >= 0 grading levels");
    Real tol = pow2(32 - int(precision_bits()));
    Real gap;
    for (int refine = 0; refine < 4; ++refine) {
        CMatrix<Real> a = accumulate(d, N, q.nodes_per_panel, q, refine);
        CMatrix<Real> b = accumulate(d, N, 2 * q.nodes_per_panel, q, refine);
        check_finite(b);
        gap = max_abs(a - b) / (max_abs(b) > 1 ? max_abs(b) : Real(1));
        if (gap <= tol) {
            MomentMatrix m;
            m.degree = N;
            m.precision = precision_bits();
            m.self_check_gap = gap;
            m.M = (b + b.adjoint()) / Real(2);
            return m;
        }
    }
    throw Error(ErrorKind::QuadratureError,
                "moment self-check gap " + to_sci(gap, 6) + " above 2^(32-P) after panel refinement");
}

Complex boundary_moment(const DomainModel& d, int j, int k, const QuadratureScheme& q)
{
    if (j < 0 || k < 0)
        throw Error(ErrorKind::InvalidParameter, "moment indices must be non-negative");
    int N = std::max(j, k);
    Real tol = pow2(32 - int(precision_bits()));
    for (int refine = 0; refine < 4; ++refine) {
        Complex v[2];
        for (int r = 0; r < 2; ++r) {
            const auto& rule = gauss_legendre<Real>(q.nodes_per_panel << r);
            Complex acc(0);
            for (const auto& arc : d.arcs)
                for (const auto& p : arc_panels(d, arc, N, q, refine)) {
                    Real len = p.b - p.a;
                    for (std::size_t i = 0; i < rule.size(); ++i) {
                        Real t = p.a + len * rule.nodes[i];
                        Complex z = arc.z(t);
                        Complex zc = std::conj(z);
                        Complex f(1);
                        for (int e = 0; e < j; ++e)
                            f *= z;
                        for (int e = 0; e <= k; ++e)
                            f *= zc;
                        acc += f * arc.dz(t) * (rule.weights[i] * len);
                    }
                }
            v[r] = acc / (Complex(0, 2) * pi_value() * Real(k + 1));
            if (!boost::multiprecision::isfinite(v[r].real()) || !boost::multiprecision::isfinite(v[r].imag()))
                throw Error(ErrorKind::QuadratureError, "non-finite moment");
        }
        Real scale = cabs(v[1]) > 1 ? cabs(v[1]) : Real(1);
        if (cabs(v[0] - v[1]) <= tol * scale)
            return v[1];
    }
    throw Error(ErrorKind::QuadratureError, "moment self-check failed");
}

OrthonormalSystem orthonormalize(const MomentMatrix& M)
{
    OrthonormalSystem s = orthonormalize<Real>(M.M);
    s.precision = M.precision;
    return s;
}

Complex eval_p(const OrthonormalSystem& sys, int n, const Complex& z) { return eval_poly(sys, n, z); }

Complex eval_p_prime(const OrthonormalSystem& sys, int n, const Complex& z)
{
    if (n < 0 || n > sys.degree_max)
        throw Error(ErrorKind::DegreeOutOfRange, "degree " + std::to_string(n) + " not in system");
    Complex acc(0);
    for (int j = n; j >= 1; --j)
        acc = acc * z + sys.coeffs(n, j) * Real(j);
    return acc;
}

std::vector<Complex> eval_all(const OrthonormalSystem& sys, int n, const Complex& z)
{
    if (n > sys.degree_max)
        throw Error(ErrorKind::DegreeOutOfRange, "degree " + std::to_string(n) + " not in system");
    std::vector<Complex> zp(n + 1);
    zp[0] = Complex(1);
    for (int j = 1; j <= n; ++j)
        zp[j] = zp[j - 1] * z;
    std::vector<Complex> out(n + 1);
    for (int m = 0; m <= n; ++m) {
        Complex acc(0);
        for (int j = 0; j <= m; ++j)
            acc += sys.coeffs(m, j) * zp[j];
        out[m] = acc;
    }
    return out;
}

Real gram_norm2(const MomentMatrix& M, const CVector<Real>& v)
{
    Complex acc(0);
    for (int j = 0; j < v.size(); ++j)
        for (int k = 0; k < v.size(); ++k)
            acc += v(j) * M.M(j, k) * std::conj(v(k));
    return acc.real();
}

Real orthonormality_residual(const OrthonormalSystem& sys, const MomentMatrix& M)
{
    int n = sys.degree_max + 1;
    CMatrix<Real> A = sys.coeffs.topLeftCorner(n, n);
    CMatrix<Real> G = A * M.M.topLeftCorner(n, n) * A.adjoint();
    G -= CMatrix<Real>::Identity(n, n);
    return max_abs(G);
}

} // namespace bergman
