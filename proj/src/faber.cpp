#include "bergman/faber.hpp"
#include "bergman/fft.hpp"

#include <cmath>

namespace bergman {

namespace {

double log2_of(const Real& x) { return std::log2(x.convert_to<double>()); }

// Sample count that pushes trapezoid aliasing on |w| = R below 2^-P after losing R^deg to cancellation.
int contour_samples(const Real& R, int deg, int floor_count)
{
    double lr = log2_of(R);
    long long need = (long long)std::ceil((precision_bits() + deg * lr + 32) / lr);
    return next_pow2(std::max<long long>(need, floor_count));
}

std::vector<Complex> circle_points(const Real& R, int K)
{
    std::vector<Complex> w(K);
    Real step = 2 * pi_value() / Real(K);
    for (int j = 0; j < K; ++j)
        w[j] = R * polar_unit(step * Real(j));
    return w;
}

Real poly_abs_sum(const Poly& p)
{
    Real s(0);
    for (const auto& c : p)
        s += cabs(c);
    return s;
}

CVector<Real> as_vector(const Poly& p)
{
    CVector<Real> v(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        v(i) = p[i];
    return v;
}

} // namespace

Complex eval_coeffs(const Poly& a, const Complex& z)
{
    Complex acc(0);
    for (std::size_t j = a.size(); j-- > 0;)
        acc = acc * z + a[j];
    return acc;
}

Complex LaurentSeries::eval(const Complex& w) const
{
    Complex u = Complex(1) / w;
    Complex acc(0);
    for (std::size_t k = c.size(); k-- > 1;)
        acc = (acc + c[k]) * u;
    return lead * w + c[0] + acc;
}

Complex LaurentSeries::eval_prime(const Complex& w) const
{
    Complex u = Complex(1) / w;
    Complex acc(0);
    for (std::size_t k = c.size(); k-- > 1;)
        acc = (acc - c[k] * Real(int(k))) * u;
    return lead + acc * u;
}

int default_laurent_count(const Real& R)
{
    double lr = log2_of(R);
    return next_pow2((long long)std::ceil((precision_bits() - 16) / lr));
}

LaurentSeries psi_laurent(const DomainModel& d, const Real& R, int M)
{
    if (!(R > 1))
        throw Error(ErrorKind::InvalidParameter, "Laurent radius must exceed 1");
    if (M < 1)
        throw Error(ErrorKind::InvalidParameter, "Laurent count must be positive");
    const int K = next_pow2(8LL * M);
    std::vector<Complex> w = circle_points(R, K);
    std::vector<Complex> f(K);
    for (int j = 0; j < K; ++j)
        f[j] = d.psi(w[j]);
    fft(f);
    LaurentSeries L;
    L.radius = R;
    L.count = M;
    L.samples = K;
    L.lead = f[1] / (Real(K) * R);
    L.capacity = Real(1) / cabs(L.lead);
    L.c.resize(M + 1);
    Real Rk(1);
    for (int k = 0; k <= M; ++k) {
        L.c[k] = f[(K - k) % K] * Rk / Real(K);
        Rk *= R;
    }
    Real worst(0);
    Real step = 2 * pi_value() / Real(K);
    for (int j = 0; j < 64; ++j) {
        Complex wj = R * polar_unit(step * (Real(j) * Real(K / 64) + Real(1) / 2));
        Real e = cabs(d.psi(wj) - L.eval(wj));
        if (e > worst)
            worst = e;
    }
    L.tail_error = worst;
    if (worst > pow2(32 - int(precision_bits())))
        throw Error(ErrorKind::LaurentTail, "Laurent truncation error " + to_sci(worst, 4) + " on |w| = " +
                                                to_sci(R, 6) + " with M = " + std::to_string(M) +
                                                "; increase M or the radius");
    return L;
}

FaberSystem faber_polys(const LaurentSeries& L, int N)
{
    if (N < 0)
        throw Error(ErrorKind::InvalidParameter, "negative Faber degree");
    if (N + 1 > L.count)
        throw Error(ErrorKind::InvalidParameter, "Laurent series too short for requested Faber degree");
    const Real gamma = L.capacity;
    const Complex g = Complex(1) / L.lead;
    const int top = N + 1;

    // Route (a): F_{n+1} = g [ (z - c0) F_n - sum_{k=1}^n c_k F_{n-k} - n c_n ].
    std::vector<Poly> Fa(top + 1);
    Fa[0] = {Complex(1)};
    for (int n = 0; n < top; ++n) {
        Poly next(n + 2, Complex(0));
        for (int j = 0; j <= n; ++j) {
            next[j + 1] += Fa[n][j];
            next[j] -= L.c[0] * Fa[n][j];
        }
        for (int k = 1; k <= n; ++k)
            for (int j = 0; j <= n - k; ++j)
                next[j] -= L.c[k] * Fa[n - k][j];
        next[0] -= Real(n) * L.c[n];
        for (auto& v : next)
            v *= g;
        Fa[n + 1] = std::move(next);
    }

    // Route (b): coefficient of z^j in phi^n is the w^(-n-1) coefficient of psi^(-j-1) psi'.
    const Real& R = L.radius;
    const int K = contour_samples(R, top + 1, 4 * (top + 2));
    std::vector<Complex> w = circle_points(R, K);
    std::vector<Complex> inv(K), dpsi(K), cur(K);
    for (int i = 0; i < K; ++i) {
        inv[i] = Complex(1) / L.eval(w[i]);
        dpsi[i] = L.eval_prime(w[i]);
        cur[i] = dpsi[i];
    }
    std::vector<Poly> Fb(top + 1);
    for (int n = 0; n <= top; ++n)
        Fb[n].assign(n + 1, Complex(0));
    std::vector<Complex> buf(K);
    for (int j = 0; j <= top; ++j) {
        for (int i = 0; i < K; ++i) {
            cur[i] *= inv[i];
            buf[i] = cur[i];
        }
        fft(buf);
        Real Rn = R;
        for (int n = 0; n <= top; ++n) {
            if (j <= n)
                Fb[n][j] = buf[K - n - 1] * Rn / Real(K);
            Rn *= R;
        }
    }

    FaberSystem fs;
    fs.capacity = gamma;
    fs.degree_max = N;
    fs.route_gap = Real(0);
    for (int n = 0; n <= top; ++n) {
        Real scale(1);
        for (const auto& c : Fa[n])
            if (cabs(c) > scale)
                scale = cabs(c);
        for (int j = 0; j <= n; ++j) {
            Real gap = cabs(Fa[n][j] - Fb[n][j]) / scale;
            if (gap > fs.route_gap)
                fs.route_gap = gap;
        }
    }
    if (fs.route_gap > pow2(48 - int(precision_bits())))
        throw Error(ErrorKind::FaberInconsistency,
                    "Faber recursion and contour projection differ by " + to_sci(fs.route_gap, 4));
    fs.F = std::move(Fb);
    fs.G.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        const Poly& f = fs.F[n + 1];
        Poly gpoly(n + 1);
        for (int j = 0; j <= n; ++j)
            gpoly[j] = f[j + 1] * Real(j + 1) / Real(n + 1);
        fs.G[n] = std::move(gpoly);
    }
    return fs;
}

Real epsilon_nn(const MomentMatrix& M, const FaberSystem& fab, int n)
{
    if (n < 0 || n > fab.degree_max || n > M.degree)
        throw Error(ErrorKind::DegreeOutOfRange, "epsilon_nn degree " + std::to_string(n) + " out of range");
    const Poly& g = fab.G[n];
    Real eps = 1 - Real(n + 1) * gram_norm2(M, as_vector(g));
    Real s = poly_abs_sum(g);
    if (eps < -pow2(64 - int(precision_bits())) * Real(n + 1) * s * s)
        throw Error(ErrorKind::PrecisionExhausted, "epsilon_nn negative beyond tolerance at n = " + std::to_string(n));
    return eps;
}

Real beta_nn(const OrthonormalSystem& sys, const FaberSystem& fab, const MomentMatrix& M, int n)
{
    if (n < 0 || n > fab.degree_max || n > sys.degree_max || n > M.degree)
        throw Error(ErrorKind::DegreeOutOfRange, "beta_nn degree " + std::to_string(n) + " out of range");
    using boost::multiprecision::pow;
    Real ratio = pow(fab.capacity, n + 1) / sys.leading[n];
    Poly q = fab.G[n];
    for (int j = 0; j <= n; ++j)
        q[j] -= ratio * sys.coeffs(n, j);
    return Real(n + 1) * gram_norm2(M, as_vector(q));
}

Real identity_residual(const OrthonormalSystem& sys, const FaberSystem& fab, const MomentMatrix& M, int n)
{
    using boost::multiprecision::pow;
    Real lam = sys.leading[n];
    Real lhs = Real(n + 1) * pow(fab.capacity, 2 * (n + 1)) / (lam * lam);
    return lhs - 1 + beta_nn(sys, fab, M, n) + epsilon_nn(M, fab, n);
}

Complex second_kind_ratio(const DomainModel& d, const FaberSystem& fab, int n, const Complex& z)
{
    if (n < 0 || n > fab.degree_max)
        throw Error(ErrorKind::DegreeOutOfRange, "second-kind degree out of range");
    Complex w = d.phi(z);
    Complex dw = d.phi_prime(z);
    Complex wn(1);
    for (int i = 0; i < n; ++i)
        wn *= w;
    return eval_coeffs(fab.G[n], z) / (dw * wn) - Complex(1);
}

Complex faber_remainder(const DomainModel& d, const FaberSystem& fab, int n, const Complex& z)
{
    if (n < 0 || n > fab.degree_max + 1)
        throw Error(ErrorKind::DegreeOutOfRange, "Faber degree out of range");
    Complex w = d.phi(z);
    Complex wn(1);
    for (int i = 0; i < n; ++i)
        wn *= w;
    return wn - eval_coeffs(fab.F[n], z);
}

CMatrix<Real> alpha_table(const DomainModel& d, const OrthonormalSystem& sys, int kmax, const ContourScheme& q)
{
    if (kmax < 0 || kmax > sys.degree_max)
        throw Error(ErrorKind::DegreeOutOfRange, "alpha table degree out of range");
    if (!(q.radius > 1))
        throw Error(ErrorKind::InvalidParameter, "alpha contour radius must exceed 1");
    const int K = q.samples > 0 ? next_pow2(q.samples) : contour_samples(q.radius, kmax, 4 * (kmax + 1));
    std::vector<Complex> w = circle_points(q.radius, K);
    std::vector<std::vector<Complex>> vals(K);
    std::vector<Complex> dpsi(K);
    for (int i = 0; i < K; ++i) {
        Complex z = d.psi(w[i]);
        dpsi[i] = d.psi_prime(w[i]);
        vals[i] = eval_all(sys, kmax, z);
    }
    CMatrix<Real> A = CMatrix<Real>::Zero(kmax + 1, kmax + 1);
    std::vector<Complex> buf(K);
    for (int k = 0; k <= kmax; ++k) {
        for (int i = 0; i < K; ++i)
            buf[i] = vals[i][k] * dpsi[i];
        fft(buf);
        Real Rn(1);
        for (int n = 0; n <= kmax; ++n) {
            A(n, k) = std::conj(buf[n] / (Real(K) * Rn));
            Rn *= q.radius;
        }
    }
    for (int k = 0; k <= kmax; ++k)
        for (int n = 0; n <= kmax; ++n) {
            const Complex& a = A(n, k);
            if (!boost::multiprecision::isfinite(a.real()) || !boost::multiprecision::isfinite(a.imag()))
                throw Error(ErrorKind::QuadratureError, "non-finite alpha value");
        }
    return A;
}

Complex alpha(const DomainModel& d, const OrthonormalSystem& sys, int n, int k, const ContourScheme& q)
{
    if (n < 0 || k < 0 || k > sys.degree_max)
        throw Error(ErrorKind::DegreeOutOfRange, "alpha index out of range");
    const int K = q.samples > 0 ? next_pow2(q.samples) : contour_samples(q.radius, std::max(n, k), 4 * (k + 1));
    std::vector<Complex> w = circle_points(q.radius, K);
    Complex acc(0);
    for (int i = 0; i < K; ++i) {
        Complex wn(1);
        for (int e = 0; e < n; ++e)
            wn *= w[i];
        acc += eval_p(sys, k, d.psi(w[i])) * d.psi_prime(w[i]) / wn;
    }
    return std::conj(acc / Real(K));
}

std::vector<Complex> hg_tables(const CMatrix<Real>& A, int n, int J)
{
    if (n < 0 || J < 0 || n + J >= A.rows())
        throw Error(ErrorKind::DegreeOutOfRange, "alpha table too small for h(n, 0..J)");
    const int top = int(A.rows()) - 1;
    std::vector<Complex> h(J + 1);
    h[0] = Complex(1);
    std::vector<Complex> g(top + 1, Complex(0));
    for (int k = n + 1; k <= top; ++k)
        g[k] = -A(n, k);
    Real floor = pow2(16 - int(precision_bits()));
    for (int m = 0; m < J; ++m) {
        int i = n + m + 1;
        const Complex& diag = A(i, i);
        if (cabs(diag) < floor)
            throw Error(ErrorKind::PrecisionExhausted, "alpha(" + std::to_string(i) + "," + std::to_string(i) +
                                                           ") below tolerance");
        h[m + 1] = g[i] / diag;
        for (int k = i + 1; k <= top; ++k)
            g[k] -= h[m + 1] * A(i, k);
    }
    return h;
}

QEvaluator::QEvaluator(const DomainModel& d, int max_samples) : d_(d), max_samples_(max_samples)
{
    if (!d.has_interior())
        throw Error(ErrorKind::InteriorMapUnavailable, "Q_n needs the interior map of " + d.name);
}

const std::vector<Complex>& QEvaluator::level(int K) const
{
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(K);
    if (it != cache_.end())
        return it->second;
    std::vector<Complex> h(K);
    auto prev = cache_.find(K / 2);
    Real step = 2 * pi_value() / Real(K);
    Real offset = Real(1) / 10;
    for (int j = 0; j < K; ++j) {
        if (prev != cache_.end() && j % 2 == 0) {
            h[j] = prev->second[j / 2];
            continue;
        }
        h[j] = d_.varphi(d_.psi(polar_unit(step * Real(j) + offset)));
    }
    return cache_.emplace(K, std::move(h)).first->second;
}

std::vector<Complex> QEvaluator::eval(const Complex& z, int n_max) const
{
    if (n_max < 0)
        throw Error(ErrorKind::InvalidParameter, "negative Q_n degree");
    Complex v = d_.varphi(z);
    Complex dv = d_.varphi_prime(z);
    Real gap = 1 - cabs(v);
    if (gap < pow2(-30))
        throw Error(ErrorKind::NearBoundary, "point at distance " + to_sci(Real(d_.boundary_distance(to_cdouble(z))), 4) +
                                                 " from the boundary; Q_n integrand blows up");
    Real tol = pow2(48 - int(precision_bits()));
    // Rotated nodes keep the prevertices (corner images) off the grid.
    Real offset = Real(1) / 10;
    std::vector<Complex> prev;
    for (int K = 64; K <= max_samples_; K *= 2) {
        const auto& h = level(K);
        Real step = 2 * pi_value() / Real(K);
        std::vector<Complex> acc(n_max + 1, Complex(0));
        Real scale(0);
        for (int j = 0; j < K; ++j) {
            Complex w = polar_unit(step * Real(j) + offset);
            Complex t = w / (h[j] - v);
            Real a = cabs(t);
            if (a > scale)
                scale = a;
            for (int n = 0; n <= n_max; ++n) {
                acc[n] += t;
                t *= w;
            }
        }
        for (int n = 0; n <= n_max; ++n)
            acc[n] *= dv * Real(n + 1) / Real(K);
        if (!prev.empty()) {
            bool ok = true;
            for (int n = 0; n <= n_max && ok; ++n)
                ok = cabs(acc[n] - prev[n]) <= tol * scale * cabs(dv) * Real(n + 1);
            if (ok) {
                last_samples_ = K;
                return acc;
            }
        }
        prev = std::move(acc);
    }
    throw Error(ErrorKind::NearBoundary,
                "Q_n trapezoid did not settle within " + std::to_string(max_samples_) + " samples; point at distance " +
                    to_sci(Real(d_.boundary_distance(to_cdouble(z))), 4) + " from the boundary");
}

Complex Q_n(const DomainModel& d, int n, const Complex& z)
{
    QEvaluator q(d);
    return q.eval(z, n)[n];
}

Real fit_alpha_constant(const CMatrix<Real>& A, int n, int kmax)
{
    Real c(0);
    for (int k = n + 1; k <= kmax && k < A.cols(); ++k) {
        Real v = cabs(A(n, k)) * sqrt(Real(k + 1));
        if (v > c)
            c = v;
    }
    return c;
}

Real fit_h_constant(const std::map<int, std::vector<Complex>>& rows)
{
    auto holds = [&](double B) {
        for (const auto& [n, h] : rows)
            for (std::size_t j = 1; j < h.size(); ++j) {
                double bound = B / double(n + j + 1) * std::pow(1.0 + (double(j) - 1) / (n + 1), B);
                if (cabs(h[j]).convert_to<double>() > bound)
                    return false;
            }
        return true;
    };
    double hi = 1;
    while (!holds(hi)) {
        hi *= 2;
        if (hi > 1e6)
            return Real(hi);
    }
    double lo = 0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (holds(mid) ? hi : lo) = mid;
    }
    return Real(hi);
}

CoefficientTables build_tables(const DomainModel& d, const OrthonormalSystem& sys, const MomentMatrix& M,
                               const FaberSystem& fab, const std::vector<int>& h_rows, int J)
{
    CoefficientTables t;
    int kmax = sys.degree_max;
    t.alpha = alpha_table(d, sys, kmax);
    int nmax = std::min({sys.degree_max, fab.degree_max, M.degree});
    for (int n = 0; n <= nmax; ++n) {
        t.eps.push_back(epsilon_nn(M, fab, n));
        t.beta.push_back(beta_nn(sys, fab, M, n));
        Real lam = sys.leading[n];
        using boost::multiprecision::pow;
        Real lhs = Real(n + 1) * pow(fab.capacity, 2 * (n + 1)) / (lam * lam);
        t.identity.push_back(lhs - 1 + t.beta.back() + t.eps.back());
    }
    t.alpha_lower_max = Real(0);
    for (int n = 0; n <= kmax; ++n)
        for (int k = 0; k < n; ++k)
            if (cabs(t.alpha(n, k)) > t.alpha_lower_max)
                t.alpha_lower_max = cabs(t.alpha(n, k));
    t.fit_alpha_C = Real(0);
    for (int n = 0; n < kmax; ++n) {
        Real c = fit_alpha_constant(t.alpha, n, kmax);
        if (c > t.fit_alpha_C)
            t.fit_alpha_C = c;
    }
    t.J = J;
    for (int n : h_rows) {
        int j = std::min(J, kmax - n);
        if (j >= 0)
            t.h[n] = hg_tables(t.alpha, n, j);
    }
    t.fit_h_B = t.h.empty() ? Real(0) : fit_h_constant(t.h);
    return t;
}

} // namespace bergman
