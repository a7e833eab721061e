#include "bergman/ngon.hpp"
#include "bergman/quadrature.hpp"

#include <cmath>
#include <map>
#include <queue>

namespace bergman {

namespace {

inline double dbl(double x) { return x; }
inline double dbl(const Real& x) { return x.convert_to<double>(); }

// Panels on [0,1] halving toward 1.
template <class T>
std::vector<std::pair<T, T>> graded_panels(int levels)
{
    std::vector<std::pair<T, T>> p;
    T a(0), step(T(1) / 2);
    for (int l = 0; l < levels; ++l) {
        p.emplace_back(a, a + step);
        a += step;
        step /= 2;
    }
    p.emplace_back(a, T(1));
    return p;
}

template <class C>
C ipow(const C& z, int n)
{
    C r(1), b = z;
    while (n > 0) {
        if (n & 1)
            r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

template <class C>
bool finite(const C& z)
{
    using std::isfinite;
    using boost::multiprecision::isfinite;
    return isfinite(z.real()) && isfinite(z.imag());
}

template <class T>
T tol_for(unsigned bits)
{
    if constexpr (std::is_same_v<T, double>)
        return 64 * ScalarOps<double>::eps();
    else
        return pow2(10 - int(bits));
}

} // namespace

template <class T>
NgonCore<T>::NgonCore(int N, unsigned bits) : N_(N), bits_(std::is_same_v<T, double> ? 53u : bits)
{
    using std::cos;
    using std::sin;
    if (N < 3)
        throw Error(ErrorKind::InvalidParameter, "regular polygon needs N >= 3");
    const T pi = ScalarOps<T>::pi();
    const T one(1);
    const T n(N);
    e_ = T(2) / n;
    auto G = [](const T& x) { return ScalarOps<T>::tgamma(x); };
    gpsi_ = G(one + one / n) / (G(one - one / n) * G(one + e_));
    cint_ = n * G(one - one / n) / (G(one / n) * G(one - e_));
    rot_ = C(cos(2 * pi / n), sin(2 * pi / n));
    wc_ = C(cos(pi / n), sin(pi / n));
    zmid_ = (C(one) + rot_) / T(2);
    rotpow_.resize(N);
    rotpow_[0] = C(one);
    for (int k = 1; k < N; ++k)
        rotpow_[k] = C(cos(2 * pi * T(k) / n), sin(2 * pi * T(k) / n));

    const double pid = 3.14159265358979323846;
    radB_ = 2 * std::sin(pid / N);
    radP_ = std::min(1.0, radB_);
    radM_ = 2 * std::sin(pid / (2 * N));
    count_ = std::size_t(std::ceil((bits_ + 24) * std::log(2.0) / -std::log(0.8))) + 24;

    // Laurent/Taylor expansions at infinity and at the origin.
    extL_val_.resize(count_);
    extL_der_.resize(count_);
    intA_val_.resize(count_);
    intA_der_.resize(count_);
    T pe(1), pi_(1);
    for (std::size_t m = 0; m < count_; ++m) {
        if (m > 0) {
            pe = pe * (-e_ + T(int(m)) - 1) / T(int(m));
            pi_ = pi_ * (e_ + T(int(m)) - 1) / T(int(m));
        }
        extL_der_[m] = C(pe);
        extL_val_[m] = C(pe / (one - n * T(int(m))));
        intA_der_[m] = C(pi_);
        intA_val_[m] = C(pi_ / (n * T(int(m)) + 1));
    }

    Coeffs<C> geo_plus{C(0)}, geo_minus{C(0)};
    for (int j = 0; j < N; ++j) {
        geo_plus = poly_add(geo_plus, binomial_power(C(one), C(one), j));
        geo_minus = poly_add(geo_minus, binomial_power(C(one), C(-one), j));
    }
    Coeffs<C> lin{C(one), C(one)};
    Coeffs<C> mid = poly_add(binomial_power(C(one), C(one), N), Coeffs<C>{C(one)});

    extP_der_ = power_product_series<C>({{geo_plus, e_}, {lin, T(-2)}}, count_);
    extM_der_ = power_product_series<C>({{mid, e_}, {lin, T(-2)}}, count_);
    intB_der_ = power_product_series<C>({{geo_minus, -e_}}, count_);
    intM_der_ = power_product_series<C>({{mid, -e_}}, count_);
    extP_int_.resize(count_);
    extM_int_.resize(count_);
    intB_int_.resize(count_);
    intM_int_.resize(count_);
    for (std::size_t m = 0; m < count_; ++m) {
        T mm = T(int(m));
        extP_int_[m] = extP_der_[m] / (mm + 1 + e_);
        extM_int_[m] = extM_der_[m] / (mm + 1);
        intB_int_[m] = intB_der_[m] / (mm + 1 - e_);
        intM_int_[m] = intM_der_[m] / (mm + 1);
    }

    if constexpr (std::is_same_v<T, double>) {
        for (int i = 0; i <= 20; ++i)
            for (int j = 0; j <= 10; ++j) {
                double th = pid / N * j / 10.0;
                C w = std::polar(1.0 + 0.1 * i, th);
                C v, d;
                psi_sector(w, v, d);
                ext_grid_.emplace_back(w, v);
            }
        for (int i = 0; i <= 20; ++i)
            for (int j = 0; j <= 10; ++j) {
                double th = pid / N * j / 10.0;
                C zeta = std::polar(i / 20.0, th);
                int_grid_.emplace_back(zeta, interior_sector(zeta).val);
                if (i == 0)
                    break;
            }
    }
}

template <class T>
std::size_t NgonCore<T>::terms(double ratio) const
{
    if (ratio < 1e-300)
        return 2;
    std::size_t n = std::size_t(std::ceil((bits_ + 24) * std::log(2.0) / -std::log(ratio))) + 16;
    return std::min(n, count_);
}

template <class T>
typename NgonCore<T>::Reduced NgonCore<T>::reduce(const C& p) const
{
    const double pid = 3.14159265358979323846;
    double ang = std::atan2(dbl(p.imag()), dbl(p.real()));
    long k = std::lround(ang / (2 * pid / N_));
    k = ((k % N_) + N_) % N_;
    C q = p * rotpow_[(N_ - k) % N_];
    bool cj = q.imag() < 0;
    if (cj)
        q = std::conj(q);
    return {q, int(k), cj};
}

template <class T>
std::complex<T> NgonCore<T>::unreduce(const C& v, const Reduced& r) const
{
    return (r.conj ? std::conj(v) : v) * rotpow_[r.k];
}

template <class T>
std::complex<T> NgonCore<T>::unreduce_derivative(const C& d, const Reduced& r) const
{
    return r.conj ? std::conj(d) : d;
}

template <class T>
void NgonCore<T>::psi_sector(const C& w, C& val, C& der) const
{
    double aw = dbl(cabs(w));
    double rL = aw >= 1 ? std::pow(aw, -N_) : 2.0;
    double rP = dbl(cabs(w - C(1))) / radP_;
    double rM = dbl(cabs(w - wc_)) / radM_;
    double best = std::min({rL, rP, rM});
    if (best > 0.8) {
        if (aw < 1)
            throw Error(ErrorKind::DomainError, "exterior map continuation outside its expansion discs");
        val = psi_quadrature(w, 32, 48);
        der = gpsi_ * cpow(C(1) - C(1) / ipow(w, N_), e_);
        return;
    }
    if (best == rL) {
        C x = C(1) / ipow(w, N_);
        std::size_t n = terms(rL);
        val = gpsi_ * w * horner(extL_val_, x, n);
        der = gpsi_ * horner(extL_der_, x, n);
    } else if (best == rP) {
        C t = w - C(1);
        std::size_t n = terms(rP);
        C te = cpow(t, e_);
        der = gpsi_ * te * horner(extP_der_, t, n);
        val = C(1) + gpsi_ * te * t * horner(extP_int_, t, n);
    } else {
        C v = w / wc_ - C(1);
        std::size_t n = terms(rM);
        der = gpsi_ * horner(extM_der_, v, n);
        val = zmid_ + gpsi_ * wc_ * v * horner(extM_int_, v, n);
    }
}

template <class T>
void NgonCore<T>::psi(const C& w, C& val, C& der) const
{
    Reduced r = reduce(w);
    C v, d;
    psi_sector(r.p, v, d);
    val = unreduce(v, r);
    der = unreduce_derivative(d, r);
}

template <class T>
typename NgonCore<T>::Eval NgonCore<T>::interior_sector(const C& zeta) const
{
    double az = dbl(cabs(zeta));
    double rA = az < 1 ? std::pow(az, N_) : 2.0;
    double rB = dbl(cabs(C(1) - zeta)) / radB_;
    double rM = dbl(cabs(zeta - wc_)) / radM_;
    double best = std::min({rA, rB, rM});
    Eval ev;
    C t = C(1) - zeta;
    T k = T(1) / (T(1) - e_);
    if (best > 0.8) {
        ev.val = interior_quadrature(zeta, 32, 48);
        ev.der = cint_ * cpow(C(1) - ipow(zeta, N_), -e_);
        ev.dzdu = -ev.der * cpow(t, e_) * k;
        return ev;
    }
    if (best == rB) {
        std::size_t n = terms(rB);
        C s = horner(intB_der_, t, n);
        if (t == C(0)) {
            ev.val = C(1);
            ev.der = C(0);
        } else {
            C tme = cpow(t, -e_);
            ev.der = cint_ * tme * s;
            ev.val = C(1) - cint_ * t * tme * horner(intB_int_, t, n);
        }
        ev.dzdu = -cint_ * s * k;
        return ev;
    }
    if (best == rA) {
        C x = ipow(zeta, N_);
        std::size_t n = terms(rA);
        ev.val = cint_ * zeta * horner(intA_val_, x, n);
        ev.der = cint_ * horner(intA_der_, x, n);
    } else {
        C v = zeta / wc_ - C(1);
        std::size_t n = terms(rM);
        ev.der = cint_ * horner(intM_der_, v, n);
        ev.val = zmid_ + cint_ * wc_ * v * horner(intM_int_, v, n);
    }
    ev.dzdu = -ev.der * cpow(t, e_) * k;
    return ev;
}

template <class T>
void NgonCore<T>::interior(const C& zeta, C& val, C& der) const
{
    Reduced r = reduce(zeta);
    Eval ev = interior_sector(r.p);
    val = unreduce(ev.val, r);
    der = unreduce_derivative(ev.der, r);
}

template <class T>
std::complex<T> NgonCore<T>::psi_quadrature(const C& w, int nodes, int levels) const
{
    // psi(w) = g w - int_{|w|}^inf (psi'(rho e^{i th}) - g) e^{i th} d rho, rho = |w|/tau.
    const auto& rule = gauss_legendre<T>(nodes);
    T r = cabs(w);
    C dir = w / r;
    C acc(0);
    for (const auto& [a, b] : graded_panels<T>(levels)) {
        T len = b - a;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            T tau = a + len * rule.nodes[i];
            C s = dir * (r / tau);
            C g = gpsi_ * (cpow(C(1) - C(1) / ipow(s, N_), e_) - C(1));
            acc += g * (rule.weights[i] * len * r / (tau * tau));
        }
    }
    return gpsi_ * w - acc * dir;
}

template <class T>
std::complex<T> NgonCore<T>::interior_quadrature(const C& zeta, int nodes, int levels) const
{
    const auto& rule = gauss_legendre<T>(nodes);
    C acc(0);
    for (const auto& [a, b] : graded_panels<T>(levels)) {
        T len = b - a;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            C s = zeta * (a + len * rule.nodes[i]);
            acc += cpow(C(1) - ipow(s, N_), -e_) * (rule.weights[i] * len);
        }
    }
    return cint_ * zeta * acc;
}

template <class T>
std::complex<T> NgonCore<T>::interior_inverse(const C& z, const C* guess) const
{
    if (z == C(0))
        return C(0);
    Reduced r = reduce(z);
    C zeta0;
    if (guess) {
        zeta0 = reduce(*guess).p;
    } else {
        double best = 1e300;
        for (const auto& [zg, fg] : int_grid_) {
            double d = dbl(cabs(fg - r.p));
            if (d < best) {
                best = d;
                zeta0 = zg;
            }
        }
    }
    if (cabs(r.p - C(1)) <= tol_for<T>(bits_))
        return unreduce(C(1), r);
    T k = T(1) - e_;
    T kinv = T(1) / k;
    C u = cpow(C(1) - zeta0, k);
    T tol = tol_for<T>(bits_);
    T prev(1);
    C zeta = zeta0;
    for (int it = 0; it < 60; ++it) {
        zeta = C(1) - cpow(u, kinv);
        Eval ev = interior_sector(zeta);
        C du = (ev.val - r.p) / ev.dzdu;
        if (!finite(du))
            break;
        T lim = cabs(u) / 2 + T(1) / 10;
        while (cabs(du) > lim)
            du /= T(2);
        u -= du;
        T step = cabs(du);
        bool floor_hit = it > 0 && step >= prev / 2 && step < sqrt(tol) * (1 + cabs(u));
        prev = step;
        if (step <= tol * (1 + cabs(u)) || floor_hit) {
            zeta = C(1) - cpow(u, kinv);
            return unreduce(zeta, r);
        }
    }
    throw Error(ErrorKind::MapInversionFailure,
                "interior map Newton did not converge at z = (" + to_decimal(dbl(z.real())) + ", " +
                    to_decimal(dbl(z.imag())) + ")");
}

template <class T>
std::complex<T> NgonCore<T>::psi_inverse(const C& z, const C* guess) const
{
    Reduced r = reduce(z);
    C w;
    if (guess) {
        w = reduce(*guess).p;
    } else if (dbl(cabs(z)) > 3.5) {
        w = r.p / gpsi_;
    } else {
        double best = 1e300;
        for (const auto& [wg, pg] : ext_grid_) {
            double d = dbl(cabs(pg - r.p));
            if (d < best) {
                best = d;
                w = wg;
            }
        }
    }
    T tol = tol_for<T>(bits_);
    if (cabs(r.p - C(1)) <= tol)
        return unreduce(C(1), r);
    const T k = T(1) + e_;
    const double pid = 3.14159265358979323846;
    const double arg_max = 0.9 * pid / dbl(k);
    T prev(1);
    for (int it = 0; it < 60; ++it) {
        C v, d;
        psi_sector(w, v, d);
        C t = w - C(1);
        C dw;
        double at = dbl(cabs(t));
        if (at < 0.5 && std::abs(std::atan2(dbl(t.imag()), dbl(t.real()))) < arg_max) {
            // Near the prevertex psi - 1 ~ t^(1+2/N): step in s = t^(1+2/N).
            C s = cpow(t, k);
            C dpds = at == 0 ? C(gpsi_ * pow(T(N_), e_) / k) : d * cpow(t, -e_) / k;
            C ds = (v - r.p) / dpds;
            if (!finite(ds))
                break;
            T lim = cabs(s) / 2 + T(1) / 20;
            while (cabs(ds) > lim)
                ds /= T(2);
            C wn = C(1) + cpow(s - ds, T(1) / k);
            dw = w - wn;
            w = wn;
        } else {
            dw = (v - r.p) / d;
            if (!finite(dw))
                break;
            T lim = cabs(w) / 4;
            while (cabs(dw) > lim)
                dw /= T(2);
            w -= dw;
        }
        T step = cabs(dw);
        bool floor_hit = it > 0 && step >= prev / 2 && step < sqrt(tol) * (1 + cabs(w));
        prev = step;
        if (step <= tol * (1 + cabs(w)) || floor_hit)
            return unreduce(w, r);
    }
    throw Error(ErrorKind::MapInversionFailure,
                "exterior map Newton did not converge at z = (" + to_decimal(dbl(z.real())) + ", " +
                    to_decimal(dbl(z.imag())) + ")");
}

template <class T>
std::complex<T> NgonCore<T>::fold(const C& z0, C& a, bool& odd) const
{
    using std::cos;
    using std::sin;
    const T pi = ScalarOps<T>::pi();
    const T d = cos(pi / T(N_));
    C z = z0;
    a = C(1);
    odd = false;
    if (!finite(z0))
        throw Error(ErrorKind::DomainError, "reflection fold of a non-finite point");
    const T slack = tol_for<T>(bits_) * (T(1) + cabs(z0));
    for (int it = 0; it < 100000; ++it) {
        int worst = -1;
        T excess = slack;
        for (int k = 0; k < N_; ++k) {
            C nk = rotpow_[k] * wc_;
            T s = (z * std::conj(nk)).real() - d;
            if (s > excess) {
                excess = s;
                worst = k;
            }
        }
        if (worst < 0)
            return z;
        C nk = rotpow_[worst] * wc_;
        z = T(2) * d * nk - nk * nk * std::conj(z);
        a = -nk * nk * std::conj(a);
        odd = !odd;
    }
    throw Error(ErrorKind::DomainError, "reflection fold did not terminate");
}

template class NgonCore<double>;
template class NgonCore<Real>;

NgonMaps::NgonMaps(int N) : N_(N), hp_(N, precision_bits()), lp_(N, 53) {}

Complex NgonMaps::psi(const Complex& w) const
{
    Complex v, d;
    hp_.psi(w, v, d);
    return v;
}

Complex NgonMaps::psi_prime(const Complex& w) const
{
    Complex v, d;
    hp_.psi(w, v, d);
    return d;
}

Complex NgonMaps::phi(const Complex& z) const
{
    cdouble g = lp_.psi_inverse(to_cdouble(z), nullptr);
    Complex gg = to_complex(g);
    return hp_.psi_inverse(z, &gg);
}

Complex NgonMaps::phi_continued(const Complex& z, const Complex& guess) const
{
    cdouble g2 = to_cdouble(guess);
    cdouble gd = lp_.psi_inverse(to_cdouble(z), &g2);
    Complex gg = to_complex(gd);
    return hp_.psi_inverse(z, &gg);
}

Complex NgonMaps::varphi(const Complex& z) const
{
    cdouble g = lp_.interior_inverse(to_cdouble(z), nullptr);
    Complex gg = to_complex(g);
    return hp_.interior_inverse(z, &gg);
}

Complex NgonMaps::varphi_prime(const Complex& z) const
{
    Complex zeta = varphi(z);
    Complex v, d;
    hp_.interior(zeta, v, d);
    return Complex(1) / d;
}

Complex NgonMaps::interior_forward(const Complex& zeta) const
{
    Complex v, d;
    hp_.interior(zeta, v, d);
    return v;
}

ExtValue NgonMaps::varphi_ext(const Complex& z, Complex* derivative) const
{
    if (!has_continuation())
        return MapBackend::varphi_ext(z, derivative);
    Complex a;
    bool odd;
    Complex zf = hp_.fold(z, a, odd);
    Complex zeta = varphi(zf);
    Complex v, d;
    hp_.interior(zeta, v, d);
    Complex dv = Complex(1) / d;
    if (!odd) {
        if (derivative)
            *derivative = a * dv;
        return {zeta, false};
    }
    if (zeta == Complex(0))
        return {Complex(0), true};
    Complex cz = std::conj(zeta);
    if (derivative)
        *derivative = -std::conj(a * dv) / (cz * cz);
    return {Complex(1) / cz, false};
}

ExtValue NgonMaps::h_direct(const Complex& w, Complex* derivative) const
{
    if (!has_continuation())
        return MapBackend::h_direct(w, derivative);
    Complex z, dz;
    hp_.psi(w, z, dz);
    Complex dv;
    ExtValue r = varphi_ext(z, derivative ? &dv : nullptr);
    if (derivative && !r.infinite)
        *derivative = dv * dz;
    return r;
}

cdouble NgonMaps::h_direct_fast(cdouble w, cdouble* derivative) const
{
    if (!has_continuation())
        return MapBackend::h_direct_fast(w, derivative);
    cdouble z, dz;
    lp_.psi(w, z, dz);
    cdouble a;
    bool odd;
    cdouble zf = lp_.fold(z, a, odd);
    cdouble zeta = lp_.interior_inverse(zf, nullptr);
    cdouble v, d;
    lp_.interior(zeta, v, d);
    cdouble dv = 1.0 / d;
    if (!odd) {
        if (derivative)
            *derivative = a * dv * dz;
        return zeta;
    }
    cdouble cz = std::conj(zeta);
    if (derivative)
        *derivative = -std::conj(a * dv) / (cz * cz) * dz;
    return 1.0 / cz;
}

std::vector<std::pair<cdouble, bool>> NgonMaps::tile_centres(double radius) const
{
    const double pid = 3.14159265358979323846;
    const double d = std::cos(pid / N_);
    struct Tile {
        cdouble a, b;
        bool odd;
    };
    std::vector<std::pair<cdouble, bool>> out;
    std::map<std::pair<long long, long long>, bool> seen;
    auto key = [](cdouble b) {
        return std::make_pair(std::llround(b.real() * 1e8), std::llround(b.imag() * 1e8));
    };
    std::queue<Tile> q;
    q.push({1.0, 0.0, false});
    seen[key(0.0)] = true;
    while (!q.empty()) {
        Tile t = q.front();
        q.pop();
        out.emplace_back(t.b, t.odd);
        for (int k = 0; k < N_; ++k) {
            cdouble n = std::polar(1.0, pid * (2 * k + 1) / N_);
            Tile s;
            if (!t.odd) {
                s = {-t.a * n * n, 2 * d * t.a * n + t.b, true};
            } else {
                cdouble cn = std::conj(n);
                s = {-t.a * cn * cn, 2 * d * t.a * cn + t.b, false};
            }
            if (std::abs(s.b) > radius || seen.count(key(s.b)))
                continue;
            seen[key(s.b)] = true;
            q.push(s);
        }
    }
    return out;
}

std::vector<HPole> NgonMaps::h_poles(const Real& r_lo) const
{
    if (!has_continuation())
        return MapBackend::h_poles(r_lo);
    double rl = r_lo.convert_to<double>();
    double radius = lp_.psi_scale() / rl + 2.0;
    std::vector<HPole> poles;
    for (const auto& [c, odd] : tile_centres(radius)) {
        if (odd || std::abs(c) < 1e-12)
            continue;
        Complex w = phi(to_complex(c));
        if (cabs(w) * r_lo >= 1)
            continue;
        poles.push_back({Complex(1) / std::conj(w), 1});
    }
    return poles;
}

} // namespace bergman
