#pragma once

#include "bergman/errors.hpp"
#include "bergman/scalar.hpp"

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace bergman {

// Nodes and weights on [0,1].
template <class T>
struct GaussRule {
    std::vector<T> nodes;
    std::vector<T> weights;
    std::size_t size() const { return nodes.size(); }
};

namespace detail {

// Jacobi P_n^{(a,b)}(x) together with P_{n-1}.
template <class T>
std::pair<T, T> jacobi_pair(int n, const T& a, const T& b, const T& x)
{
    T p0(1);
    T p1 = (a - b) / 2 + (a + b + 2) * x / 2;
    if (n == 0)
        return {p0, T(0)};
    for (int k = 2; k <= n; ++k) {
        T s = T(2 * k) + a + b;
        T c1 = 2 * T(k) * (T(k) + a + b) * (s - 2);
        T c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b);
        T c3 = 2 * (T(k) + a - 1) * (T(k) + b - 1) * s;
        T p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = std::move(p1);
        p1 = std::move(p2);
    }
    return {p1, p0};
}

// Golub-Welsch in double, used as Newton starting values.
inline std::vector<double> jacobi_nodes_double(int n, double a, double b)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        double s = 2.0 * k + a + b;
        J(k, k) = k == 0 ? (b - a) / (a + b + 2) : (b * b - a * a) / (s * (s + 2));
        if (k + 1 < n) {
            double m = k + 1;
            double t = 2 * m + a + b;
            double v = 4 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1) * (t - 1));
            J(k, k + 1) = J(k + 1, k) = std::sqrt(v);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    std::vector<double> x(es.eigenvalues().data(), es.eigenvalues().data() + n);
    return x;
}

template <class T>
GaussRule<T> build_jacobi(int n, const T& a, const T& b)
{
    using std::abs;
    if (n < 1)
        throw Error(ErrorKind::InvalidParameter, "quadrature order must be positive");
    auto guess = jacobi_nodes_double(n, ScalarOps<double>::from(Real(a)), ScalarOps<double>::from(Real(b)));
    T tol = ScalarOps<T>::eps() * 8;
    T ab = a + b;
    // Gamma-function factor of the Christoffel numbers.
    T g = ScalarOps<T>::tgamma(T(n) + a + 1) * ScalarOps<T>::tgamma(T(n) + b + 1)
          / (ScalarOps<T>::tgamma(T(n) + ab + 1) * ScalarOps<T>::tgamma(T(n) + 1));
    T scale = g * pow(T(2), ab + 1);
    GaussRule<T> r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        T x(guess[i]);
        T dp(0);
        for (int it = 0; it < 100; ++it) {
            auto [p, pm] = jacobi_pair(n, a, b, x);
            T s = T(2 * n) + ab;
            dp = (T(n) * ((a - b) - s * x) * p + 2 * (T(n) + a) * (T(n) + b) * pm) / (s * (1 - x * x));
            T dx = p / dp;
            x -= dx;
            if (abs(dx) <= tol * (1 + abs(x)))
                break;
        }
        auto [p, pm] = jacobi_pair(n, a, b, x);
        T s = T(2 * n) + ab;
        dp = (T(n) * ((a - b) - s * x) * p + 2 * (T(n) + a) * (T(n) + b) * pm) / (s * (1 - x * x));
        T w = scale / ((1 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]; weight (1-x)^a (1+x)^b -> 2^{a+b+1} (1-t)^a t^b
        r.nodes[i] = (x + 1) / 2;
        r.weights[i] = w / pow(T(2), ab + 1);
    }
    return r;
}

} // namespace detail

// Rule for integral_0^1 t^a f(t) dt (a > -1). a = 0 gives Gauss-Legendre.
template <class T>
const GaussRule<T>& gauss_jacobi_left(int n, const T& a)
{
    static std::mutex mu;
    static std::map<std::tuple<int, std::string, unsigned>, std::shared_ptr<GaussRule<T>>> cache;
    std::string key_a = to_sci(Real(a), 30);
    auto key = std::make_tuple(n, key_a, std::is_same_v<T, double> ? 0u : precision_bits());
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end())
        return *it->second;
    auto rule = std::make_shared<GaussRule<T>>(detail::build_jacobi<T>(n, T(0), a));
    cache.emplace(key, rule);
    return *rule;
}

template <class T>
const GaussRule<T>& gauss_legendre(int n)
{
    return gauss_jacobi_left<T>(n, T(0));
}

} // namespace bergman
