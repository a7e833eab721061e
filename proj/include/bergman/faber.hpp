#pragma once

#include "bergman/moments.hpp"

#include <map>
#include <mutex>

namespace bergman {

using Poly = std::vector<Complex>;

Complex eval_coeffs(const Poly& a, const Complex& z);

// psi(w) = lead*w + c[0] + sum_{k>=1} c[k] w^-k with capacity = 1/lead = phi'(infinity).
struct LaurentSeries {
    Real capacity;
    Complex lead;
    std::vector<Complex> c;
    Real radius;
    int count = 0;
    int samples = 0;
    Real tail_error;

    Complex eval(const Complex& w) const;
    Complex eval_prime(const Complex& w) const;
};

// Smallest power of two M whose truncation on |w| = R should clear 2^(32-P).
int default_laurent_count(const Real& R);
LaurentSeries psi_laurent(const DomainModel& d, const Real& R, int M);

struct FaberSystem {
    std::vector<Poly> F;
    std::vector<Poly> G;
    Real capacity;
    int degree_max = 0;
    Real route_gap;
};

FaberSystem faber_polys(const LaurentSeries& L, int N);

Real epsilon_nn(const MomentMatrix& M, const FaberSystem& fab, int n);
Real beta_nn(const OrthonormalSystem& sys, const FaberSystem& fab, const MomentMatrix& M, int n);
// (n+1) gamma^(2(n+1)) / lambda_n^2 - 1 + beta_nn + eps_nn.
Real identity_residual(const OrthonormalSystem& sys, const FaberSystem& fab, const MomentMatrix& M, int n);

// G_n(z) / (phi'(z) phi(z)^n) - 1 and phi(z)^n - F_n(z) at an exterior point.
Complex second_kind_ratio(const DomainModel& d, const FaberSystem& fab, int n, const Complex& z);
Complex faber_remainder(const DomainModel& d, const FaberSystem& fab, int n, const Complex& z);

struct ContourScheme {
    Real radius = Real(3) / 2;
    int samples = 0;
};

// alpha(n, k) for 0 <= n, k <= kmax, from one trapezoid transform per k on |w| = radius.
CMatrix<Real> alpha_table(const DomainModel& d, const OrthonormalSystem& sys, int kmax,
                          const ContourScheme& q = {});
Complex alpha(const DomainModel& d, const OrthonormalSystem& sys, int n, int k, const ContourScheme& q = {});

// h(n, 0..J) from the alpha table (needs indices up to n+J).
std::vector<Complex> hg_tables(const CMatrix<Real>& alpha, int n, int J);

// Trapezoid samples of h on the unit circle, refined by doubling and shared across points.
class QEvaluator {
public:
    explicit QEvaluator(const DomainModel& d, int max_samples = 1 << 13);

    // Q_0(z) .. Q_nmax(z).
    std::vector<Complex> eval(const Complex& z, int n_max) const;
    int last_samples() const { return last_samples_; }

private:
    const std::vector<Complex>& level(int K) const;

    const DomainModel& d_;
    int max_samples_;
    mutable std::map<int, std::vector<Complex>> cache_;
    mutable std::mutex mu_;
    mutable int last_samples_ = 0;
};

Complex Q_n(const DomainModel& d, int n, const Complex& z);

struct CoefficientTables {
    CMatrix<Real> alpha;
    std::vector<Real> eps;
    std::vector<Real> beta;
    std::vector<Real> identity;
    std::map<int, std::vector<Complex>> h;
    int J = 0;
    Real alpha_lower_max;
    Real fit_alpha_C;
    Real fit_h_B;
};

CoefficientTables build_tables(const DomainModel& d, const OrthonormalSystem& sys, const MomentMatrix& M,
                               const FaberSystem& fab, const std::vector<int>& h_rows, int J);

// max |alpha(n,k)| sqrt(k+1) over n+1 <= k <= kmax.
Real fit_alpha_constant(const CMatrix<Real>& alpha, int n, int kmax);
// Smallest B with |h(n,j)| <= B/(n+j+1) (1+(j-1)/(n+1))^B for every supplied row.
Real fit_h_constant(const std::map<int, std::vector<Complex>>& rows);

} // namespace bergman
