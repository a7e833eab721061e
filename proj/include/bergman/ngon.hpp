#pragma once

#include "bergman/domain.hpp"
#include "bergman/series.hpp"

namespace bergman {

// Schwarz-Christoffel maps for the regular N-gon with vertices at the N-th roots of unity.
// Interior: f(zeta) = C * int_0^zeta (1 - s^N)^(-2/N) ds, f(1) = 1, varphi = f^{-1}.
// Exterior: psi(w) = g * int (1 - s^-N)^(2/N) ds with psi(w) - g w -> 0.
// Both are evaluated from local expansions (origin / infinity, prevertex, mid-arc) chosen
// per point by convergence ratio; radial quadrature serves as fallback and cross-check.
template <class T>
class NgonCore {
public:
    using C = std::complex<T>;

    NgonCore(int N, unsigned bits);

    int sides() const { return N_; }
    const T& psi_scale() const { return gpsi_; }
    const T& interior_scale() const { return cint_; }

    void psi(const C& w, C& val, C& der) const;
    void interior(const C& zeta, C& val, C& der) const;

    // Inverses; guess may be null (grid start, double only).
    C psi_inverse(const C& z, const C* guess) const;
    C interior_inverse(const C& z, const C* guess) const;

    // Radial quadrature routes.
    C psi_quadrature(const C& w, int nodes, int levels) const;
    C interior_quadrature(const C& zeta, int nodes, int levels) const;

    // Reflection fold into the closed polygon; returns image, linear part and parity.
    C fold(const C& z, C& a, bool& odd) const;

    struct Reduced {
        C p;
        int k;
        bool conj;
    };
    Reduced reduce(const C& p) const;
    C unreduce(const C& v, const Reduced& r) const;
    C unreduce_derivative(const C& d, const Reduced& r) const;

private:
    struct Eval {
        C val, der, dzdu;
    };
    void psi_sector(const C& w, C& val, C& der) const;
    Eval interior_sector(const C& zeta) const;
    std::size_t terms(double ratio) const;

    int N_;
    unsigned bits_;
    T e_;
    T gpsi_, cint_;
    C rot_, wc_, zmid_;
    std::vector<C> rotpow_;
    double radP_, radM_, radB_;
    std::size_t count_;
    Coeffs<C> extL_val_, extL_der_, extP_der_, extP_int_, extM_der_, extM_int_;
    Coeffs<C> intA_val_, intA_der_, intB_der_, intB_int_, intM_der_, intM_int_;
    std::vector<std::pair<C, C>> ext_grid_, int_grid_;
};

extern template class NgonCore<double>;
extern template class NgonCore<Real>;

class NgonMaps : public MapBackend {
public:
    explicit NgonMaps(int N);

    Complex psi(const Complex& w) const override;
    Complex psi_prime(const Complex& w) const override;
    Complex phi(const Complex& z) const override;
    Complex phi_continued(const Complex& z, const Complex& guess) const override;

    bool has_interior() const override { return true; }
    Complex varphi(const Complex& z) const override;
    Complex varphi_prime(const Complex& z) const override;
    Complex interior_forward(const Complex& zeta) const;

    bool has_continuation() const override { return N_ == 3 || N_ == 4; }
    ExtValue varphi_ext(const Complex& z, Complex* derivative) const override;
    ExtValue h_direct(const Complex& w, Complex* derivative) const override;
    cdouble h_direct_fast(cdouble w, cdouble* derivative) const override;
    std::vector<HPole> h_poles(const Real& r_lo) const override;

    const NgonCore<Real>& core() const { return hp_; }
    const NgonCore<double>& fast_core() const { return lp_; }

    // Tile centres of the reflection tiling with parity (odd tiles carry poles of varphi).
    std::vector<std::pair<cdouble, bool>> tile_centres(double radius) const;

private:
    int N_;
    NgonCore<Real> hp_;
    NgonCore<double> lp_;
};

} // namespace bergman
