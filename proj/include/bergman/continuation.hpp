#pragma once

#include "bergman/domain.hpp"

#include <optional>
#include <ostream>

namespace bergman {

struct AnnulusConfig {
    Real rho_in = Real(3) / 10;
    int circle_samples = 256;
    Real newton_tol;
    Real delta_edge = Real(1) / 1000000;
    Real tie_window = Real("1e-20");
    int max_jitters = 6;
};

// Fills newton_tol if unset and checks that h is finite on |w| = rho_in.
AnnulusConfig resolve_annulus(const DomainModel& d, AnnulusConfig cfg);

struct RootRecord {
    Complex w;
    int multiplicity = 1;
    Real residual;
};

struct ContinuationResult {
    Complex z;
    int p = 0;
    Real r;
    std::optional<Complex> phi1;
    bool in_omega_star = false;
    std::vector<RootRecord> zeros;
    int ring_count = 0;
};

// h(w) on the annulus: direct for |w| >= 1 or closed-form maps, reflected otherwise.
ExtValue h_eval(const DomainModel& d, const Complex& w, const AnnulusConfig& cfg, Complex* derivative = nullptr);
cdouble h_eval_fast(const DomainModel& d, cdouble w, cdouble* derivative = nullptr);

// Zeros of h - varphi(z) in r1 <= |w| <= r2 with multiplicity, corrected for poles of h.
int annulus_zero_count(const DomainModel& d, const Complex& z, const Real& r1, const Real& r2,
                       const AnnulusConfig& cfg);

ContinuationResult classify_point(const DomainModel& d, const Complex& z, const AnnulusConfig& cfg);

struct PhiValue {
    Complex value;
    Complex derivative;
    bool interior = false;
};

// Phi on Omega*: phi on the closed exterior minus corners, phi_1 on D_1.
PhiValue Phi_full(const DomainModel& d, const Complex& z, const AnnulusConfig& cfg);
Complex Phi_eval(const DomainModel& d, const Complex& z, const AnnulusConfig& cfg);

struct RasterSpec {
    int nx = 32;
    int ny = 32;
};

// Per-pixel (p, r, membership) over the bounding box of D, written as CSV.
void write_raster(std::ostream& out, const DomainModel& d, const AnnulusConfig& cfg, const RasterSpec& spec);

} // namespace bergman
