#pragma once

#include <optional>
#include <vector>

#include "zml/field.hpp"

namespace zml {

enum class DatumKind { fractional_bump, dipole, compact_miyakawa, custom };

// Zero-mass initial datum with a declared low-frequency order beta.
struct InitialDatum {
    RealField field;
    double beta;  // declared spectral order, uhat(xi) ~ A |xi|^beta near 0
    std::optional<double> amplitude_A;
    DatumKind construction;

    InitialDatum(RealField f, double b, std::optional<double> A, DatumKind kind);
};

// u0 = D^beta phi for a Gaussian bump phi of mass m and width w, so that
// I_beta u0 = phi and the amplitude A = int phi = m. An optional truncation radius
// compactifies phi with a smooth cutoff before differentiation.
InitialDatum make_fractional_bump(const GridSpec& grid, double beta, double mass_of_phi,
                                  double width,
                                  std::optional<double> truncation_radius = std::nullopt);

// u0 = d/dx_j of a Gaussian bump: the beta = 1 endpoint.
InitialDatum make_dipole(const GridSpec& grid, int direction, double mass_of_psi, double width);

struct MiyakawaParams {
    double separation = 2.0;  // bump centers at +-separation along axis 0
    double width = 1.0;
    double amplitude = 1.0;
};

// Two opposite compactly supported C^inf bumps; zero mass by symmetry,
// finite |x|^beta moment trivially.
InitialDatum make_miyakawa(const GridSpec& grid, double beta, const MiyakawaParams& params);

InitialDatum make_custom(RealField field, double beta,
                         std::optional<double> amplitude = std::nullopt);

struct AmplitudeEstimate {
    double value = 0.0;
    double error_bar = 0.0;
};

// A = int I_beta u0 = (2pi)^{n/2} lim uhat(xi)/|xi|^beta, estimated by
// extrapolating the three smallest nonzero wavevector shells to |xi| = 0.
AmplitudeEstimate compute_A(const InitialDatum& u0, double beta);

struct BesovResult {
    double value = 0.0;
    double argmax_s = 0.0;
    bool endpoint_warning = false;
};

// sup over the s-grid of s^{beta/2} ||e^{s Delta} v||_1.
BesovResult besov_norm(const RealField& v, double beta, const std::vector<double>& s_grid);
std::vector<double> log_spaced(double lo, double hi, int n);
// [1e-2, (L/4)^2], 40 points
std::vector<double> default_besov_grid(const GridSpec& grid);

// integral of |x|^beta |u0(x)|
double moment_beta(const RealField& u0, double beta);

}  // namespace zml
