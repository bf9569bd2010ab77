#pragma once

#include <string>
#include <vector>

#include "catsim/hilbert.hpp"

namespace catsim {

struct GateDurations {
    double pi2_pulse = 8e-9;
    double selective_pi = 400e-9;
    double selective_pi_long = 680e-9;
    double readout = 240e-9;
    double resync_idle = 1.2e-6;
};

// Measured device constants plus model knobs. Time unit is seconds, rates are
// derived in rad/s. dispersive_shift_hz is cyclic and converted exactly once.
struct DeviceParams {
    double dispersive_shift_hz = -1.64e6;
    double qubit_t1 = 9.5e-6;
    double qubit_tphi = 12.4e-6;
    double cavity_t1 = 66e-6;
    double cavity_n_thermal = 0.01;
    double qubit_p_e_thermal = 0.085;

    // Column k holds P(read r | true k) with ordering {g, e}. The |e> column
    // is a measured value; the |g> column is a plausible placeholder.
    Eigen::Matrix2d readout_confusion = (Eigen::Matrix2d() << 0.98, 0.057,
                                                              0.02, 0.943).finished();

    GateDurations durations;

    double selective_sigma = 100e-9;
    double selective_sigma_long = 170e-9;

    // Photon-number-dependent attenuation of fast qubit rotations. 0 disables
    // the effect; a nonzero value is a fitted effective width, not a measured one.
    double pi2_fock_sigma = 0.0;

    double kerr_cavity_hz = 0.0;      // self-Kerr correction, default off
    double kerr_dispersive_hz = 0.0;  // quadratic dispersive correction, default off

    double anharmonicity_hz = 246e6;  // recorded for reference, not used by the model

    double chi_rad() const;                  // 2*pi*dispersive_shift_hz
    double t2_star() const;                  // 1/T2* = 1/(2 T1) + 1/Tphi
    double conditional_pi_duration() const;  // pi / |chi|

    void validate() const;
};

struct Operator {
    Mat mat;
    std::string label;
    double duration = 0.0;  // nominal wall time; 0 marks an instantaneous idealization
};

// Label of the conditional pi phase gate; the noisy evolution path treats it
// specially (Hamiltonian evolution instead of instantaneous unitary plus idle).
inline constexpr char kConditionalPhaseLabel[] = "U_pi";

// Embeds a cavity-only (fock_dim square) or qubit-only (2x2) operator into the
// joint space using identity on the other factor.
Mat lift_cavity(const Mat& cavity_op, const HilbertConfig& cfg);
Mat lift_qubit(const Mat& qubit_op, const HilbertConfig& cfg);

// max |(U^dag U - I)_ij|
double unitarity_defect(const Mat& u);
void validate_unitary(const Mat& u, double tol = 1e-8);

// Diagonal joint Hamiltonian in rad/s: chi * n on (e, n), plus optional Kerr terms.
Operator dispersive_hamiltonian(const DeviceParams& params, const HilbertConfig& cfg);

// Conditional phase gate: +1 on (g, n), (-1)^n on (e, n).
Operator conditional_pi_phase(const DeviceParams& params, const HilbertConfig& cfg);

// Cavity displacement exp(beta a^dag - conj(beta) a), exactly unitary in the
// truncated space. Throws if the displaced vacuum does not fit the truncation.
Mat displacement_matrix(cplx beta, const HilbertConfig& cfg, double tail_tol = 1e-8);
Operator displacement(cplx beta, const DeviceParams& params, const HilbertConfig& cfg);

// R(theta, phi) = [[cos(theta/2), -sin(theta/2) e^{-i phi}],
//                  [sin(theta/2) e^{i phi}, cos(theta/2)]].
// R(pi/2, 0)|g> = (|g> + |e>)/sqrt(2); R(pi/2, phi)|g> = (|g> + e^{i phi}|e>)/sqrt(2).
Mat qubit_rotation(double theta, double phi);

// Joint-space qubit rotation. When pi2_fock_sigma > 0 the rotation angle on the
// n-photon sector is scaled by exp[-(n chi sigma)^2 / 2].
Operator qubit_rotation_gate(double theta, double phi, const DeviceParams& params,
                             const HilbertConfig& cfg);

// Qubit pi rotation conditioned on cavity vacuum. sigma_t = 0 selects the ideal
// form (pi rotation on the n = 0 sector only); sigma_t > 0 applies the Gaussian
// spectral model where sector n is rotated by pi * lambda_n,
// lambda_n = exp[-(n chi sigma_t)^2 / 2].
Operator selective_pi_on_vacuum(const DeviceParams& params, const HilbertConfig& cfg,
                                double sigma_t, double duration);
double selective_leakage(const DeviceParams& params, double sigma_t, int n);

// Cavity photon parity (-1)^n, cavity-only and joint forms.
Mat parity_matrix(const HilbertConfig& cfg);
Operator parity_operator(const DeviceParams& params, const HilbertConfig& cfg);

// Ramsey-style parity readout circuit: R^Y_{pi/2}, conditional pi phase,
// R^Y_{-pi/2}. Starting from |g> (x) |n>, the qubit ends in g for even n and
// e for odd n; from |e> the mapping is flipped.
std::vector<Operator> parity_circuit(const DeviceParams& params, const HilbertConfig& cfg);

}  // namespace catsim
