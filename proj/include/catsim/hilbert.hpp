#pragma once

#include <complex>
#include <Eigen/Dense>

// Joint Hilbert space of one transmon-style qubit and one truncated cavity mode.
// Basis ordering is qubit-major: index = q * fock_dim + n with q = 0 (g), 1 (e).

namespace catsim {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

struct HilbertConfig {
    int fock_dim = 40;

    int joint_dim() const { return 2 * fock_dim; }
    int index(int qubit, int n) const { return qubit * fock_dim + n; }

    void validate() const;
};

// Cavity-only basis states (length fock_dim).
Vec fock_state(int n, const HilbertConfig& cfg);

// Truncated coherent state, renormalized to unit norm. Throws std::runtime_error
// if the Poisson weight lost to truncation exceeds tail_tol; the message carries
// an estimate of the Fock dimension that would suffice.
Vec coherent_state(cplx alpha, const HilbertConfig& cfg, double tail_tol = 1e-10);

// Raw Poisson weight beyond fock_dim - 1 for a coherent state of amplitude alpha.
double coherent_tail_deficit(cplx alpha, const HilbertConfig& cfg);

// Qubit basis vectors, length 2.
Vec qubit_g();
Vec qubit_e();

// Joint state |qubit> (x) |cavity> with the frozen qubit-major ordering.
Vec tensor_state(const Vec& qubit, const Vec& cavity, const HilbertConfig& cfg);

// <a|b>, conjugate-linear in the first argument.
cplx inner(const Vec& a, const Vec& b);

Mat to_density(const Vec& state);

// Reduced cavity state (fock_dim x fock_dim).
Mat partial_trace_qubit(const Mat& rho, const HilbertConfig& cfg);

// Reduced qubit state (2 x 2).
Mat partial_trace_cavity(const Mat& rho, const HilbertConfig& cfg);

// Throws std::runtime_error if the norm deviates from 1 by more than tol.
void validate_state(const Vec& state, double tol = 1e-10);

// Throws std::runtime_error on Hermiticity, trace or positivity violations.
void validate_density(const Mat& rho, double herm_tol = 1e-10,
                      double trace_tol = 1e-8, double eig_floor = -1e-8);

}  // namespace catsim
