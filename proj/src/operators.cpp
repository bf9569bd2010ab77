#include "catsim/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace catsim {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double DeviceParams::chi_rad() const { return two_pi * dispersive_shift_hz; }

double DeviceParams::t2_star() const {
    return 1.0 / (0.5 / qubit_t1 + 1.0 / qubit_tphi);
}

double DeviceParams::conditional_pi_duration() const {
    return std::numbers::pi / std::abs(chi_rad());
}

void DeviceParams::validate() const {
    if (dispersive_shift_hz == 0.0)
        throw std::invalid_argument("dispersive shift must be nonzero");
    if (qubit_t1 <= 0 || qubit_tphi <= 0 || cavity_t1 <= 0)
        throw std::invalid_argument("coherence times must be positive");
    if (durations.pi2_pulse < 0 || durations.selective_pi < 0 ||
        durations.selective_pi_long < 0 || durations.readout < 0 ||
        durations.resync_idle < 0)
        throw std::invalid_argument("gate durations must be non-negative");
    if (selective_sigma < 0 || selective_sigma_long < 0 || pi2_fock_sigma < 0)
        throw std::invalid_argument("pulse widths must be non-negative");
    for (int col = 0; col < 2; ++col) {
        double sum = readout_confusion.col(col).sum();
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("readout confusion columns must sum to 1");
        if (readout_confusion.col(col).minCoeff() < 0)
            throw std::invalid_argument("readout confusion entries must be non-negative");
    }
    if (cavity_n_thermal < 0 || qubit_p_e_thermal < 0 || qubit_p_e_thermal > 1)
        throw std::invalid_argument("thermal populations out of range");
}

Mat lift_cavity(const Mat& cavity_op, const HilbertConfig& cfg) {
    cfg.validate();
    const int N = cfg.fock_dim;
    if (cavity_op.rows() != N || cavity_op.cols() != N)
        throw std::invalid_argument("cavity operator dimension mismatch");
    Mat out = Mat::Zero(2 * N, 2 * N);
    out.topLeftCorner(N, N) = cavity_op;
    out.bottomRightCorner(N, N) = cavity_op;
    return out;
}

Mat lift_qubit(const Mat& qubit_op, const HilbertConfig& cfg) {
    cfg.validate();
    const int N = cfg.fock_dim;
    if (qubit_op.rows() != 2 || qubit_op.cols() != 2)
        throw std::invalid_argument("qubit operator dimension mismatch");
    Mat out = Mat::Zero(2 * N, 2 * N);
    for (int q = 0; q < 2; ++q)
        for (int p = 0; p < 2; ++p)
            out.block(q * N, p * N, N, N) =
                qubit_op(q, p) * Mat::Identity(N, N);
    return out;
}

double unitarity_defect(const Mat& u) {
    Mat d = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

void validate_unitary(const Mat& u, double tol) {
    double defect = unitarity_defect(u);
    if (defect > tol)
        throw std::runtime_error("unitarity defect " + std::to_string(defect) +
                                 " exceeds tolerance");
}

Operator dispersive_hamiltonian(const DeviceParams& params, const HilbertConfig& cfg) {
    params.validate();
    cfg.validate();
    const int N = cfg.fock_dim;
    const double chi = params.chi_rad();
    const double kerr = two_pi * params.kerr_cavity_hz;
    const double chi2 = two_pi * params.kerr_dispersive_hz;
    Mat h = Mat::Zero(2 * N, 2 * N);
    for (int n = 0; n < N; ++n) {
        double self_kerr = 0.5 * kerr * n * (n - 1.0);
        h(cfg.index(0, n), cfg.index(0, n)) = self_kerr;
        h(cfg.index(1, n), cfg.index(1, n)) = self_kerr + chi * n + chi2 * n * n;
    }
    return {h, "H_dispersive", 0.0};
}

Operator conditional_pi_phase(const DeviceParams& params, const HilbertConfig& cfg) {
    params.validate();
    cfg.validate();
    const int N = cfg.fock_dim;
    Mat u = Mat::Zero(2 * N, 2 * N);
    for (int n = 0; n < N; ++n) {
        u(cfg.index(0, n), cfg.index(0, n)) = 1.0;
        u(cfg.index(1, n), cfg.index(1, n)) = (n % 2 == 0) ? 1.0 : -1.0;
    }
    return {u, kConditionalPhaseLabel, params.conditional_pi_duration()};
}

Mat displacement_matrix(cplx beta, const HilbertConfig& cfg, double tail_tol) {
    cfg.validate();
    if (coherent_tail_deficit(beta, cfg) > tail_tol)
        throw std::runtime_error(
            "displacement amplitude too large for fock_dim = " +
            std::to_string(cfg.fock_dim) + ": displaced vacuum loses weight " +
            std::to_string(coherent_tail_deficit(beta, cfg)));
    const int N = cfg.fock_dim;
    // exp(beta a^dag - conj(beta) a) through the Hermitian generator
    // -i (beta a^dag - conj(beta) a), which keeps the truncated matrix unitary.
    Mat herm = Mat::Zero(N, N);
    for (int n = 1; n < N; ++n) {
        herm(n, n - 1) = -cplx(0, 1) * beta * std::sqrt(double(n));
        herm(n - 1, n) = std::conj(herm(n, n - 1));
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    Vec phases(N);
    for (int k = 0; k < N; ++k)
        phases(k) = std::exp(cplx(0, 1) * es.eigenvalues()(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Operator displacement(cplx beta, const DeviceParams& params, const HilbertConfig& cfg) {
    params.validate();
    Mat d = lift_cavity(displacement_matrix(beta, cfg), cfg);
    return {d, "D", 0.0};
}

Mat qubit_rotation(double theta, double phi) {
    double c = std::cos(0.5 * theta);
    double s = std::sin(0.5 * theta);
    Mat r(2, 2);
    r(0, 0) = c;
    r(0, 1) = -s * std::exp(cplx(0, -phi));
    r(1, 0) = s * std::exp(cplx(0, phi));
    r(1, 1) = c;
    return r;
}

namespace {

double fock_attenuation(double chi_rad, double sigma, int n) {
    double x = n * chi_rad * sigma;
    return std::exp(-0.5 * x * x);
}

}  // namespace

Operator qubit_rotation_gate(double theta, double phi, const DeviceParams& params,
                             const HilbertConfig& cfg) {
    params.validate();
    cfg.validate();
    const int N = cfg.fock_dim;
    Mat out;
    if (params.pi2_fock_sigma == 0.0) {
        out = lift_qubit(qubit_rotation(theta, phi), cfg);
    } else {
        out = Mat::Zero(2 * N, 2 * N);
        for (int n = 0; n < N; ++n) {
            Mat r = qubit_rotation(
                theta * fock_attenuation(params.chi_rad(), params.pi2_fock_sigma, n), phi);
            for (int q = 0; q < 2; ++q)
                for (int p = 0; p < 2; ++p) out(cfg.index(q, n), cfg.index(p, n)) = r(q, p);
        }
    }
    return {out, "R(" + std::to_string(theta) + "," + std::to_string(phi) + ")",
            params.durations.pi2_pulse};
}

double selective_leakage(const DeviceParams& params, double sigma_t, int n) {
    if (sigma_t < 0) throw std::invalid_argument("sigma_t must be non-negative");
    if (sigma_t == 0.0) return n == 0 ? 1.0 : 0.0;
    return fock_attenuation(params.chi_rad(), sigma_t, n);
}

Operator selective_pi_on_vacuum(const DeviceParams& params, const HilbertConfig& cfg,
                                double sigma_t, double duration) {
    params.validate();
    cfg.validate();
    const int N = cfg.fock_dim;
    Mat out = Mat::Zero(2 * N, 2 * N);
    for (int n = 0; n < N; ++n) {
        Mat r = qubit_rotation(std::numbers::pi * selective_leakage(params, sigma_t, n), 0.0);
        for (int q = 0; q < 2; ++q)
            for (int p = 0; p < 2; ++p) out(cfg.index(q, n), cfg.index(p, n)) = r(q, p);
    }
    return {out, "R_pi_vac", duration};
}

Mat parity_matrix(const HilbertConfig& cfg) {
    cfg.validate();
    const int N = cfg.fock_dim;
    Mat p = Mat::Zero(N, N);
    for (int n = 0; n < N; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return p;
}

Operator parity_operator(const DeviceParams& params, const HilbertConfig& cfg) {
    params.validate();
    return {lift_cavity(parity_matrix(cfg), cfg), "parity", 0.0};
}

std::vector<Operator> parity_circuit(const DeviceParams& params, const HilbertConfig& cfg) {
    return {qubit_rotation_gate(std::numbers::pi / 2, 0.0, params, cfg),
            conditional_pi_phase(params, cfg),
            qubit_rotation_gate(-std::numbers::pi / 2, 0.0, params, cfg)};
}

}  // namespace catsim
