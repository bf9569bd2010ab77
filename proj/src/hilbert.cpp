#include "catsim/hilbert.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace catsim {

void HilbertConfig::validate() const {
    if (fock_dim < 2)
        throw std::invalid_argument("fock_dim must be at least 2, got " +
                                    std::to_string(fock_dim));
}

Vec fock_state(int n, const HilbertConfig& cfg) {
    cfg.validate();
    if (n < 0 || n >= cfg.fock_dim)
        throw std::invalid_argument("Fock index " + std::to_string(n) +
                                    " outside [0, " + std::to_string(cfg.fock_dim) + ")");
    Vec v = Vec::Zero(cfg.fock_dim);
    v(n) = 1.0;
    return v;
}

namespace {

// Unnormalized truncated coherent amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!).
Vec coherent_amplitudes(cplx alpha, int dim) {
    Vec c(dim);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
    return c;
}

int suggest_fock_dim(cplx alpha, double tail_tol) {
    double mean = std::norm(alpha);
    double term = std::exp(-mean);
    double cum = term;
    int n = 0;
    while (1.0 - cum > tail_tol && n < 100000) {
        ++n;
        term *= mean / n;
        cum += term;
    }
    return n + 1;
}

}  // namespace

Vec coherent_state(cplx alpha, const HilbertConfig& cfg, double tail_tol) {
    cfg.validate();
    Vec c = coherent_amplitudes(alpha, cfg.fock_dim);
    double captured = c.squaredNorm();
    double deficit = 1.0 - captured;
    if (deficit > tail_tol) {
        std::ostringstream msg;
        msg << "coherent state |alpha|^2 = " << std::norm(alpha)
            << " loses weight " << deficit << " at fock_dim = " << cfg.fock_dim
            << "; need roughly fock_dim >= " << suggest_fock_dim(alpha, tail_tol);
        throw std::runtime_error(msg.str());
    }
    return c / std::sqrt(captured);
}

double coherent_tail_deficit(cplx alpha, const HilbertConfig& cfg) {
    cfg.validate();
    return 1.0 - coherent_amplitudes(alpha, cfg.fock_dim).squaredNorm();
}

Vec qubit_g() {
    Vec v(2);
    v << 1.0, 0.0;
    return v;
}

Vec qubit_e() {
    Vec v(2);
    v << 0.0, 1.0;
    return v;
}

Vec tensor_state(const Vec& qubit, const Vec& cavity, const HilbertConfig& cfg) {
    cfg.validate();
    if (qubit.size() != 2)
        throw std::invalid_argument("qubit factor must have dimension 2");
    if (cavity.size() != cfg.fock_dim)
        throw std::invalid_argument("cavity factor must have dimension fock_dim");
    Vec v(cfg.joint_dim());
    for (int q = 0; q < 2; ++q)
        for (int n = 0; n < cfg.fock_dim; ++n) v(cfg.index(q, n)) = qubit(q) * cavity(n);
    return v;
}

cplx inner(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("inner product of vectors with different dimensions");
    return a.dot(b);  // Eigen's dot conjugates the first argument
}

Mat to_density(const Vec& state) { return state * state.adjoint(); }

Mat partial_trace_qubit(const Mat& rho, const HilbertConfig& cfg) {
    cfg.validate();
    const int N = cfg.fock_dim;
    if (rho.rows() != cfg.joint_dim() || rho.cols() != cfg.joint_dim())
        throw std::invalid_argument("density matrix dimension does not match joint_dim");
    return rho.topLeftCorner(N, N) + rho.bottomRightCorner(N, N);
}

Mat partial_trace_cavity(const Mat& rho, const HilbertConfig& cfg) {
    cfg.validate();
    const int N = cfg.fock_dim;
    if (rho.rows() != cfg.joint_dim() || rho.cols() != cfg.joint_dim())
        throw std::invalid_argument("density matrix dimension does not match joint_dim");
    Mat out = Mat::Zero(2, 2);
    for (int q = 0; q < 2; ++q)
        for (int p = 0; p < 2; ++p)
            out(q, p) = rho.block(q * N, p * N, N, N).trace();
    return out;
}

void validate_state(const Vec& state, double tol) {
    double norm = state.norm();
    if (std::abs(norm - 1.0) > tol)
        throw std::runtime_error("state norm " + std::to_string(norm) +
                                 " deviates from 1 beyond tolerance");
}

void validate_density(const Mat& rho, double herm_tol, double trace_tol, double eig_floor) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument("density matrix must be square");
    double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > herm_tol)
        throw std::runtime_error("density matrix Hermiticity violation " + std::to_string(herm));
    double tr_err = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    if (tr_err > trace_tol)
        throw std::runtime_error("density matrix trace deviates from 1 by " +
                                 std::to_string(tr_err));
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()),
                                          Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < eig_floor)
        throw std::runtime_error("density matrix minimum eigenvalue " +
                                 std::to_string(min_eig) + " below floor");
}

}  // namespace catsim
