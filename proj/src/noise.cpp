#include "catsim/noise.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace catsim {

namespace {

// op|j> = scale[j] |target[j]>, target -1 for zero columns. Covers every
// standard channel here (lowering operators and diagonal dephasing), which
// keeps the dissipator evaluation at O(d^2) instead of dense products.
struct MonomialForm {
    std::vector<int> target;
    std::vector<cplx> scale;
};

std::optional<MonomialForm> to_monomial(const Mat& op) {
    const int d = int(op.rows());
    MonomialForm f;
    f.target.assign(d, -1);
    f.scale.assign(d, 0.0);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            if (op(i, j) != 0.0) {
                if (f.target[j] >= 0) return std::nullopt;
                f.target[j] = i;
                f.scale[j] = op(i, j);
            }
        }
    }
    return f;
}

struct FastChannel {
    MonomialForm form;
    double rate;
};

class DissipatorEngine {
  public:
    DissipatorEngine(const std::vector<NoiseChannel>& channels, int d) : d_(d) {
        fast_ = true;
        for (const auto& ch : channels) {
            if (ch.rate < 0) throw std::invalid_argument("channel rate must be non-negative");
            if (ch.op.rows() != d || ch.op.cols() != d)
                throw std::invalid_argument("channel dimension mismatch");
            if (ch.rate == 0.0) continue;
            auto form = to_monomial(ch.op);
            if (!form) fast_ = false;
            if (form) fast_channels_.push_back({*form, ch.rate});
            dense_channels_.push_back({ch.op, ch.rate});
        }
        if (fast_) {
            Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
            for (const auto& ch : fast_channels_)
                for (int j = 0; j < d; ++j)
                    if (ch.form.target[j] >= 0) w(j) += ch.rate * std::norm(ch.form.scale[j]);
            anticomm_ = 0.5 * (w.replicate(1, d) + w.transpose().replicate(d, 1));
        } else {
            half_sum_ = Mat::Zero(d, d);
            for (const auto& [op, rate] : dense_channels_) half_sum_ += 0.5 * rate * op.adjoint() * op;
        }
    }

    bool empty() const { return dense_channels_.empty(); }

    Mat operator()(const Mat& rho) const {
        Mat out;
        if (fast_) {
            out = -(anticomm_.array() * rho.array()).matrix();
            for (const auto& ch : fast_channels_) {
                const auto& t = ch.form.target;
                const auto& s = ch.form.scale;
                for (int j = 0; j < d_; ++j) {
                    if (t[j] < 0) continue;
                    const cplx sj = ch.rate * s[j];
                    for (int k = 0; k < d_; ++k) {
                        if (t[k] < 0) continue;
                        out(t[j], t[k]) += sj * std::conj(s[k]) * rho(j, k);
                    }
                }
            }
        } else {
            out = -(half_sum_ * rho + rho * half_sum_);
            for (const auto& [op, rate] : dense_channels_) out += rate * op * rho * op.adjoint();
        }
        return out;
    }

  private:
    int d_;
    bool fast_;
    std::vector<FastChannel> fast_channels_;
    std::vector<std::pair<Mat, double>> dense_channels_;
    Eigen::MatrixXd anticomm_;
    Mat half_sum_;
};

bool is_diagonal(const Mat& m) {
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != 0.0) return false;
    return true;
}

void rk4_step(Mat& rho, const DissipatorEngine& diss, double h) {
    Mat k1 = diss(rho);
    Mat k2 = diss(rho + 0.5 * h * k1);
    Mat k3 = diss(rho + 0.5 * h * k2);
    Mat k4 = diss(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Elementwise phase conjugation exp(-i H t) rho exp(i H t) for diagonal H.
Mat phase_kernel(const Eigen::VectorXd& hdiag, double t) {
    const int d = int(hdiag.size());
    Mat p(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            p(i, j) = std::exp(cplx(0.0, -(hdiag(i) - hdiag(j)) * t));
    return p;
}

void full_rk4_step(Mat& rho, const Mat& h_op, const DissipatorEngine& diss, double h) {
    auto rhs = [&](const Mat& r) {
        Mat out = cplx(0, -1) * (h_op * r - r * h_op);
        if (!diss.empty()) out += diss(r);
        return out;
    };
    Mat k1 = rhs(rho);
    Mat k2 = rhs(rho + 0.5 * h * k1);
    Mat k3 = rhs(rho + 0.5 * h * k2);
    Mat k4 = rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::vector<NoiseChannel> standard_channels(const DeviceParams& params,
                                            const HilbertConfig& cfg) {
    params.validate();
    cfg.validate();
    const int N = cfg.fock_dim;

    Mat sigma_minus = Mat::Zero(2, 2);
    sigma_minus(0, 1) = 1.0;
    Mat sigma_z = Mat::Zero(2, 2);
    sigma_z(0, 0) = 1.0;
    sigma_z(1, 1) = -1.0;
    Mat lower = Mat::Zero(N, N);
    for (int n = 1; n < N; ++n) lower(n - 1, n) = std::sqrt(double(n));

    return {
        {lift_qubit(sigma_minus, cfg), 1.0 / params.qubit_t1, "qubit_relaxation"},
        {lift_qubit(sigma_z, cfg), 0.5 / params.qubit_tphi, "qubit_dephasing"},
        {lift_cavity(lower, cfg), 1.0 / params.cavity_t1, "cavity_loss"},
    };
}

Mat lindblad_evolve(const Mat& rho, const Mat& hamiltonian,
                    const std::vector<NoiseChannel>& channels, double duration,
                    double dt) {
    if (duration < 0) throw std::invalid_argument("duration must be non-negative");
    if (dt <= 0) throw std::invalid_argument("dt must be positive");
    if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
    if (duration == 0.0) return rho;

    const int d = int(rho.rows());
    const bool has_h = hamiltonian.size() > 0 && hamiltonian.cwiseAbs().maxCoeff() > 0.0;
    if (has_h && (hamiltonian.rows() != d || hamiltonian.cols() != d))
        throw std::invalid_argument("Hamiltonian dimension mismatch");

    DissipatorEngine diss(channels, d);
    const double trace0 = rho.trace().real();
    Mat state = rho;

    int n_steps = int(std::floor(duration / dt + 1e-9));
    double rem = duration - n_steps * dt;
    if (rem < 1e-18) rem = 0.0;

    if (has_h && !is_diagonal(hamiltonian)) {
        for (int s = 0; s < n_steps; ++s) full_rk4_step(state, hamiltonian, diss, dt);
        if (rem > 0) full_rk4_step(state, hamiltonian, diss, rem);
    } else if (!has_h) {
        if (!diss.empty()) {
            for (int s = 0; s < n_steps; ++s) rk4_step(state, diss, dt);
            if (rem > 0) rk4_step(state, diss, rem);
        }
    } else {
        Eigen::VectorXd hdiag = hamiltonian.diagonal().real();
        if (diss.empty()) {
            state = (phase_kernel(hdiag, duration).array() * state.array()).matrix();
        } else {
            Mat half = phase_kernel(hdiag, 0.5 * dt);
            for (int s = 0; s < n_steps; ++s) {
                state = (half.array() * state.array()).matrix();
                rk4_step(state, diss, dt);
                state = (half.array() * state.array()).matrix();
            }
            if (rem > 0) {
                Mat half_rem = phase_kernel(hdiag, 0.5 * rem);
                state = (half_rem.array() * state.array()).matrix();
                rk4_step(state, diss, rem);
                state = (half_rem.array() * state.array()).matrix();
            }
        }
    }

    double drift = std::abs(state.trace().real() - trace0) + std::abs(state.trace().imag());
    if (drift > 1e-6)
        throw std::runtime_error("integration trace drift " + std::to_string(drift) +
                                 "; reduce dt");
    return state;
}

NoiseContext NoiseContext::make(const DeviceParams& params, const HilbertConfig& cfg,
                                EvolutionMode mode, double dt) {
    NoiseContext ctx;
    ctx.params = params;
    ctx.cfg = cfg;
    ctx.mode = mode;
    ctx.dt = dt;
    ctx.h_dispersive = dispersive_hamiltonian(params, cfg).mat;
    ctx.channels = standard_channels(params, cfg);
    return ctx;
}

Mat apply_gate_noisy(const Mat& rho, const Operator& gate, const NoiseContext& ctx) {
    if (gate.mat.rows() != rho.rows() || gate.mat.cols() != rho.cols())
        throw std::invalid_argument("gate dimension mismatch");
    if (ctx.mode == EvolutionMode::Ideal) return gate.mat * rho * gate.mat.adjoint();

    if (gate.label == kConditionalPhaseLabel && gate.duration > 0)
        return lindblad_evolve(rho, ctx.h_dispersive, ctx.channels, gate.duration, ctx.dt);

    Mat out = gate.mat * rho * gate.mat.adjoint();
    if (gate.duration > 0)
        out = lindblad_evolve(out, Mat(), ctx.channels, gate.duration, ctx.dt);
    return out;
}

Mat idle_evolve(const Mat& rho, double duration, bool dispersive, const NoiseContext& ctx) {
    if (ctx.mode == EvolutionMode::Ideal || duration == 0.0) return rho;
    return lindblad_evolve(rho, dispersive ? ctx.h_dispersive : Mat(), ctx.channels,
                           duration, ctx.dt);
}

Eigen::Vector2d apply_readout_confusion(const Eigen::Vector2d& probs,
                                        const Eigen::Matrix2d& confusion) {
    for (int col = 0; col < 2; ++col)
        if (std::abs(confusion.col(col).sum() - 1.0) > 1e-9)
            throw std::invalid_argument("confusion columns must sum to 1");
    if (probs.minCoeff() < -1e-12)
        throw std::invalid_argument("probabilities must be non-negative");
    return confusion * probs;
}

Mat thermal_cavity_density(double n_thermal, const HilbertConfig& cfg) {
    cfg.validate();
    if (n_thermal < 0) throw std::invalid_argument("thermal occupation must be non-negative");
    const int N = cfg.fock_dim;
    Mat rho = Mat::Zero(N, N);
    if (n_thermal == 0.0) {
        rho(0, 0) = 1.0;
        return rho;
    }
    double ratio = n_thermal / (1.0 + n_thermal);
    double p = 1.0;
    double total = 0.0;
    for (int n = 0; n < N; ++n) {
        rho(n, n) = p;
        total += p;
        p *= ratio;
    }
    rho /= total;
    return rho;
}

Mat thermal_qubit_density(double p_excited) {
    if (p_excited < 0 || p_excited > 1)
        throw std::invalid_argument("excited-state population must be in [0, 1]");
    Mat rho = Mat::Zero(2, 2);
    rho(0, 0) = 1.0 - p_excited;
    rho(1, 1) = p_excited;
    return rho;
}

}  // namespace catsim
