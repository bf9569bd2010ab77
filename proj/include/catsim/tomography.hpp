#pragma once

#include <string>
#include <vector>

#include "catsim/hilbert.hpp"

namespace catsim {

struct WignerGrid {
    double min = -4.5;
    double max = 4.5;
    double step = 0.15;

    int points_per_axis() const;
    double coord(int i) const { return min + i * step; }
    void validate() const;
};

struct WignerMap {
    WignerGrid grid;
    Eigen::MatrixXd values;  // values(iy, ix) = W(coord(ix) + i coord(iy))

    double min_value() const { return values.minCoeff(); }
    double max_value() const { return values.maxCoeff(); }
};

// W(beta) = (2/pi) Tr[rho D(2 beta) P], evaluated from closed-form displacement
// matrix elements, so the result is exact for the given cavity density with no
// extra truncation at large |beta|. Throws when the trace picks up an imaginary
// part above 1e-9 (non-Hermitian input).
double wigner_point(const Mat& cavity_rho, cplx beta);

// Samples the grid and enforces |W| <= 2/pi + 1e-6 everywhere.
WignerMap wigner_map(const Mat& cavity_rho, const WignerGrid& grid = {});

void write_wigner_csv(const WignerMap& map, const std::string& path);
void write_density_csv(const Mat& rho, const std::string& path);

// Least-squares inversion of a Wigner map back to a fock_dim-dimensional
// density matrix: Hermitian parametrization, trace pinned through a heavily
// weighted extra row, negative eigenvalues clipped and the trace renormalized.
Mat reconstruct_density(const WignerMap& map, int fock_dim);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 in [0, 1].
double state_fidelity(const Mat& rho, const Mat& sigma);

// <psi|rho|psi>, the same quantity when one argument is pure.
double pure_state_fidelity(const Vec& psi, const Mat& rho);

// (max - min)/(max + min); throws when max + min is not positive.
double visibility(const std::vector<double>& values);
double contrast(const std::vector<double>& values);

}  // namespace catsim
