#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dressed.hpp"

namespace bathsim {

using Matrix2cd = Eigen::Matrix2cd;
using Matrix4cd = Eigen::Matrix4cd;
using Vector4cd = Eigen::Vector4cd;

// Pauli set in the dressed basis, ordered (|g~>, |e~>) with the dressed
// ground as the +1 eigenstate of sigma_z; sigma_minus de-excites (|g~><e~|).
inline const Matrix2cd& sigma_x() {
    static const Matrix2cd m = (Matrix2cd() << 0, 1, 1, 0).finished();
    return m;
}
inline const Matrix2cd& sigma_y() {
    static const Matrix2cd m = (Matrix2cd() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
    return m;
}
inline const Matrix2cd& sigma_z() {
    static const Matrix2cd m = (Matrix2cd() << 1, 0, 0, -1).finished();
    return m;
}
inline const Matrix2cd& sigma_minus() {
    static const Matrix2cd m = (Matrix2cd() << 0, 1, 0, 0).finished();
    return m;
}
inline const Matrix2cd& sigma_plus() {
    static const Matrix2cd m = (Matrix2cd() << 0, 0, 1, 0).finished();
    return m;
}

// States are stacked row-major: vec(rho) = (rho00, rho01, rho10, rho11).
inline Vector4cd vec_of(const Matrix2cd& m) {
    Vector4cd v;
    v << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
    return v;
}

inline Matrix2cd mat_of(const Vector4cd& v) {
    Matrix2cd m;
    m << v(0), v(1), v(2), v(3);
    return m;
}

inline Matrix4cd kron2(const Matrix2cd& a, const Matrix2cd& b) {
    Matrix4cd k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

// With row-major stacking, left multiplication A rho vectorizes as (A (x) I)
// and right multiplication rho A as (I (x) A^T).
inline Matrix4cd embed_left(const Matrix2cd& a) { return kron2(a, Matrix2cd::Identity()); }
inline Matrix4cd embed_right(const Matrix2cd& a) { return kron2(Matrix2cd::Identity(), a.transpose()); }

inline void validate_density(const Matrix2cd& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("density matrix is not Hermitian within 1e-10");
    if (std::abs(rho.trace() - cplx(1.0)) > 1e-10)
        throw std::invalid_argument("density matrix trace differs from 1 by more than 1e-10");
    Eigen::SelfAdjointEigenSolver<Matrix2cd> es(0.5 * (rho + rho.adjoint()));
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("density matrix has an eigenvalue below -1e-9");
}

inline bool is_valid_density(const Matrix2cd& rho) {
    try {
        validate_density(rho);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

inline Matrix4cd dissipator(const Matrix2cd& l) {
    const Matrix2cd ld = l.adjoint();
    const Matrix2cd ldl = ld * l;
    return embed_left(l) * embed_right(ld) - 0.5 * embed_left(ldl) - 0.5 * embed_right(ldl);
}

// Generator in the dressed basis. Channels: sideband-weighted excitation and
// de-excitation, the dressed dephasing channel, and lab-frame pure dephasing.
// The lab dephasing operator sin(2t) sx + cos(2t) sz is split into its two
// secular components: the cross terms average out over a Rabi period, and
// keeping them would let pure dephasing source dressed coherence.
inline Matrix4cd build_liouvillian(const RateSet& r) {
    if (r.gamma_0 < 0.0 || r.gamma_plus < 0.0 || r.gamma_minus < 0.0 || r.gamma_phi < 0.0)
        throw std::invalid_argument("build_liouvillian: rates must be nonnegative");
    const double s = std::sin(r.theta), c = std::cos(r.theta);
    const double s2 = std::sin(2.0 * r.theta), c2 = std::cos(2.0 * r.theta);
    const Matrix2cd h = 0.5 * angular_rate_per_us(r.omega_r_hz) * sigma_z();
    Matrix4cd l = cplx(0, -1) * (embed_left(h) - embed_right(h));
    l += r.gamma_minus * dissipator(s * s * sigma_plus());
    l += r.gamma_plus * dissipator(c * c * sigma_minus());
    l += r.gamma_0 * dissipator(s * c * sigma_z());
    l += 0.5 * r.gamma_phi * dissipator(s2 * sigma_x());
    l += 0.5 * r.gamma_phi * dissipator(c2 * sigma_z());
    return l;
}

namespace detail {

// Scaling-and-squaring series exponential; the 4x4 problems here keep the
// scaled norm at 1/2 where the truncated series is converged to below 1e-18.
inline Matrix4cd expm_series(Matrix4cd a) {
    int squarings = 0;
    double norm = a.norm();
    while (norm > 0.5 && squarings < 64) {
        a *= 0.5;
        norm *= 0.5;
        ++squarings;
    }
    if (squarings == 64) throw std::runtime_error("expm: matrix norm too large to scale");
    Matrix4cd sum = Matrix4cd::Identity();
    Matrix4cd term = Matrix4cd::Identity();
    bool converged = false;
    for (int k = 1; k <= 32; ++k) {
        term = (term * a) / double(k);
        sum += term;
        if (term.norm() <= 1e-18 * sum.norm()) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error("expm: series failed to converge, residual term norm " +
                                 std::to_string(term.norm()));
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

}  // namespace detail

// Eigendecomposition exponential with a series fallback when the eigenvector
// basis is ill-conditioned (non-normal generators near defectiveness).
inline Matrix4cd expm(const Matrix4cd& a) {
    if (!a.allFinite()) throw std::runtime_error("expm: nonfinite generator");
    Eigen::ComplexEigenSolver<Matrix4cd> es(a);
    if (es.info() == Eigen::Success) {
        const Matrix4cd& v = es.eigenvectors();
        Eigen::JacobiSVD<Matrix4cd> svd(v);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(3);
        if (smin > 0.0 && smax / smin < 1e8) {
            const Vector4cd ew = es.eigenvalues().array().exp();
            return v * ew.asDiagonal() * v.inverse();
        }
    }
    return detail::expm_series(a);
}

inline Matrix2cd propagate(const Matrix4cd& l, const Matrix2cd& rho0, double t_us) {
    if (!(t_us >= 0.0)) throw std::invalid_argument("propagate: time must be >= 0");
    validate_density(rho0);
    return mat_of(expm(l * t_us) * vec_of(rho0));
}

inline Matrix2cd steady_state(const Matrix4cd& l) {
    Eigen::ComplexEigenSolver<Matrix4cd> es(l);
    if (es.info() != Eigen::Success) throw std::runtime_error("steady_state: eigdecomposition failed");
    const auto& ew = es.eigenvalues();
    int smallest = 0, second = -1;
    double lmax = 0.0;
    for (int i = 0; i < 4; ++i) lmax = std::max(lmax, std::abs(ew(i)));
    for (int i = 1; i < 4; ++i) {
        if (std::abs(ew(i)) < std::abs(ew(smallest))) {
            second = smallest;
            smallest = i;
        } else if (second < 0 || std::abs(ew(i)) < std::abs(ew(second))) {
            second = i;
        }
    }
    const double threshold = 1e-8 * lmax;
    if (!(std::abs(ew(smallest)) < threshold))
        throw std::runtime_error("steady_state: no eigenvalue below 1e-8 of the spectral radius");
    if (std::abs(ew(second)) < threshold)
        throw std::runtime_error("steady_state: degenerate steady space, two eigenvalues near zero");
    Matrix2cd m = mat_of(es.eigenvectors().col(smallest));
    const cplx tr = m.trace();
    if (std::abs(tr) < 1e-12)
        throw std::runtime_error("steady_state: null vector is traceless, cannot normalize");
    m *= std::conj(tr) / std::abs(tr);  // strip the solver's arbitrary global phase
    m = 0.5 * (m + m.adjoint());        // guard against residual phase noise
    m /= m.trace().real();
    return m;
}

struct BlochVector {
    double x;
    double y;
    double z;
};

// Lab-frame components of a dressed-basis state. The bare ground state is the
// +1 eigenstate of the lab sigma_z; the lab operators are the dressed ones
// rotated by 2 theta about y, and sigma_y is shared between the frames.
inline BlochVector lab_frame_bloch(const Matrix2cd& rho, double theta) {
    const double s2 = std::sin(2.0 * theta), c2 = std::cos(2.0 * theta);
    const Matrix2cd sx_lab = c2 * sigma_x() - s2 * sigma_z();
    const Matrix2cd sz_lab = s2 * sigma_x() + c2 * sigma_z();
    return BlochVector{(sx_lab * rho).trace().real(), (sigma_y() * rho).trace().real(),
                       (sz_lab * rho).trace().real()};
}

inline Matrix2cd density_from_bloch(const BlochVector& b) {
    return 0.5 * (Matrix2cd::Identity() + b.x * sigma_x() + b.y * sigma_y() + b.z * sigma_z());
}

struct MollowWeights {
    double lower;   // photon rate at omega_d - Omega_R
    double center;  // photon rate at omega_d
    double upper;   // photon rate at omega_d + Omega_R
};

// Sideband photon-rate weights, not a full emission spectrum: de-excitation
// emits at the upper sideband from the excited dressed population, excitation
// at the lower sideband from the ground dressed population.
inline MollowWeights mollow_weights(const RateSet& r, const Matrix2cd& rho_dressed) {
    validate_density(rho_dressed);
    const double s = std::sin(r.theta), c = std::cos(r.theta);
    const double p_g = rho_dressed(0, 0).real();
    const double p_e = rho_dressed(1, 1).real();
    MollowWeights w;
    w.lower = r.gamma_minus * s * s * s * s * p_g;
    w.upper = r.gamma_plus * c * c * c * c * p_e;
    w.center = r.gamma_0 * s * s * c * c;
    return w;
}

}  // namespace bathsim
