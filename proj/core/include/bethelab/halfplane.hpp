#pragma once

#include <complex>
#include <span>
#include <utility>

namespace bethe {

using Complex = std::complex<double>;

// A point of the open upper half-plane H = { z : Im z > 0 }.  Construction
// rejects Im <= 0 and non-finite components; subnormal imaginary parts are
// accepted (they arise in eta -> 0 sweeps).
class UpperHalfPoint {
public:
    UpperHalfPoint(double re, double im) : z_(re, im) { validate(z_); }
    explicit UpperHalfPoint(Complex z) : z_(z) { validate(z_); }

    double re() const { return z_.real(); }
    double im() const { return z_.imag(); }
    Complex value() const { return z_; }

private:
    static void validate(Complex z);
    Complex z_;
};

// Spectral parameter lambda = E + i*eta with eta >= 0.  Operations that need
// lambda in the open half-plane call require_interior().
class SpectralParameter {
public:
    SpectralParameter(double energy, double eta);

    double energy() const { return energy_; }
    double eta() const { return eta_; }
    Complex value() const { return {energy_, eta_}; }

    bool interior() const { return eta_ > 0.0; }
    void require_interior() const;

    // Membership in the strip R(E_max, eps): |Re| <= E_max, 0 < Im <= eps.
    bool in_strip(double e_max, double eps) const
    {
        return std::abs(energy_) <= e_max && eta_ > 0.0 && eta_ <= eps;
    }

private:
    double energy_;
    double eta_;
};

// Square root with the branch Im sqrt(.) >= 0 everywhere, including both
// sides of the negative real axis, and sqrt(a) > 0 for a > 0.
Complex sqrt_im_nonneg(Complex v);

// The unique fixed point z_lambda of z -> -1/(M z + lambda) in H.  For
// eta = 0 requires |E| < 2 sqrt(M); the boundary value lies on the circle
// |z| = 1/sqrt(M).
UpperHalfPoint fixed_point(int branching, const SpectralParameter& lambda);

// phi(z_1..z_m, q, lambda) = -1 / (z_1 + ... + z_m + lambda - q).
UpperHalfPoint mobius_phi(std::span<const UpperHalfPoint> zs, double q,
                          const SpectralParameter& lambda);

// One-argument contraction phi'(z) = -1/(z + lambda); a hyperbolic
// contraction for eta > 0 and an isometry for eta = 0.
UpperHalfPoint contraction_map(const UpperHalfPoint& z, const SpectralParameter& lambda);

// c(s, z) = 2 (cosh dist_H(s, z) - 1) = |s - z|^2 / (Im s * Im z).
double cosh_dist(const UpperHalfPoint& s, const UpperHalfPoint& z);

// Hyperbolic distance recovered from the cosh form, stable for small
// separations: arcosh(1 + c/2) evaluated log1p-style.
double hyperbolic_dist(const UpperHalfPoint& s, const UpperHalfPoint& z);

// Weight w(z) = |z - z_lambda|^2 / (Im z * Im z_lambda) = c(z_lambda, z).
double weight(const UpperHalfPoint& z, int branching, const SpectralParameter& lambda);

// Boundary defining function chi = 1/w; rejects z = z_lambda.
double chi(const UpperHalfPoint& z, int branching, const SpectralParameter& lambda);

// Both sides of |z| <= 4 Im(s) c(s,z) + 2 |s|; second >= first always.
std::pair<double, double> abs_from_weight_bound(const UpperHalfPoint& z,
                                                const UpperHalfPoint& s);

// Unchecked value-level kernels shared by the samplers.
inline Complex mobius_phi_value(Complex children_sum, Complex lambda, double q)
{
    return -1.0 / (children_sum + lambda - q);
}

inline double cosh_dist_value(Complex s, Complex z)
{
    return std::norm(s - z) / (s.imag() * z.imag());
}

inline double weight_value(Complex z, Complex z_fp)
{
    return std::norm(z - z_fp) / (z.imag() * z_fp.imag());
}

} // namespace bethe
