#include "bethelab/halfplane.hpp"

#include <cmath>
#include <stdexcept>

namespace bethe {

void UpperHalfPoint::validate(Complex z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("UpperHalfPoint: non-finite component");
    if (!(z.imag() > 0.0))
        throw std::invalid_argument("UpperHalfPoint: Im(z) must be > 0");
}

SpectralParameter::SpectralParameter(double energy, double eta)
    : energy_(energy), eta_(eta)
{
    if (!std::isfinite(energy) || !std::isfinite(eta))
        throw std::invalid_argument("SpectralParameter: non-finite component");
    if (eta < 0.0)
        throw std::invalid_argument("SpectralParameter: eta must be >= 0");
}

void SpectralParameter::require_interior() const
{
    if (!interior())
        throw std::domain_error("SpectralParameter: operation requires eta > 0");
}

Complex sqrt_im_nonneg(Complex v)
{
    Complex s = std::sqrt(v);
    if (s.imag() < 0.0)
        s = -s;
    return s;
}

static void check_branching(int branching)
{
    if (branching < 2)
        throw std::invalid_argument("branching number M must be >= 2");
}

UpperHalfPoint fixed_point(int branching, const SpectralParameter& lambda)
{
    check_branching(branching);
    const double m = static_cast<double>(branching);
    if (lambda.eta() == 0.0) {
        const double e = lambda.energy();
        const double disc = 4.0 * m - e * e;
        if (!(disc > 0.0))
            throw std::domain_error(
                "fixed_point: eta = 0 requires |energy| < 2 sqrt(M)");
        // boundary form, lands on the circle |z| = 1/sqrt(M)
        return {-e / (2.0 * m), std::sqrt(disc) / (2.0 * m)};
    }
    const Complex lam = lambda.value();
    const Complex root = sqrt_im_nonneg(lam * lam * 0.25 - m);
    return UpperHalfPoint(-lam / (2.0 * m) + root / m);
}

UpperHalfPoint mobius_phi(std::span<const UpperHalfPoint> zs, double q,
                          const SpectralParameter& lambda)
{
    if (zs.empty())
        throw std::invalid_argument("mobius_phi: needs at least one point");
    if (!std::isfinite(q))
        throw std::invalid_argument("mobius_phi: q must be finite");
    Complex sum = 0.0;
    for (const auto& z : zs)
        sum += z.value();
    return UpperHalfPoint(mobius_phi_value(sum, lambda.value(), q));
}

UpperHalfPoint contraction_map(const UpperHalfPoint& z, const SpectralParameter& lambda)
{
    return UpperHalfPoint(-1.0 / (z.value() + lambda.value()));
}

double cosh_dist(const UpperHalfPoint& s, const UpperHalfPoint& z)
{
    return cosh_dist_value(s.value(), z.value());
}

double hyperbolic_dist(const UpperHalfPoint& s, const UpperHalfPoint& z)
{
    const double x = 0.5 * cosh_dist(s, z);
    // arcosh(1 + x) = log1p(x + sqrt(x (x + 2)))
    return std::log1p(x + std::sqrt(x * (x + 2.0)));
}

double weight(const UpperHalfPoint& z, int branching, const SpectralParameter& lambda)
{
    return weight_value(z.value(), fixed_point(branching, lambda).value());
}

double chi(const UpperHalfPoint& z, int branching, const SpectralParameter& lambda)
{
    const double w = weight(z, branching, lambda);
    if (!(w > 0.0))
        throw std::domain_error("chi: undefined at z = z_lambda");
    return 1.0 / w;
}

std::pair<double, double> abs_from_weight_bound(const UpperHalfPoint& z,
                                                const UpperHalfPoint& s)
{
    const double lhs = std::abs(z.value());
    const double rhs = 4.0 * s.im() * cosh_dist(s, z) + 2.0 * std::abs(s.value());
    return {lhs, rhs};
}

} // namespace bethe
