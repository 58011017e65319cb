#include "bethelab/model.hpp"

#include <cmath>
#include <stdexcept>

namespace bethe {

PotentialDistribution PotentialDistribution::constant_zero()
{
    return {PotentialKind::constant_zero, 0.0};
}

PotentialDistribution PotentialDistribution::uniform_symmetric(double half_width)
{
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("uniform_symmetric: half-width must be > 0");
    return {PotentialKind::uniform_symmetric, half_width};
}

PotentialDistribution PotentialDistribution::bernoulli_pm1()
{
    return {PotentialKind::bernoulli_pm1, 1.0};
}

PotentialDistribution PotentialDistribution::gaussian(double sigma)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("gaussian: sigma must be > 0");
    return {PotentialKind::gaussian, sigma};
}

PotentialDistribution PotentialDistribution::parse(const std::string& text)
{
    if (text == "zero")
        return constant_zero();
    if (text == "pm1")
        return bernoulli_pm1();
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    double value = 1.0;
    if (colon != std::string::npos) {
        try {
            value = std::stod(text.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("potential: bad parameter in '" + text + "'");
        }
    }
    if (head == "uniform")
        return uniform_symmetric(value);
    if (head == "gauss")
        return gaussian(value);
    throw std::invalid_argument("potential: unknown kind '" + text +
                                "' (expected zero|uniform:a|pm1|gauss:sigma)");
}

std::string PotentialDistribution::label() const
{
    switch (kind_) {
    case PotentialKind::constant_zero: return "zero";
    case PotentialKind::uniform_symmetric: return "uniform:" + std::to_string(param_);
    case PotentialKind::bernoulli_pm1: return "pm1";
    case PotentialKind::gaussian: return "gauss:" + std::to_string(param_);
    }
    return "?";
}

double PotentialDistribution::sample(CounterRng& rng) const
{
    switch (kind_) {
    case PotentialKind::constant_zero:
        return 0.0;
    case PotentialKind::uniform_symmetric:
        return rng.uniform(-param_, param_);
    case PotentialKind::bernoulli_pm1:
        return (rng.next_u64() & 1u) ? 1.0 : -1.0;
    case PotentialKind::gaussian:
        return param_ * rng.normal();
    }
    return 0.0;
}

double PotentialDistribution::moment_2_1p(double p) const
{
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("moment_2_1p: p must lie in (0,1)");
    const double s = 2.0 * (1.0 + p);
    switch (kind_) {
    case PotentialKind::constant_zero:
        return 0.0;
    case PotentialKind::uniform_symmetric:
        // (1/2a) int_{-a}^{a} |q|^s dq = a^s / (s + 1)
        return std::pow(param_, s) / (s + 1.0);
    case PotentialKind::bernoulli_pm1:
        return 1.0;
    case PotentialKind::gaussian:
        // E|q|^s = sigma^s 2^{s/2} Gamma((s+1)/2) / sqrt(pi)
        return std::pow(param_, s) * std::pow(2.0, 0.5 * s) *
               std::tgamma(0.5 * (s + 1.0)) / std::sqrt(M_PI);
    }
    return 0.0;
}

TreeModel::TreeModel(int branching_, double coupling_, PotentialDistribution potential_)
    : branching(branching_), coupling(coupling_), potential(potential_)
{
    if (branching < 2)
        throw std::invalid_argument("TreeModel: branching number M must be >= 2");
    if (!std::isfinite(coupling))
        throw std::invalid_argument("TreeModel: coupling must be finite");
}

} // namespace bethe
