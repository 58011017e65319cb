#pragma once

#include <string>

#include "bethelab/rng.hpp"

namespace bethe {

enum class PotentialKind { constant_zero, uniform_symmetric, bernoulli_pm1, gaussian };

// Single-site distribution nu of the random potential.  All supported kinds
// have finite 2(1+p) moment for every p in (0,1).
class PotentialDistribution {
public:
    static PotentialDistribution constant_zero();
    static PotentialDistribution uniform_symmetric(double half_width);
    static PotentialDistribution bernoulli_pm1();
    static PotentialDistribution gaussian(double sigma);

    // Textual forms: "zero", "uniform:a", "pm1", "gauss:sigma".
    static PotentialDistribution parse(const std::string& text);
    std::string label() const;

    PotentialKind kind() const { return kind_; }
    double parameter() const { return param_; }

    double sample(CounterRng& rng) const;

    // Closed form of int |q|^{2(1+p)} dnu for p in (0,1).
    double moment_2_1p(double p) const;

private:
    PotentialDistribution(PotentialKind kind, double param) : kind_(kind), param_(param) {}
    PotentialKind kind_;
    double param_;
};

// Anderson model on the Cayley tree: H = Delta + k q with branching number M
// (lattice degree M + 1).
struct TreeModel {
    TreeModel(int branching, double coupling, PotentialDistribution potential);

    int branching;
    double coupling;
    PotentialDistribution potential;
};

} // namespace bethe
