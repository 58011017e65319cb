#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bethelab/halfplane.hpp"

namespace bethe {

// Contraction ratio of the weight under one recursion level:
//   mu2(z_1..z_M, q, lambda) = M w(phi(z_1..z_M, q, lambda)) / sum_i w(z_i).
// The all-fixed-point input (0/0) is rejected; M is the tuple length.
double mu2(std::span<const UpperHalfPoint> zs, double q, const SpectralParameter& lambda);

// Same quantity as a rational function of boundary coordinates,
//   M prod_i chi(z_i) |z_lambda sum z_i + lambda z_lambda - q z_lambda + 1|^2
//   / ([sum_j prod_{i!=j} chi(z_i)] [sum_i chi(z_i)|z_i - z_lambda|^2 + Im lambda]),
// with the reduced boundary function chi(z) = Im z / |z - z_lambda|^2 (the
// Im z_lambda factors cancel between numerator and denominator).  Agrees
// with mu2 to rounding on its whole domain.
double mu2_rational(std::span<const UpperHalfPoint> zs, double q,
                    const SpectralParameter& lambda);

// Upper bound mu2* = M w((1/M) sum z_i) / sum_i w(z_i); dominates mu2 at
// q = 0, with equality when lambda is real.
double mu2_star(std::span<const UpperHalfPoint> zs, const SpectralParameter& lambda);

// Two-level contraction ratio over the 2M-1 cyclic rotations sigma:
//   sum_sigma w^{1+p}(phi(phi(z_s1..z_sM, q1, lambda), z_s(M+1)..z_s(2M-1), q2, lambda))
//   / sum_i w^{1+p}(z_i),
// with 2M-1 = zs.size().
double mu3p(std::span<const UpperHalfPoint> zs, double q1, double q2, double p,
            const SpectralParameter& lambda);

// Root variant on M + 1 = zs.size() points:
//   w(-(sum z_i + lambda - q)^{-1})^{1+p} / sum_i w(z_i)^{1+p}.
double mu3p_prime(std::span<const UpperHalfPoint> zs, double q, double p,
                  const SpectralParameter& lambda);

// Sublevel-set description of the compact core M_rho: sum_i w(z_i) <= rho.
// The certificate searches sample its complement.
struct CompactRegion {
    double rho = 1e3;
    bool contains(std::span<const Complex> zs, Complex z_fp) const;
};

struct MuReport {
    std::string lemma;     // "L2.1" or "L2.2"
    int branching = 0;
    double p = 0.0;
    double energy_bound = 0.0; // E of the strip R(E, eps0)
    double rho = 0.0;
    double eta1 = 0.0;
    double eps0 = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;      // L2.1: samples with mu3p >= 1
    double max_value = 0.0;            // L2.1: max mu3p; L2.2: fitted C
    double certificate_epsilon = 0.0;  // L2.1 only: 1 - max_value
    double fitted_c_prime = 0.0;       // L2.2 only: constant for mu3p_prime
    std::vector<Complex> argmax_points;
    double argmax_q1 = 0.0;
    double argmax_q2 = 0.0;
    Complex argmax_lambda;
    std::uint64_t seed = 0;
};

// JSON certificate; every report is labeled a sampled bound, not a proof.
std::string mu_report_json(const MuReport& report);

struct CertifySearchConfig {
    double rho = 1e3;
    double eta1 = 0.01;   // |q_i| <= eta1 (Lemma 2.1)
    double eps0 = 0.01;   // lambda in R(E, eps0)
    double q_max = 100.0; // |q_i| <= q_max (Lemma 2.2)
    std::uint64_t samples = 1'000'000;
    int workers = 1;
};

// Sampled certificate for Lemma 2.1: max of mu3p over the complement of
// M_rho with |q_i| <= eta1 and lambda in R(E, eps0), including families
// approaching the real axis and i*infinity in the chi chart.  Reports
// epsilon = 1 - max when max < 1.
MuReport certify_lemma21(int branching, double p, double energy_bound,
                         const CertifySearchConfig& config, std::uint64_t seed);

// Sampled constant for Lemma 2.2: max over the same region (q now ranging
// up to q_max) of mu3p / (1 + sum_i |q_i|^{2(1+p)}), and of the analogous
// ratio for mu3p_prime.
MuReport certify_lemma22(int branching, double p, double energy_bound,
                         const CertifySearchConfig& config, std::uint64_t seed);

struct MuScanReport {
    int branching = 0;
    double p = 0.0;
    double energy_bound = 0.0;
    double rho = 0.0;
    double eta1 = 0.0;
    double eps0 = 0.0;
    std::uint64_t samples = 0;
    double max_mu2 = 0.0;      // q = 0
    double max_mu2_star = 0.0;
    double max_mu3p = 0.0;
    double max_dual_rel_dev = 0.0;        // mu2 vs mu2_rational
    std::uint64_t domination_violations = 0; // mu2 > mu2_star + 1e-12 at q = 0
    std::uint64_t mu2_ge_one = 0;            // mu2 >= 1 at q = 0, Im lambda > 0
    std::uint64_t seed = 0;
};

// Sampled extrema of mu2 / mu2* / mu3p over the complement of M_rho
// (rho = 0 scans the whole domain), with the contraction and dual-formula
// properties checked on every sample.
MuScanReport mu_scan(int branching, double p, double energy_bound,
                     const CertifySearchConfig& config, std::uint64_t seed);

std::string mu_scan_json(const MuScanReport& report);

} // namespace bethe
