#pragma once

#include <array>
#include <vector>

namespace perifsi {

// Value and first three derivatives of a 1D function.
struct Jet1D {
    std::array<double, 4> d{};
    double operator[](int k) const { return d[k]; }
};

// One-dimensional factor family used to tensorize shell modes.
//  - ClampedBeam: L2-orthonormal clamped-clamped Euler-Bernoulli eigenfunctions on [0, length].
//  - Fourier: 1/sqrt(2pi), cos(m x)/sqrt(pi), sin(m x)/sqrt(pi), ... on a 2pi period.
class ModeFamily1D {
public:
    enum class Kind { ClampedBeam, Fourier };

    static ModeFamily1D clamped_beam(double length, int count);
    static ModeFamily1D fourier(int count);

    Kind kind() const { return kind_; }
    int size() const { return count_; }
    double length() const { return length_; }

    Jet1D eval(int k, double x) const;
    double value(int k, double x) const { return eval(k, x)[0]; }
    // Antiderivative from 0: integral_0^x f_k.
    double integral(int k, double x) const;
    // integral_0^x f_j f_k, closed form.
    double product_integral(int j, int k, double x) const;
    // Clamped beam wavenumber beta_k (roots of cos*cosh = 1 scaled by 1/length),
    // or the harmonic index for Fourier.
    double wavenumber(int k) const;
    // Fourier: harmonic number m of function k (0 for the constant).
    int harmonic(int k) const { return (k + 1) / 2; }

private:
    ModeFamily1D() = default;
    Jet1D beam_raw(int k, double x) const;  // unnormalized, derivatives 0..3

    Kind kind_ = Kind::ClampedBeam;
    int count_ = 0;
    double length_ = 0.0;
    std::vector<double> beta_, sigma_, grow_, scale_;
};

// k-th positive root of cos(x) cosh(x) = 1, k = 0, 1, ...
double clamped_beam_root(int k);

}  // namespace perifsi
