#pragma once

#include <vector>

namespace perifsi {

// amplitude * sin(2 pi harmonic t / T) + cosine * cos(2 pi harmonic t / T).
// Harmonic 0 is the constant `cosine`.
struct Harmonic {
    double amplitude = 0.0;
    int harmonic = 1;
    double cosine = 0.0;
    bool operator==(const Harmonic&) const = default;
};

// Trigonometric interpolant of N samples taken at t_j = j T / N.
std::vector<Harmonic> interpolate_samples(const std::vector<double>& samples);

// Time-periodic inlet and outlet pressures.
class BoundaryForcing {
public:
    BoundaryForcing() = default;
    BoundaryForcing(double period, std::vector<Harmonic> inlet, std::vector<Harmonic> outlet);

    double period() const { return period_; }
    const std::vector<Harmonic>& inlet() const { return inlet_; }
    const std::vector<Harmonic>& outlet() const { return outlet_; }

    double p_in(double t) const { return eval(inlet_, t); }
    double p_out(double t) const { return eval(outlet_, t); }
    bool is_zero() const;
    // integral over one period of P_in^2 + P_out^2 (closed form).
    double l2_squared() const;
    BoundaryForcing scaled(double factor) const;

private:
    double eval(const std::vector<Harmonic>& h, double t) const;

    double period_ = 1.0;
    std::vector<Harmonic> inlet_, outlet_;
};

}  // namespace perifsi
