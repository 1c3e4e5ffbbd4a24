#include "perifsi/forcing.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "perifsi/errors.hpp"

namespace perifsi {

std::vector<Harmonic> interpolate_samples(const std::vector<double>& samples) {
    const int n = static_cast<int>(samples.size());
    if (n < 1) throw ValidationError("forcing samples >= 1");
    std::vector<Harmonic> out;
    for (int k = 0; 2 * k <= n; ++k) {
        double s = 0.0, c = 0.0;
        for (int j = 0; j < n; ++j) {
            const double phase = 2.0 * std::numbers::pi * k * j / n;
            s += samples[j] * std::sin(phase);
            c += samples[j] * std::cos(phase);
        }
        // The mean and the Nyquist cosine are not doubled.
        const double scale = (k == 0 || 2 * k == n) ? 1.0 / n : 2.0 / n;
        if (2 * k == n) s = 0.0;
        if (s != 0.0 || c != 0.0) out.push_back({scale * s, k, scale * c});
    }
    return out;
}

BoundaryForcing::BoundaryForcing(double period, std::vector<Harmonic> inlet, std::vector<Harmonic> outlet)
    : period_(period), inlet_(std::move(inlet)), outlet_(std::move(outlet)) {
    if (!(period > 0.0)) throw ValidationError("T > 0");
    for (const auto* list : {&inlet_, &outlet_})
        for (const Harmonic& h : *list) {
            if (h.harmonic < 0) throw ValidationError("forcing harmonic >= 0");
            if (!std::isfinite(h.amplitude) || !std::isfinite(h.cosine))
                throw ValidationError("forcing amplitude finite");
        }
}

double BoundaryForcing::eval(const std::vector<Harmonic>& hs, double t) const {
    double p = 0.0;
    for (const Harmonic& h : hs) {
        const double phase = 2.0 * std::numbers::pi * h.harmonic * t / period_;
        p += h.amplitude * std::sin(phase) + h.cosine * std::cos(phase);
    }
    return p;
}

bool BoundaryForcing::is_zero() const {
    for (const auto* list : {&inlet_, &outlet_})
        for (const Harmonic& h : *list)
            if ((h.amplitude != 0.0 && h.harmonic > 0) || h.cosine != 0.0) return false;
    return true;
}

double BoundaryForcing::l2_squared() const {
    double total = 0.0;
    for (const auto* list : {&inlet_, &outlet_}) {
        // Distinct integer harmonics are orthogonal over the period.
        std::map<int, std::pair<double, double>> by_harmonic;
        for (const Harmonic& h : *list) {
            auto& [s, c] = by_harmonic[h.harmonic];
            s += h.amplitude;
            c += h.cosine;
        }
        for (const auto& [k, sc] : by_harmonic) {
            const auto [s, c] = sc;
            total += k == 0 ? period_ * c * c : 0.5 * period_ * (s * s + c * c);
        }
    }
    return total;
}

BoundaryForcing BoundaryForcing::scaled(double factor) const {
    BoundaryForcing out = *this;
    for (auto* list : {&out.inlet_, &out.outlet_})
        for (Harmonic& h : *list) {
            h.amplitude *= factor;
            h.cosine *= factor;
        }
    return out;
}

}  // namespace perifsi
