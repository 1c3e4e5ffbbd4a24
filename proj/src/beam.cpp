#include "perifsi/beam.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "perifsi/errors.hpp"

namespace perifsi {

namespace {

constexpr double kPi = std::numbers::pi;

// Derivative k of cos and sin at u.
double dcos(int k, double u) {
    switch (k & 3) {
        case 0: return std::cos(u);
        case 1: return -std::sin(u);
        case 2: return -std::cos(u);
        default: return std::sin(u);
    }
}
double dsin(int k, double u) { return dcos(k + 3, u); }

struct Trig {
    double coef;
    bool is_sin;
    int m;
};

Trig fourier_term(int k) {
    if (k == 0) return {1.0 / std::sqrt(2.0 * kPi), false, 0};
    const int m = (k + 1) / 2;
    return {1.0 / std::sqrt(kPi), k % 2 == 0, m};
}

// integral_0^x cos(n t) dt and integral_0^x sin(n t) dt for integer n of any sign.
double int_cos(int n, double x) { return n == 0 ? x : std::sin(n * x) / n; }
double int_sin(int n, double x) { return n == 0 ? 0.0 : (1.0 - std::cos(n * x)) / n; }

}  // namespace

double clamped_beam_root(int k) {
    double x = (k + 1.5) * kPi;
    for (int iter = 0; iter < 60; ++iter) {
        const double f = std::cos(x) - 1.0 / std::cosh(x);
        const double fp = -std::sin(x) + std::tanh(x) / std::cosh(x);
        const double dx = f / fp;
        x -= dx;
        if (std::abs(dx) < 1e-15 * x) break;
    }
    return x;
}

ModeFamily1D ModeFamily1D::clamped_beam(double length, int count) {
    if (!(length > 0.0) || count < 1) throw std::invalid_argument("clamped_beam: bad length or count");
    ModeFamily1D f;
    f.kind_ = Kind::ClampedBeam;
    f.count_ = count;
    f.length_ = length;
    for (int k = 0; k < count; ++k) {
        const double x = clamped_beam_root(k);
        const double e = std::exp(-x);
        const double den = 1.0 - e * e - 2.0 * e * std::sin(x);
        const double sigma = (1.0 + e * e - 2.0 * e * std::cos(x)) / den;
        f.beta_.push_back(x / length);
        f.sigma_.push_back(sigma);
        f.grow_.push_back((std::cos(x) - std::sin(x) - e) / den);
        f.scale_.push_back(1.0);
    }
    for (int k = 0; k < count; ++k) {
        const double norm2 = f.product_integral(k, k, length);
        f.scale_[k] = 1.0 / std::sqrt(norm2);
    }
    return f;
}

ModeFamily1D ModeFamily1D::fourier(int count) {
    if (count < 1) throw std::invalid_argument("fourier: count must be >= 1");
    ModeFamily1D f;
    f.kind_ = Kind::Fourier;
    f.count_ = count;
    f.length_ = 2.0 * kPi;
    return f;
}

double ModeFamily1D::wavenumber(int k) const {
    if (k < 0 || k >= count_) throw IndexOutOfRange("mode family index " + std::to_string(k));
    return kind_ == Kind::ClampedBeam ? beta_[k] : static_cast<double>(harmonic(k));
}

Jet1D ModeFamily1D::beam_raw(int k, double y) const {
    const double b = beta_[k];
    const double grow = grow_[k] * std::exp(b * (y - length_));
    const double decay = 0.5 * (1.0 + sigma_[k]) * std::exp(-b * y);
    Jet1D j;
    double bk = 1.0;
    for (int d = 0; d < 4; ++d) {
        const double sign = (d % 2 == 0) ? 1.0 : -1.0;
        j.d[d] = bk * (grow + sign * decay - dcos(d, b * y) + sigma_[k] * dsin(d, b * y));
        bk *= b;
    }
    return j;
}

Jet1D ModeFamily1D::eval(int k, double x) const {
    if (k < 0 || k >= count_) throw IndexOutOfRange("mode family index " + std::to_string(k));
    if (kind_ == Kind::ClampedBeam) {
        Jet1D j = beam_raw(k, x);
        for (double& v : j.d) v *= scale_[k];
        return j;
    }
    const Trig t = fourier_term(k);
    Jet1D j;
    double mk = 1.0;
    for (int d = 0; d < 4; ++d) {
        j.d[d] = t.coef * mk * (t.is_sin ? dsin(d, t.m * x) : dcos(d, t.m * x));
        mk *= t.m;
    }
    return j;
}

double ModeFamily1D::integral(int k, double x) const {
    if (k < 0 || k >= count_) throw IndexOutOfRange("mode family index " + std::to_string(k));
    if (kind_ == Kind::ClampedBeam) {
        const double b4 = std::pow(beta_[k], 4);
        return scale_[k] * (beam_raw(k, x)[3] - beam_raw(k, 0.0)[3]) / b4;
    }
    const Trig t = fourier_term(k);
    return t.coef * (t.is_sin ? int_sin(t.m, x) : int_cos(t.m, x));
}

double ModeFamily1D::product_integral(int j, int k, double x) const {
    if (j < 0 || j >= count_ || k < 0 || k >= count_)
        throw IndexOutOfRange("mode family product index");
    if (kind_ == Kind::ClampedBeam) {
        auto bracket = [&](double y) {
            const Jet1D p = beam_raw(j, y), q = beam_raw(k, y);
            if (j == k) {
                const double b4 = std::pow(beta_[k], 4);
                return y * (p[2] * p[2] - 2.0 * p[1] * p[3] + b4 * p[0] * p[0]) - p[1] * p[2] +
                       3.0 * p[0] * p[3];
            }
            return p[3] * q[0] - p[2] * q[1] + p[1] * q[2] - p[0] * q[3];
        };
        const double denom = j == k ? 4.0 * std::pow(beta_[k], 4)
                                    : std::pow(beta_[j], 4) - std::pow(beta_[k], 4);
        return scale_[j] * scale_[k] * (bracket(x) - bracket(0.0)) / denom;
    }
    const Trig a = fourier_term(j), b = fourier_term(k);
    double v;
    if (!a.is_sin && !b.is_sin)
        v = 0.5 * (int_cos(a.m - b.m, x) + int_cos(a.m + b.m, x));
    else if (a.is_sin && b.is_sin)
        v = 0.5 * (int_cos(a.m - b.m, x) - int_cos(a.m + b.m, x));
    else if (a.is_sin)
        v = 0.5 * (int_sin(a.m + b.m, x) + int_sin(a.m - b.m, x));
    else
        v = 0.5 * (int_sin(a.m + b.m, x) + int_sin(b.m - a.m, x));
    return a.coef * b.coef * v;
}

}  // namespace perifsi
