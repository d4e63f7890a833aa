#pragma once

#include "rrfsi/mesh.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace rrfsi {

/// Second-order forward-mode dual number in the three variables (x, y, t).
/// Evaluating the manufactured fields on Dual2 yields machine-exact first and
/// second derivatives, which is how the forcing terms are derived from the
/// field definitions instead of being transcribed by hand.
struct Dual2 {
    double v = 0.0;
    double g[3] = {0.0, 0.0, 0.0};
    double h[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    Dual2() = default;
    Dual2(double value) : v(value) {}

    static Dual2 variable(double value, int index) {
        Dual2 d(value);
        d.g[index] = 1.0;
        return d;
    }
};

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
    Dual2 r(a.v + b.v);
    for (int i = 0; i < 3; ++i) {
        r.g[i] = a.g[i] + b.g[i];
        for (int j = 0; j < 3; ++j)
            r.h[i][j] = a.h[i][j] + b.h[i][j];
    }
    return r;
}

inline Dual2 operator-(const Dual2& a, const Dual2& b) {
    Dual2 r(a.v - b.v);
    for (int i = 0; i < 3; ++i) {
        r.g[i] = a.g[i] - b.g[i];
        for (int j = 0; j < 3; ++j)
            r.h[i][j] = a.h[i][j] - b.h[i][j];
    }
    return r;
}

inline Dual2 operator-(const Dual2& a) { return Dual2(0.0) - a; }

inline Dual2 operator*(const Dual2& a, const Dual2& b) {
    Dual2 r(a.v * b.v);
    for (int i = 0; i < 3; ++i) {
        r.g[i] = a.g[i] * b.v + a.v * b.g[i];
        for (int j = 0; j < 3; ++j)
            r.h[i][j] = a.h[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[i][j];
    }
    return r;
}

namespace detail {

/// Chain rule for f(u) given f', f'' at u.v.
inline Dual2 compose(const Dual2& u, double f, double df, double ddf) {
    Dual2 r(f);
    for (int i = 0; i < 3; ++i) {
        r.g[i] = df * u.g[i];
        for (int j = 0; j < 3; ++j)
            r.h[i][j] = df * u.h[i][j] + ddf * u.g[i] * u.g[j];
    }
    return r;
}

} // namespace detail

inline Dual2 sin(const Dual2& u) {
    return detail::compose(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v));
}
inline Dual2 cos(const Dual2& u) {
    return detail::compose(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v));
}

using std::cos;
using std::sin;

/// The closed-form solution tuple of the linearized coupled problem on
/// fluid [0,1]^2 over structure [0,1]x[-1,0], written once as templates so the
/// same definitions serve plain evaluation (double) and differentiation (Dual2).
///
/// With unit parameters the tuple has two special interface properties at
/// y = 0: velocity and structure velocity agree, and both tractions vanish.
namespace manufactured_fields {

template <class T> struct V2 {
    T x, y;
};

inline constexpr double pi = std::numbers::pi;

template <class T> V2<T> displacement(const T& x, const T& y, const T& t) {
    const T amp = sin(T(pi) * t);
    return {amp * (cos(y) - T(3.0) * x), amp * (y + T(1.0))};
}

template <class T> V2<T> structure_velocity(const T& x, const T& y, const T& t) {
    const T amp = T(pi) * cos(T(pi) * t);
    return {amp * (cos(y) - T(3.0) * x), amp * (y + T(1.0))};
}

template <class T> V2<T> velocity(const T& x, const T& y, const T& t) {
    return structure_velocity(x, y, t);  // u and xi share one formula; they meet on Gamma
}

template <class T> T pressure(const T&, const T&, const T& t) {
    return T(2.0 * pi) * cos(T(pi) * t);
}

} // namespace manufactured_fields

/// Physical parameters of the manufactured experiment. The interface
/// properties above require the unit values; validate() reports any deviation.
struct ManufacturedParams {
    double rho_f = 1.0;
    double mu_f = 1.0;
    double rho_s = 1.0;
    double mu_s = 1.0;
    double lambda_s = 1.0;
};

class ManufacturedCase {
public:
    explicit ManufacturedCase(ManufacturedParams params = {}) : p_(params) {}

    const ManufacturedParams& params() const { return p_; }

    /// Non-unit parameters invalidate the zero-traction interface property.
    std::vector<std::string> validate() const {
        std::vector<std::string> warnings;
        auto check = [&](double v, const char* name) {
            if (v != 1.0)
                warnings.push_back(std::string("manufactured case: ") + name + " = " +
                                   std::to_string(v) +
                                   " breaks the zero-traction interface property (expected 1)");
        };
        check(p_.rho_f, "rho_f");
        check(p_.mu_f, "mu_f");
        check(p_.rho_s, "rho_s");
        check(p_.mu_s, "mu_s");
        check(p_.lambda_s, "lambda_s");
        return warnings;
    }

    Vec2 velocity(Vec2 x, double t) const {
        const auto v = manufactured_fields::velocity(x.x, x.y, t);
        return {v.x, v.y};
    }
    Vec2 displacement(Vec2 x, double t) const {
        const auto v = manufactured_fields::displacement(x.x, x.y, t);
        return {v.x, v.y};
    }
    Vec2 structure_velocity(Vec2 x, double t) const {
        const auto v = manufactured_fields::structure_velocity(x.x, x.y, t);
        return {v.x, v.y};
    }
    double pressure(Vec2 x, double t) const {
        return manufactured_fields::pressure(x.x, x.y, t);
    }

    /// sigma_f(u, p) n with sigma_f = -p I + 2 mu_f D(u); derivatives by autodiff.
    Vec2 fluid_traction(Vec2 x, double t, Vec2 n) const {
        const auto u = eval_velocity(x, t);
        const double p = pressure(x, t);
        const double d11 = u.x.g[0];
        const double d22 = u.y.g[1];
        const double d12 = 0.5 * (u.x.g[1] + u.y.g[0]);
        const double s11 = -p + 2.0 * p_.mu_f * d11;
        const double s22 = -p + 2.0 * p_.mu_f * d22;
        const double s12 = 2.0 * p_.mu_f * d12;
        return {s11 * n.x + s12 * n.y, s12 * n.x + s22 * n.y};
    }

    /// sigma_s(eta) n with sigma_s = 2 mu_s D(eta) + lambda_s (div eta) I.
    Vec2 structure_traction(Vec2 x, double t, Vec2 n) const {
        const auto e = eval_displacement(x, t);
        const double d11 = e.x.g[0];
        const double d22 = e.y.g[1];
        const double d12 = 0.5 * (e.x.g[1] + e.y.g[0]);
        const double div = d11 + d22;
        const double s11 = 2.0 * p_.mu_s * d11 + p_.lambda_s * div;
        const double s22 = 2.0 * p_.mu_s * d22 + p_.lambda_s * div;
        const double s12 = 2.0 * p_.mu_s * d12;
        return {s11 * n.x + s12 * n.y, s12 * n.x + s22 * n.y};
    }

    /// f_f = rho_f du/dt - div sigma_f(u, p).
    Vec2 fluid_body_force(Vec2 x, double t) const {
        const auto u = eval_velocity(x, t);
        const auto p = eval_pressure(x, t);
        const double divs_x = -p.g[0] + p_.mu_f * (2.0 * u.x.h[0][0] + u.x.h[1][1] + u.y.h[0][1]);
        const double divs_y = -p.g[1] + p_.mu_f * (u.x.h[0][1] + u.y.h[0][0] + 2.0 * u.y.h[1][1]);
        return {p_.rho_f * u.x.g[2] - divs_x, p_.rho_f * u.y.g[2] - divs_y};
    }

    /// f_m = div u (the manufactured velocity is not solenoidal).
    double mass_source(Vec2 x, double t) const {
        const auto u = eval_velocity(x, t);
        return u.x.g[0] + u.y.g[1];
    }

    /// g_s = rho_s dxi/dt - div sigma_s(eta) with xi = d(eta)/dt.
    Vec2 structure_body_force(Vec2 x, double t) const {
        const auto e = eval_displacement(x, t);
        const double mu = p_.mu_s, la = p_.lambda_s;
        const double divs_x = (2.0 * mu + la) * e.x.h[0][0] + mu * e.x.h[1][1] +
                              (mu + la) * e.y.h[0][1];
        const double divs_y = (2.0 * mu + la) * e.y.h[1][1] + mu * e.y.h[0][0] +
                              (mu + la) * e.x.h[0][1];
        return {p_.rho_s * e.x.h[2][2] - divs_x, p_.rho_s * e.y.h[2][2] - divs_y};
    }

    /// Finite-difference twins of the three forcings: the independent route of
    /// the cross-check, built from fourth-order central stencils over the
    /// plain-double field definitions.
    Vec2 fluid_body_force_fd(Vec2 x, double t, double h = 1e-3) const;
    double mass_source_fd(Vec2 x, double t, double h = 1e-3) const;
    Vec2 structure_body_force_fd(Vec2 x, double t, double h = 1e-3) const;

private:
    struct DualV2 {
        Dual2 x, y;
    };

    DualV2 eval_velocity(Vec2 x, double t) const {
        const auto v = manufactured_fields::velocity(Dual2::variable(x.x, 0),
                                                     Dual2::variable(x.y, 1),
                                                     Dual2::variable(t, 2));
        return {v.x, v.y};
    }
    DualV2 eval_displacement(Vec2 x, double t) const {
        const auto v = manufactured_fields::displacement(Dual2::variable(x.x, 0),
                                                         Dual2::variable(x.y, 1),
                                                         Dual2::variable(t, 2));
        return {v.x, v.y};
    }
    Dual2 eval_pressure(Vec2 x, double t) const {
        return manufactured_fields::pressure(Dual2::variable(x.x, 0), Dual2::variable(x.y, 1),
                                             Dual2::variable(t, 2));
    }

    ManufacturedParams p_;
};

namespace fd {

/// Fourth-order central first derivative.
inline double d1(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Fourth-order central second derivative.
inline double d2(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
           (12 * h * h);
}

} // namespace fd

inline Vec2 ManufacturedCase::fluid_body_force_fd(Vec2 x, double t, double h) const {
    auto u = [this](double xx, double yy, double tt, int c) {
        const Vec2 v = velocity({xx, yy}, tt);
        return c == 0 ? v.x : v.y;
    };
    auto p = [this](double xx, double yy, double tt) { return pressure({xx, yy}, tt); };
    Vec2 out;
    for (int c = 0; c < 2; ++c) {
        const double ut = fd::d1([&](double s) { return u(x.x, x.y, s, c); }, t, h);
        const double uxx = fd::d2([&](double s) { return u(s, x.y, t, c); }, x.x, h);
        const double uyy = fd::d2([&](double s) { return u(x.x, s, t, c); }, x.y, h);
        const int other = 1 - c;
        // mixed derivative of the other component via nested first derivatives
        const double uxy = fd::d1(
            [&](double sx) {
                return fd::d1([&](double sy) { return u(sx, sy, t, other); }, x.y, h);
            },
            x.x, h);
        double divs;
        if (c == 0) {
            const double px = fd::d1([&](double s) { return p(s, x.y, t); }, x.x, h);
            divs = -px + p_.mu_f * (2.0 * uxx + uyy + uxy);
        } else {
            const double py = fd::d1([&](double s) { return p(x.x, s, t); }, x.y, h);
            divs = -py + p_.mu_f * (2.0 * uyy + uxx + uxy);
        }
        const double v = p_.rho_f * ut - divs;
        (c == 0 ? out.x : out.y) = v;
    }
    return out;
}

inline double ManufacturedCase::mass_source_fd(Vec2 x, double t, double h) const {
    const double ux =
        fd::d1([&](double s) { return velocity({s, x.y}, t).x; }, x.x, h);
    const double vy =
        fd::d1([&](double s) { return velocity({x.x, s}, t).y; }, x.y, h);
    return ux + vy;
}

inline Vec2 ManufacturedCase::structure_body_force_fd(Vec2 x, double t, double h) const {
    auto e = [this](double xx, double yy, double tt, int c) {
        const Vec2 v = displacement({xx, yy}, tt);
        return c == 0 ? v.x : v.y;
    };
    const double mu = p_.mu_s, la = p_.lambda_s;
    Vec2 out;
    for (int c = 0; c < 2; ++c) {
        const double ett = fd::d2([&](double s) { return e(x.x, x.y, s, c); }, t, h);
        const double exx = fd::d2([&](double s) { return e(s, x.y, t, c); }, x.x, h);
        const double eyy = fd::d2([&](double s) { return e(x.x, s, t, c); }, x.y, h);
        const int other = 1 - c;
        const double exy = fd::d1(
            [&](double sx) {
                return fd::d1([&](double sy) { return e(sx, sy, t, other); }, x.y, h);
            },
            x.x, h);
        double divs;
        if (c == 0)
            divs = (2.0 * mu + la) * exx + mu * eyy + (mu + la) * exy;
        else
            divs = (2.0 * mu + la) * eyy + mu * exx + (mu + la) * exy;
        const double v = p_.rho_s * ett - divs;
        (c == 0 ? out.x : out.y) = v;
    }
    return out;
}

} // namespace rrfsi
