#pragma once

#include <array>

namespace rrfsi {

/// Symmetric 6-point triangle rule, exact for polynomials up to degree 4
/// (covers every P2 x P2 product in the forms). Weights sum to one and are
/// applied against the element area.
struct TriQuadrature {
    static constexpr int n = 6;
    std::array<std::array<double, 3>, n> bary;
    std::array<double, n> weight;
};

inline const TriQuadrature& tri_quadrature() {
    static const TriQuadrature q = [] {
        TriQuadrature r;
        const double a1 = 0.445948490915965;
        const double w1 = 0.223381589678011;
        const double a2 = 0.091576213509771;
        const double w2 = 0.109951743655322;
        r.bary = {{{1.0 - 2.0 * a1, a1, a1},
                   {a1, 1.0 - 2.0 * a1, a1},
                   {a1, a1, 1.0 - 2.0 * a1},
                   {1.0 - 2.0 * a2, a2, a2},
                   {a2, 1.0 - 2.0 * a2, a2},
                   {a2, a2, 1.0 - 2.0 * a2}}};
        r.weight = {w1, w1, w1, w2, w2, w2};
        return r;
    }();
    return q;
}

/// 3-point Gauss rule on [0,1], exact to degree 5 (interface edge integrals).
struct EdgeQuadrature {
    static constexpr int n = 3;
    std::array<double, n> s;
    std::array<double, n> weight;
};

inline const EdgeQuadrature& edge_quadrature() {
    static const EdgeQuadrature q = [] {
        EdgeQuadrature r;
        const double d = 0.3872983346207417;  // sqrt(15)/10
        r.s = {0.5 - d, 0.5, 0.5 + d};
        r.weight = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        return r;
    }();
    return q;
}

} // namespace rrfsi
