#pragma once

#include "rrfsi/errors.hpp"
#include "rrfsi/trace.hpp"

#include <Eigen/Dense>

namespace rrfsi {

/// The explicitly carried interface state that makes the scheme loosely
/// coupled: previous-step tractions and velocity traces. Both tractions are
/// stored against the fluid outward normal; the structure side's normal flip
/// appears as explicit negations in the two Robin data functions below.
struct TractionLedger {
    const TraceSpace* trace = nullptr;
    Eigen::VectorXd F;        // sigma_f n_f
    Eigen::VectorXd S;        // sigma_s n_f
    Eigen::VectorXd u_trace;  // fluid velocity trace
    Eigen::VectorXd xi_trace; // structure velocity trace

    static TractionLedger zero(const TraceSpace& t) {
        TractionLedger l;
        l.trace = &t;
        l.F = t.zero();
        l.S = t.zero();
        l.u_trace = t.zero();
        l.xi_trace = t.zero();
        return l;
    }
};

/// Robin datum of the fluid step: L1 u + sigma_f n_f = r_f on Gamma.
inline Eigen::VectorXd robin_rhs_fluid(const TractionLedger& ledger, double L1) {
    return 0.5 * L1 * (ledger.u_trace + ledger.xi_trace) + 0.5 * (ledger.F + ledger.S);
}

/// Robin datum of the structure step: L2 xi + sigma_s n_s = r_s on Gamma.
/// The minus sign carries n_s = -n_f into the fluid-normal storage.
inline Eigen::VectorXd robin_rhs_structure(const TractionLedger& ledger, double L2) {
    return 0.5 * L2 * (ledger.u_trace + ledger.xi_trace) - 0.5 * (ledger.F + ledger.S);
}

/// Post-solve traction update. The new tractions are defined by the Robin
/// identities themselves (no volume stress recovery):
///   F_new = r_f - L1 u_new,   S_new = L2 xi_new - r_s.
inline TractionLedger update_tractions(const TractionLedger& ledger,
                                       const Eigen::VectorXd& u_new,
                                       const Eigen::VectorXd& xi_new, double L1, double L2) {
    if (u_new.size() != ledger.F.size() || xi_new.size() != ledger.F.size())
        throw ParameterError("update_tractions: trace size mismatch");
    TractionLedger next;
    next.trace = ledger.trace;
    next.F = robin_rhs_fluid(ledger, L1) - L1 * u_new;
    next.S = L2 * xi_new - robin_rhs_structure(ledger, L2);
    next.u_trace = u_new;
    next.xi_trace = xi_new;
    return next;
}

/// Max dof deviation of the discrete interface identity (valid for L1 == L2):
///   u_new - xi_new = (1/L) [ (F + S) - F_new - S_new ].
inline double interface_identity_residual(const TractionLedger& prev,
                                          const TractionLedger& next, double L) {
    const Eigen::VectorXd lhs = next.u_trace - next.xi_trace;
    const Eigen::VectorXd rhs = (1.0 / L) * (prev.F + prev.S - next.F - next.S);
    return (lhs - rhs).lpNorm<Eigen::Infinity>();
}

} // namespace rrfsi
