#pragma once

#include <qinterp/errors.hpp>

#include <cstdint>
#include <vector>

namespace qinterp {

enum class Relation { LessEq, GreaterEq };

/// One constraint  coeffs . x  (rel)  rhs  over free variables x.
struct DenseRow {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

struct SimplexOptions {
    double tol = 1e-7;               // feasibility tolerance on the phase-one objective
    double pivot_tol = 1e-9;         // minimum magnitude of an eligible pivot
    std::uint64_t max_iterations = 100'000;
    std::uint64_t stall_switch = 100; // degenerate pivots before switching to Bland's rule
};

struct PhaseOneResult {
    bool feasible = false;
    std::vector<double> solution;    // witness when feasible (size = num_vars)
    double objective = 0.0;          // final artificial mass
    std::uint64_t iterations = 0;
};

/// Phase-one simplex over the given rows.  Free variables are split into
/// positive parts internally; every <= / >= row gets a slack, rows with
/// negative right-hand side get an artificial variable, and the artificial
/// mass is minimized.  Deterministic: Dantzig pricing with lowest-index tie
/// break, switching permanently to Bland's rule after a degenerate stall;
/// leaving row chosen by minimum ratio with lowest-basis-index tie break.
/// Throws LpStallError when the iteration cap is reached.
PhaseOneResult solve_phase_one(std::size_t num_vars, const std::vector<DenseRow>& rows,
                               const SimplexOptions& options = {});

} // namespace qinterp
