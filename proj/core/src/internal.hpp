#pragma once

#include <cstdint>
#include <vector>

#include "fdlab/cauchy.hpp"
#include "fdlab/spectral.hpp"

namespace fdlab::detail {

/// Distinct |xi| values of a grid and the map from flat index to them, so
/// multipliers depending on |xi| are evaluated once per value.
struct ModeTable {
  std::vector<double> abs_xi;
  std::vector<std::uint32_t> index;  // flat spectral index -> position in abs_xi
};

ModeTable build_mode_table(const SpectralGrid& grid);

/// Solves (|xi|^beta + shift - p) x = rhs in spectral coordinates by GMRES
/// right-preconditioned with |xi|^beta + shift - mean(p); diagonal when p is
/// constant. Throws IterationStall when the residual target is missed.
std::vector<cplx> solve_shifted(const CauchyProblem& problem, cplx shift,
                                std::vector<cplx> rhs, const ResolventOptions& options,
                                ResolventStats* stats);

}  // namespace fdlab::detail
