#pragma once

#include <complex>
#include <vector>

#include "sd/binary_form.hpp"
#include "sd/integer.hpp"
#include "sd/points.hpp"

namespace sd {

struct RootSolveOptions {
    double tol = 1e-10;          // residual target relative to evaluation scale
    unsigned max_iterations = 400;
    std::uint64_t seed = 0x5eed; // perturbs the initial circle deterministically
};

/// All complex roots with multiplicity of sum c_k z^k via Aberth-Ehrlich
/// simultaneous iteration, initial guesses on a perturbed circle at the
/// Cauchy bound. Throws NoConvergence if residuals miss tol * scale.
std::vector<Complex> poly_roots_complex(const std::vector<Complex>& coeffs,
                                        const RootSolveOptions& opts = {});

/// Roots in P^1(C) of an integral binary form: the roots of the
/// dehomogenization plus [1:0] with its multiplicity.
std::vector<ProjPointC> binary_form_roots(const BinaryForm& form,
                                          const RootSolveOptions& opts = {});

/// Same for a complex-coefficient form given as ascending coefficients of
/// x^i y^(d-i); used when curve fibers are cut over numeric points.
std::vector<ProjPointC> binary_form_roots(const std::vector<Complex>& coeffs,
                                          const RootSolveOptions& opts = {});

/// All rational roots with multiplicity. Exact: every returned root is
/// verified by integral evaluation and removed by exact deflation; candidates
/// come from rationalizing the complex solver's output plus a small exhaustive
/// sweep, so repeated small roots are found even when the cluster blurs.
std::vector<Rat> rational_roots(const std::vector<Rat>& coeffs);
std::vector<Rat> rational_roots_int(const std::vector<Int>& coeffs);

} // namespace sd
