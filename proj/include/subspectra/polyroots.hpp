#pragma once
// Roots of complex polynomials given by ascending coefficients c0 + c1 z + ... + cn z^n.
#include <vector>

#include "subspectra/complexcore.hpp"

namespace subspectra {

struct PolyRootOptions {
    int companion_max_degree = 128;  // above this, simultaneous Aberth iteration
    int max_iterations = 800;
    const std::vector<cplx>* warm_start = nullptr;  // previous roots of a nearby polynomial
};

cplx poly_eval(const std::vector<cplx>& c, cplx z);
// Value and first derivative by Horner.
void poly_eval_deriv(const std::vector<cplx>& c, cplx z, cplx& p, cplx& dp);

// All roots with multiplicity; exact zero roots are returned exactly.
std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs, const PolyRootOptions& opt = {});

std::vector<cplx> companion_roots(const std::vector<cplx>& monic_ascending);
std::vector<cplx> aberth_roots(const std::vector<cplx>& coeffs, const std::vector<cplx>* start,
                               int max_iterations);

}  // namespace subspectra
