// Test-side oracles kept independent of the library's quadrature and
// transforms: composite-Simpson 1D integration (composed over axes by
// Fubini), random states, and finite-difference derivative checks.
#pragma once

#include <functional>
#include <random>

#include "curlgs/modes.hpp"
#include "curlgs/state.hpp"

namespace curlgs::testing {

// Composite Simpson rule with n subintervals (n made even internally).
double simpson(const std::function<double(double)>& f, double a, double b, int n = 8192);

// Product integral over a box of f1(x1) f2(x2) f3(x3).
double product_integral(const std::function<double(double)>& f1,
                        const std::function<double(double)>& f2,
                        const std::function<double(double)>& f3, const BoxDomain& box,
                        int n = 8192);

// State with iid normal coefficients of the given scale on both blocks.
StateVector random_state(const ModeBasis& basis, std::mt19937_64& rng, double scale = 1.0);

// Central finite difference of a scalar function along one coordinate.
double central_difference(const std::function<double(double)>& g, double h);

}  // namespace curlgs::testing
