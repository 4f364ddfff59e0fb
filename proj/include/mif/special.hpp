#pragma once

#include "mif/common.hpp"

namespace mif {

// Complex digamma psi(w). Poles at non-positive integers return an infinite value.
Complex digamma(Complex w);

// Complex trigamma psi'(w).
Complex trigamma(Complex w);

// cot(pi w) without overflow for large |Im w|.
Complex cot_pi(Complex w);

// 1/sin^2(pi w), same stability notes as cot_pi.
Complex csc2_pi(Complex w);

}  // namespace mif
