// Shared parameter sets for the tests.
#pragma once

#include "nfsphere/kernels.hpp"

namespace nfs::testing {

inline ModelParams with(double d_e, double d_i, double eta_e, double eta_i) {
    ModelParams p;
    p.d_e = d_e;
    p.d_i = d_i;
    p.eta = {eta_e, eta_i, eta_e, eta_i};
    return p;
}

// Unit-strength copy used where only the fixed parameters matter.
inline ModelParams fixed(double d_e, double d_i) { return with(d_e, d_i, 0.0, 0.0); }

}  // namespace nfs::testing
