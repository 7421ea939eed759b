// SPDX-License-Identifier: Apache-2.0
//
// Multiply-accumulate accounting for the estimation/cancellation pipeline.
// The unit is one real multiply(-accumulate): a complex*complex product
// counts 4, real*complex counts 2, real*real counts 1. Divisions and
// square roots are not MACs and are not counted. Kernels accumulate into
// locals and flush once at the end, so a null counter costs nothing on
// the hot path.
#ifndef FDPN_OPCOUNT_HPP
#define FDPN_OPCOUNT_HPP

#include <cstdint>

namespace fdpn {

struct OpCounts {
    // Pilot-based CPE estimation.
    std::uint64_t cpe = 0;
    // Observation preparation: modem transforms for the nominal
    // self-interference signal and per-position normalization.
    std::uint64_t est_prep = 0;
    // MMSE core: system assembly, factorization/solve, prior weighting.
    std::uint64_t est_solve = 0;
    // Reconstruction, interpolation and subtraction.
    std::uint64_t cancel = 0;

    std::uint64_t estimation_total() const { return cpe + est_prep + est_solve; }

    OpCounts& operator+=(const OpCounts& o) {
        cpe += o.cpe;
        est_prep += o.est_prep;
        est_solve += o.est_solve;
        cancel += o.cancel;
        return *this;
    }
};

}  // namespace fdpn

#endif
