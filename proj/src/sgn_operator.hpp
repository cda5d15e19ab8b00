#pragma once

#include "swblow/models.hpp"

namespace swblow::detail {

// Solves h w - (mu/3) (h3 w_x)_x = rhs for w, where h3 is the (truncated)
// cube of h. The caller has already checked min h against h_min.
SpectralField solve_weighted_sgn(const SpectralField& h, const SpectralField& h3,
                                 const SpectralField& rhs, const ModelParams& p);

}  // namespace swblow::detail
