/* dimension.hpp -- dimension of limit sets of complete subshifts over block
 * alphabets: Moran-type equation with distortion-aware two-sided bounds, and
 * a periodic-point pressure refinement for continued-fraction models.
 */

#ifndef SPECTRA_DIMENSION_HPP_
#define SPECTRA_DIMENSION_HPP_

#include "spectra/geometry.hpp"
#include "spectra/model.hpp"
#include "spectra/sft.hpp"

namespace spectra {

struct BlockGeometry {
    BlockAlphabet blocks;
    std::vector<Enclosure> sizes;  // per-block |I^u(beta)|, exact for our models
    Enclosure distortion;          // the c1 enclosure in use (>= 0)

    static BlockGeometry from_blocks(const BlockAlphabet& blocks, const CantorModel& model,
                                     const Enclosure& c1);
};

struct MoranBounds {
    Rational lower;  // certified (modulo the supplied c1): Sum (e^-c1 size)^s = 1
    Rational upper;  // Sum (e^+c1 size)^s = 1, clamped to 2 when no root <= 2
};

// Bisection roots of the two adjusted Moran equations, each certified on its
// own side and within tol of the true root (except in the clamped case).
// Throws std::invalid_argument when a size enclosure touches 0 or 1.
MoranBounds moran_bounds(const BlockGeometry& g, const Rational& tol);

// Dimension of the limit set of the complete subshift over `blocks` of a CF
// model, via the pressure zero of the s-weighted sum over periodic
// block-words of length `order` and `order-1`; the reported enclosure is the
// hull of the two roots inflated by half its width on each side (an
// empirical convergence bracket, to be checked against moran_bounds).
Enclosure pressure_dimension_cf(const BlockAlphabet& blocks, const CantorModel& model,
                                int order, const Rational& tol);

}  // namespace spectra

#endif  // SPECTRA_DIMENSION_HPP_
