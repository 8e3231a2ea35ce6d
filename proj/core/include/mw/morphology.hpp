#pragma once

#include "mw/mask.hpp"

namespace mw {

// Morphological operators over binary masks with a square structuring
// element of the given radius (side 2*radius+1). Pixels outside the frame
// count as background for both operators, so erosion eats inward from the
// borders while dilation never grows from them.
ForegroundMask erode(const ForegroundMask& mask, int radius);
ForegroundMask dilate(const ForegroundMask& mask, int radius);

// Opening: erosion followed by dilation with the same element. Removes
// speckles smaller than the element while roughly preserving larger blobs.
ForegroundMask opening(const ForegroundMask& mask, int radius);

}  // namespace mw
