#pragma once

#include "specstab/geom/raster.hpp"

namespace specstab::geom {

// Open eps-neighborhood of X on the sample lattice: a cell is kept iff it is
// in X or its center lies strictly within eps of some X-sample.  dilate(X,0)=X;
// monotone in eps and X.  MarginError if the result touches the box frame.
RasterSet dilate(const RasterSet& X, double eps);

// eps-contraction: a cell of X is kept iff the open eps-ball around its
// center contains no complement sample.  erode(X,0)=X; may return the empty
// set.  Shares the dilation threshold, so erode(dilate(X,eps),eps) contains X
// exactly at sample resolution.
RasterSet erode(const RasterSet& X, double eps);

}  // namespace specstab::geom
