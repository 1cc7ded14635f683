#pragma once

#include <string>
#include <vector>

#include "toporad/image.hpp"

namespace toporad {

/// Reflects a mask across the vertical image midline and relabels it
/// healthy (the contralateral ROI). Throws MaskOverlapError when the
/// reflection overlaps the original by more than max_overlap of the mask
/// area, which signals a midline-crossing lesion.
RoiMask mirror_mask(const RoiMask& mask, double max_overlap = 0.10);

/// Sliding-window patches over the mask's bounding box in raster-scan
/// order. A window is kept iff the fraction of its pixels inside the mask
/// is at least min_coverage; kept patches carry the mask's label.
/// Throws NoPatchesError when nothing qualifies.
std::vector<Patch> extract_patches(const GrayImage& image, const RoiMask& mask, int size = 30,
                                   int stride = 30, double min_coverage = 0.5,
                                   const std::string& source_id = "");

} // namespace toporad
