#include "toporad/patches.hpp"

#include <algorithm>

#include "toporad/format.hpp"

namespace toporad {

RoiMask mirror_mask(const RoiMask& mask, double max_overlap) {
    RoiMask mirrored;
    mirrored.width = mask.width;
    mirrored.height = mask.height;
    mirrored.label = TissueLabel::healthy;
    mirrored.membership.assign(mask.membership.size(), 0);
    long overlap = 0;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            bool member = mask.at(r, mask.width - 1 - c);
            mirrored.membership[static_cast<size_t>(r) * mask.width + c] = member;
            if (member && mask.at(r, c)) ++overlap;
        }
    }
    long area = mask.member_count();
    if (area > 0 && static_cast<double>(overlap) > max_overlap * static_cast<double>(area))
        throw MaskOverlapError("mirrored mask overlaps original by " + g9(double(overlap) / area) +
                               " of its area; supply an explicit healthy mask");
    return mirrored;
}

std::vector<Patch> extract_patches(const GrayImage& image, const RoiMask& mask, int size,
                                   int stride, double min_coverage,
                                   const std::string& source_id) {
    if (mask.width != image.width || mask.height != image.height)
        throw Error("mask dimensions do not match image");
    if (size < 1 || size > std::min(image.width, image.height))
        throw Error("patch size must fit inside the image");
    if (stride < 1) throw Error("stride must be at least 1");
    if (!(min_coverage > 0.0 && min_coverage <= 1.0))
        throw Error("min_coverage must be in (0, 1]");

    // bounding box of the member pixels
    int r0 = mask.height, r1 = -1, c0 = mask.width, c1 = -1;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (!mask.at(r, c)) continue;
            r0 = std::min(r0, r);
            r1 = std::max(r1, r);
            c0 = std::min(c0, c);
            c1 = std::max(c1, c);
        }
    }
    if (r1 < 0) throw NoPatchesError("mask has no member pixels");

    const long window_area = static_cast<long>(size) * size;
    std::vector<Patch> patches;
    for (int r = r0; r <= std::min(r1, image.height - size); r += stride) {
        for (int c = c0; c <= std::min(c1, image.width - size); c += stride) {
            long members = 0;
            for (int dr = 0; dr < size; ++dr)
                for (int dc = 0; dc < size; ++dc) members += mask.at(r + dr, c + dc);
            if (static_cast<double>(members) < min_coverage * static_cast<double>(window_area))
                continue;
            Patch patch;
            patch.row = r;
            patch.col = c;
            patch.size = size;
            patch.label = mask.label;
            patch.source_id = source_id;
            std::vector<uint16_t> values(static_cast<size_t>(size) * size);
            for (int dr = 0; dr < size; ++dr)
                for (int dc = 0; dc < size; ++dc)
                    values[static_cast<size_t>(dr) * size + dc] = image.at(r + dr, c + dc);
            patch.pixels = GrayImage(size, size, std::move(values), image.maxval);
            patches.push_back(std::move(patch));
        }
    }
    if (patches.empty())
        throw NoPatchesError("no window reached min_coverage " + g9(min_coverage));
    return patches;
}

} // namespace toporad
