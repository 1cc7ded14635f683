#include "toporad/image.hpp"

#include <algorithm>

namespace toporad {

TissueLabel label_from_string(const std::string& s) {
    if (s == "pathologic") return TissueLabel::pathologic;
    if (s == "healthy") return TissueLabel::healthy;
    throw Error("unknown label '" + s + "' (expected pathologic or healthy)");
}

GrayImage::GrayImage(int w, int h, std::vector<uint16_t> v, int declared_maxval)
    : width(w), height(h), values(std::move(v)) {
    if (width < 1 || height < 1) throw Error("image dimensions must be at least 1x1");
    if (values.size() != static_cast<size_t>(width) * height)
        throw Error("image value count does not match width*height");
    uint16_t top = values.empty() ? 0 : *std::max_element(values.begin(), values.end());
    if (declared_maxval == 0) {
        maxval = std::max<int>(1, top);
    } else {
        if (declared_maxval < 1 || declared_maxval > 65535)
            throw Error("maxval must be in [1, 65535]");
        if (top > declared_maxval) throw Error("intensity above declared maximum");
        maxval = declared_maxval;
    }
}

} // namespace toporad
