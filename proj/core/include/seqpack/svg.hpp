#pragma once

#include "seqpack/cegar.hpp"
#include "seqpack/scene.hpp"

#include <string>
#include <vector>

namespace seqpack {

struct SvgOptions {
    // The generation-time comment is the one nondeterministic byte range in
    // an SVG; suppress it when byte-stable output matters.
    bool timestamp = true;
};

// One SVG 1.1 document per plate, 1 user unit = 1 mm, y flipped so the
// plate origin sits bottom-left as on the printer: plate outline, dashed
// sigma-plate rectangle, each envelope outlined, each object hull filled
// and labeled with its print-order number. Coordinates are printed with 12
// significant digits.
std::vector<std::string> render_svg(const Schedule& schedule, const Scene& scene,
                                    const SvgOptions& options = {});

} // namespace seqpack
