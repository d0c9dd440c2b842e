#pragma once

#include <string>

#include "mathtools/document.hpp"

namespace mathtools {

struct SerializeOptions {
    bool pretty = false;
};

/// Well-formed XML with the MathML namespace declared on `math`. Attributes
/// are written in stored order; pretty output indents by two spaces and ends
/// with a newline. Output is byte-deterministic.
std::string serialize(const MathDoc& doc, SerializeOptions options = {});

/// Serializes a single element (no namespace declaration is added).
std::string serialize_node(const MathNode& node, SerializeOptions options = {});

}  // namespace mathtools
