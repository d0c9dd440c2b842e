#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "mathtools/parser.hpp"

namespace mathtools::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(MML_FIXTURE_DIR) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::string fixture_text(const std::string& name) { return read_file(fixture_path(name)); }

inline MathDoc load_fixture(const std::string& name, ParseMode mode = ParseMode::strict) {
    return parse(fixture_text(name), mode).doc;
}

}  // namespace mathtools::testing
